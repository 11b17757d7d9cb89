// Copyright 2026 The hea-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Shared vocabulary types: complex scalars, dense matrices, qubit sets and
 * seeded random number generation.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hea_lab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Largest number of qubits a dense reduced density matrix may span.
inline constexpr int kMaxDenseQubits = 12;

/// Largest total register size the statevector kernel accepts.
inline constexpr int kMaxStateQubits = 24;

/// Ordered set of distinct qubit indices.
///
/// The constructor rejects unsorted or duplicated input; use
/// `QubitSet::normalized` to build one from arbitrary indices.
class QubitSet {
  public:
    QubitSet() = default;

    explicit QubitSet(std::vector<int> indices) : indices_(std::move(indices)) {
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            if (indices_[i] < 0) {
                throw std::invalid_argument("QubitSet: negative qubit index");
            }
            if (i > 0 && indices_[i] <= indices_[i - 1]) {
                throw std::invalid_argument(
                    "QubitSet: indices must be strictly increasing");
            }
        }
    }

    QubitSet(std::initializer_list<int> indices)
        : QubitSet(std::vector<int>(indices)) {}

    static QubitSet normalized(std::vector<int> indices) {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        return QubitSet(std::move(indices));
    }

    /// Contiguous block [first, last].
    static QubitSet range(int first, int last) {
        std::vector<int> out;
        for (int q = first; q <= last; ++q) {
            out.push_back(q);
        }
        return QubitSet(std::move(out));
    }

    static QubitSet all(int num_qubits) { return range(0, num_qubits - 1); }

    static QubitSet from_mask(std::uint64_t mask) {
        std::vector<int> out;
        for (int q = 0; mask != 0; ++q, mask >>= 1) {
            if (mask & 1U) {
                out.push_back(q);
            }
        }
        return QubitSet(std::move(out));
    }

    [[nodiscard]] const std::vector<int> &indices() const { return indices_; }
    [[nodiscard]] std::size_t size() const { return indices_.size(); }
    [[nodiscard]] bool empty() const { return indices_.empty(); }
    [[nodiscard]] int operator[](std::size_t i) const { return indices_[i]; }
    [[nodiscard]] auto begin() const { return indices_.begin(); }
    [[nodiscard]] auto end() const { return indices_.end(); }
    [[nodiscard]] int front() const { return indices_.front(); }
    [[nodiscard]] int back() const { return indices_.back(); }

    [[nodiscard]] bool contains(int q) const {
        return std::binary_search(indices_.begin(), indices_.end(), q);
    }

    [[nodiscard]] std::uint64_t mask() const {
        std::uint64_t m = 0;
        for (int q : indices_) {
            m |= std::uint64_t{1} << q;
        }
        return m;
    }

    [[nodiscard]] bool is_subset_of(const QubitSet &other) const {
        return std::includes(other.begin(), other.end(), begin(), end());
    }

    [[nodiscard]] QubitSet complement(int num_qubits) const {
        std::vector<int> out;
        for (int q = 0; q < num_qubits; ++q) {
            if (!contains(q)) {
                out.push_back(q);
            }
        }
        return QubitSet(std::move(out));
    }

    [[nodiscard]] QubitSet united(const QubitSet &other) const {
        std::vector<int> out;
        std::set_union(begin(), end(), other.begin(), other.end(),
                       std::back_inserter(out));
        return QubitSet(std::move(out));
    }

    [[nodiscard]] bool disjoint(const QubitSet &other) const {
        return (mask() & other.mask()) == 0;
    }

    /// Throws unless every index is below `num_qubits`.
    void require_within(int num_qubits) const {
        if (!indices_.empty() && indices_.back() >= num_qubits) {
            throw std::out_of_range("qubit index " +
                                    std::to_string(indices_.back()) +
                                    " out of range for " +
                                    std::to_string(num_qubits) + " qubits");
        }
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            os << (i ? "," : "") << indices_[i];
        }
        os << '}';
        return os.str();
    }

    friend bool operator==(const QubitSet &, const QubitSet &) = default;

  private:
    std::vector<int> indices_;
};

// ---------------------------------------------------------------------------
// Seeding. Every Monte-Carlo item derives its own generator from a master seed
// and its coordinates, so results never depend on evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : coords) {
        h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Standard complex Gaussian: real and imaginary parts iid N(0, 1).
inline Complex complex_gaussian(Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

inline double uniform_angle(Rng &rng) {
    std::uniform_real_distribution<double> dist(0.0, 2.0 * kPi);
    return dist(rng);
}

inline bool is_unitary(const CMatrix &m, double tol = 1e-10) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const CMatrix residual =
        m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
    return residual.cwiseAbs().maxCoeff() <= tol;
}

inline double hermitian_deviation(const CMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace hea_lab
