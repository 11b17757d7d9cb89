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

// Brute-force reference implementations used as test oracles. They share no
// code paths with the library kernels: everything goes through dense
// Kronecker products and explicit index loops.

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/hea.hpp"
#include "hea_lab/qstate.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace oracle {

using hea_lab::CMatrix;
using hea_lab::Complex;
using hea_lab::CVector;

inline CMatrix pauli2(char c) {
    CMatrix m(2, 2);
    switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli2");
    }
    return m;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Little-endian: letters[q] acts on qubit q, the least significant bit for q = 0.
inline CMatrix pauli_matrix(const std::string &letters) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (char c : letters) m = kron(pauli2(c), m);
    return m;
}

/// Embeds a 2^k gate acting on `targets` (targets[j] = local bit j) into n qubits.
inline CMatrix embed(const CMatrix &gate, const std::vector<int> &targets, int n) {
    const std::size_t dim = std::size_t{1} << n;
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t local_col = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) local_col |= ((col >> targets[j]) & 1U) << j;
        for (std::size_t local_row = 0; local_row < (std::size_t{1} << targets.size()); ++local_row) {
            std::size_t row = col;
            for (std::size_t j = 0; j < targets.size(); ++j) {
                row &= ~(std::size_t{1} << targets[j]);
                row |= ((local_row >> j) & 1U) << targets[j];
            }
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                gate(static_cast<Eigen::Index>(local_row), static_cast<Eigen::Index>(local_col));
        }
    }
    return out;
}

inline CMatrix cnot_local() {
    // control = local bit 0, target = local bit 1
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

inline CMatrix rotation(char axis, double angle) {
    const CMatrix p = pauli2(axis);
    return std::cos(angle) * CMatrix::Identity(2, 2) - Complex(0, 1) * std::sin(angle) * p;
}

/// Dense U(theta) rebuilt gate by gate from the layout rules, independent of
/// the library's layout code.
inline CMatrix hea_unitary(int n, int depth, bool periodic, bool half, const std::vector<double> &theta) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    CMatrix u = CMatrix::Identity(dim, dim);
    std::size_t p = 0;
    auto w = [&](int q) {
        for (char a : {'X', 'Y', 'Z'}) {
            const double ang = half ? theta[p] / 2 : theta[p];
            ++p;
            u = embed(rotation(a, ang), {q}, n) * u;
        }
    };
    for (int q = 0; q < n; ++q) w(q);
    for (int layer = 1; layer <= depth; ++layer) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = (layer % 2 == 1 ? 0 : 1); a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
        if (layer % 2 == 0 && periodic && n % 2 == 0) pairs.emplace_back(n - 1, 0);
        for (auto [a, b] : pairs) {
            u = embed(cnot_local(), {a, b}, n) * u;
            w(a);
            w(b);
        }
    }
    if (p != theta.size()) throw std::logic_error("hea_unitary: parameter count mismatch");
    return u;
}

inline CVector vec(const hea_lab::StateVector &s) { return s.to_eigen(); }

/// rho_Lambda(i, j) = sum_e psi[i, e] conj(psi[j, e]) by explicit bit loops.
inline CMatrix partial_trace(const hea_lab::StateVector &s, const std::vector<int> &keep) {
    const int n = s.num_qubits();
    const std::size_t k = keep.size();
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        bool kept = false;
        for (int x : keep) kept = kept || x == q;
        if (!kept) rest.push_back(q);
    }
    auto compose = [&](std::size_t i, std::size_t e) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < k; ++j) idx |= ((i >> j) & 1U) << keep[j];
        for (std::size_t j = 0; j < rest.size(); ++j) idx |= ((e >> j) & 1U) << rest[j];
        return idx;
    };
    const std::size_t dk = std::size_t{1} << k;
    CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex acc = 0;
            for (std::size_t e = 0; e < (std::size_t{1} << rest.size()); ++e) {
                acc += s[compose(i, e)] * std::conj(s[compose(j, e)]);
            }
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return rho;
}

inline double expect(const CVector &psi, const CMatrix &op) { return (psi.adjoint() * op * psi)(0, 0).real(); }

inline hea_lab::StateVector from_eigen(int n, const CVector &v) {
    std::vector<Complex> a(v.data(), v.data() + v.size());
    return hea_lab::StateVector::normalized(n, std::move(a));
}

inline hea_lab::StateVector bell() {
    const double r = 1.0 / std::sqrt(2.0);
    return {2, {r, 0, 0, r}};
}

} // namespace oracle
