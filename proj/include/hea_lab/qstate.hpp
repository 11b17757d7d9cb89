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
 * Dense statevector kernel.
 *
 * Qubit ordering is little-endian: qubit q is bit q of the amplitude index.
 * A k-qubit gate acting on targets (t_0, ..., t_{k-1}) is indexed the same
 * way, local bit j corresponding to t_j.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/pauli.hpp"

#include <bit>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

namespace hea_lab {

class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        check_qubit_count(num_qubits);
        amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    /// Takes ownership of amplitudes that must already be unit norm.
    StateVector(int num_qubits, std::vector<Complex> amplitudes, double tol = 1e-10)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        check_qubit_count(num_qubits);
        if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
            throw std::invalid_argument("StateVector: amplitude count must be 2^n");
        }
        if (std::abs(norm_squared() - 1.0) > tol) {
            throw std::invalid_argument("StateVector: amplitudes are not unit norm");
        }
    }

    /// Normalizes an arbitrary non-zero vector.
    static StateVector normalized(int num_qubits, std::vector<Complex> amplitudes) {
        double s = 0.0;
        for (const auto &a : amplitudes) s += std::norm(a);
        if (!(s > 0.0)) {
            throw std::invalid_argument("StateVector::normalized: zero vector");
        }
        const double inv = 1.0 / std::sqrt(s);
        for (auto &a : amplitudes) a *= inv;
        return {num_qubits, std::move(amplitudes)};
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Mutable access for in-place kernels. Callers keep the norm at one.
    [[nodiscard]] std::span<Complex> mutable_amplitudes() { return amplitudes_; }

    [[nodiscard]] double norm_squared() const {
        double s = 0.0;
        for (const auto &a : amplitudes_) s += std::norm(a);
        return s;
    }

    [[nodiscard]] Complex inner(const StateVector &other) const {
        if (other.dim() != dim()) {
            throw std::invalid_argument("StateVector::inner: dimension mismatch");
        }
        Complex s{0.0, 0.0};
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
        }
        return s;
    }

    [[nodiscard]] CVector to_eigen() const {
        return Eigen::Map<const CVector>(amplitudes_.data(),
                                         static_cast<Eigen::Index>(amplitudes_.size()));
    }

  private:
    static void check_qubit_count(int n) {
        if (n < 1 || n > kMaxStateQubits) {
            throw std::invalid_argument("StateVector: qubit count must be in [1, " +
                                        std::to_string(kMaxStateQubits) + "], got " +
                                        std::to_string(n));
        }
    }

    int num_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

/// Dense density matrix on a (sub)register.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    DensityMatrix(int num_qubits, CMatrix entries)
        : num_qubits_(num_qubits), entries_(std::move(entries)) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        if (entries_.rows() != dim || entries_.cols() != dim) {
            throw std::invalid_argument("DensityMatrix: side must be 2^n");
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] Eigen::Index dim() const { return entries_.rows(); }
    [[nodiscard]] const CMatrix &matrix() const { return entries_; }

    /// Ascending eigenvalues.
    [[nodiscard]] RVector eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

    [[nodiscard]] double trace() const { return entries_.trace().real(); }

    [[nodiscard]] double purity() const {
        // Tr[rho^2] = sum_ij |rho_ij|^2 for Hermitian rho.
        return entries_.cwiseAbs2().sum();
    }

  private:
    int num_qubits_ = 0;
    CMatrix entries_;
};

// ---------------------------------------------------------------------------
// Gate kernels. These act in place and do not validate their inputs.

namespace kernel {

/// Spreads the low bits of `value` onto the positions listed in `positions`.
inline std::size_t deposit(std::size_t value, std::span<const int> positions) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if ((value >> j) & 1U) out |= std::size_t{1} << positions[j];
    }
    return out;
}

/// All 2^|positions| offsets, local index j -> deposit(j, positions).
inline std::vector<std::size_t> offsets(std::span<const int> positions) {
    std::vector<std::size_t> out(std::size_t{1} << positions.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = deposit(j, positions);
    return out;
}

/// 2x2 matrix m = [[m00, m01], [m10, m11]] on qubit q.
inline void apply_1q(std::span<Complex> amps, int q, Complex m00, Complex m01, Complex m10,
                     Complex m11) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps[i];
            const Complex a1 = amps[i + stride];
            amps[i] = m00 * a0 + m01 * a1;
            amps[i + stride] = m10 * a0 + m11 * a1;
        }
    }
}

inline void apply_cnot(std::span<Complex> amps, int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

/// Dense 2^k x 2^k matrix on `targets` (distinct, any order).
inline void apply_matrix(std::span<Complex> amps, int num_qubits, const CMatrix &gate,
                         std::span<const int> targets) {
    const std::size_t k = targets.size();
    const std::size_t local_dim = std::size_t{1} << k;
    if (k == 1) {
        apply_1q(amps, targets[0], gate(0, 0), gate(0, 1), gate(1, 0), gate(1, 1));
        return;
    }
    const auto local = offsets(targets);
    std::size_t target_mask = 0;
    for (int t : targets) target_mask |= std::size_t{1} << t;
    std::vector<int> rest;
    for (int q = 0; q < num_qubits; ++q) {
        if (!((target_mask >> q) & 1U)) rest.push_back(q);
    }
    const std::size_t env_dim = std::size_t{1} << rest.size();
    CVector in(static_cast<Eigen::Index>(local_dim));
    CVector out(static_cast<Eigen::Index>(local_dim));
    const bool contiguous_low = k == static_cast<std::size_t>(num_qubits);
    for (std::size_t e = 0; e < env_dim; ++e) {
        const std::size_t base = contiguous_low ? 0 : deposit(e, rest);
        for (std::size_t j = 0; j < local_dim; ++j) in(static_cast<Eigen::Index>(j)) = amps[base | local[j]];
        out.noalias() = gate * in;
        for (std::size_t j = 0; j < local_dim; ++j) amps[base | local[j]] = out(static_cast<Eigen::Index>(j));
    }
}

/// Multiplies amplitudes by phases[local index over `targets`].
inline void apply_diagonal(std::span<Complex> amps, std::span<const Complex> phases,
                           std::span<const int> targets) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t j = 0;
        for (std::size_t b = 0; b < targets.size(); ++b) {
            j |= ((i >> targets[b]) & std::size_t{1}) << b;
        }
        amps[i] *= phases[j];
    }
}

} // namespace kernel

// ---------------------------------------------------------------------------
// State preparation

enum class StateKind { zero, basis, product_random, haar };

inline StateVector zero_state(int num_qubits) { return StateVector(num_qubits); }

/// Computational basis state; character i of `bits` is qubit i.
inline StateVector basis_state(std::string_view bits) {
    const int n = static_cast<int>(bits.size());
    StateVector zero(n);
    std::vector<Complex> amps(zero.dim(), Complex{0.0, 0.0});
    std::size_t index = 0;
    for (int q = 0; q < n; ++q) {
        if (bits[static_cast<std::size_t>(q)] == '1') {
            index |= std::size_t{1} << q;
        } else if (bits[static_cast<std::size_t>(q)] != '0') {
            throw std::invalid_argument("basis_state: bitstring must contain only 0 and 1");
        }
    }
    amps[index] = 1.0;
    return {n, std::move(amps)};
}

/// Product of independent single-qubit Haar states.
inline StateVector random_product_state(int num_qubits, std::uint64_t seed) {
    StateVector zero(num_qubits);
    Rng rng = make_rng(seed);
    std::vector<Complex> amps(zero.dim(), Complex{1.0, 0.0});
    for (int q = 0; q < num_qubits; ++q) {
        Complex a = complex_gaussian(rng);
        Complex b = complex_gaussian(rng);
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        a /= norm;
        b /= norm;
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] *= ((i >> q) & 1U) ? b : a;
        }
    }
    return StateVector::normalized(num_qubits, std::move(amps));
}

/// Normalized vector of iid standard complex Gaussians.
inline StateVector haar_state(int num_qubits, std::uint64_t seed) {
    StateVector zero(num_qubits);
    Rng rng = make_rng(seed);
    std::vector<Complex> amps(zero.dim());
    for (auto &a : amps) a = complex_gaussian(rng);
    return StateVector::normalized(num_qubits, std::move(amps));
}

inline StateVector prepare_state(StateKind kind, int num_qubits, std::uint64_t seed,
                                 std::string_view bits = {}) {
    if (num_qubits <= 0) {
        throw std::invalid_argument("prepare_state: qubit count must be positive");
    }
    switch (kind) {
    case StateKind::zero: return zero_state(num_qubits);
    case StateKind::basis:
        if (static_cast<int>(bits.size()) != num_qubits) {
            throw std::invalid_argument("prepare_state: bitstring length " +
                                        std::to_string(bits.size()) + " != " +
                                        std::to_string(num_qubits));
        }
        return basis_state(bits);
    case StateKind::product_random: return random_product_state(num_qubits, seed);
    case StateKind::haar: return haar_state(num_qubits, seed);
    }
    throw std::invalid_argument("prepare_state: unknown kind");
}

// ---------------------------------------------------------------------------
// Operations

inline void apply_unitary_inplace(StateVector &state, const CMatrix &gate,
                                  const QubitSet &targets) {
    if (targets.empty()) {
        throw std::invalid_argument("apply_unitary: no target qubits");
    }
    targets.require_within(state.num_qubits());
    const auto side = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (gate.rows() != side || gate.cols() != side) {
        throw std::invalid_argument("apply_unitary: gate side must be 2^|targets|");
    }
    if (!is_unitary(gate, 1e-10)) {
        throw std::invalid_argument("apply_unitary: gate is not unitary");
    }
    kernel::apply_matrix(state.mutable_amplitudes(), state.num_qubits(), gate, targets.indices());
}

inline StateVector apply_unitary(StateVector state, const CMatrix &gate,
                                 const QubitSet &targets) {
    apply_unitary_inplace(state, gate, targets);
    return state;
}

/// Partial trace onto `subsystem`: rho = Tr_{complement}[|psi><psi|].
inline DensityMatrix reduced_density(const StateVector &state, const QubitSet &subsystem) {
    if (subsystem.empty()) {
        throw std::invalid_argument("reduced_density: empty subsystem");
    }
    subsystem.require_within(state.num_qubits());
    if (static_cast<int>(subsystem.size()) > kMaxDenseQubits) {
        throw std::invalid_argument("reduced_density: subsystem exceeds the dense budget of " +
                                    std::to_string(kMaxDenseQubits) + " qubits");
    }
    const QubitSet env = subsystem.complement(state.num_qubits());
    const auto sub_off = kernel::offsets(subsystem.indices());
    const auto env_off = kernel::offsets(env.indices());
    const auto rows = static_cast<Eigen::Index>(sub_off.size());
    const auto cols = static_cast<Eigen::Index>(env_off.size());
    CMatrix m(rows, cols);
    const auto amps = state.amplitudes();
    for (Eigen::Index r = 0; r < cols; ++r) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, r) = amps[sub_off[static_cast<std::size_t>(i)] | env_off[static_cast<std::size_t>(r)]];
        }
    }
    CMatrix rho = m * m.adjoint();
    return {static_cast<int>(subsystem.size()), std::move(rho)};
}

/// <psi|P|psi> for a single Pauli string (complex before the residue check).
inline Complex pauli_expectation(const StateVector &state, const PauliString &p) {
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const auto amps = state.amplitudes();
    const std::size_t x = p.x_mask();
    const std::size_t z = p.z_mask();
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t b = 0; b < amps.size(); ++b) {
        const Complex v = std::conj(amps[b ^ x]) * amps[b];
        if (std::popcount(b & z) & 1) {
            acc_re -= v.real();
            acc_im -= v.imag();
        } else {
            acc_re += v.real();
            acc_im += v.imag();
        }
    }
    return kIPow[p.num_y() % 4] * Complex{acc_re, acc_im};
}

/// sum_i c_i <psi|P_i|psi>.
inline double expectation(const StateVector &state, const Observable &obs) {
    if (obs.num_qubits() != state.num_qubits()) {
        throw std::invalid_argument("expectation: observable acts on " +
                                    std::to_string(obs.num_qubits()) + " qubits, state has " +
                                    std::to_string(state.num_qubits()));
    }
    Complex total{0.0, 0.0};
    for (const auto &t : obs.terms()) {
        total += t.coefficient * pauli_expectation(state, t.string);
    }
    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, coefficient_l1(obs))) {
        throw std::logic_error("expectation: non-negligible imaginary residue");
    }
    return total.real();
}

/// |psi>^{\otimes k}; copy j occupies qubits [j n, (j + 1) n).
inline StateVector tensor_copies(const StateVector &state, int copies) {
    const int n = state.num_qubits();
    if (copies < 1) {
        throw std::invalid_argument("tensor_copies: copy count must be >= 1");
    }
    if (copies * n > kMaxStateQubits) {
        throw std::invalid_argument("tensor_copies: " + std::to_string(copies * n) +
                                    " qubits exceeds the budget of " +
                                    std::to_string(kMaxStateQubits));
    }
    const std::size_t total = std::size_t{1} << (copies * n);
    const std::size_t mask = state.dim() - 1;
    std::vector<Complex> amps(total);
    const auto src = state.amplitudes();
    for (std::size_t g = 0; g < total; ++g) {
        Complex a{1.0, 0.0};
        for (int c = 0; c < copies; ++c) a *= src[(g >> (c * n)) & mask];
        amps[g] = a;
    }
    return StateVector::normalized(copies * n, std::move(amps));
}

} // namespace hea_lab
