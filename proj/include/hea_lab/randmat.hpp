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
 * Random Hamiltonians in spectral form, time evolution and spectral form
 * factors, together with the closed-form Gaussian Diagonal Ensemble (GDE)
 * averages they are checked against.
 *
 * A GDE Hamiltonian on d = 2^k levels is H = sum_j E_j |v_j><v_j| with E_j iid
 * N(0, sigma = 1/2) and (v_j) the columns of a Haar unitary. The closed forms
 * below drop their O(1/d) corrections.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/haar.hpp"
#include "hea_lab/qstate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hea_lab {

inline constexpr double kGdeSigma = 0.5;

/// Hermitian operator stored by its eigendecomposition, acting on `support`
/// inside an n-qubit register (identity elsewhere).
class SpectralHamiltonian {
  public:
    SpectralHamiltonian() = default;
    SpectralHamiltonian(int num_qubits, QubitSet support, RVector energies, CMatrix eigenvectors)
        : num_qubits_(num_qubits), support_(std::move(support)), energies_(std::move(energies)),
          eigenvectors_(std::move(eigenvectors)) {
        support_.require_within(num_qubits_);
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << support_.size());
        if (energies_.size() != dim || eigenvectors_.rows() != dim || eigenvectors_.cols() != dim) {
            throw std::invalid_argument("SpectralHamiltonian: dimensions do not match the support");
        }
        if (!energies_.allFinite()) {
            throw std::invalid_argument("SpectralHamiltonian: non-finite eigenvalue");
        }
    }

    /// Eigendecomposes a dense Hermitian matrix on all `num_qubits` qubits.
    static SpectralHamiltonian from_dense(const CMatrix &h, int num_qubits, double tol = 1e-10) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        if (h.rows() != dim || h.cols() != dim) {
            throw std::invalid_argument("SpectralHamiltonian::from_dense: side must be 2^n");
        }
        if (hermitian_deviation(h) > tol) {
            throw std::invalid_argument("SpectralHamiltonian::from_dense: matrix is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("SpectralHamiltonian::from_dense: eigensolver failed");
        }
        return {num_qubits, QubitSet::all(num_qubits), solver.eigenvalues(), solver.eigenvectors()};
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const QubitSet &support() const { return support_; }
    [[nodiscard]] const RVector &energies() const { return energies_; }
    [[nodiscard]] const CMatrix &eigenvectors() const { return eigenvectors_; }

    /// Matrix on the support only.
    [[nodiscard]] CMatrix local_matrix() const {
        return eigenvectors_ * energies_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
    }

    /// Full 2^n matrix, little-endian, identity off the support.
    [[nodiscard]] CMatrix dense() const {
        if (num_qubits_ > kMaxDenseQubits) {
            throw std::invalid_argument("SpectralHamiltonian::dense: register too large");
        }
        const CMatrix local = local_matrix();
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits_);
        const QubitSet env = support_.complement(num_qubits_);
        const auto sub_off = kernel::offsets(support_.indices());
        const auto env_off = kernel::offsets(env.indices());
        CMatrix out = CMatrix::Zero(dim, dim);
        for (std::size_t e : env_off) {
            for (std::size_t i = 0; i < sub_off.size(); ++i) {
                for (std::size_t j = 0; j < sub_off.size(); ++j) {
                    out(static_cast<Eigen::Index>(e | sub_off[i]), static_cast<Eigen::Index>(e | sub_off[j])) =
                        local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
        return out;
    }

  private:
    int num_qubits_ = 0;
    QubitSet support_;
    RVector energies_;
    CMatrix eigenvectors_;
};

using GDEHamiltonian = SpectralHamiltonian;

inline constexpr int kMaxGdeQubits = 12;

/// GDE Hamiltonian on `support` of an n-qubit register.
inline GDEHamiltonian sample_gde_on(int num_qubits, const QubitSet &support, std::uint64_t seed) {
    if (support.empty() || static_cast<int>(support.size()) > kMaxGdeQubits) {
        throw std::invalid_argument("sample_gde: support must span 1.." + std::to_string(kMaxGdeQubits) +
                                    " qubits");
    }
    Rng rng = make_rng(seed);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << support.size());
    std::normal_distribution<double> normal(0.0, kGdeSigma);
    RVector energies(dim);
    for (Eigen::Index j = 0; j < dim; ++j) energies(j) = normal(rng);
    CMatrix vectors = haar_unitary(dim, rng);
    return {num_qubits, support, std::move(energies), std::move(vectors)};
}

inline GDEHamiltonian sample_gde(int num_qubits, std::uint64_t seed) {
    if (num_qubits < 1 || num_qubits > kMaxGdeQubits) {
        throw std::invalid_argument("sample_gde: qubit count must be in [1, " +
                                    std::to_string(kMaxGdeQubits) + "]");
    }
    return sample_gde_on(num_qubits, QubitSet::all(num_qubits), seed);
}

/// exp(-i H t)|psi> through the eigenbasis.
inline StateVector evolve(const SpectralHamiltonian &h, StateVector state, double t) {
    if (state.num_qubits() != h.num_qubits()) {
        throw std::invalid_argument("evolve: state has " + std::to_string(state.num_qubits()) +
                                    " qubits, Hamiltonian acts on " + std::to_string(h.num_qubits()));
    }
    if (t == 0.0) {
        return state;
    }
    const auto &targets = h.support().indices();
    auto amps = state.mutable_amplitudes();
    const CMatrix to_eigen = h.eigenvectors().adjoint();
    kernel::apply_matrix(amps, state.num_qubits(), to_eigen, targets);
    std::vector<Complex> phases(static_cast<std::size_t>(h.energies().size()));
    for (std::size_t j = 0; j < phases.size(); ++j) {
        phases[j] = std::polar(1.0, -h.energies()(static_cast<Eigen::Index>(j)) * t);
    }
    kernel::apply_diagonal(amps, phases, targets);
    kernel::apply_matrix(amps, state.num_qubits(), h.eigenvectors(), targets);
    return state;
}

/// Dense Hermitian convenience overload; the matrix is eigendecomposed per
/// call, so prefer building a SpectralHamiltonian once.
inline StateVector evolve(const CMatrix &h, StateVector state, double t) {
    return evolve(SpectralHamiltonian::from_dense(h, state.num_qubits(), 1e-10), std::move(state), t);
}

/// Normalized form factor |Tr exp(-iHt)|^{2k} / d^{2k} over the support.
inline double spectral_form_factor(const SpectralHamiltonian &h, double t, int k) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("spectral_form_factor: k must be 1 or 2");
    }
    Complex tr{0.0, 0.0};
    const auto &e = h.energies();
    for (Eigen::Index j = 0; j < e.size(); ++j) tr += std::polar(1.0, -e(j) * t);
    const double r = std::norm(tr) / (static_cast<double>(e.size()) * static_cast<double>(e.size()));
    return k == 1 ? r : r * r;
}

// ---------------------------------------------------------------------------
// Closed-form GDE predictions

namespace predict {

inline void require_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("predict: t must be >= 0");
}

inline void require_dim(double d) {
    if (!(d >= 2.0)) throw std::invalid_argument("predict: subsystem dimension must be >= 2");
}

/// Average normalized 2k-point form factor, exp(-k t^2 / 4).
inline double gde_sff(int k, double t) {
    require_time(t);
    if (k < 1) throw std::invalid_argument("predict::gde_sff: k must be >= 1");
    return std::exp(-k * t * t / 4.0);
}

/// Average loss of a symmetry-class state under GDE evolution, exp(-t^2/4).
inline double gde_loss(double t) {
    require_time(t);
    return std::exp(-t * t / 4.0);
}

/// Average purity of a d_sub-dimensional marginal of a GDE-evolved product state.
inline double gde_purity_mean(double d_sub, double t) {
    require_time(t);
    require_dim(d_sub);
    return 1.0 / d_sub + std::exp(-t * t / 2.0) * (1.0 - 1.0 / d_sub);
}

/// Second moment of that purity.
inline double gde_purity_second(double d_sub, double t) {
    require_time(t);
    require_dim(d_sub);
    const double c4 = std::exp(-t * t / 2.0);
    const double c8 = std::exp(-t * t);
    return (1.0 + 2.0 * c4 * (d_sub - 1.0) + c8 * (d_sub - 1.0) * (d_sub - 1.0)) / (d_sub * d_sub);
}

/// Markov lower bound on Pr(|L_s| <= eps).
inline double gde_concentration_prob(double t, double eps) {
    require_time(t);
    if (!(eps > 0.0)) throw std::invalid_argument("predict: eps must be > 0");
    return std::max(0.0, 1.0 - std::exp(-t * t / 4.0) / eps);
}

/// Lower threshold on I_Lambda after short GDE evolution of a product state.
inline double thm5_threshold(int lambda_size, double t) {
    require_time(t);
    if (lambda_size < 1) throw std::invalid_argument("predict: |Lambda| must be >= 1");
    return 0.5 * std::exp(-t * t / 8.0) * std::sqrt(1.0 - std::pow(2.0, -lambda_size));
}

/// Variant with the fourth-root dependence on (1 - 2^{-|Lambda|}).
inline double thm5_threshold_quartic(int lambda_size, double t) {
    require_time(t);
    if (lambda_size < 1) throw std::invalid_argument("predict: |Lambda| must be >= 1");
    return 0.5 * std::exp(-t * t / 8.0) * std::pow(1.0 - std::pow(2.0, -lambda_size), 0.25);
}

} // namespace predict

/// String-keyed dispatcher over the predict:: closed forms. Parameter names:
/// gde_sff{k,t}, gde_loss{t}, gde_purity_mean{d,t}, gde_purity_second{d,t},
/// gde_concentration_prob{t,eps}, thm5_threshold{lambda,t}.
inline double analytic_prediction(std::string_view kind, const std::map<std::string, double> &params) {
    auto get = [&](const char *key) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw std::invalid_argument("analytic_prediction: " + std::string(kind) +
                                        " requires parameter '" + key + "'");
        }
        return it->second;
    };
    if (kind == "gde_sff") return predict::gde_sff(static_cast<int>(get("k")), get("t"));
    if (kind == "gde_loss") return predict::gde_loss(get("t"));
    if (kind == "gde_purity_mean") return predict::gde_purity_mean(get("d"), get("t"));
    if (kind == "gde_purity_second") return predict::gde_purity_second(get("d"), get("t"));
    if (kind == "gde_concentration_prob") return predict::gde_concentration_prob(get("t"), get("eps"));
    if (kind == "thm5_threshold") return predict::thm5_threshold(static_cast<int>(get("lambda")), get("t"));
    throw std::invalid_argument("analytic_prediction: unknown kind '" + std::string(kind) + "'");
}

} // namespace hea_lab
