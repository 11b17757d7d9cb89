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
 * Two end-to-end workloads built on the kernel:
 *
 *  - Hamiltonian discrimination. Class 1 states are evolved by a GDE
 *    Hamiltonian H_S = 1_A (x) H_B that commutes with a Pauli symmetry
 *    P_A (x) 1_B, class 0 states by a GDE Hamiltonian H_G on all qubits. Both
 *    start from the same vector of the +1 eigenspace of the symmetry.
 *  - Gradient decay versus evolution time for inputs exp(-iHt)|psi_0> with H
 *    the periodic Heisenberg chain plus a transverse field, |psi_0> a random
 *    product state and cost L = 1 - <sum_i Z_i>.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/gradients.hpp"
#include "hea_lab/hea.hpp"
#include "hea_lab/parallel.hpp"
#include "hea_lab/pauli.hpp"
#include "hea_lab/qstate.hpp"
#include "hea_lab/randmat.hpp"
#include "hea_lab/scrambling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hea_lab {

// ---------------------------------------------------------------------------
// Hamiltonian discrimination

struct DiscriminationSetup {
    int num_qubits = 0;
    QubitSet subsystem_a;
    PauliString symmetry; ///< P_A (x) 1_B
    GDEHamiltonian h_symmetric;
    GDEHamiltonian h_generic;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] Observable symmetry_observable() const {
        Observable o(num_qubits);
        o.add(1.0, symmetry);
        return o;
    }
};

/// H_B ~ GDE on the complement of A, H_G ~ GDE on all qubits, P_A = Z on A.
inline DiscriminationSetup build_setup(int num_qubits, const QubitSet &subsystem_a, std::uint64_t seed) {
    if (subsystem_a.size() < 2) {
        throw std::invalid_argument("build_setup: subsystem A needs at least two qubits");
    }
    subsystem_a.require_within(num_qubits);
    if (subsystem_a.size() >= static_cast<std::size_t>(num_qubits)) {
        throw std::invalid_argument("build_setup: subsystem B must be non-empty");
    }
    DiscriminationSetup s;
    s.num_qubits = num_qubits;
    s.subsystem_a = subsystem_a;
    s.symmetry = PauliString(num_qubits, 0, subsystem_a.mask());
    s.seed = seed;
    if (2 * subsystem_a.size() > static_cast<std::size_t>(num_qubits)) {
        s.warnings.push_back("subsystem A is larger than n/2; concentration estimates assume |A| << |B|");
    }
    s.h_symmetric = sample_gde_on(num_qubits, subsystem_a.complement(num_qubits), derive_seed(seed, {1}));
    s.h_generic = sample_gde(num_qubits, derive_seed(seed, {2}));
    return s;
}

struct LabeledState {
    int label = 0;
    StateVector state;
};

struct Dataset {
    std::vector<LabeledState> entries;
    double t = 0.0;
    std::size_t size() const { return entries.size(); }
};

/// Haar-random unit vector in the +1 eigenspace of `p`.
inline StateVector sample_symmetric_state(const PauliString &p, std::uint64_t seed) {
    const int n = p.num_qubits();
    Rng rng = make_rng(seed);
    std::vector<Complex> v(std::size_t{1} << n);
    for (auto &a : v) a = complex_gaussian(rng);
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex phase = kIPow[p.num_y() % 4];
    std::vector<Complex> projected(v.size());
    for (std::size_t b = 0; b < v.size(); ++b) {
        const double sign = (std::popcount(b & p.z_mask()) & 1) ? -1.0 : 1.0;
        projected[b ^ p.x_mask()] += 0.5 * phase * sign * v[b];
        projected[b] += 0.5 * v[b];
    }
    return StateVector::normalized(n, std::move(projected));
}

/// N/2 pairs (1, e^{-iH_S t}|z_s>), (0, e^{-iH_G t}|z_s>) in that order.
inline Dataset build_dataset(const DiscriminationSetup &setup, double t, std::size_t size, std::uint64_t seed) {
    if (size < 2 || size % 2 != 0) {
        throw std::invalid_argument("build_dataset: dataset size must be even and >= 2, got " + std::to_string(size));
    }
    Dataset d;
    d.t = t;
    for (std::size_t s = 0; s < size / 2; ++s) {
        const StateVector z = sample_symmetric_state(setup.symmetry, derive_seed(seed, {s}));
        d.entries.push_back({1, evolve(setup.h_symmetric, z, t)});
        d.entries.push_back({0, evolve(setup.h_generic, z, t)});
    }
    return d;
}

/// Per-sample model output L_s = <psi_s|U^dagger O U|psi_s>.
inline double loss_s(const HEACircuit &circuit, std::span<const double> theta, const LabeledState &entry,
                     const Observable &obs) {
    return loss_value(circuit, theta, entry.state, obs);
}

/// (1/N) sum_s (y_s - L_s)^2.
inline double empirical_loss(const HEACircuit &circuit, std::span<const double> theta, const Dataset &data,
                             const Observable &obs) {
    if (data.entries.empty()) throw std::invalid_argument("empirical_loss: empty dataset");
    double s = 0.0;
    for (const auto &e : data.entries) {
        const double r = e.label - loss_s(circuit, theta, e, obs);
        s += r * r;
    }
    return s / static_cast<double>(data.entries.size());
}

struct TrainConfig {
    double step_size = 0.05;
    int iterations = 200;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> initial_params; ///< uniform random if unset
};

struct TrainResult {
    std::vector<double> loss_trajectory; ///< iterations + 1 values
    std::vector<double> final_params;
    double train_accuracy = 0.0;
};

inline double train_accuracy(const HEACircuit &circuit, std::span<const double> theta, const Dataset &data,
                             const Observable &obs) {
    std::size_t hits = 0;
    for (const auto &e : data.entries) {
        if ((loss_s(circuit, theta, e, obs) > 0.5) == (e.label == 1)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.entries.size());
}

/// Fixed-step gradient descent on the empirical loss, gradients by the shift
/// rule and the chain rule dL = (2/N) sum_s (L_s - y_s) dL_s.
inline TrainResult train(const HEACircuit &circuit, const Dataset &data, const Observable &obs,
                         const TrainConfig &config) {
    if (config.iterations < 1) throw std::invalid_argument("train: iterations must be >= 1");
    if (!(config.step_size >= 0.0)) throw std::invalid_argument("train: step size must be non-negative");
    if (data.entries.empty()) throw std::invalid_argument("train: empty dataset");
    std::vector<double> theta = config.initial_params.value_or(random_parameters(circuit, config.seed));
    if (static_cast<int>(theta.size()) != circuit.num_params()) {
        throw std::invalid_argument("train: initial parameter vector has the wrong length");
    }
    const double inv_n = 1.0 / static_cast<double>(data.entries.size());
    TrainResult result;
    for (int it = 0; it < config.iterations; ++it) {
        struct EntryEval {
            double residual = 0.0;
            std::vector<double> grad;
        };
        const auto evals = parallel_map<EntryEval>(data.entries.size(), [&](std::size_t s) {
            const auto &e = data.entries[s];
            EntryEval out;
            out.residual = loss_s(circuit, theta, e, obs) - e.label;
            out.grad = parameter_shift_grad(circuit, theta, e.state, obs).values;
            return out;
        });
        double loss = 0.0;
        std::vector<double> grad(theta.size(), 0.0);
        for (const auto &ev : evals) {
            loss += ev.residual * ev.residual * inv_n;
            for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += 2.0 * inv_n * ev.residual * ev.grad[k];
        }
        result.loss_trajectory.push_back(loss);
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= config.step_size * grad[k];
    }
    result.loss_trajectory.push_back(empirical_loss(circuit, theta, data, obs));
    result.train_accuracy = train_accuracy(circuit, theta, data, obs);
    result.final_params = std::move(theta);
    return result;
}

// ---------------------------------------------------------------------------
// Heisenberg gradient-vs-time experiment

/// sum_i X_i X_{i+1} + Y_i Y_{i+1} + 2 Z_i Z_{i+1} + X_i with i + 1 taken mod n.
/// For n = 2 both bonds land on the same pair and add up.
inline Observable heisenberg_observable(int num_qubits) {
    if (num_qubits < 2 || num_qubits > kMaxDenseQubits) {
        throw std::invalid_argument("heisenberg_hamiltonian: n must be in [2, " + std::to_string(kMaxDenseQubits) +
                                    "]");
    }
    Observable h(num_qubits);
    for (int i = 0; i < num_qubits; ++i) {
        const int j = (i + 1) % num_qubits;
        const std::uint64_t bi = std::uint64_t{1} << i;
        const std::uint64_t bj = std::uint64_t{1} << j;
        h.add(1.0, PauliString(num_qubits, bi | bj, 0));
        h.add(1.0, PauliString(num_qubits, bi | bj, bi | bj));
        h.add(2.0, PauliString(num_qubits, 0, bi | bj));
        h.add(1.0, PauliString(num_qubits, bi, 0));
    }
    return h;
}

inline CMatrix heisenberg_hamiltonian(int num_qubits) { return to_dense(heisenberg_observable(num_qubits)); }

struct GradientExperimentConfig {
    std::vector<int> num_qubits{4, 6, 8, 10};
    int depth = 1;
    std::vector<double> times;
    std::size_t num_states = 100;
    std::size_t num_theta_draws = 2;
    std::uint64_t seed = 0;
    double saturation_fraction = 0.2;
};

struct GradientRecord {
    int n = 0;
    double t = 0.0;
    double mean_grad_inf_norm = 0.0;
    double std_error = 0.0;
    double mean_entropy_2q = 0.0; ///< S(rho_2)/2 in bits on qubits {0, 1}
    std::size_t samples = 0;
};

struct SaturationSummary {
    int n = 0;
    double g_sat = 0.0;
    double entropy_sat = 0.0; ///< rescaled two-qubit entropy over the same window
};

struct GradientExperimentResult {
    std::vector<GradientRecord> records;
    std::vector<SaturationSummary> saturation;
    double loglog_slope = 0.0;      ///< d log G_sat / d log n
    double entropy_correlation = 0.0; ///< Pearson(G_sat, 1 - S)
};

/// Evenly spaced grid of `steps` points on [0, t_max], both ends included.
inline std::vector<double> linear_grid(double t_max, std::size_t steps) {
    if (steps == 0 || !(t_max >= 0.0)) throw std::invalid_argument("linear_grid: invalid grid");
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out[i] = steps == 1 ? 0.0 : t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return out;
}

inline GradientExperimentResult gradient_vs_time_experiment(const GradientExperimentConfig &config) {
    if (config.times.empty()) throw std::invalid_argument("gradient_vs_time_experiment: empty time grid");
    for (std::size_t i = 0; i < config.times.size(); ++i) {
        if (!(config.times[i] >= 0.0) || (i > 0 && config.times[i] <= config.times[i - 1])) {
            throw std::invalid_argument("gradient_vs_time_experiment: times must be non-negative and increasing");
        }
    }
    if (config.num_states == 0 || config.num_theta_draws == 0) {
        throw std::invalid_argument("gradient_vs_time_experiment: sample counts must be positive");
    }
    if (config.num_qubits.empty()) throw std::invalid_argument("gradient_vs_time_experiment: no system sizes");
    GradientExperimentResult result;
    const std::size_t nt = config.times.size();
    const auto window = static_cast<std::size_t>(
        std::max(1.0, std::round(config.saturation_fraction * static_cast<double>(nt))));
    for (int n : config.num_qubits) {
        const SpectralHamiltonian h = SpectralHamiltonian::from_dense(heisenberg_hamiltonian(n), n, 1e-10);
        const HEACircuit circuit = build_hea(n, config.depth);
        const Observable oz = total_z(n);
        const QubitSet pair{0, 1};
        struct PerState {
            std::vector<std::vector<double>> grads; // [t][draw]
            std::vector<double> entropy;            // [t]
        };
        const auto per_state = parallel_map<PerState>(config.num_states, [&](std::size_t s) {
            PerState out;
            const auto n64 = static_cast<std::uint64_t>(n);
            const StateVector psi0 = random_product_state(n, derive_seed(config.seed, {n64, s, 0}));
            std::vector<std::vector<double>> thetas;
            for (std::size_t j = 0; j < config.num_theta_draws; ++j) {
                thetas.push_back(random_parameters(circuit, derive_seed(config.seed, {n64, s, 1 + j})));
            }
            for (double t : config.times) {
                const StateVector psi = evolve(h, psi0, t);
                out.entropy.push_back(entanglement_entropy(psi, pair) / 2.0);
                std::vector<double> g;
                for (const auto &theta : thetas) g.push_back(parameter_shift_grad(circuit, theta, psi, oz).inf_norm);
                out.grads.push_back(std::move(g));
            }
            return out;
        });
        std::vector<double> means(nt);
        std::vector<double> entropies(nt);
        for (std::size_t ti = 0; ti < nt; ++ti) {
            RunningStats g;
            RunningStats e;
            for (const auto &ps : per_state) {
                for (double v : ps.grads[ti]) g.add(v);
                e.add(ps.entropy[ti]);
            }
            means[ti] = g.mean();
            entropies[ti] = e.mean();
            result.records.push_back({n, config.times[ti], g.mean(), g.std_error(), e.mean(), g.count()});
        }
        SaturationSummary sat{n, 0.0, 0.0};
        const std::size_t first = nt - std::min(window, nt);
        for (std::size_t ti = first; ti < nt; ++ti) {
            sat.g_sat += means[ti];
            sat.entropy_sat += entropies[ti];
        }
        sat.g_sat /= static_cast<double>(nt - first);
        sat.entropy_sat /= static_cast<double>(nt - first);
        result.saturation.push_back(sat);
    }
    std::vector<double> log_n, log_g, g, one_minus_s;
    for (const auto &s : result.saturation) {
        log_n.push_back(std::log(static_cast<double>(s.n)));
        log_g.push_back(std::log(s.g_sat));
        g.push_back(s.g_sat);
        one_minus_s.push_back(1.0 - s.entropy_sat);
    }
    result.loglog_slope = fit_slope(log_n, log_g);
    result.entropy_correlation = pearson(g, one_minus_s);
    return result;
}

// ---------------------------------------------------------------------------
// Packaged runs shared by the CLI and the acceptance checks

struct DiscriminationRunConfig {
    int num_qubits = 6;
    int a_size = 2;
    double t = 0.5;
    std::size_t dataset_size = 8;
    int depth = 2;
    int iterations = 200;
    double step_size = 0.05;
    std::uint64_t seed = 0;
};

struct DiscriminationRun {
    TrainResult training;
    std::vector<std::string> warnings;
};

/// A = {0, ..., a_size - 1}, observable P_A. Setup, dataset and initial
/// parameters use seeds seed, seed + 1 and seed + 2.
inline DiscriminationRun run_discrimination(const DiscriminationRunConfig &c) {
    if (c.a_size < 2 || c.a_size >= c.num_qubits) {
        throw std::invalid_argument("run_discrimination: need 2 <= |A| < n");
    }
    const DiscriminationSetup setup = build_setup(c.num_qubits, QubitSet::range(0, c.a_size - 1), c.seed);
    const Dataset data = build_dataset(setup, c.t, c.dataset_size, c.seed + 1);
    const HEACircuit circuit = build_hea(c.num_qubits, c.depth);
    TrainConfig tc;
    tc.step_size = c.step_size;
    tc.iterations = c.iterations;
    tc.seed = c.seed + 2;
    return {train(circuit, data, setup.symmetry_observable(), tc), setup.warnings};
}

/// Trailing moving average with window w (shorter at the start).
inline std::vector<double> moving_average(const std::vector<double> &v, std::size_t w) {
    if (w == 0) throw std::invalid_argument("moving_average: window must be positive");
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= w) acc -= v[i - w];
        out[i] = acc / static_cast<double>(std::min(i + 1, w));
    }
    return out;
}

struct ConcentrationInstance {
    double f = 0.0;
    double f_trivial = 0.0;
    double bound = 0.0;
    std::string observable;
};

/// One random instance: input from `family`, uniform theta, and
/// O = c_0 1 + c_1 P with P a random `locality`-local string on a random
/// contiguous block.
inline ConcentrationInstance concentration_instance(InputFamily family, int n, int depth, int locality,
                                                    double gde_time, std::uint64_t seed) {
    if (locality < 1 || locality > n) throw std::invalid_argument("concentration_instance: locality not in [1, n]");
    Rng rng = make_rng(derive_seed(seed, {7}));
    std::uniform_int_distribution<int> start_dist(0, n - locality);
    std::uniform_int_distribution<int> letter_dist(0, 2);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const int start = start_dist(rng);
    std::string letters(static_cast<std::size_t>(n), 'I');
    for (int q = start; q < start + locality; ++q) letters[static_cast<std::size_t>(q)] = "XYZ"[letter_dist(rng)];
    Observable obs(n);
    const double c0 = coeff(rng);
    const double c1 = coeff(rng);
    obs.add(c0, PauliString::identity(n));
    obs.add(c1, PauliString::from_letters(letters));
    const HEACircuit circuit = build_hea(n, depth);
    const StateVector psi = sample_input(family, n, gde_time, seed);
    const auto theta = random_parameters(circuit, derive_seed(seed, {8}));
    return {loss_value(circuit, theta, psi, obs), trivial_value(obs), concentration_bound(circuit, psi, obs), obs.str()};
}

} // namespace hea_lab
