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
 * Cost evaluation f(theta) = <psi|U^dagger(theta) O U(theta)|psi>, exact
 * parameter-shift and finite-difference gradients, Monte-Carlo variance
 * estimators and the light-cone variance lower bound G_n.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/hea.hpp"
#include "hea_lab/parallel.hpp"
#include "hea_lab/pauli.hpp"
#include "hea_lab/qstate.hpp"
#include "hea_lab/randmat.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hea_lab {

inline double loss_value(const HEACircuit &circuit, std::span<const double> theta,
                         const StateVector &state, const Observable &obs) {
    return expectation(apply_hea(circuit, theta, state), obs);
}

struct GradientReport {
    std::vector<double> values;
    double inf_norm = 0.0;

    static GradientReport from_values(std::vector<double> v) {
        GradientReport r;
        r.values = std::move(v);
        for (double x : r.values) r.inf_norm = std::max(r.inf_norm, std::abs(x));
        return r;
    }
};

/// d f / d theta = factor * [f(theta + shift) - f(theta - shift)].
struct ShiftRule {
    double shift;
    double factor;
};

inline ShiftRule shift_rule_for(AngleConvention c) {
    return c == AngleConvention::half ? ShiftRule{kPi / 2.0, 0.5} : ShiftRule{kPi / 4.0, 1.0};
}

namespace detail {

inline void check_shift_rule(const HEACircuit &circuit, const ShiftRule &rule) {
    const ShiftRule expected = shift_rule_for(circuit.convention());
    if (std::abs(rule.shift - expected.shift) > 1e-12 || std::abs(rule.factor - expected.factor) > 1e-12) {
        throw std::invalid_argument("parameter_shift_grad: shift rule does not match the " +
                                    to_string(circuit.convention()) + " angle convention");
    }
}

} // namespace detail

/// Exact gradient by the two-term shift rule. With `which` set only that
/// component is computed; the others are reported as zero.
///
/// The prefix state before each rotation is shared between its two shifted
/// evaluations, so only the suffix is re-simulated.
inline GradientReport parameter_shift_grad(const HEACircuit &circuit, std::span<const double> theta,
                                           const StateVector &state, const Observable &obs,
                                           std::optional<int> which = std::nullopt,
                                           std::optional<ShiftRule> rule = std::nullopt) {
    check_circuit_inputs(circuit, theta, state);
    const ShiftRule r = rule.value_or(shift_rule_for(circuit.convention()));
    detail::check_shift_rule(circuit, r);
    if (which && (*which < 0 || *which >= circuit.num_params())) {
        throw std::out_of_range("parameter_shift_grad: parameter index out of range");
    }
    std::vector<double> grad(static_cast<std::size_t>(circuit.num_params()), 0.0);
    const auto &gates = circuit.gates();
    const std::size_t last = which ? circuit.gate_of_param(*which) + 1 : gates.size();
    StateVector prefix = state;
    for (std::size_t g = 0; g < last; ++g) {
        const auto &gate = gates[g];
        const bool differentiate = gate.param_index && (!which || *gate.param_index == *which);
        const double angle = gate.param_index ? theta[static_cast<std::size_t>(*gate.param_index)] : 0.0;
        if (differentiate) {
            double f[2];
            for (int sign = 0; sign < 2; ++sign) {
                StateVector shifted = prefix;
                apply_gate(circuit, gate, angle + (sign == 0 ? r.shift : -r.shift), shifted.mutable_amplitudes());
                apply_gate_range(circuit, theta, g + 1, gates.size(), shifted);
                f[sign] = expectation(shifted, obs);
            }
            grad[static_cast<std::size_t>(*gate.param_index)] = r.factor * (f[0] - f[1]);
        }
        apply_gate(circuit, gate, angle, prefix.mutable_amplitudes());
    }
    return GradientReport::from_values(std::move(grad));
}

/// Central differences [f(theta + h e) - f(theta - h e)] / 2h.
inline GradientReport finite_diff_grad(const HEACircuit &circuit, std::span<const double> theta,
                                       const StateVector &state, const Observable &obs, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite_diff_grad: step must be positive");
    }
    check_circuit_inputs(circuit, theta, state);
    std::vector<double> grad(theta.size());
    std::vector<double> shifted(theta.begin(), theta.end());
    for (std::size_t nu = 0; nu < theta.size(); ++nu) {
        shifted[nu] = theta[nu] + h;
        const double up = loss_value(circuit, shifted, state, obs);
        shifted[nu] = theta[nu] - h;
        const double down = loss_value(circuit, shifted, state, obs);
        shifted[nu] = theta[nu];
        grad[nu] = (up - down) / (2.0 * h);
    }
    return GradientReport::from_values(std::move(grad));
}

/// Parameter index of the first rotation inside the last brick that touches
/// `support`; the natural parameter for the G_n bound.
inline int last_brick_param(const HEACircuit &circuit, const QubitSet &support) {
    const auto &gates = circuit.gates();
    for (std::size_t g = gates.size(); g-- > 0;) {
        if (gates[g].kind == GateKind::rotation) continue;
        const QubitSet brick = gates[g].targets();
        if (!brick.disjoint(support)) {
            return *gates[g + 1].param_index;
        }
    }
    throw std::invalid_argument("last_brick_param: no brick touches the support");
}

// ---------------------------------------------------------------------------
// Monte-Carlo variance estimators

enum class InputFamily { zero, product_random, haar, gde_evolved };
enum class ThetaDistribution { uniform, two_design };
enum class EstimatorKind { loss_value, gradient_component, loss_difference };

/// Declarative description of a Monte-Carlo estimator.
struct SamplerSpec {
    int num_qubits = 4;
    int depth = 1;
    Boundary boundary = Boundary::open;
    AngleConvention convention = AngleConvention::half;
    std::string observable = "1.0*Z0";
    InputFamily input = InputFamily::product_random;
    double gde_time = 1.0; ///< evolution time for gde_evolved inputs
    ThetaDistribution theta = ThetaDistribution::uniform;
    EstimatorKind estimator = EstimatorKind::loss_value;
    int param = 0;      ///< nu for gradient_component and loss_difference
    double shift = kPi; ///< l for loss_difference
};

NLOHMANN_JSON_SERIALIZE_ENUM(InputFamily, {{InputFamily::zero, "zero"},
                                           {InputFamily::product_random, "product"},
                                           {InputFamily::haar, "haar"},
                                           {InputFamily::gde_evolved, "gde"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ThetaDistribution, {{ThetaDistribution::uniform, "uniform"},
                                                 {ThetaDistribution::two_design, "two_design"}})
NLOHMANN_JSON_SERIALIZE_ENUM(EstimatorKind, {{EstimatorKind::loss_value, "loss_value"},
                                             {EstimatorKind::gradient_component, "gradient_component"},
                                             {EstimatorKind::loss_difference, "loss_difference"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Boundary, {{Boundary::open, "open"}, {Boundary::periodic, "periodic"}})
NLOHMANN_JSON_SERIALIZE_ENUM(AngleConvention, {{AngleConvention::half, "half"}, {AngleConvention::full, "full"}})

inline void to_json(nlohmann::json &j, const SamplerSpec &s) {
    j = {{"num_qubits", s.num_qubits}, {"depth", s.depth},
         {"boundary", s.boundary},     {"convention", s.convention},
         {"observable", s.observable}, {"input", s.input},
         {"gde_time", s.gde_time},     {"theta", s.theta},
         {"estimator", s.estimator},   {"param", s.param},
         {"shift", s.shift}};
}

namespace detail {

/// Enum field that must round-trip through its string name.
template <class E> E strict_enum(const nlohmann::json &j, const char *key, E fallback) {
    if (!j.contains(key)) return fallback;
    const auto &v = j.at(key);
    const E e = v.get<E>();
    if (!v.is_string() || nlohmann::json(e) != v) {
        throw std::invalid_argument(std::string("SamplerSpec: unknown ") + key + " '" + v.dump() + "'");
    }
    return e;
}

} // namespace detail

inline void from_json(const nlohmann::json &j, SamplerSpec &s) {
    SamplerSpec d;
    s.num_qubits = j.value("num_qubits", d.num_qubits);
    s.depth = j.value("depth", d.depth);
    s.boundary = detail::strict_enum(j, "boundary", d.boundary);
    s.convention = detail::strict_enum(j, "convention", d.convention);
    s.observable = j.value("observable", d.observable);
    s.input = detail::strict_enum(j, "input", d.input);
    s.gde_time = j.value("gde_time", d.gde_time);
    s.theta = detail::strict_enum(j, "theta", d.theta);
    s.estimator = detail::strict_enum(j, "estimator", d.estimator);
    s.param = j.value("param", d.param);
    s.shift = j.value("shift", d.shift);
}

struct VarianceReport {
    EstimatorKind estimator = EstimatorKind::loss_value;
    std::size_t samples = 0;
    double mean = 0.0;
    double abs_mean = 0.0;
    double variance = 0.0;
    double std_error_of_mean = 0.0;
};

/// Input state of Monte-Carlo sample `index`.
inline StateVector sample_input(InputFamily family, int n, double gde_time, std::uint64_t seed) {
    switch (family) {
    case InputFamily::zero: return zero_state(n);
    case InputFamily::product_random: return random_product_state(n, derive_seed(seed, {1}));
    case InputFamily::haar: return haar_state(n, derive_seed(seed, {2}));
    case InputFamily::gde_evolved:
        return evolve(sample_gde(n, derive_seed(seed, {3})), random_product_state(n, derive_seed(seed, {1})),
                      gde_time);
    }
    throw std::invalid_argument("sample_input: unknown family");
}

/// Value of the estimator on one Monte-Carlo draw.
inline double estimator_sample(const SamplerSpec &spec, const HEACircuit &base, const Observable &obs,
                               std::uint64_t sample_seed) {
    const StateVector psi = sample_input(spec.input, spec.num_qubits, spec.gde_time, sample_seed);
    const HEACircuit circuit =
        spec.theta == ThetaDistribution::two_design ? base.with_haar_bricks(derive_seed(sample_seed, {4})) : base;
    std::vector<double> theta = random_parameters(circuit, derive_seed(sample_seed, {5}));
    switch (spec.estimator) {
    case EstimatorKind::loss_value: return loss_value(circuit, theta, psi, obs);
    case EstimatorKind::gradient_component:
        return parameter_shift_grad(circuit, theta, psi, obs, spec.param).values[static_cast<std::size_t>(spec.param)];
    case EstimatorKind::loss_difference: {
        const double before = loss_value(circuit, theta, psi, obs);
        theta[static_cast<std::size_t>(spec.param)] += spec.shift;
        return loss_value(circuit, theta, psi, obs) - before;
    }
    }
    throw std::invalid_argument("variance_report: unknown estimator");
}

/// Monte-Carlo mean and variance of the estimator described by `spec`.
/// Sample i uses derive_seed(seed, {i}); the reduction is in index order.
inline VarianceReport variance_report(const SamplerSpec &spec, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) {
        throw std::invalid_argument("variance_report: need at least two samples");
    }
    const HEACircuit base = build_hea(spec.num_qubits, spec.depth, spec.boundary, spec.convention);
    const Observable obs = parse_observable(spec.observable, spec.num_qubits);
    if (spec.estimator != EstimatorKind::loss_value && (spec.param < 0 || spec.param >= base.num_params())) {
        throw std::out_of_range("variance_report: parameter index out of range");
    }
    const auto values = parallel_map<double>(
        samples, [&](std::size_t i) { return estimator_sample(spec, base, obs, derive_seed(seed, {i})); });
    const RunningStats stats = RunningStats::of(values);
    VarianceReport r;
    r.estimator = spec.estimator;
    r.samples = stats.count();
    r.mean = stats.mean();
    r.abs_mean = std::abs(stats.mean());
    r.variance = stats.variance();
    r.std_error_of_mean = stats.std_error();
    return r;
}

// ---------------------------------------------------------------------------
// G_n lower bound

enum class GnVariant {
    two_fifths, ///< (2/5)^{2D}
    one_fifth,  ///< (1/5)^{2D}
};

/// variant^{2D} (2/225) eta(O) sum_{k<k'} eta(psi_{k..k'}), with k, k' over
/// [floor(n/2) - D, floor(n/2) + D] clipped to the register. O must act on
/// two adjacent qubits, one of them floor(n/2).
inline double gn_lower_bound(int num_qubits, int depth, const StateVector &state, const Observable &obs,
                             GnVariant variant) {
    if (depth < 1) throw std::invalid_argument("gn_lower_bound: depth must be >= 1");
    if (state.num_qubits() != num_qubits || obs.num_qubits() != num_qubits) {
        throw std::invalid_argument("gn_lower_bound: register sizes differ");
    }
    const int center = num_qubits / 2;
    const QubitSet support = obs.support();
    const bool adjacent_pair = support.size() == 2 && support[1] == support[0] + 1;
    if (!adjacent_pair || !support.contains(center)) {
        throw std::invalid_argument("gn_lower_bound: observable must act on two adjacent qubits including qubit " +
                                    std::to_string(center) + ", got support " + support.str());
    }
    const double eta_o = eta(restrict_to(obs, support));
    const int lo = std::max(0, center - depth);
    const int hi = std::min(num_qubits - 1, center + depth);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
        for (int kp = k + 1; kp <= hi; ++kp) {
            sum += eta(reduced_density(state, QubitSet::range(k, kp)).matrix());
        }
    }
    const double base = variant == GnVariant::two_fifths ? 2.0 / 5.0 : 1.0 / 5.0;
    return std::pow(base, 2.0 * depth) * (2.0 / 225.0) * eta_o * sum;
}

} // namespace hea_lab
