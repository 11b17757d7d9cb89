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
 * One-dimensional alternating-layered hardware efficient ansatz.
 *
 * Layout, in application order:
 *   - an initial layer with a general single-qubit gate W on every qubit;
 *   - D brick layers. Layer t (1-based) pairs (0,1),(2,3),... when t is odd
 *     and (1,2),(3,4),... when t is even; under periodic boundaries with even
 *     n the even layers also pair (n-1, 0).
 * Each brick is CNOT(control = first, target = second) followed by W on both
 * qubits. W(a) = Rz(a_z) Ry(a_y) Rx(a_x), so Rx acts first; each rotation
 * carries its own parameter.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/haar.hpp"
#include "hea_lab/pauli.hpp"
#include "hea_lab/qstate.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hea_lab {

enum class Boundary { open, periodic };

/// half: R(t) = exp(-i t P / 2); full: R(t) = exp(-i t P).
enum class AngleConvention { half, full };

enum class Axis { x, y, z };

enum class GateKind {
    fixed_cnot,
    fixed_unitary, ///< Haar brick used in 2-design mode, replaces the CNOT
    rotation,
};

struct GateSpec {
    GateKind kind = GateKind::rotation;
    Axis axis = Axis::x;
    /// Acted-on qubits; for two-qubit gates the first is the CNOT control and
    /// local bit 0 of `matrix`.
    std::vector<int> qubits;
    std::optional<int> param_index;
    CMatrix matrix; ///< only for fixed_unitary

    [[nodiscard]] QubitSet targets() const { return QubitSet::normalized(qubits); }
};

inline std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
inline std::string to_string(AngleConvention c) { return c == AngleConvention::half ? "half" : "full"; }
inline char axis_letter(Axis a) { return a == Axis::x ? 'X' : (a == Axis::y ? 'Y' : 'Z'); }

/// Qubit pairs of brick layer `layer` (1-based).
inline std::vector<std::pair<int, int>> layer_pairs(int num_qubits, int layer, Boundary boundary) {
    std::vector<std::pair<int, int>> pairs;
    const int start = (layer % 2 == 1) ? 0 : 1;
    for (int a = start; a + 1 < num_qubits; a += 2) pairs.emplace_back(a, a + 1);
    if (layer % 2 == 0 && boundary == Boundary::periodic && num_qubits % 2 == 0) {
        pairs.emplace_back(num_qubits - 1, 0);
    }
    return pairs;
}

class HEACircuit {
  public:
    HEACircuit(int num_qubits, int depth, Boundary boundary, AngleConvention convention)
        : num_qubits_(num_qubits), depth_(depth), boundary_(boundary), convention_(convention) {
        if (num_qubits <= 0) {
            throw std::invalid_argument("build_hea: qubit count must be positive");
        }
        if (depth < 0) {
            throw std::invalid_argument("build_hea: depth must be non-negative");
        }
        int param = 0;
        auto add_w = [&](int q) {
            for (Axis a : {Axis::x, Axis::y, Axis::z}) {
                gates_.push_back({GateKind::rotation, a, {q}, param++, {}});
            }
        };
        for (int q = 0; q < num_qubits; ++q) add_w(q);
        for (int layer = 1; layer <= depth; ++layer) {
            for (auto [a, b] : layer_pairs(num_qubits, layer, boundary)) {
                gates_.push_back({GateKind::fixed_cnot, Axis::x, {a, b}, std::nullopt, {}});
                add_w(a);
                add_w(b);
            }
        }
        num_params_ = param;
        for (std::size_t g = 0; g < gates_.size(); ++g) {
            if (gates_[g].param_index) param_gate_.push_back(g);
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] Boundary boundary() const { return boundary_; }
    [[nodiscard]] AngleConvention convention() const { return convention_; }
    [[nodiscard]] int num_params() const { return num_params_; }
    [[nodiscard]] const std::vector<GateSpec> &gates() const { return gates_; }
    /// Position in gates() of the rotation carrying parameter `nu`.
    [[nodiscard]] std::size_t gate_of_param(int nu) const { return param_gate_.at(static_cast<std::size_t>(nu)); }
    /// A single qubit has no bricks; only the initial rotation layer remains.
    [[nodiscard]] bool degenerate() const { return num_qubits_ == 1 && depth_ > 0; }

    [[nodiscard]] bool two_design_mode() const {
        for (const auto &g : gates_) {
            if (g.kind == GateKind::fixed_unitary) return true;
        }
        return false;
    }

    /// Copy whose CNOTs are replaced by independent Haar 4x4 unitaries.
    [[nodiscard]] HEACircuit with_haar_bricks(std::uint64_t seed) const {
        HEACircuit out = *this;
        Rng rng = make_rng(seed);
        for (auto &g : out.gates_) {
            if (g.kind == GateKind::fixed_cnot || g.kind == GateKind::fixed_unitary) {
                g.kind = GateKind::fixed_unitary;
                g.matrix = haar_unitary(4, rng);
            }
        }
        return out;
    }

  private:
    int num_qubits_;
    int depth_;
    Boundary boundary_;
    AngleConvention convention_;
    int num_params_ = 0;
    std::vector<GateSpec> gates_;
    std::vector<std::size_t> param_gate_;
};

inline HEACircuit build_hea(int num_qubits, int depth, Boundary boundary = Boundary::open,
                            AngleConvention convention = AngleConvention::half) {
    return {num_qubits, depth, boundary, convention};
}

/// Applies gate `g` of the circuit with rotation angle `angle` (ignored for
/// fixed gates), in place.
inline void apply_gate(const HEACircuit &circuit, const GateSpec &g, double angle,
                       std::span<Complex> amps) {
    switch (g.kind) {
    case GateKind::fixed_cnot: kernel::apply_cnot(amps, g.qubits[0], g.qubits[1]); return;
    case GateKind::fixed_unitary:
        kernel::apply_matrix(amps, circuit.num_qubits(), g.matrix, g.qubits);
        return;
    case GateKind::rotation: {
        const double half = circuit.convention() == AngleConvention::half ? 0.5 * angle : angle;
        const double c = std::cos(half);
        const double s = std::sin(half);
        const int q = g.qubits[0];
        switch (g.axis) {
        case Axis::x: kernel::apply_1q(amps, q, {c, 0}, {0, -s}, {0, -s}, {c, 0}); return;
        case Axis::y: kernel::apply_1q(amps, q, {c, 0}, {-s, 0}, {s, 0}, {c, 0}); return;
        case Axis::z: kernel::apply_1q(amps, q, {c, -s}, {0, 0}, {0, 0}, {c, s}); return;
        }
    }
    }
}

/// Applies gates [first, last) in place.
inline void apply_gate_range(const HEACircuit &circuit, std::span<const double> theta,
                             std::size_t first, std::size_t last, StateVector &state) {
    const auto &gates = circuit.gates();
    auto amps = state.mutable_amplitudes();
    for (std::size_t i = first; i < last; ++i) {
        const auto &g = gates[i];
        apply_gate(circuit, g, g.param_index ? theta[static_cast<std::size_t>(*g.param_index)] : 0.0, amps);
    }
}

inline void check_circuit_inputs(const HEACircuit &circuit, std::span<const double> theta,
                                 const StateVector &state) {
    if (static_cast<int>(theta.size()) != circuit.num_params()) {
        throw std::invalid_argument("apply_hea: expected " + std::to_string(circuit.num_params()) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
    if (state.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("apply_hea: state has " + std::to_string(state.num_qubits()) +
                                    " qubits, circuit has " + std::to_string(circuit.num_qubits()));
    }
}

/// U(theta)|psi>.
inline StateVector apply_hea(const HEACircuit &circuit, std::span<const double> theta,
                             StateVector state) {
    check_circuit_inputs(circuit, theta, state);
    apply_gate_range(circuit, theta, 0, circuit.gates().size(), state);
    return state;
}

/// Qubits causally connected to supp(P) through the brick layout, i.e. a
/// parameter-independent superset of supp(U^dagger P U).
inline QubitSet lightcone(const HEACircuit &circuit, const PauliString &p) {
    if (p.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("lightcone: string and circuit sizes differ");
    }
    if (p.is_identity()) {
        throw std::invalid_argument("lightcone: identity string has no light-cone");
    }
    std::uint64_t cone = p.support_mask();
    for (int layer = circuit.depth(); layer >= 1; --layer) {
        std::uint64_t grown = cone;
        for (auto [a, b] : layer_pairs(circuit.num_qubits(), layer, circuit.boundary())) {
            const std::uint64_t pair = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
            if (cone & pair) grown |= pair;
        }
        cone = grown;
    }
    return QubitSet::from_mask(cone);
}

/// Full unitary matrix of U(theta); test-sized registers only.
inline CMatrix circuit_unitary(const HEACircuit &circuit, std::span<const double> theta) {
    if (circuit.num_qubits() > 10) {
        throw std::invalid_argument("circuit_unitary: register too large");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << circuit.num_qubits());
    CMatrix u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        std::vector<Complex> amps(static_cast<std::size_t>(dim), Complex{0, 0});
        amps[static_cast<std::size_t>(col)] = 1.0;
        StateVector s(circuit.num_qubits(), std::move(amps));
        s = apply_hea(circuit, theta, std::move(s));
        for (Eigen::Index row = 0; row < dim; ++row) u(row, col) = s[static_cast<std::size_t>(row)];
    }
    return u;
}

inline nlohmann::json circuit_to_json(const HEACircuit &circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : circuit.gates()) {
        nlohmann::json j;
        switch (g.kind) {
        case GateKind::fixed_cnot: j["kind"] = "cnot"; break;
        case GateKind::fixed_unitary: j["kind"] = "unitary"; break;
        case GateKind::rotation: j["kind"] = std::string("r") + static_cast<char>(std::tolower(axis_letter(g.axis))); break;
        }
        j["qubits"] = g.qubits;
        j["param"] = g.param_index ? nlohmann::json(*g.param_index) : nlohmann::json(nullptr);
        gates.push_back(std::move(j));
    }
    return {{"num_qubits", circuit.num_qubits()},
            {"depth", circuit.depth()},
            {"boundary", to_string(circuit.boundary())},
            {"angle_convention", to_string(circuit.convention())},
            {"num_params", circuit.num_params()},
            {"gates", std::move(gates)}};
}

/// Uniform angles on [0, 2 pi).
inline std::vector<double> random_parameters(const HEACircuit &circuit, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<double> theta(static_cast<std::size_t>(circuit.num_params()));
    for (auto &t : theta) t = uniform_angle(rng);
    return theta;
}

} // namespace hea_lab
