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

#include "hea_lab/gradients.hpp"
#include "hea_lab/hea.hpp"
#include "hea_lab/pauli.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace hea_lab;

TEST(BuildHea, ParameterCounts) {
    EXPECT_EQ(build_hea(4, 1).num_params(), 24);
    EXPECT_EQ(build_hea(4, 2).num_params(), 30);
    const auto c = build_hea(2, 0);
    EXPECT_EQ(c.num_params(), 6);
    EXPECT_EQ(c.gates().size(), 6u);
    for (const auto &g : c.gates()) EXPECT_EQ(g.kind, GateKind::rotation);
}

TEST(BuildHea, CountFormulaAndContiguousParams) {
    for (int n = 1; n <= 9; ++n) {
        for (int d = 0; d <= 4; ++d) {
            for (Boundary b : {Boundary::open, Boundary::periodic}) {
                const auto c = build_hea(n, d, b);
                int pairs = 0;
                for (int l = 1; l <= d; ++l) pairs += static_cast<int>(layer_pairs(n, l, b).size());
                EXPECT_EQ(c.num_params(), 3 * n + 6 * pairs);
                int next = 0;
                for (const auto &g : c.gates()) {
                    if (g.kind == GateKind::rotation) {
                        ASSERT_TRUE(g.param_index.has_value());
                        EXPECT_EQ(*g.param_index, next++);
                    } else {
                        EXPECT_FALSE(g.param_index.has_value());
                        EXPECT_EQ(g.qubits.size(), 2u);
                    }
                }
            }
        }
    }
}

TEST(BuildHea, LayerPairs) {
    using P = std::vector<std::pair<int, int>>;
    EXPECT_EQ(layer_pairs(6, 1, Boundary::open), (P{{0, 1}, {2, 3}, {4, 5}}));
    EXPECT_EQ(layer_pairs(6, 2, Boundary::open), (P{{1, 2}, {3, 4}}));
    EXPECT_EQ(layer_pairs(6, 2, Boundary::periodic), (P{{1, 2}, {3, 4}, {5, 0}}));
    EXPECT_EQ(layer_pairs(5, 2, Boundary::periodic), (P{{1, 2}, {3, 4}}));
    EXPECT_EQ(layer_pairs(5, 1, Boundary::periodic), (P{{0, 1}, {2, 3}}));
}

TEST(BuildHea, Errors) {
    EXPECT_THROW(build_hea(0, 1), std::invalid_argument);
    EXPECT_THROW(build_hea(3, -1), std::invalid_argument);
    EXPECT_TRUE(build_hea(1, 2).degenerate());
    EXPECT_FALSE(build_hea(2, 2).degenerate());
}

TEST(ApplyHea, ZeroAnglesKeepZeroState) {
    for (int d = 0; d <= 3; ++d) {
        const auto c = build_hea(5, d);
        std::vector<double> theta(static_cast<std::size_t>(c.num_params()), 0.0);
        const auto s = apply_hea(c, theta, zero_state(5));
        EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-15);
    }
}

TEST(ApplyHea, SingleXRotationByPi) {
    const auto c = build_hea(2, 0);
    std::vector<double> theta{kPi, 0, 0, 0, 0, 0};
    const auto s = apply_hea(c, theta, zero_state(2));
    EXPECT_NEAR(s[1].real(), 0.0, 1e-15);
    EXPECT_NEAR(s[1].imag(), -1.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
}

TEST(ApplyHea, MatchesDenseOracleBothConventionsAndBoundaries) {
    for (int n : {2, 3, 4, 5}) {
        for (int d : {0, 1, 2, 3}) {
            for (bool periodic : {false, true}) {
                for (bool half : {true, false}) {
                    const auto c = build_hea(n, d, periodic ? Boundary::periodic : Boundary::open,
                                             half ? AngleConvention::half : AngleConvention::full);
                    const auto theta = random_parameters(c, derive_seed(1, {static_cast<std::uint64_t>(n * 100 + d)}));
                    const CMatrix ref = oracle::hea_unitary(n, d, periodic, half, theta);
                    EXPECT_LT((circuit_unitary(c, theta) - ref).cwiseAbs().maxCoeff(), 1e-12)
                        << "n=" << n << " d=" << d;
                }
            }
        }
    }
}

TEST(ApplyHea, PreservesNormAndChecksShapes) {
    const auto c = build_hea(6, 3);
    const auto theta = random_parameters(c, 3);
    const auto s = apply_hea(c, theta, haar_state(6, 4));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    std::vector<double> short_theta(theta.begin(), theta.end() - 1);
    EXPECT_THROW(apply_hea(c, short_theta, zero_state(6)), std::invalid_argument);
    EXPECT_THROW(apply_hea(c, theta, zero_state(5)), std::invalid_argument);
}

TEST(ApplyHea, SingleParameterCosineFit) {
    const auto c = build_hea(4, 2);
    const auto psi = random_product_state(4, 6);
    const auto obs = parse_observable("1*Z1*Z2 + 0.5*X0", 4);
    const auto base = random_parameters(c, 7);
    for (int nu : {0, 5, 13, 29}) {
        auto f = [&](double x) {
            auto th = base;
            th[static_cast<std::size_t>(nu)] = x;
            return loss_value(c, th, psi, obs);
        };
        // f = A + B cos x + C sin x from samples at 0, pi/2, pi.
        const double f0 = f(0.0), f1 = f(kPi / 2), f2 = f(kPi);
        const double a = 0.5 * (f0 + f2), b = 0.5 * (f0 - f2), cc = f1 - a;
        const double x = 1.2345;
        EXPECT_NEAR(f(x), a + b * std::cos(x) + cc * std::sin(x), 1e-8);
    }
}

TEST(Lightcone, Examples) {
    const auto c1 = build_hea(8, 1);
    const auto z3 = PauliString::single(8, 'Z', 3);
    EXPECT_EQ(lightcone(c1, z3), (QubitSet{2, 3}));
    EXPECT_LE(lightcone(c1, z3).size(), 2u);
    const auto c0 = build_hea(8, 0);
    const auto p = PauliString::from_letters("IXIIZIII");
    EXPECT_EQ(lightcone(c0, p), p.support());
    const auto c3 = build_hea(8, 3);
    EXPECT_LE(lightcone(c3, PauliString::single(8, 'Z', 4)).size(), 6u);
    EXPECT_THROW(lightcone(c1, PauliString::identity(8)), std::invalid_argument);
    EXPECT_THROW(lightcone(c1, PauliString::single(4, 'Z', 0)), std::invalid_argument);
}

// Numerical support of U^dagger P U: qubit q is in the support iff the
// operator differs from its partial twirl over the Paulis on q.
std::set<int> numerical_support(const CMatrix &m, int n) {
    std::set<int> out;
    for (int q = 0; q < n; ++q) {
        CMatrix twirl = CMatrix::Zero(m.rows(), m.cols());
        for (char a : {'I', 'X', 'Y', 'Z'}) {
            const CMatrix pq = oracle::embed(oracle::pauli2(a), {q}, n);
            twirl += pq * m * pq;
        }
        twirl /= 4.0;
        if ((twirl - m).cwiseAbs().maxCoeff() > 1e-9) out.insert(q);
    }
    return out;
}

TEST(Lightcone, ContainsNumericalSupport) {
    Rng rng = make_rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const int d = static_cast<int>(rng() % 3) + 1;
        const auto c = build_hea(n, d, (trial % 2) ? Boundary::periodic : Boundary::open);
        std::string w(static_cast<std::size_t>(n), 'I');
        const int q = static_cast<int>(rng() % static_cast<unsigned>(n));
        w[static_cast<std::size_t>(q)] = "XYZ"[rng() % 3];
        const auto p = PauliString::from_letters(w);
        const auto theta = random_parameters(c, rng());
        const CMatrix u = circuit_unitary(c, theta);
        const auto supp = numerical_support(u.adjoint() * oracle::pauli_matrix(w) * u, n);
        const QubitSet cone = lightcone(c, p);
        for (int s : supp) EXPECT_TRUE(cone.contains(s)) << "trial " << trial;
        EXPECT_LE(cone.size(), static_cast<std::size_t>(std::max(1, 2 * d) * p.weight()));
    }
}

TEST(Lightcone, SeparatedClustersHaveDisjointCones) {
    for (int d = 1; d <= 3; ++d) {
        const int n = 12;
        const auto c = build_hea(n, d);
        for (int a = 0; a < n; ++a) {
            for (int b = a + 2 * d + 1; b < n; ++b) {
                const auto ca = lightcone(c, PauliString::single(n, 'Z', a));
                const auto cb = lightcone(c, PauliString::single(n, 'Z', b));
                EXPECT_TRUE(ca.disjoint(cb)) << a << "," << b << " d=" << d;
            }
        }
    }
}

TEST(Lightcone, GrowthPerCluster) {
    for (int d = 0; d <= 3; ++d) {
        const auto c = build_hea(12, d);
        for (std::uint64_t mask = 1; mask < (1u << 12); mask += 37) {
            const QubitSet s = QubitSet::from_mask(mask);
            const auto cone = lightcone(c, PauliString(12, 0, mask));
            std::size_t budget = 0;
            for (const auto &cl : clusterize(s, 2 * d).clusters) budget += static_cast<std::size_t>(cl.back() - cl.front() + 1 + 2 * d);
            EXPECT_LE(cone.size(), budget);
        }
    }
}

TEST(CircuitJson, DumpsLayout) {
    const auto j = circuit_to_json(build_hea(3, 1));
    EXPECT_EQ(j.at("num_params").get<int>(), 9 + 6);
    EXPECT_EQ(j.at("gates").size(), build_hea(3, 1).gates().size());
    EXPECT_EQ(j.at("gates")[9].at("kind").get<std::string>(), "cnot");
}

TEST(TwoDesign, HaarBricksReplaceCnotsOnly) {
    const auto c = build_hea(4, 2);
    const auto h = c.with_haar_bricks(3);
    EXPECT_TRUE(h.two_design_mode());
    EXPECT_FALSE(c.two_design_mode());
    ASSERT_EQ(h.gates().size(), c.gates().size());
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
        const bool fixed = c.gates()[i].kind == GateKind::fixed_cnot;
        EXPECT_EQ(h.gates()[i].kind, fixed ? GateKind::fixed_unitary : GateKind::rotation);
        if (fixed) EXPECT_TRUE(is_unitary(h.gates()[i].matrix, 1e-10));
    }
    const auto theta = random_parameters(h, 1);
    EXPECT_TRUE(is_unitary(circuit_unitary(h, theta), 1e-10));
}

} // namespace
