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
 * Entanglement and scrambling measures of subsystems, and the support-based
 * concentration bound sum_i |c_i| I_{Lambda_i}(psi).
 *
 * Entropies are in bits. I_Lambda(psi) is the trace norm of
 * psi_Lambda - 1/2^{|Lambda|}.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/hea.hpp"
#include "hea_lab/parallel.hpp"
#include "hea_lab/pauli.hpp"
#include "hea_lab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace hea_lab {

inline constexpr double kEigenClampTol = 1e-10;

/// Eigenvalues of a reduced state, clamped to [0, 1]. Values below
/// -kEigenClampTol indicate a broken density matrix and throw.
inline std::vector<double> clamped_spectrum(const DensityMatrix &rho) {
    const RVector ev = rho.eigenvalues();
    std::vector<double> out(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -kEigenClampTol) {
            throw std::logic_error("clamped_spectrum: negative eigenvalue " + std::to_string(ev(i)));
        }
        out[static_cast<std::size_t>(i)] = std::clamp(ev(i), 0.0, 1.0);
    }
    return out;
}

inline double entropy_bits(const std::vector<double> &spectrum) {
    double s = 0.0;
    for (double l : spectrum) {
        if (l > 0.0) s -= l * std::log2(l);
    }
    return std::max(0.0, s);
}

inline double entanglement_entropy(const StateVector &state, const QubitSet &subsystem) {
    return entropy_bits(clamped_spectrum(reduced_density(state, subsystem)));
}

/// Trace norm of rho - I/d.
inline double scrambling_measure(const DensityMatrix &rho) {
    const RVector ev = rho.eigenvalues();
    const double inv_d = 1.0 / static_cast<double>(rho.dim());
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::abs(ev(i) - inv_d);
    return s;
}

inline double scrambling_measure(const StateVector &state, const QubitSet &subsystem) {
    return scrambling_measure(reduced_density(state, subsystem));
}

inline double purity(const StateVector &state, const QubitSet &subsystem) {
    return reduced_density(state, subsystem).purity();
}

struct ScramblingReport {
    QubitSet subsystem;
    double entropy_bits = 0.0;
    double entropy_deficit = 0.0; ///< |Lambda| - S
    double purity = 0.0;
    double i_measure = 0.0;
};

inline ScramblingReport scrambling_report(const StateVector &state, const QubitSet &subsystem) {
    const DensityMatrix rho = reduced_density(state, subsystem);
    const auto spectrum = clamped_spectrum(rho);
    ScramblingReport r;
    r.subsystem = subsystem;
    r.entropy_bits = std::min(static_cast<double>(subsystem.size()), entropy_bits(spectrum));
    r.entropy_deficit = static_cast<double>(subsystem.size()) - r.entropy_bits;
    r.purity = rho.purity();
    const double inv_d = 1.0 / static_cast<double>(rho.dim());
    for (double l : spectrum) r.i_measure += std::abs(l - inv_d);
    return r;
}

/// sum_i |c_i| I_{lightcone(P_i)}(psi) over the non-identity terms. Bounds
/// |f(theta) - f_trv| for every theta.
inline double concentration_bound(const HEACircuit &circuit, const StateVector &state,
                                  const Observable &obs) {
    if (obs.num_qubits() != circuit.num_qubits() || state.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("concentration_bound: register sizes differ");
    }
    std::map<std::uint64_t, double> cache;
    double bound = 0.0;
    for (const auto &t : obs.terms()) {
        if (t.string.is_identity()) continue;
        const QubitSet cone = lightcone(circuit, t.string);
        auto [it, inserted] = cache.try_emplace(cone.mask(), 0.0);
        if (inserted) {
            if (cone.size() == static_cast<std::size_t>(state.num_qubits())) {
                // No trace-out: the full pure state has I = 2 (1 - 2^-n).
                it->second = 2.0 * (1.0 - 1.0 / static_cast<double>(state.dim()));
            } else {
                it->second = scrambling_measure(state, cone);
            }
        }
        bound += std::abs(t.coefficient) * it->second;
    }
    return bound;
}

// ---------------------------------------------------------------------------
// Volume/area-law probe

using StateFamily = std::function<StateVector(int num_qubits, std::uint64_t seed)>;

struct LawProbeRow {
    int num_qubits = 0;
    int lambda_size = 0;
    double mean_entropy = 0.0;
    double mean_deficit = 0.0;
    double mean_i = 0.0;
    double std_error_i = 0.0;
    std::size_t samples = 0;
};

struct LawProbeReport {
    std::vector<LawProbeRow> rows;
    /// lambda_size -> slope of log2(mean I) against n.
    std::map<int, double> log2_i_slope;
};

/// Mean entropy deficit and I_Lambda over a state family, with Lambda the
/// contiguous block starting at qubit 0.
inline LawProbeReport law_probe(const StateFamily &family, const std::vector<int> &num_qubits,
                                const std::vector<int> &lambda_sizes, std::size_t samples,
                                std::uint64_t seed) {
    if (!family) throw std::invalid_argument("law_probe: empty state family");
    if (samples == 0) throw std::invalid_argument("law_probe: samples must be positive");
    LawProbeReport report;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> series;
    for (int n : num_qubits) {
        for (int k : lambda_sizes) {
            if (k < 1 || k > n) throw std::invalid_argument("law_probe: |Lambda| outside [1, n]");
        }
        const auto per_sample = parallel_map<std::vector<ScramblingReport>>(samples, [&](std::size_t s) {
            const StateVector psi = family(n, derive_seed(seed, {static_cast<std::uint64_t>(n), s}));
            std::vector<ScramblingReport> out;
            for (int k : lambda_sizes) out.push_back(scrambling_report(psi, QubitSet::range(0, k - 1)));
            return out;
        });
        for (std::size_t j = 0; j < lambda_sizes.size(); ++j) {
            RunningStats ent, def, ii;
            for (const auto &reports : per_sample) {
                ent.add(reports[j].entropy_bits);
                def.add(reports[j].entropy_deficit);
                ii.add(reports[j].i_measure);
            }
            LawProbeRow row{n, lambda_sizes[j], ent.mean(), def.mean(), ii.mean(), ii.std_error(), samples};
            report.rows.push_back(row);
            if (ii.mean() > 0.0) {
                series[lambda_sizes[j]].first.push_back(n);
                series[lambda_sizes[j]].second.push_back(std::log2(ii.mean()));
            }
        }
    }
    for (const auto &[k, xy] : series) report.log2_i_slope[k] = fit_slope(xy.first, xy.second);
    return report;
}

} // namespace hea_lab
