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

// Acceptance checks. One PASS/FAIL line per criterion, exit status 1 if any
// fails. Run a subset with `acceptance 3 7 12`.

#include "hea_lab/gradients.hpp"
#include "hea_lab/haar.hpp"
#include "hea_lab/io.hpp"
#include "hea_lab/randmat.hpp"
#include "hea_lab/scrambling.hpp"
#include "hea_lab/tasks.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

namespace {

using namespace hea_lab;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Detail {
  public:
    template <class T> Detail &operator()(const std::string &key, const T &v) {
        os_ << (first_ ? "" : " ") << key << "=" << v;
        first_ = false;
        return *this;
    }
    [[nodiscard]] std::string str() const { return os_.str(); }

  private:
    std::ostringstream os_;
    bool first_ = true;
};

bool within(double mean, double se, double target, double floor) {
    return std::abs(mean - target) <= std::max(3.0 * se, floor);
}

// ---------------------------------------------------------------------------

Outcome gradient_oracle() {
    Rng rng = make_rng(0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const int d = static_cast<int>(rng() % 4);
        const auto c = build_hea(n, d, (i % 2) ? Boundary::periodic : Boundary::open);
        const auto theta = random_parameters(c, rng());
        const auto psi = (i % 3 == 0) ? haar_state(n, rng()) : random_product_state(n, rng());
        std::string w(static_cast<std::size_t>(n), 'I');
        for (auto &ch : w) ch = "IXYZ"[rng() % 4];
        w[rng() % static_cast<unsigned>(n)] = "XYZ"[rng() % 3];
        Observable obs(n);
        obs.add(0.7, PauliString::from_letters(w));
        obs.add(-0.3, PauliString::single(n, 'Z', 0));
        const auto ps = parameter_shift_grad(c, theta, psi, obs).values;
        const auto fd = finite_diff_grad(c, theta, psi, obs, 1e-5).values;
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const double tol = std::max(1e-6 * std::abs(ps[k]), 1e-9);
            const double err = std::abs(ps[k] - fd[k]);
            worst = std::max(worst, err / tol);
            ok = ok && err <= tol;
        }
    }
    return {ok, Detail()("instances", 50)("worst_err_over_tol", worst).str()};
}

Outcome weingarten_moments() {
    const std::size_t draws = 100000;
    const auto vals = parallel_map<std::pair<double, double>>(draws, [](std::size_t i) {
        const CMatrix u = haar_unitary(4, derive_seed(0, {i}));
        const double a = std::norm(u(0, 0));
        return std::pair{a, a * a};
    });
    RunningStats m2, m4;
    for (const auto &[a, b] : vals) {
        m2.add(a);
        m4.add(b);
    }
    const bool ok = within(m2.mean(), m2.std_error(), 0.25, 0.0) && within(m4.mean(), m4.std_error(), 0.1, 0.0);
    return {ok, Detail()("mean_u00_sq", m2.mean())("se", m2.std_error())("mean_u00_4", m4.mean())("se", m4.std_error())
                    .str()};
}

Outcome gde_sff() {
    const int n = 6;
    const std::size_t draws = 200;
    const std::vector<double> times{0.0, 1.0, 2.0};
    const auto hs = parallel_map<SpectralHamiltonian>(draws, [&](std::size_t i) { return sample_gde(n, derive_seed(0, {i})); });
    bool ok = true;
    Detail det;
    for (int k : {1, 2}) {
        for (double t : times) {
            RunningStats s;
            for (const auto &h : hs) s.add(spectral_form_factor(h, t, k));
            const double pred = predict::gde_sff(k, t);
            ok = ok && within(s.mean(), s.std_error(), pred, 0.05);
            det("k" + std::to_string(k) + "_t" + format_number(t), format_number(s.mean()) + "/" + format_number(pred));
        }
    }
    return {ok, det.str()};
}

Outcome prop_average_loss() {
    const int n = 8;
    const std::size_t draws = 100;
    const std::vector<double> times{0.0, 1.0, 2.0};
    const auto circuit = build_hea(n, 0);
    const std::vector<double> zero(static_cast<std::size_t>(circuit.num_params()), 0.0);
    struct Draw {
        std::vector<double> generic, symmetric;
    };
    const auto draws_out = parallel_map<Draw>(draws, [&](std::size_t i) {
        const auto setup = build_setup(n, QubitSet{0, 1}, derive_seed(0, {i}));
        const auto obs = setup.symmetry_observable();
        Draw d;
        for (double t : times) {
            const auto data = build_dataset(setup, t, 2, derive_seed(0, {i, 1}));
            d.symmetric.push_back(loss_value(circuit, zero, data.entries[0].state, obs));
            d.generic.push_back(loss_value(circuit, zero, data.entries[1].state, obs));
        }
        return d;
    });
    bool ok = true;
    double worst_sym = 0.0;
    Detail det;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        RunningStats g;
        for (const auto &d : draws_out) {
            g.add(d.generic[ti]);
            worst_sym = std::max(worst_sym, std::abs(d.symmetric[ti] - 1.0));
        }
        const double pred = predict::gde_loss(times[ti]);
        ok = ok && within(g.mean(), g.std_error(), pred, 0.05);
        det("t" + format_number(times[ti]), format_number(g.mean()) + "/" + format_number(pred));
    }
    ok = ok && worst_sym <= 1e-8;
    det("max_sym_dev", worst_sym);
    return {ok, det.str()};
}

Outcome gde_purity() {
    const int n = 8;
    const std::size_t draws = 100;
    const std::vector<double> times{0.0, 1.0, 2.0};
    const auto vals = parallel_map<std::vector<double>>(draws, [&](std::size_t i) {
        const auto h = sample_gde(n, derive_seed(0, {i}));
        std::vector<double> out;
        for (double t : times) out.push_back(purity(evolve(h, zero_state(n), t), QubitSet{0, 1}));
        return out;
    });
    bool ok = true;
    Detail det;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        RunningStats p, q;
        for (const auto &v : vals) {
            p.add(v[ti]);
            q.add(v[ti] * v[ti]);
        }
        const double pm = predict::gde_purity_mean(4.0, times[ti]);
        const double qm = predict::gde_purity_second(4.0, times[ti]);
        ok = ok && within(p.mean(), p.std_error(), pm, 0.05) && within(q.mean(), q.std_error(), qm, 0.05);
        det("t" + format_number(times[ti]),
            format_number(p.mean()) + "/" + format_number(pm) + "," + format_number(q.mean()) + "/" + format_number(qm));
    }
    return {ok, det.str()};
}

Outcome bound_domination() {
    const std::vector<InputFamily> families{InputFamily::product_random, InputFamily::haar, InputFamily::gde_evolved};
    const std::vector<int> sizes{6, 8, 10};
    const std::size_t count = 500;
    const auto gaps = parallel_map<double>(count, [&](std::size_t i) {
        const auto fam = families[i % 3];
        const int n = sizes[(i / 3) % 3];
        const int depth = 1 + static_cast<int>((i / 9) % 2);
        const int locality = 1 + static_cast<int>((i / 18) % 2);
        const auto r = concentration_instance(fam, n, depth, locality, 1.0, derive_seed(0, {i}));
        return std::abs(r.f - r.f_trivial) - r.bound;
    });
    int violations = 0;
    double worst = -1e300;
    for (double g : gaps) {
        violations += g > 1e-9;
        worst = std::max(worst, g);
    }
    return {violations == 0, Detail()("instances", count)("violations", violations)("max_gap_minus_bound", worst).str()};
}

std::set<int> numerical_support(const CMatrix &m, int n) {
    std::set<int> out;
    for (int q = 0; q < n; ++q) {
        CMatrix twirl = CMatrix::Zero(m.rows(), m.cols());
        for (const char *w : {"I", "X", "Y", "Z"}) {
            std::string letters(static_cast<std::size_t>(n), 'I');
            letters[static_cast<std::size_t>(q)] = w[0];
            const CMatrix pq = to_dense(PauliString::from_letters(letters));
            twirl += pq * m * pq;
        }
        if ((twirl / 4.0 - m).cwiseAbs().maxCoeff() > 1e-9) out.insert(q);
    }
    return out;
}

Outcome lightcone_soundness() {
    const auto results = parallel_map<std::pair<bool, bool>>(100, [](std::size_t i) {
        Rng rng = make_rng(derive_seed(0, {i}));
        const int n = 2 + static_cast<int>(rng() % 7);
        const int d = 1 + static_cast<int>(rng() % 3);
        const auto c = build_hea(n, d, (i % 2) ? Boundary::periodic : Boundary::open);
        std::string w(static_cast<std::size_t>(n), 'I');
        const int weight = 1 + static_cast<int>(rng() % 2);
        for (int j = 0; j < weight; ++j) w[rng() % static_cast<unsigned>(n)] = "XYZ"[rng() % 3];
        const auto p = PauliString::from_letters(w);
        const CMatrix u = circuit_unitary(c, random_parameters(c, rng()));
        const CMatrix heis = u.adjoint() * to_dense(p) * u;
        const QubitSet cone = lightcone(c, p);
        bool contained = true;
        for (int q : numerical_support(heis, n)) contained = contained && cone.contains(q);
        const bool sized = cone.size() <= static_cast<std::size_t>(2 * d * p.weight());
        return std::pair{contained, sized};
    });
    int bad_contain = 0, bad_size = 0;
    for (const auto &[a, b] : results) {
        bad_contain += !a;
        bad_size += !b;
    }
    return {bad_contain == 0 && bad_size == 0,
            Detail()("instances", 100)("support_escapes", bad_contain)("size_violations", bad_size).str()};
}

Outcome haar_area_bound() {
    const int n = 12;
    double worst_ratio = 0.0;
    for (int k : {1, 2}) {
        const double cap = std::pow(2.0, k - n / 3.0);
        const auto vals = parallel_map<double>(100, [&](std::size_t i) {
            return scrambling_measure(haar_state(n, derive_seed(0, {i})), QubitSet::range(0, k - 1));
        });
        for (double v : vals) worst_ratio = std::max(worst_ratio, v / cap);
    }
    const StateFamily haar = [](int m, std::uint64_t s) { return haar_state(m, s); };
    const auto probe = law_probe(haar, {8, 10, 12}, {1, 2}, 100, 0);
    const double s1 = probe.log2_i_slope.at(1);
    const double s2 = probe.log2_i_slope.at(2);
    const bool ok = worst_ratio <= 1.0 && std::abs(s1 + 0.5) <= 0.15 && std::abs(s2 + 0.5) <= 0.15;
    return {ok, Detail()("max_I_over_cap", worst_ratio)("slope_l1", s1)("slope_l2", s2).str()};
}

Outcome short_time_gde() {
    const int n = 10;
    const double t = 1.0;
    const double threshold = predict::thm5_threshold(2, t);
    const auto vals = parallel_map<double>(100, [&](std::size_t i) {
        const auto psi = sample_input(InputFamily::gde_evolved, n, t, derive_seed(0, {i}));
        return scrambling_measure(psi, QubitSet{0, 1});
    });
    int above = 0;
    double lo = 1e300;
    for (double v : vals) {
        above += v >= threshold;
        lo = std::min(lo, v);
    }
    return {above >= 90, Detail()("threshold", threshold)("fraction_above", above / 100.0)("min_I", lo).str()};
}

Outcome gradient_vs_time() {
    GradientExperimentConfig c;
    c.num_qubits = {4, 6, 8, 10};
    c.depth = 1;
    c.times = linear_grid(4.0, 20);
    c.num_states = 100;
    c.num_theta_draws = 2;
    c.seed = 0;
    const auto r = gradient_vs_time_experiment(c);
    double lo = 1e300, hi = 0.0;
    for (const auto &rec : r.records) {
        if (rec.t == 0.0) {
            lo = std::min(lo, rec.mean_grad_inf_norm);
            hi = std::max(hi, rec.mean_grad_inf_norm);
        }
    }
    bool decreasing = true;
    std::string sats;
    for (std::size_t i = 0; i < r.saturation.size(); ++i) {
        if (i > 0) decreasing = decreasing && r.saturation[i].g_sat < r.saturation[i - 1].g_sat;
        sats += (i ? "," : "") + format_number(r.saturation[i].g_sat);
    }
    const bool ok = hi / lo < 2.0 && decreasing && r.entropy_correlation >= 0.7 && r.loglog_slope < 0.0;
    return {ok, Detail()("t0_ratio", hi / lo)("g_sat", sats)("corr", r.entropy_correlation)("slope", r.loglog_slope)
                    .str()};
}

Outcome two_design_mean() {
    SamplerSpec spec;
    spec.num_qubits = 6;
    spec.depth = 2;
    spec.observable = "1.0*Z2*Z3";
    spec.input = InputFamily::product_random;
    spec.theta = ThetaDistribution::two_design;
    spec.estimator = EstimatorKind::loss_value;
    const auto r = variance_report(spec, 2000, 0);
    return {r.abs_mean <= 3.0 * r.std_error_of_mean,
            Detail()("mean", r.mean)("se", r.std_error_of_mean).str()};
}

Outcome gn_bound() {
    const int n = 8;
    const auto circuit = build_hea(n, 1);
    const auto obs = parse_observable("1.0*Z4*Z5", n);
    const double bound = gn_lower_bound(n, 1, zero_state(n), obs, GnVariant::one_fifth);
    SamplerSpec spec;
    spec.num_qubits = n;
    spec.depth = 1;
    spec.observable = "1.0*Z4*Z5";
    spec.input = InputFamily::product_random;
    spec.theta = ThetaDistribution::two_design;
    spec.estimator = EstimatorKind::gradient_component;
    spec.param = last_brick_param(circuit, obs.support());
    const auto r = variance_report(spec, 2000, 0);
    const bool ok = std::abs(bound - 3.3778e-3) < 5e-8 && r.variance >= bound;
    return {ok, Detail()("nu", spec.param)("variance", r.variance)("bound", bound).str()};
}

Outcome anti_concentration() {
    SamplerSpec spec;
    spec.num_qubits = 10;
    spec.depth = 2;
    spec.observable = "1.0*Z4*Z5";
    spec.estimator = EstimatorKind::loss_value;
    spec.input = InputFamily::product_random;
    const auto prod = variance_report(spec, 2000, 0);
    spec.input = InputFamily::haar;
    const auto haar = variance_report(spec, 2000, 0);
    return {prod.variance >= 10.0 * haar.variance,
            Detail()("var_product", prod.variance)("var_haar", haar.variance)("ratio", prod.variance / haar.variance)
                .str()};
}

Outcome discrimination_smoke() {
    const auto run = run_discrimination(DiscriminationRunConfig{});
    const auto &traj = run.training.loss_trajectory;
    const auto smooth = moving_average(traj, 10);
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < smooth.size(); ++i) worst_rise = std::max(worst_rise, smooth[i] - smooth[i - 1]);
    const bool ok = traj.back() <= 0.5 * traj.front() && worst_rise <= 1e-12;
    return {ok, Detail()("initial", traj.front())("final", traj.back())("max_smoothed_rise", worst_rise)(
                    "accuracy", run.training.train_accuracy)
                    .str()};
}

int shell(const std::string &cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"numerics", "--n 4,6 --t-max 2 --t-steps 5 --samples 8 --seed 0 --plot"},
        {"gde-sff", "--n 5 --t 0,1,2 --samples 20 --seed 0 --plot"},
        {"gde-purity", "--n 6 --t 0,1,2 --samples 20 --seed 0"},
        {"discriminate", "--n 4 --t 0.5 --dataset-size 4 --iterations 10 --seed 0"},
        {"concentration", "--n 4,6 --samples 5 --seed 0"},
        {"haar-check", "--samples 2000 --seed 0"},
    };
    const fs::path root = fs::temp_directory_path() / "hea_lab_acceptance_determinism";
    fs::remove_all(root);
    int mismatched = 0;
    int failed = 0;
    for (const auto &[sub, args] : runs) {
        for (const char *threads : {"1", "4"}) {
            const fs::path dir = root / (sub + "_" + threads);
            const std::string cmd = std::string("HEA_LAB_THREADS=") + threads + " " HEA_LAB_BINARY " " + sub + " " +
                                    args + " --out " + dir.string() + " >/dev/null 2>&1";
            failed += shell(cmd) != 0;
        }
        for (const char *ext : {".csv", ".json", ".svg"}) {
            const fs::path a = root / (sub + "_1") / (sub + ext);
            const fs::path b = root / (sub + "_4") / (sub + ext);
            if (!fs::exists(a) && !fs::exists(b)) continue;
            if (!fs::exists(a) || !fs::exists(b) || read_file(a) != read_file(b)) ++mismatched;
        }
    }
    fs::remove_all(root);
    return {failed == 0 && mismatched == 0,
            Detail()("subcommands", runs.size())("failed_runs", failed)("mismatched_files", mismatched).str()};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> all{
        {1, "parameter shift matches finite differences", gradient_oracle},
        {2, "Haar 4x4 element moments", weingarten_moments},
        {3, "GDE spectral form factor", gde_sff},
        {4, "GDE average loss and symmetric-class invariance", prop_average_loss},
        {5, "GDE subsystem purity moments", gde_purity},
        {6, "scrambling bound dominates |f - f_trv|", bound_domination},
        {7, "lightcone soundness and size", lightcone_soundness},
        {8, "Haar-state marginal decay", haar_area_bound},
        {9, "short-time GDE marginal threshold", short_time_gde},
        {10, "gradient norm vs Heisenberg time", gradient_vs_time},
        {11, "zero mean under two-design parameters", two_design_mean},
        {12, "gradient variance above the (1/5)^{2D} G_n bound", gn_bound},
        {13, "product vs Haar input variance contrast", anti_concentration},
        {14, "discrimination training smoke test", discrimination_smoke},
        {15, "CLI outputs independent of thread count", cli_determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const auto &c : all) {
        if (!only.empty() && !only.contains(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] %2d %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
