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
 * Batch runner: `hea-lab <subcommand> [--key value]... [--config path] [--plot]`.
 *
 * A JSON config file is a flat object whose keys are the flag names with
 * '-' or '_' as separator. Flags given on the command line win over the file.
 * Every subcommand writes `<out>/<subcommand>.csv` and `<out>/<subcommand>.json`.
 *
 * Exit codes: 0 success, 2 configuration error, 1 runtime error.
 */

#pragma once

#include "hea_lab/core.hpp"
#include "hea_lab/gradients.hpp"
#include "hea_lab/haar.hpp"
#include "hea_lab/io.hpp"
#include "hea_lab/parallel.hpp"
#include "hea_lab/plot.hpp"
#include "hea_lab/randmat.hpp"
#include "hea_lab/scrambling.hpp"
#include "hea_lab/tasks.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hea_lab::cli {

using nlohmann::json;

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class ValueKind { integer, count, real, int_list, real_list, string_list };

struct KeySpec {
    std::string name; ///< kebab-case flag name without dashes
    ValueKind kind;
    std::optional<std::string> fallback; ///< unset means required
    std::string help;
};

struct Context {
    json config;   ///< resolved typed values, keyed by snake_case name
    std::uint64_t seed = 0;
    std::filesystem::path out;
    bool plot = false;
    std::string subcommand;

    [[nodiscard]] std::string config_dump() const { return config.dump(); }
    [[nodiscard]] std::string config_hash() const { return hex64(fnv1a64(config_dump())); }
    [[nodiscard]] std::string provenance() const {
        return "hea-lab " + std::string(kVersion) + " " + subcommand + " config_hash=" + config_hash() +
               " config=" + config_dump();
    }
    json summary_header() const {
        return {{"version", std::string(kVersion)}, {"subcommand", subcommand}, {"config", config},
                {"config_hash", config_hash()}, {"seed", seed}};
    }
    template <class T> T get(const std::string &snake) const { return config.at(snake).get<T>(); }
};

struct Subcommand {
    std::string name;
    std::string description;
    std::vector<KeySpec> keys;
    std::function<void(const Context &)> body;
};

namespace detail {

inline std::string snake(std::string s) {
    for (auto &c : s) if (c == '-') c = '_';
    return s;
}

inline std::string kebab(std::string s) {
    for (auto &c : s) if (c == '_') c = '-';
    return s;
}

inline long long parse_integer(const std::string &key, const std::string &raw) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used == raw.size()) return v;
    } catch (const std::exception &) {
    }
    throw ConfigError("--" + key + ": expected an integer, got '" + raw + "'");
}

inline double parse_real(const std::string &key, const std::string &raw) {
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used == raw.size() && std::isfinite(v)) return v;
    } catch (const std::exception &) {
    }
    throw ConfigError("--" + key + ": expected a number, got '" + raw + "'");
}

inline json typed_value(const KeySpec &spec, const std::string &raw) {
    auto items = [&] {
        auto parts = split(raw, ',');
        for (const auto &p : parts) {
            if (p.empty()) throw ConfigError("--" + spec.name + ": empty list item in '" + raw + "'");
        }
        return parts;
    };
    switch (spec.kind) {
    case ValueKind::integer: return parse_integer(spec.name, raw);
    case ValueKind::count: {
        const long long v = parse_integer(spec.name, raw);
        if (v < 0) throw ConfigError("--" + spec.name + ": must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    case ValueKind::real: return parse_real(spec.name, raw);
    case ValueKind::int_list: {
        json a = json::array();
        for (const auto &p : items()) a.push_back(parse_integer(spec.name, p));
        return a;
    }
    case ValueKind::real_list: {
        json a = json::array();
        for (const auto &p : items()) a.push_back(parse_real(spec.name, p));
        return a;
    }
    case ValueKind::string_list: {
        json a = json::array();
        for (const auto &p : items()) a.push_back(p);
        return a;
    }
    }
    throw std::logic_error("typed_value: unknown kind");
}

/// Flattens a config-file value to the flag string form.
inline std::string raw_from_json(const std::string &key, const json &v) {
    auto scalar = [&](const json &s) -> std::string {
        if (s.is_string()) return s.get<std::string>();
        if (s.is_number_integer() || s.is_number_unsigned()) return s.dump();
        if (s.is_number_float()) return format_number(s.get<double>());
        throw ConfigError("config key '" + key + "': unsupported value " + s.dump());
    };
    if (!v.is_array()) return scalar(v);
    std::string out;
    for (const auto &e : v) out += (out.empty() ? "" : ",") + scalar(e);
    return out;
}

inline void require(bool ok, const std::string &message) {
    if (!ok) throw ConfigError(message);
}

inline std::vector<int> ints(const Context &c, const char *key) { return c.get<std::vector<int>>(key); }

inline void write_outputs(const Context &c, const Table &table, json summary) {
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec || !std::filesystem::is_directory(c.out)) {
        throw std::runtime_error("cannot create output directory " + c.out.string());
    }
    const auto csv_path = c.out / (c.subcommand + ".csv");
    const auto json_path = c.out / (c.subcommand + ".json");
    write_file_atomic(csv_path, to_csv(table, c.provenance()));
    write_file_atomic(json_path, summary.dump(2) + "\n");
    std::cout << "wrote " << csv_path.string() << "\n" << "wrote " << json_path.string() << "\n";
}

inline json rows_json(const Table &t) {
    json rows = json::array();
    for (const auto &r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            const std::string &cell = r[i];
            char *end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end != cell.c_str() && *end == '\0') {
                o[t.columns[i]] = v;
            } else {
                o[t.columns[i]] = cell;
            }
        }
        rows.push_back(std::move(o));
    }
    return rows;
}

inline std::string num(double v) { return format_number(v); }
inline std::string num(std::size_t v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace detail

// ---------------------------------------------------------------------------
// Pipelines

inline void run_numerics(const Context &c) {
    GradientExperimentConfig cfg;
    cfg.num_qubits = detail::ints(c, "n");
    cfg.depth = c.get<int>("depth");
    detail::require(c.get<double>("t_max") >= 0.0, "--t-max: must be non-negative");
    detail::require(c.get<std::size_t>("t_steps") >= 1, "--t-steps: must be >= 1");
    cfg.times = linear_grid(c.get<double>("t_max"), c.get<std::size_t>("t_steps"));
    cfg.num_states = c.get<std::size_t>("samples");
    cfg.num_theta_draws = c.get<std::size_t>("theta_draws");
    cfg.seed = c.seed;
    for (int n : cfg.num_qubits) detail::require(n >= 2 && n <= kMaxDenseQubits, "--n: sizes must lie in [2, 12]");
    detail::require(cfg.depth >= 1, "--depth: must be >= 1");
    detail::require(cfg.num_states >= 1 && cfg.num_theta_draws >= 1, "--samples/--theta-draws: must be >= 1");
    const auto result = gradient_vs_time_experiment(cfg);
    Table t;
    t.columns = {"n", "t", "mean_grad_inf_norm", "std_error", "mean_entropy_2q", "samples"};
    for (const auto &r : result.records) {
        t.add_row({detail::num(r.n), detail::num(r.t), detail::num(r.mean_grad_inf_norm), detail::num(r.std_error),
                   detail::num(r.mean_entropy_2q), detail::num(r.samples)});
    }
    json summary = c.summary_header();
    json sat = json::array();
    for (const auto &s : result.saturation) sat.push_back({{"n", s.n}, {"g_sat", s.g_sat}, {"entropy_sat", s.entropy_sat}});
    summary["saturation"] = sat;
    const bool fit = result.saturation.size() >= 2;
    summary["loglog_slope"] = fit ? detail::finite_or_null(result.loglog_slope) : json(nullptr);
    summary["entropy_correlation"] = fit ? detail::finite_or_null(result.entropy_correlation) : json(nullptr);
    detail::write_outputs(c, t, summary);
    if (c.plot) std::cout << "wrote " << emit_plot(c.out / "numerics.csv", "numerics", true).string() << "\n";
}

inline void run_gde_sff(const Context &c) {
    const int n = c.get<int>("n");
    const auto ks = detail::ints(c, "k");
    const auto times = c.get<std::vector<double>>("t");
    const auto samples = c.get<std::size_t>("samples");
    detail::require(n >= 1 && n <= kMaxGdeQubits, "--n: must lie in [1, 12]");
    detail::require(samples >= 2, "--samples: need at least 2");
    for (int k : ks) detail::require(k == 1 || k == 2, "--k: values must be 1 or 2");
    for (double t : times) detail::require(t >= 0.0, "--t: times must be non-negative");
    const auto draws = parallel_map<std::vector<double>>(samples, [&](std::size_t s) {
        const GDEHamiltonian h = sample_gde(n, derive_seed(c.seed, {s}));
        std::vector<double> v;
        for (int k : ks) for (double t : times) v.push_back(spectral_form_factor(h, t, k));
        return v;
    });
    Table table;
    table.columns = {"k", "t", "empirical_mean", "std_error", "analytic", "samples"};
    std::size_t j = 0;
    for (int k : ks) {
        for (double t : times) {
            RunningStats st;
            for (const auto &d : draws) st.add(d[j]);
            ++j;
            table.add_row({detail::num(k), detail::num(t), detail::num(st.mean()), detail::num(st.std_error()),
                           detail::num(predict::gde_sff(k, t)), detail::num(st.count())});
        }
    }
    json summary = c.summary_header();
    summary["rows"] = detail::rows_json(table);
    detail::write_outputs(c, table, summary);
    if (c.plot) std::cout << "wrote " << emit_plot(c.out / "gde-sff.csv", "gde-sff", false).string() << "\n";
}

inline void run_gde_purity(const Context &c) {
    const int n = c.get<int>("n");
    const int lambda = c.get<int>("lambda_size");
    const auto times = c.get<std::vector<double>>("t");
    const auto samples = c.get<std::size_t>("samples");
    detail::require(n >= 2 && n <= kMaxGdeQubits, "--n: must lie in [2, 12]");
    detail::require(lambda >= 1 && lambda < n, "--lambda-size: must lie in [1, n - 1]");
    detail::require(samples >= 2, "--samples: need at least 2");
    for (double t : times) detail::require(t >= 0.0, "--t: times must be non-negative");
    const QubitSet sub = QubitSet::range(0, lambda - 1);
    const auto draws = parallel_map<std::vector<double>>(samples, [&](std::size_t s) {
        const GDEHamiltonian h = sample_gde(n, derive_seed(c.seed, {s}));
        std::vector<double> v;
        for (double t : times) v.push_back(purity(evolve(h, zero_state(n), t), sub));
        return v;
    });
    const double d = std::ldexp(1.0, lambda);
    Table table;
    table.columns = {"t", "mean_purity", "std_error", "analytic_mean", "mean_purity_sq", "std_error_sq",
                     "analytic_second", "samples"};
    for (std::size_t j = 0; j < times.size(); ++j) {
        RunningStats p, p2;
        for (const auto &dr : draws) {
            p.add(dr[j]);
            p2.add(dr[j] * dr[j]);
        }
        table.add_row({detail::num(times[j]), detail::num(p.mean()), detail::num(p.std_error()),
                       detail::num(predict::gde_purity_mean(d, times[j])), detail::num(p2.mean()),
                       detail::num(p2.std_error()), detail::num(predict::gde_purity_second(d, times[j])),
                       detail::num(p.count())});
    }
    json summary = c.summary_header();
    summary["rows"] = detail::rows_json(table);
    detail::write_outputs(c, table, summary);
}

inline void run_discriminate(const Context &c) {
    DiscriminationRunConfig cfg;
    cfg.num_qubits = c.get<int>("n");
    cfg.a_size = c.get<int>("a_size");
    cfg.t = c.get<double>("t");
    cfg.dataset_size = c.get<std::size_t>("dataset_size");
    cfg.depth = c.get<int>("depth");
    cfg.iterations = c.get<int>("iterations");
    cfg.step_size = c.get<double>("step_size");
    cfg.seed = c.seed;
    detail::require(cfg.num_qubits >= 3 && cfg.num_qubits <= kMaxGdeQubits, "--n: must lie in [3, 12]");
    detail::require(cfg.a_size >= 2 && cfg.a_size < cfg.num_qubits, "--a-size: must lie in [2, n - 1]");
    detail::require(cfg.dataset_size >= 2 && cfg.dataset_size % 2 == 0, "--dataset-size: must be even and >= 2");
    detail::require(cfg.depth >= 1, "--depth: must be >= 1");
    detail::require(cfg.iterations >= 1, "--iterations: must be >= 1");
    detail::require(cfg.step_size >= 0.0, "--step-size: must be non-negative");
    detail::require(cfg.t >= 0.0, "--t: must be non-negative");
    const DiscriminationRun run = run_discrimination(cfg);
    for (const auto &w : run.warnings) std::cerr << "warning: " << w << "\n";
    Table table;
    table.columns = {"iteration", "loss"};
    const auto &traj = run.training.loss_trajectory;
    for (std::size_t i = 0; i < traj.size(); ++i) table.add_row({detail::num(i), detail::num(traj[i])});
    json summary = c.summary_header();
    summary["initial_loss"] = traj.front();
    summary["final_loss"] = traj.back();
    summary["train_accuracy"] = run.training.train_accuracy;
    summary["warnings"] = run.warnings;
    detail::write_outputs(c, table, summary);
}

inline void run_concentration(const Context &c) {
    const auto ns = detail::ints(c, "n");
    const auto depths = detail::ints(c, "depth");
    const auto localities = detail::ints(c, "locality");
    const auto family_names = c.get<std::vector<std::string>>("families");
    const double gde_time = c.get<double>("gde_time");
    const auto samples = c.get<std::size_t>("samples");
    detail::require(samples >= 1, "--samples: must be >= 1");
    for (int n : ns) detail::require(n >= 2 && n <= kMaxGdeQubits, "--n: sizes must lie in [2, 12]");
    for (int d : depths) detail::require(d >= 1, "--depth: must be >= 1");
    std::vector<InputFamily> families;
    for (const auto &f : family_names) {
        const json j = f;
        const auto fam = j.get<InputFamily>();
        detail::require(json(fam).get<std::string>() == f, "--families: unknown family '" + f + "'");
        families.push_back(fam);
    }
    for (int l : localities) {
        for (int n : ns) detail::require(l >= 1 && l <= n, "--locality: must lie in [1, n]");
    }
    Table table;
    table.columns = {"family", "n", "depth", "locality", "samples", "max_abs_deviation", "mean_abs_deviation",
                     "mean_bound", "max_ratio", "violations"};
    std::size_t total_violations = 0;
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        for (int n : ns) {
            for (int d : depths) {
                for (int l : localities) {
                    const auto instances = parallel_map<ConcentrationInstance>(samples, [&](std::size_t s) {
                        const auto seed = derive_seed(c.seed, {fi, static_cast<std::uint64_t>(n),
                                                               static_cast<std::uint64_t>(d),
                                                               static_cast<std::uint64_t>(l), s});
                        return concentration_instance(families[fi], n, d, l, gde_time, seed);
                    });
                    double max_dev = 0.0, max_ratio = 0.0;
                    RunningStats dev, bound;
                    std::size_t violations = 0;
                    for (const auto &inst : instances) {
                        const double dv = std::abs(inst.f - inst.f_trivial);
                        max_dev = std::max(max_dev, dv);
                        dev.add(dv);
                        bound.add(inst.bound);
                        if (inst.bound > 0.0) max_ratio = std::max(max_ratio, dv / inst.bound);
                        if (dv > inst.bound + 1e-9) ++violations;
                    }
                    total_violations += violations;
                    table.add_row({family_names[fi], detail::num(n), detail::num(d), detail::num(l),
                                   detail::num(samples), detail::num(max_dev), detail::num(dev.mean()),
                                   detail::num(bound.mean()), detail::num(max_ratio), detail::num(violations)});
                }
            }
        }
    }
    json summary = c.summary_header();
    summary["total_violations"] = total_violations;
    summary["rows"] = detail::rows_json(table);
    detail::write_outputs(c, table, summary);
}

inline void run_haar_check(const Context &c) {
    const int dim = c.get<int>("dim");
    const auto samples = c.get<std::size_t>("samples");
    detail::require(dim >= 1 && dim <= 256, "--dim: must lie in [1, 256]");
    detail::require(samples >= 2, "--samples: need at least 2");
    const auto draws = parallel_map<double>(samples, [&](std::size_t s) {
        return std::norm(haar_unitary(dim, derive_seed(c.seed, {s}))(0, 0));
    });
    RunningStats m2, m4;
    for (double a : draws) {
        m2.add(a);
        m4.add(a * a);
    }
    const double d = dim;
    Table table;
    table.columns = {"moment", "empirical_mean", "std_error", "analytic", "samples"};
    table.add_row({"abs_u00_sq", detail::num(m2.mean()), detail::num(m2.std_error()), detail::num(1.0 / d),
                   detail::num(samples)});
    table.add_row({"abs_u00_4", detail::num(m4.mean()), detail::num(m4.std_error()), detail::num(2.0 / (d * (d + 1))),
                   detail::num(samples)});
    json summary = c.summary_header();
    summary["rows"] = detail::rows_json(table);
    detail::write_outputs(c, table, summary);
}

inline std::vector<Subcommand> subcommands() {
    using K = ValueKind;
    const KeySpec seed{"seed", K::count, std::nullopt, "master RNG seed (required)"};
    return {
        {"numerics", "gradient norm vs Heisenberg evolution time",
         {{"n", K::int_list, std::nullopt, "comma-separated system sizes"},
          {"depth", K::integer, "1", "HEA depth"},
          {"t-max", K::real, std::nullopt, "last point of the time grid"},
          {"t-steps", K::count, std::nullopt, "number of grid points on [0, t-max]"},
          {"samples", K::count, "100", "random product states per n"},
          {"theta-draws", K::count, "2", "parameter draws per state"},
          seed},
         run_numerics},
        {"gde-sff", "GDE spectral form factor vs prediction",
         {{"n", K::integer, std::nullopt, "number of qubits"},
          {"k", K::int_list, "1,2", "form factor orders"},
          {"t", K::real_list, std::nullopt, "times"},
          {"samples", K::count, std::nullopt, "GDE draws"},
          seed},
         run_gde_sff},
        {"gde-purity", "subsystem purity of GDE-evolved |0...0> vs prediction",
         {{"n", K::integer, std::nullopt, "number of qubits"},
          {"lambda-size", K::integer, "2", "subsystem size, qubits 0..size-1"},
          {"t", K::real_list, std::nullopt, "times"},
          {"samples", K::count, std::nullopt, "GDE draws"},
          seed},
         run_gde_purity},
        {"discriminate", "train the HEA on the Hamiltonian discrimination task",
         {{"n", K::integer, std::nullopt, "number of qubits"},
          {"a-size", K::integer, "2", "size of the symmetry subsystem A"},
          {"t", K::real, std::nullopt, "evolution time"},
          {"dataset-size", K::count, "8", "number of labelled states (even)"},
          {"depth", K::integer, "2", "HEA depth"},
          {"iterations", K::integer, "200", "gradient descent steps"},
          {"step-size", K::real, "0.05", "gradient descent step"},
          seed},
         run_discriminate},
        {"concentration", "check |f - f_trv| against the scrambling bound",
         {{"n", K::int_list, std::nullopt, "system sizes"},
          {"depth", K::int_list, "1,2", "HEA depths"},
          {"locality", K::int_list, "1,2", "observable localities"},
          {"families", K::string_list, "product,haar,gde", "input families"},
          {"gde-time", K::real, "1", "evolution time of gde inputs"},
          {"samples", K::count, std::nullopt, "instances per combination"},
          seed},
         run_concentration},
        {"haar-check", "moments of |u_00| over Haar unitaries",
         {{"dim", K::integer, "4", "matrix dimension"},
          {"samples", K::count, std::nullopt, "number of draws"},
          seed},
         run_haar_check},
    };
}

/// Resolves file + flag values into a typed context. Throws ConfigError.
inline Context resolve(const Subcommand &sub, const std::map<std::string, std::string> &flags,
                       const std::string &config_path, bool plot_flag, const std::string &out_flag) {
    std::map<std::string, std::string> raw;
    std::string out = ".";
    bool plot = plot_flag;
    if (!config_path.empty()) {
        json file;
        try {
            file = json::parse(read_file(config_path));
        } catch (const json::exception &e) {
            throw ConfigError("config " + config_path + ": " + e.what());
        } catch (const std::runtime_error &e) {
            throw ConfigError(e.what());
        }
        if (!file.is_object()) throw ConfigError("config " + config_path + ": expected a flat JSON object");
        for (const auto &[key, value] : file.items()) {
            const std::string k = detail::kebab(key);
            if (k == "out") {
                out = detail::raw_from_json(key, value);
                continue;
            }
            if (k == "plot") {
                if (!value.is_boolean()) throw ConfigError("config key 'plot': expected a boolean");
                plot = plot || value.get<bool>();
                continue;
            }
            const bool known = std::any_of(sub.keys.begin(), sub.keys.end(), [&](const KeySpec &s) { return s.name == k; });
            if (!known) throw ConfigError("config key '" + key + "' is not an option of " + sub.name);
            raw[k] = detail::raw_from_json(key, value);
        }
    }
    for (const auto &[k, v] : flags) raw[k] = v;
    if (!out_flag.empty()) out = out_flag;
    Context c;
    c.subcommand = sub.name;
    c.out = out;
    c.plot = plot;
    c.config = json::object();
    for (const auto &spec : sub.keys) {
        auto it = raw.find(spec.name);
        std::string value;
        if (it != raw.end()) {
            value = it->second;
        } else if (spec.fallback) {
            value = *spec.fallback;
        } else {
            throw ConfigError(sub.name + ": missing required key --" + spec.name);
        }
        c.config[detail::snake(spec.name)] = detail::typed_value(spec, value);
    }
    c.seed = c.config.at("seed").get<std::uint64_t>();
    return c;
}

inline int run(int argc, const char *const *argv) {
    CLI::App app{"hea-lab: trainability experiments for the hardware efficient ansatz", "hea-lab"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(kVersion));
    const auto subs = subcommands();
    struct Bound {
        CLI::App *app = nullptr;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option *> options;
        std::string config;
        std::string out;
        bool plot = false;
    };
    std::vector<Bound> bound(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        auto *sc = app.add_subcommand(subs[i].name, subs[i].description);
        bound[i].app = sc;
        for (const auto &k : subs[i].keys) {
            std::string help = k.help;
            if (k.fallback) help += " (default " + *k.fallback + ")";
            bound[i].options[k.name] = sc->add_option("--" + k.name, bound[i].values[k.name], help);
        }
        sc->add_option("--config", bound[i].config, "JSON config file; flags override it");
        sc->add_option("--out", bound[i].out, "output directory (default .)");
        sc->add_flag("--plot", bound[i].plot, "also write an SVG plot where supported");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!bound[i].app->parsed()) continue;
        std::map<std::string, std::string> flags;
        for (const auto &[name, opt] : bound[i].options) {
            if (opt->count() > 0) flags[name] = bound[i].values[name];
        }
        Context ctx;
        try {
            ctx = resolve(subs[i], flags, bound[i].config, bound[i].plot, bound[i].out);
            subs[i].body(ctx);
        } catch (const ConfigError &e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        return 0;
    }
    return 2;
}

} // namespace hea_lab::cli
