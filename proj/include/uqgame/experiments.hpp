// Copyright 2026 The uqgame Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Experiment runners behind the command-line tool. Every experiment writes
 * CSV files into the output directory. Each CSV starts with one metadata
 * line `# experiment=<name> seed=<seed> schema=v1`, then a header row.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/entangle.hpp"
#include "uqgame/ergotropy.hpp"
#include "uqgame/errors.hpp"
#include "uqgame/game.hpp"
#include "uqgame/haar.hpp"
#include "uqgame/moves.hpp"

namespace uqgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";
    std::optional<std::size_t> samples;
    std::optional<std::size_t> n;
    std::optional<std::size_t> na;
    std::optional<std::size_t> nb;
    std::optional<std::size_t> restarts;
    std::optional<std::string> moves; // play
    std::optional<std::string> cache; // state cache path for search-based runs
};

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path, const std::string &experiment, std::uint64_t seed,
              const std::vector<std::string> &columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out_ << "# experiment=" << experiment << " seed=" << seed << " schema=v1\n";
        write_row(columns);
    }

    template <class... Ts>
    void row(const Ts &...values) {
        std::vector<std::string> cells;
        (cells.push_back(cell(values)), ...);
        write_row(cells);
    }

  private:
    static std::string cell(double v) {
        std::ostringstream os;
        os << std::setprecision(15) << v;
        return os.str();
    }
    static std::string cell(const std::string &s) { return s; }
    static std::string cell(const char *s) { return s; }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T v) {
        return std::to_string(v);
    }

    // RFC 4180 quoting for cells holding a comma or quote (partition labels)
    static std::string quoted(const std::string &cell) {
        if (cell.find_first_of(",\"") == std::string::npos) return cell;
        std::string q = "\"";
        for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + '"';
    }

    void write_row(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quoted(cells[i]);
        out_ << '\n';
    }

    std::ofstream out_;
};

namespace detail {

inline SearchOptions search_options(const ExperimentConfig &c) {
    SearchOptions o;
    o.restarts = c.restarts.value_or(32);
    o.seed = c.seed;
    return o;
}

inline std::filesystem::path cache_path(const ExperimentConfig &c) {
    return c.cache ? std::filesystem::path(*c.cache) : c.out_dir / "state-cache.txt";
}

inline void run_fig2a(const ExperimentConfig &c, std::ostream &log) {
    std::vector<std::size_t> nbs{1, 2, 3, 4, 5, 10, 15, 20};
    if (c.nb) nbs = {*c.nb};
    CsvWriter csv(c.out_dir / "fig2a.csv", "fig2a", c.seed, {"N_B", "M", "M_over_NB", "energy_per_site"});
    for (std::size_t nb : nbs) {
        for (std::size_t m = 0; m <= nb; ++m) {
            const double e = closed_form_min_energy(nb, m);
            csv.row(nb, m, double(m) / double(nb), e / double(nb + m));
        }
    }
    log << "fig2a: wrote " << nbs.size() << " closed-form curves\n";
}

inline void run_fig2bc(const ExperimentConfig &c, std::ostream &log, bool panel_b) {
    const std::size_t n_max = c.n.value_or(8);
    if (n_max > kSearchSiteGuard) throw GuardViolation("--n exceeds guard N <= 8");
    if (n_max < 2) throw GuardViolation("--n must be >= 2");
    StateCache cache(cache_path(c).string());
    const auto rows = fig2bc_min_energies(2, n_max, search_options(c), &cache);
    cache.save();
    const std::string name = panel_b ? "fig2b" : "fig2c";
    if (panel_b) {
        CsvWriter csv(c.out_dir / "fig2b.csv", name, c.seed,
                      {"N", "N_B", "M", "M_over_NB", "energy_per_site", "mean_entropy", "partition"});
        for (const auto &r : rows) {
            if (r.n_b >= r.n) continue;
            if (c.nb && r.n_b != *c.nb) continue;
            const std::size_t m = r.n - r.n_b;
            csv.row(r.n, r.n_b, m, double(m) / double(r.n_b), r.per_site_energy, r.mean_entropy, r.partition);
        }
    } else {
        CsvWriter csv(c.out_dir / "fig2c.csv", name, c.seed,
                      {"N_B", "N", "energy_per_site", "mean_entropy", "partition"});
        std::vector<MinEnergyRow> sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const MinEnergyRow &a, const MinEnergyRow &b) { return a.n_b < b.n_b; });
        for (const auto &r : sorted) {
            if (c.nb && r.n_b != *c.nb) continue;
            csv.row(r.n_b, r.n, r.per_site_energy, r.mean_entropy, r.partition);
        }
    }
    log << name << ": " << rows.size() << " (N, N_B) points, N <= " << n_max << "\n";
}

inline void run_ame_search(const ExperimentConfig &c, std::ostream &log) {
    const std::size_t n_max = c.n.value_or(8);
    if (n_max > kSearchSiteGuard) throw GuardViolation("--n exceeds guard N <= 8");
    if (n_max < 2) throw GuardViolation("--n must be >= 2");
    const auto opt = search_options(c);
    StateCache cache(cache_path(c).string());
    CsvWriter csv(c.out_dir / "ame-search.csv", "ame-search", c.seed,
                  {"N", "k", "ansatz", "mean_entropy", "gap", "is_ame"});
    for (std::size_t n = 2; n <= n_max; ++n) {
        std::vector<AnsatzKind> kinds{AnsatzKind::generic};
        if (n == 4) kinds = {AnsatzKind::symmetric4, AnsatzKind::generic};
        for (AnsatzKind kind : kinds) {
            const auto res = search_max_entropy_state(n, kind, opt);
            cache.insert(CachedState{n, kind, opt.seed, res.mean_entropy, res.state.amplitudes()});
            const double k = double(n / 2);
            csv.row(n, n / 2, to_string(kind), res.mean_entropy, k - res.mean_entropy, k - res.mean_entropy < 1e-4);
            log << "ame-search: N=" << n << " " << to_string(kind) << " mean entropy " << std::setprecision(10)
                << res.mean_entropy << " (k=" << n / 2 << ")\n";
        }
    }
    cache.save();
}

inline void run_haar(const ExperimentConfig &c, std::ostream &log) {
    const std::size_t n = c.n.value_or(4);
    const auto rep = haar_entropy_statistics(n, c.samples.value_or(1000), c.seed);
    {
        CsvWriter csv(c.out_dir / "haar-stats.csv", "haar-stats", c.seed, {"sample_index", "mean_entropy"});
        for (std::size_t i = 0; i < rep.per_sample.size(); ++i) csv.row(i, rep.per_sample[i]);
    }
    CsvWriter csv(c.out_dir / "haar-stats-summary.csv", "haar-stats", c.seed,
                  {"N", "samples", "mean", "stddev", "max", "pooled_mean"});
    csv.row(n, rep.samples, rep.mean, rep.stddev, rep.max, rep.pooled_mean);
    log << std::setprecision(6) << "haar-stats: mean " << rep.mean << " sd " << rep.stddev << " max " << rep.max
        << " over " << rep.samples << " samples\n";
}

inline void run_ergotropy(const ExperimentConfig &c, std::ostream &log) {
    const auto rows = ergotropy_sweep(0.5, 0.0, 0.12, c.samples.value_or(25), 1.0, 4.0);
    {
        CsvWriter csv(c.out_dir / "ergotropy-sweep.csv", "ergotropy-sweep", c.seed,
                      {"p2", "single_site", "two_site_oracle", "printed_formula", "branch"});
        for (const auto &r : rows) {
            csv.row(r.p2, r.single_site, r.two_site_oracle, r.printed_formula, r.branch_le ? "le" : "gt");
        }
    }
    std::ofstream rep(c.out_dir / "ergotropy-reconciliation.txt");
    rep << "# experiment=ergotropy-sweep seed=" << c.seed << " schema=v1\n";
    rep << "# printed two-site formula vs rearrangement bound (per site), p0=0.5 E1=1 E2=4\n";
    rep << "# p2 oracle printed delta(printed-oracle) branch\n";
    double worst = 0.0;
    std::size_t above_bound = 0;
    rep << std::setprecision(12);
    for (const auto &r : rows) {
        const double delta = r.printed_formula - r.two_site_oracle;
        worst = std::max(worst, std::abs(delta));
        if (delta > 1e-12) ++above_bound;
        rep << r.p2 << ' ' << r.two_site_oracle << ' ' << r.printed_formula << ' ' << delta << ' '
            << (r.branch_le ? "le" : "gt") << '\n';
    }
    rep << "max_abs_delta " << worst << '\n';
    rep << "points_where_formula_exceeds_bound " << above_bound << " of " << rows.size() << '\n';
    log << "ergotropy-sweep: " << rows.size() << " grid points, max |formula - oracle| = " << worst << "\n";
}

inline void run_qudit_defence(const ExperimentConfig &c, std::ostream &log) {
    const auto spec = QuditSpec::from_p0_p2(0.5, 0.0, 1.0, 4.0);
    const auto ascent = entropy_ascent_two_qudits(spec, RVector::Zero(kLadderParamCount), c.seed);
    const auto defence = perfect_defence_check(5, c.samples.value_or(100), c.seed);
    const auto control = perfect_defence_check(basis_state(Register::uniform(2, 5), std::vector<std::size_t>{0, 0}),
                                               defence_hamiltonian(5), 0, c.samples.value_or(100), c.seed);
    CsvWriter csv(c.out_dir / "qudit-defence.csv", "qudit-defence", c.seed, {"metric", "value"});
    csv.row("ascent_entropy_base5", ascent.entropy);
    csv.row("ascent_best_start", ascent.best_start);
    csv.row("defence_trials", defence.trials);
    csv.row("defence_max_abs_energy_change", defence.max_abs_change);
    csv.row("control_max_abs_energy_change", control.max_abs_change);
    log << std::setprecision(10) << "qudit-defence: ladder entropy " << ascent.entropy
        << ", |psi+_5> max energy change " << defence.max_abs_change << "\n";
}

inline void run_appendix_n3(const ExperimentConfig &c, std::ostream &log) {
    CsvWriter csv(c.out_dir / "appendix-n3.csv", "appendix-n3", c.seed,
                  {"lambda1", "energy", "law", "energy_per_site", "partition"});
    for (int i = 0; i <= 10; ++i) {
        const double l1 = 0.5 + 0.05 * i;
        const auto o = best_response_energy(appendix_a_state(l1), 2, Objective::minimize);
        csv.row(l1, o.energy, -4.0 * l1 + 1.0, o.per_site_energy, o.partition_chosen.to_string());
    }
    log << "appendix-n3: 11 lambda1 points\n";
}

inline void run_closed_form_check(const ExperimentConfig &c, std::ostream &log) {
    CsvWriter csv(c.out_dir / "closed-form-check.csv", "closed-form-check", c.seed,
                  {"N_B", "M", "N", "closed_form", "engine", "abs_diff", "per_site"});
    double worst = 0.0;
    auto emit = [&](std::size_t nb, std::size_t m) {
        const auto built = bell_pair_construction(nb, m);
        const double formula = closed_form_min_energy(nb, m);
        const double engine = best_response_energy(built.state, nb, Objective::minimize, built.partition).energy;
        worst = std::max(worst, std::abs(formula - engine));
        csv.row(nb, m, nb + m, formula, engine, std::abs(formula - engine), engine / double(nb + m));
    };
    for (std::size_t nb = 1; nb <= 5; ++nb) {
        for (std::size_t m = 0; m < nb; ++m) emit(nb, m);
    }
    for (std::size_t nb = 6; nb <= 7; ++nb) emit(nb, 1); // minimal advantage up to N = 8
    log << "closed-form-check: max |formula - engine| = " << worst << "\n";
}

inline void run_scenario_ivc(const ExperimentConfig &c, std::ostream &log) {
    const PureState psi = ghz3_bell_state();
    const auto optimized = best_response_energy(psi, 2, Objective::minimize);
    const BlockPartition fixed({{2, 3}, {1, 4}, {0}}, 5, 2);
    const auto forced = best_response_energy(psi, 2, Objective::minimize, fixed);
    CsvWriter csv(c.out_dir / "scenario-ivc.csv", "scenario-ivc", c.seed,
                  {"mode", "partition", "energy", "energy_per_site"});
    csv.row("optimized", optimized.partition_chosen.to_string(), optimized.energy, optimized.per_site_energy);
    csv.row("fixed", forced.partition_chosen.to_string(), forced.energy, forced.per_site_energy);
    log << "scenario-ivc: optimized " << optimized.per_site_energy << " per site via "
        << optimized.partition_chosen.to_string() << "\n";
}

inline void run_play(const ExperimentConfig &c, std::ostream &log) {
    if (!c.moves) throw UsageError("play requires --moves <file>");
    std::ifstream in(*c.moves);
    if (!in) throw UsageError("cannot read move file " + *c.moves);
    const MoveScript script = parse_move_script(in);
    GameConfig cfg;
    cfg.n = c.n.value_or(2);
    cfg.n_a = c.na.value_or(cfg.n);
    cfg.n_b = c.nb.value_or(1);
    cfg.order = script.order;
    if (cfg.n > 12) throw GuardViolation("--n exceeds the 2^12 dimension cap");
    const auto result = play_sequential_game(cfg, script.a, script.b);
    CsvWriter csv(c.out_dir / "play.csv", "play", c.seed,
                  {"N", "N_A", "N_B", "order", "after_first_move", "energy", "energy_per_site", "second_mover_partition"});
    csv.row(cfg.n, cfg.n_a, cfg.n_b, cfg.order == MoveOrder::a_first ? "AB" : "BA", result.after_first_move,
            result.outcome.energy, result.outcome.per_site_energy, result.outcome.partition_chosen.to_string());
    log << "play: final energy " << result.outcome.energy << "\n";
}

inline void run_classical(const ExperimentConfig &c, std::ostream &log) {
    const std::size_t n_max = c.n.value_or(8);
    if (n_max > 12) throw GuardViolation("--n exceeds classical guard N <= 12");
    CsvWriter csv(c.out_dir / "classical-demo.csv", "classical-demo", c.seed,
                  {"N", "second_mover", "value", "second_mover_always_extreme"});
    for (std::size_t n = 1; n <= n_max; ++n) {
        for (MoveOrder order : {MoveOrder::a_first, MoveOrder::b_first}) {
            const auto o = classical_baseline(n, order);
            csv.row(n, order == MoveOrder::a_first ? "B" : "A", o.energy, o.second_mover_always_extreme);
        }
    }
    log << "classical-demo: N = 1.." << n_max << "\n";
}

using ExperimentFn = std::function<void(const ExperimentConfig &, std::ostream &)>;

inline const std::map<std::string, ExperimentFn> &experiment_table() {
    static const std::map<std::string, ExperimentFn> table{
        {"fig2a", run_fig2a},
        {"fig2b", [](const ExperimentConfig &c, std::ostream &l) { run_fig2bc(c, l, true); }},
        {"fig2c", [](const ExperimentConfig &c, std::ostream &l) { run_fig2bc(c, l, false); }},
        {"haar-stats", run_haar},
        {"ergotropy-sweep", run_ergotropy},
        {"qudit-defence", run_qudit_defence},
        {"ame-search", run_ame_search},
        {"appendix-n3", run_appendix_n3},
        {"closed-form-check", run_closed_form_check},
        {"scenario-ivc", run_scenario_ivc},
        {"play", run_play},
        {"classical-demo", run_classical},
    };
    return table;
}

} // namespace detail

inline std::vector<std::string> experiment_names() {
    std::vector<std::string> names;
    for (const auto &[name, fn] : detail::experiment_table()) names.push_back(name);
    return names;
}

/// Runs one experiment and maps failures onto exit codes: 2 for usage
/// errors (unknown experiment, malformed input), 3 for guard violations.
inline int run_experiment(const ExperimentConfig &config, std::ostream &log, std::ostream &err) {
    const auto &table = detail::experiment_table();
    const auto it = table.find(config.experiment);
    if (it == table.end()) {
        err << "unknown experiment '" << config.experiment << "'; expected one of:";
        for (const auto &name : experiment_names()) err << ' ' << name;
        err << '\n';
        return kExitUsage;
    }
    try {
        std::filesystem::create_directories(config.out_dir);
        it->second(config, log);
    } catch (const GuardViolation &e) {
        err << "guard violation: " << e.what() << '\n';
        return kExitGuard;
    } catch (const UsageError &e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MoveParseError &e) {
        err << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IllegalMove &e) {
        err << "illegal move: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace uqgame
