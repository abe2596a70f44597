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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "uqgame/experiments.hpp"

int main(int argc, char **argv) {
    CLI::App app{"uqgame: experiments for the sequential unitary quantum game"};
    app.allow_windows_style_options(false);

    uqgame::ExperimentConfig cfg;
    std::string out = ".";
    std::size_t samples = 0, n = 0, na = 0, nb = 0, restarts = 0;
    std::string moves, cache;

    std::string names;
    for (const auto &name : uqgame::experiment_names()) names += (names.empty() ? "" : ", ") + name;
    app.add_option("experiment", cfg.experiment, "Experiment to run: " + names)->required();
    app.add_option("--seed", cfg.seed, "Random seed (default 0)");
    app.add_option("--out", out, "Output directory (default .)");
    auto *o_samples = app.add_option("--samples", samples, "Sample count / grid points / defence trials");
    auto *o_n = app.add_option("--n", n, "Register size or largest N");
    auto *o_na = app.add_option("--na", na, "Player A capability (play)");
    auto *o_nb = app.add_option("--nb", nb, "Player B capability or N_B filter");
    auto *o_restarts = app.add_option("--restarts", restarts, "Optimizer restarts (default 32)");
    auto *o_moves = app.add_option("--moves", moves, "Move file for 'play'");
    auto *o_cache = app.add_option("--cache", cache, "State cache file (default <out>/state-cache.txt)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return uqgame::kExitUsage;
    }

    cfg.out_dir = out;
    if (*o_samples) cfg.samples = samples;
    if (*o_n) cfg.n = n;
    if (*o_na) cfg.na = na;
    if (*o_nb) cfg.nb = nb;
    if (*o_restarts) cfg.restarts = restarts;
    if (*o_moves) cfg.moves = moves;
    if (*o_cache) cfg.cache = cache;

    const int status = uqgame::run_experiment(cfg, std::cout, std::cerr);
    if (status == uqgame::kExitUsage) std::cerr << app.help();
    return status;
}
