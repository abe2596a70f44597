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
 * Text format for scripted games. One move line per block:
 *
 *     <player> <sites> <unitary>
 *     <player> best
 *
 * `player` is A or B; `sites` is a comma-separated list of 0-based site
 * indices (no spaces); `unitary` is one of
 *
 *     identity            identity on the block
 *     bell | ghz          maps the |+...+> product state of the block to the
 *                         Bell (2 sites) or GHZ state
 *     haar:<seed>         Haar-random unitary drawn from <seed>
 *     matrix re im ...    row-major entries, d*d complex numbers
 *
 * `best` selects the built-in best-response policy for the whole move.
 * Consecutive lines of one player form that player's move; whoever appears
 * first moves first. Blank lines and lines starting with '#' are ignored.
 */
#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/game.hpp"
#include "uqgame/haar.hpp"

namespace uqgame {

class MoveParseError : public std::runtime_error {
  public:
    MoveParseError(std::size_t line, const std::string &what)
        : std::runtime_error("move file line " + std::to_string(line) + ": " + what) {}
};

struct MoveScript {
    MoveOrder order = MoveOrder::a_first;
    Strategy a = BestResponse{};
    Strategy b = BestResponse{};
};

namespace detail {

inline Sites parse_sites(const std::string &token, std::size_t line) {
    Sites sites;
    std::stringstream ss(token);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            sites.push_back(v);
        } catch (const std::logic_error &) {
            throw MoveParseError(line, "bad site list '" + token + "'");
        }
    }
    if (sites.empty()) throw MoveParseError(line, "empty site list");
    return sites;
}

inline CMatrix named_unitary(const std::string &name, std::istream &rest, std::size_t n_sites, std::size_t line) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_sites);
    if (name == "identity") return CMatrix::Identity(dim, dim);
    if (name == "bell" || name == "ghz") {
        if (name == "bell" && n_sites != 2) throw MoveParseError(line, "bell needs exactly 2 sites");
        if (n_sites < 2) throw MoveParseError(line, "ghz needs at least 2 sites");
        return state_preparation_unitary(product_plus_state(n_sites).amplitudes(), ghz_state(n_sites).amplitudes());
    }
    if (name.rfind("haar:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(name.substr(5));
        } catch (const std::logic_error &) {
            throw MoveParseError(line, "bad haar seed in '" + name + "'");
        }
        Rng rng = substream(seed, 0, 77);
        return sample_haar_unitary(static_cast<std::size_t>(dim), rng);
    }
    if (name == "matrix") {
        CMatrix m(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                double re = 0, im = 0;
                if (!(rest >> re >> im)) throw MoveParseError(line, "matrix literal needs d*d complex entries");
                m(i, j) = Complex(re, im);
            }
        }
        std::string extra;
        if (rest >> extra) throw MoveParseError(line, "too many matrix entries");
        return m;
    }
    throw MoveParseError(line, "unknown unitary '" + name + "'");
}

} // namespace detail

/// Parses a move script for qubit registers.
inline MoveScript parse_move_script(std::istream &in) {
    struct Group {
        char player;
        bool best = false;
        std::vector<BlockUnitary> blocks;
    };
    std::vector<Group> groups;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream line(raw);
        std::string player;
        if (!(line >> player) || player.front() == '#') continue;
        if (player != "A" && player != "B") throw MoveParseError(line_no, "player must be A or B");
        std::string what;
        if (!(line >> what)) throw MoveParseError(line_no, "missing site list or 'best'");

        if (groups.empty() || groups.back().player != player[0]) {
            for (const auto &g : groups) {
                if (g.player == player[0]) throw MoveParseError(line_no, "player " + player + " already moved");
            }
            groups.push_back({player[0], false, {}});
        }
        Group &g = groups.back();
        if (what == "best") {
            if (!g.blocks.empty() || g.best) throw MoveParseError(line_no, "'best' must be the player's only line");
            g.best = true;
            continue;
        }
        if (g.best) throw MoveParseError(line_no, "'best' must be the player's only line");
        Sites sites = detail::parse_sites(what, line_no);
        std::string name;
        if (!(line >> name)) throw MoveParseError(line_no, "missing unitary");
        CMatrix u = detail::named_unitary(name, line, sites.size(), line_no);
        try {
            g.blocks.emplace_back(std::move(sites), std::move(u));
        } catch (const std::invalid_argument &e) {
            throw MoveParseError(line_no, e.what());
        }
    }
    if (groups.size() != 2) throw MoveParseError(line_no, "expected one move for each of A and B");

    MoveScript script;
    script.order = groups.front().player == 'A' ? MoveOrder::a_first : MoveOrder::b_first;
    for (auto &g : groups) {
        Strategy s = g.best ? Strategy{BestResponse{}} : Strategy{std::move(g.blocks)};
        (g.player == 'A' ? script.a : script.b) = std::move(s);
    }
    return script;
}

} // namespace uqgame
