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
 * The sequential two-player game on a register. Player A maximizes the
 * energy of a local diagonal Hamiltonian, player B minimizes it. A move is
 * one unitary per block of a partition whose blocks fit the mover's
 * capability. The responder's optimum is computed from the block marginals:
 * a block unitary can only rearrange the eigenvalues of its marginal, so the
 * best it can do is the passive (minimizer) or anti-passive (maximizer)
 * arrangement of that spectrum against the block's energy levels.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/errors.hpp"
#include "uqgame/partitions.hpp"

namespace uqgame {

enum class Objective { minimize, maximize };
enum class MoveOrder { a_first, b_first };

/// Sorted energy levels of a block (degeneracies expanded).
struct SpectrumTable {
    std::vector<double> energies; // nondecreasing
    std::size_t block_size = 0;

    /// Levels n - 2k with multiplicity C(n, k) for an n-qubit sigma^z block.
    static SpectrumTable qubits(std::size_t n) {
        SpectrumTable t;
        t.block_size = n;
        for (std::size_t k = n + 1; k-- > 0;) {
            // C(n, k) computed incrementally to stay exact for the sizes used here
            std::uint64_t c = 1;
            for (std::size_t j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
            t.energies.insert(t.energies.end(), c, double(n) - 2.0 * double(k));
        }
        return t;
    }

    static SpectrumTable for_block(const LocalHamiltonian &h, const Register &reg,
                                   std::span<const std::size_t> sites) {
        SpectrumTable t;
        t.block_size = sites.size();
        t.energies = h.block_energies(reg, sites);
        std::sort(t.energies.begin(), t.energies.end());
        return t;
    }
};

namespace detail {

inline std::vector<double> checked_descending(std::span<const double> eigenvalues,
                                              const SpectrumTable &table) {
    std::vector<double> l(eigenvalues.begin(), eigenvalues.end());
    std::sort(l.begin(), l.end(), std::greater<>());
    const double total = std::accumulate(l.begin(), l.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::invalid_argument("passive energy: eigenvalues must sum to 1");
    }
    const auto nonzero = static_cast<std::size_t>(
        std::count_if(l.begin(), l.end(), [](double x) { return std::abs(x) > kEigenCutoff; }));
    if (nonzero > table.energies.size()) {
        throw std::invalid_argument("passive energy: more nonzero eigenvalues than energy levels");
    }
    l.resize(std::min(l.size(), table.energies.size()));
    return l;
}

} // namespace detail

/// Lowest block energy reachable by a unitary: eigenvalues in decreasing
/// order paired with energies in increasing order.
inline double passive_energy(std::span<const double> eigenvalues, const SpectrumTable &table) {
    const auto l = detail::checked_descending(eigenvalues, table);
    double e = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) e += l[i] * table.energies[i];
    return e;
}

/// Highest block energy reachable by a unitary.
inline double antipassive_energy(std::span<const double> eigenvalues, const SpectrumTable &table) {
    const auto l = detail::checked_descending(eigenvalues, table);
    const std::size_t n = table.energies.size();
    double e = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) e += l[i] * table.energies[n - 1 - i];
    return e;
}

inline double passive_energy(const SchmidtSpectrum &s, const SpectrumTable &table) {
    return passive_energy(s.eigenvalues, table);
}

inline double antipassive_energy(const SchmidtSpectrum &s, const SpectrumTable &table) {
    return antipassive_energy(s.eigenvalues, table);
}

/// Unitary mapping the eigenvectors of `reduced` (largest eigenvalue first)
/// onto block basis states ordered by energy (lowest first for minimize,
/// highest first for maximize). Ties keep index order on both sides.
inline CMatrix passivizing_unitary(const CMatrix &reduced, std::span<const double> block_energies,
                                   Objective objective) {
    const auto dim = reduced.rows();
    if (static_cast<std::size_t>(dim) != block_energies.size()) {
        throw std::invalid_argument("passivizing_unitary: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(reduced);
    std::vector<Eigen::Index> by_weight(static_cast<std::size_t>(dim));
    std::iota(by_weight.begin(), by_weight.end(), 0);
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    std::vector<Eigen::Index> by_energy(static_cast<std::size_t>(dim));
    std::iota(by_energy.begin(), by_energy.end(), 0);
    std::stable_sort(by_energy.begin(), by_energy.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ea = block_energies[static_cast<std::size_t>(a)];
        const double eb = block_energies[static_cast<std::size_t>(b)];
        return objective == Objective::minimize ? ea < eb : ea > eb;
    });
    CMatrix u = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < by_weight.size(); ++i) {
        u.row(by_energy[i]) = solver.eigenvectors().col(by_weight[i]).adjoint();
    }
    return u;
}

struct GameOutcome {
    double energy = 0.0;
    double per_site_energy = 0.0;
    BlockPartition partition_chosen;
    std::vector<BlockUnitary> responder_unitaries;
};

namespace detail {

template <class State>
double block_response(const State &state, const LocalHamiltonian &h, const Sites &block,
                      Objective objective) {
    const auto spectrum = hermitian_eigenvalues(partial_trace(state, block).matrix());
    std::vector<double> clamped(spectrum);
    for (double &x : clamped) x = std::max(x, 0.0);
    const auto table = SpectrumTable::for_block(h, state.reg(), block);
    return objective == Objective::minimize ? passive_energy(clamped, table)
                                            : antipassive_energy(clamped, table);
}

inline std::uint32_t block_mask(const Sites &block) {
    std::uint32_t m = 0;
    for (std::size_t s : block) m |= std::uint32_t{1} << s;
    return m;
}

} // namespace detail

/// Optimal response of a player of capability `max_block`. With `fixed`
/// set, only that partition is evaluated; otherwise every legal partition
/// is, and the lexicographically smallest optimum is reported. With
/// `synthesize`, one achieving unitary per block is attached.
template <class State>
GameOutcome best_response_energy(const State &state, const LocalHamiltonian &h, std::size_t max_block,
                                 Objective objective,
                                 const std::optional<BlockPartition> &fixed = std::nullopt,
                                 bool synthesize = false) {
    const std::size_t n = state.reg().size();
    h.check_register(state.reg());
    if (max_block == 0 || max_block > n) {
        throw std::invalid_argument("best_response_energy: max_block must be in [1, N]");
    }

    std::vector<BlockPartition> candidates;
    if (fixed) {
        if (fixed->n_sites() != n) throw std::invalid_argument("best_response_energy: partition size mismatch");
        for (const auto &b : fixed->blocks()) {
            if (b.size() > max_block) {
                throw IllegalMove("best_response_energy: block exceeds capability " + std::to_string(max_block));
            }
        }
        candidates.push_back(*fixed);
    } else {
        candidates = enumerate_partitions(n, max_block);
    }

    std::map<std::uint32_t, double> cache;
    auto block_value = [&](const Sites &block) {
        const auto key = detail::block_mask(block);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double v = detail::block_response(state, h, block, objective);
        cache.emplace(key, v);
        return v;
    };

    const double sign = objective == Objective::minimize ? 1.0 : -1.0;
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double total = 0.0;
        for (const auto &b : candidates[c].blocks()) total += block_value(b);
        if (c == 0 || sign * total < sign * best_value - 1e-12) {
            best = c;
            best_value = total;
        }
    }

    GameOutcome out{best_value, best_value / double(n), candidates[best], {}};
    if (synthesize) {
        for (const auto &b : out.partition_chosen.blocks()) {
            const auto reduced = partial_trace(state, b);
            const auto energies = h.block_energies(state.reg(), b);
            out.responder_unitaries.emplace_back(b, passivizing_unitary(reduced.matrix(), energies, objective));
        }
    }
    return out;
}

template <class State>
GameOutcome best_response_energy(const State &state, std::size_t max_block, Objective objective,
                                 const std::optional<BlockPartition> &fixed = std::nullopt,
                                 bool synthesize = false) {
    return best_response_energy(state, LocalHamiltonian::pauli_z(state.reg().size()), max_block, objective,
                                fixed, synthesize);
}

/// Lowest energy B can reach against an absolutely maximally entangled
/// defence, evaluated as the Iverson-bracket sum: the bottom 2^M levels of
/// the N_B-qubit block, each occupied with weight 1/2^M. Returns the total
/// block energy; zero once M >= N_B (maximally mixed marginal).
inline double closed_form_min_energy(std::size_t n_b, std::size_t m) {
    if (n_b == 0) throw std::invalid_argument("closed_form_min_energy: N_B must be >= 1");
    if (n_b > 24) throw GuardViolation("closed_form_min_energy: N_B exceeds guard of 24");
    if (m >= n_b) return 0.0;

    // cumulative[k] = sum_{l <= k} C(N_B, l); cumulative[-1] = 0
    std::vector<std::uint64_t> cumulative(n_b + 1);
    std::uint64_t c = 1, acc = 0;
    for (std::size_t k = 0; k <= n_b; ++k) {
        acc += c;
        cumulative[k] = acc;
        c = c * (n_b - k) / (k + 1);
    }
    const std::uint64_t levels = std::uint64_t{1} << n_b;
    const std::uint64_t occupied = std::uint64_t{1} << m;
    const double weight = 1.0 / double(occupied);

    double sum = 0.0;
    for (std::uint64_t i = 1; i <= levels; ++i) {
        const double u = i <= occupied ? weight : 0.0;
        if (u == 0.0) continue; // every later term vanishes too
        for (std::size_t k = 0; k <= n_b; ++k) {
            const std::uint64_t lower = k == 0 ? 0 : cumulative[k - 1];
            const double v = (lower < i && i <= cumulative[k]) ? 1.0 : 0.0;
            sum += (double(n_b) - 2.0 * double(k)) * v * u;
        }
    }
    return -sum;
}

// ---------------------------------------------------------------------------
// Sequential play

struct GameConfig {
    std::size_t n = 2;
    std::size_t n_a = 2;
    std::size_t n_b = 1;
    MoveOrder order = MoveOrder::a_first;
    std::size_t local_dim = 2;

    void validate() const {
        if (!(1 <= n_b && n_b <= n_a && n_a <= n)) {
            throw std::invalid_argument("GameConfig: require 1 <= N_B <= N_A <= N");
        }
        if (local_dim < 2) throw std::invalid_argument("GameConfig: local dimension must be >= 2");
    }
};

struct BestResponse {};
using Strategy = std::variant<std::vector<BlockUnitary>, BestResponse>;

struct PlayResult {
    GameOutcome outcome;         // final energy and the second mover's move
    double after_first_move = 0; // energy between the two moves
    PureState final_state;
};

namespace detail {

inline BlockPartition move_partition(std::span<const BlockUnitary> move, std::size_t n, std::size_t capability) {
    std::vector<Sites> blocks;
    std::vector<bool> covered(n, false);
    for (const auto &u : move) {
        if (u.sites().size() > capability) {
            throw IllegalMove("move acts on " + std::to_string(u.sites().size()) +
                              " sites but the player's capability is " + std::to_string(capability));
        }
        for (std::size_t s : u.sites()) {
            if (s >= n) throw std::out_of_range("move site out of range");
            if (covered[s]) throw IllegalMove("move blocks overlap at site " + std::to_string(s));
            covered[s] = true;
        }
        blocks.push_back(u.sites());
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!covered[s]) blocks.push_back({s});
    }
    return BlockPartition(std::move(blocks), n, capability);
}

} // namespace detail

/// Applies the first mover's move, then the second mover's. The built-in
/// best-response policy solves `best_response_energy` and applies the
/// synthesized passivizing (or anti-passivizing) unitaries.
inline PlayResult play_sequential_game(const GameConfig &config, const Strategy &strategy_a,
                                       const Strategy &strategy_b, const PureState &initial,
                                       const LocalHamiltonian &h) {
    config.validate();
    if (initial.reg().size() != config.n) throw std::invalid_argument("play: register size differs from N");
    h.check_register(initial.reg());

    struct Mover {
        const Strategy *strategy;
        std::size_t capability;
        Objective objective;
    };
    const Mover a{&strategy_a, config.n_a, Objective::maximize};
    const Mover b{&strategy_b, config.n_b, Objective::minimize};
    const Mover &first = config.order == MoveOrder::a_first ? a : b;
    const Mover &second = config.order == MoveOrder::a_first ? b : a;

    auto play = [&](const Mover &m, const PureState &state) -> std::pair<PureState, GameOutcome> {
        if (const auto *move = std::get_if<std::vector<BlockUnitary>>(m.strategy)) {
            auto partition = detail::move_partition(*move, config.n, m.capability);
            PureState next = apply_all(state, std::span<const BlockUnitary>(*move));
            const double e = energy_expectation(next, h);
            return {std::move(next), GameOutcome{e, e / double(config.n), std::move(partition), *move}};
        }
        GameOutcome o = best_response_energy(state, h, m.capability, m.objective, std::nullopt, true);
        PureState next = apply_all(state, std::span<const BlockUnitary>(o.responder_unitaries));
        o.energy = energy_expectation(next, h);
        o.per_site_energy = o.energy / double(config.n);
        return {std::move(next), std::move(o)};
    };

    auto [mid, first_outcome] = play(first, initial);
    auto [last, second_outcome] = play(second, mid);
    return PlayResult{std::move(second_outcome), first_outcome.energy, std::move(last)};
}

inline PlayResult play_sequential_game(const GameConfig &config, const Strategy &strategy_a,
                                       const Strategy &strategy_b) {
    return play_sequential_game(config, strategy_a, strategy_b, product_plus_state(config.n),
                                LocalHamiltonian::pauli_z(config.n));
}

// ---------------------------------------------------------------------------
// Classical comparison

struct ClassicalOutcome {
    int energy = 0;                    // value of the game under optimal play
    bool second_mover_always_extreme = false; // reached its extreme for every first move
    std::size_t first_moves_checked = 0;
};

/// Bit-string version of the game: each move flips any subset of bits.
/// Bit 0 carries energy +1, bit 1 carries -1. Exhaustive over both moves.
inline ClassicalOutcome classical_baseline(std::size_t n, MoveOrder order, std::uint32_t initial_bits = 0) {
    if (n == 0) throw std::invalid_argument("classical_baseline: n must be >= 1");
    if (n > 12) throw GuardViolation("classical_baseline: n exceeds guard of 12");
    const std::uint32_t all = (std::uint32_t{1} << n) - 1;
    if ((initial_bits & ~all) != 0) throw std::invalid_argument("classical_baseline: initial bits out of range");
    auto energy = [n](std::uint32_t bits) { return int(n) - 2 * std::popcount(bits); };

    // A maximizes, B minimizes
    const bool second_minimizes = order == MoveOrder::a_first;
    const int second_extreme = second_minimizes ? -int(n) : int(n);

    ClassicalOutcome out;
    out.second_mover_always_extreme = true;
    bool first = true;
    for (std::uint32_t f = 0; f <= all; ++f) {
        int reply = 0;
        bool any = false;
        for (std::uint32_t g = 0; g <= all; ++g) {
            const int e = energy(initial_bits ^ f ^ g);
            if (!any || (second_minimizes ? e < reply : e > reply)) reply = e;
            any = true;
        }
        if (reply != second_extreme) out.second_mover_always_extreme = false;
        if (first || (second_minimizes ? reply > out.energy : reply < out.energy)) out.energy = reply;
        first = false;
        ++out.first_moves_checked;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario builders

/// Unitary U with U|from> = |to>, both normalized vectors of equal size.
inline CMatrix state_preparation_unitary(const CVector &from, const CVector &to) {
    if (from.size() != to.size()) throw std::invalid_argument("state_preparation_unitary: size mismatch");
    auto completed_basis = [](const CVector &v) {
        const CVector unit = v.normalized();
        const CMatrix column = unit;
        Eigen::HouseholderQR<CMatrix> qr(column);
        CMatrix q = qr.householderQ() * CMatrix::Identity(unit.size(), unit.size());
        // first column equals c * unit with |c| = 1; rotate it onto unit
        const Complex c = unit.dot(q.col(0));
        q.col(0) *= std::conj(c);
        return q;
    };
    return completed_basis(to) * completed_basis(from).adjoint();
}

/// sqrt(l1)|000> + sqrt(1 - l1)|111>: Schmidt spectrum (l1, 1 - l1) on every 2|1 cut.
inline PureState appendix_a_state(double lambda1) {
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) throw std::invalid_argument("appendix_a_state: lambda1 outside [0, 1]");
    CVector v = CVector::Zero(8);
    v(0) = std::sqrt(lambda1);
    v(7) = std::sqrt(1.0 - lambda1);
    return PureState(Register::qubits(3), std::move(v));
}

/// GHZ on sites 0..2 and a Bell pair on sites 3, 4.
inline PureState ghz3_bell_state() { return tensor(ghz_state(3), bell_state()); }

struct BellPairConstruction {
    PureState state;
    BlockPartition partition; // the N_B block plus singletons
};

/// N_B + M qubits: block sites 0..N_B-1, of which the first M are Bell-paired
/// with the M sites outside the block; the rest of the block is |0>. The
/// block marginal is uniform with rank 2^M.
inline BellPairConstruction bell_pair_construction(std::size_t n_b, std::size_t m) {
    if (n_b == 0 || m > n_b) throw std::invalid_argument("bell_pair_construction: need 1 <= N_B and M <= N_B");
    const std::size_t n = n_b + m;
    const Register reg = Register::qubits(n);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(reg.total_dimension()));
    const std::size_t pairs = std::size_t{1} << m;
    const double amp = 1.0 / std::sqrt(double(pairs));
    for (std::size_t x = 0; x < pairs; ++x) {
        std::vector<std::size_t> digits(n, 0);
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t bit = (x >> (m - 1 - j)) & 1U;
            digits[j] = bit;
            digits[n_b + j] = bit;
        }
        std::size_t index = 0;
        for (std::size_t s = 0; s < n; ++s) index = index * 2 + digits[s];
        v(static_cast<Eigen::Index>(index)) = amp;
    }
    Sites block(n_b);
    std::iota(block.begin(), block.end(), 0);
    return {PureState(reg, std::move(v)), BlockPartition::block_plus_singletons(block, n, n_b)};
}

} // namespace uqgame
