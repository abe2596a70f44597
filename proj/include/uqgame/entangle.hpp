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
 * Search for pure qubit states that maximize the mean entanglement entropy
 * of their floor(N/2)-site marginals. Such states are absolutely maximally
 * entangled (AME) when every marginal is maximally mixed; they are the
 * defensive states of the player who can entangle the whole register.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/game.hpp"
#include "uqgame/optimize.hpp"
#include "uqgame/rng.hpp"

namespace uqgame {

/// The subsystems averaged by the entropy loss: all k-site subsets with
/// k = floor(N/2), keeping one of each complementary pair when N is even
/// (the one containing site 0).
struct EntropyLossSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Sites> subsystems;
    double log_base = 2.0;

    static EntropyLossSpec for_qubits(std::size_t n, bool halve_complements = true) {
        if (n < 2) throw std::invalid_argument("EntropyLossSpec: need N >= 2");
        EntropyLossSpec spec;
        spec.n = n;
        spec.k = n / 2;
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(spec.k), true);
        do {
            Sites s;
            for (std::size_t i = 0; i < n; ++i) {
                if (pick[i]) s.push_back(i);
            }
            const bool drop = halve_complements && 2 * spec.k == n && s.front() != 0;
            if (!drop) spec.subsystems.push_back(std::move(s));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        return spec;
    }
};

/// Negative mean subsystem entropy; -k exactly for an AME state.
inline double mean_entropy_loss(const PureState &psi, const EntropyLossSpec &spec) {
    if (psi.reg().size() != spec.n) throw std::invalid_argument("mean_entropy_loss: register size mismatch");
    double total = 0.0;
    for (const auto &k : spec.subsystems) {
        total += von_neumann_entropy(partial_trace(psi, k), spec.log_base);
    }
    return -total / double(spec.subsystems.size());
}

inline double mean_entropy(const PureState &psi, const EntropyLossSpec &spec) {
    return -mean_entropy_loss(psi, spec);
}

namespace detail {

/// Mean subsystem entropy of x/|x| and its gradient with respect to the
/// real and imaginary parts of x, packed as a complex vector.
class MeanEntropyObjective {
  public:
    explicit MeanEntropyObjective(const EntropyLossSpec &spec)
        : spec_(spec), reg_(Register::qubits(spec.n)) {
        for (const auto &k : spec.subsystems) splits_.push_back(split_register(reg_, k));
    }

    [[nodiscard]] std::size_t dimension() const { return reg_.total_dimension(); }

    double operator()(const CVector &x, CVector *grad) const {
        const double norm = x.norm();
        const CVector psi = x / norm;
        const double ln_base = std::log(spec_.log_base);
        double total = 0.0;
        CVector g = CVector::Zero(psi.size());
        for (const auto &split : splits_) {
            const CMatrix a = gather(psi, split);
            const CMatrix rho = a * a.adjoint();
            Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho);
            const RVector &ev = solver.eigenvalues();
            RVector log_ev(ev.size());
            for (Eigen::Index i = 0; i < ev.size(); ++i) {
                const double l = ev(i);
                if (l > kEigenCutoff) total -= l * std::log(l) / ln_base;
                log_ev(i) = std::log(std::max(l, 1e-16));
            }
            if (grad) {
                // dS = -(2/ln b) Re <dA, log(rho) A>
                const CMatrix log_rho =
                    solver.eigenvectors() * log_ev.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
                const CMatrix ga = log_rho * a;
                for (std::size_t b = 0; b < split.block_dim; ++b) {
                    for (std::size_t r = 0; r < split.rest_dim; ++r) {
                        g(static_cast<Eigen::Index>(split.at(b, r))) -=
                            (2.0 / ln_base) * ga(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(r));
                    }
                }
            }
        }
        const double count = double(splits_.size());
        if (grad) {
            g /= count;
            // chain rule through psi = x / |x|
            const double radial = (psi.dot(g)).real();
            *grad = (g - radial * psi) / norm;
        }
        return total / count;
    }

  private:
    EntropyLossSpec spec_;
    Register reg_;
    std::vector<IndexSplit> splits_;
};

inline CVector unpack(const RVector &p) {
    const Eigen::Index d = p.size() / 2;
    CVector x(d);
    for (Eigen::Index i = 0; i < d; ++i) x(i) = Complex(p(2 * i), p(2 * i + 1));
    return x;
}

inline RVector pack(const CVector &x) {
    RVector p(2 * x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        p(2 * i) = x(i).real();
        p(2 * i + 1) = x(i).imag();
    }
    return p;
}

} // namespace detail

enum class AnsatzKind { generic, symmetric4 };

inline std::string to_string(AnsatzKind kind) {
    return kind == AnsatzKind::generic ? "generic" : "symmetric4";
}

inline AnsatzKind ansatz_from_string(const std::string &s) {
    if (s == "generic") return AnsatzKind::generic;
    if (s == "symmetric4") return AnsatzKind::symmetric4;
    throw std::invalid_argument("unknown ansatz kind '" + s + "'");
}

/// Unconstrained parametrization of a pure state: real and imaginary parts
/// of every amplitude, normalized on evaluation.
struct GenericStateAnsatz {
    std::size_t n = 0;

    [[nodiscard]] std::size_t parameter_count() const { return 2 * (std::size_t{1} << n); }

    [[nodiscard]] PureState state(const RVector &params) const {
        return PureState::normalized(Register::qubits(n), detail::unpack(params));
    }
};

/// Four-qubit ansatz whose amplitudes share one magnitude per Hamming-weight
/// class: a0 on {0000, 1111}, a1 on the weight-1 and weight-3 strings, a2 on
/// the weight-2 strings, each with its own phase.
struct SymmetricAnsatz4 {
    std::array<bool, 3> enabled{true, true, true};

    /// Basis index of the amplitude carrying phase theta_j.
    static constexpr std::array<std::size_t, 16> kBasisOrder{
        0b0000, 0b1111,                                         // a0
        0b0001, 0b0010, 0b0100, 0b1000, 0b0111, 0b1011, 0b1101, 0b1110, // a1
        0b0011, 0b0110, 0b1100, 0b0101, 0b1010, 0b1001};        // a2

    static constexpr std::size_t group_of(std::size_t j) { return j < 2 ? 0 : (j < 10 ? 1 : 2); }

    /// All seven nonzero (a0, a1, a2) flag patterns.
    static std::vector<SymmetricAnsatz4> all_flag_combinations() {
        std::vector<SymmetricAnsatz4> out;
        for (unsigned mask = 1; mask < 8; ++mask) {
            out.push_back(SymmetricAnsatz4{{(mask & 1U) != 0, (mask & 2U) != 0, (mask & 4U) != 0}});
        }
        return out;
    }

    [[nodiscard]] std::size_t enabled_groups() const {
        return std::size_t(enabled[0]) + std::size_t(enabled[1]) + std::size_t(enabled[2]);
    }

    /// 16 phases followed by one magnitude per enabled group.
    [[nodiscard]] std::size_t parameter_count() const { return 16 + enabled_groups(); }

    [[nodiscard]] CVector amplitudes(const RVector &params) const {
        std::array<double, 3> magnitude{0.0, 0.0, 0.0};
        Eigen::Index next = 16;
        for (std::size_t g = 0; g < 3; ++g) {
            if (enabled[g]) magnitude[g] = params(next++);
        }
        CVector v = CVector::Zero(16);
        for (std::size_t j = 0; j < 16; ++j) {
            v(static_cast<Eigen::Index>(kBasisOrder[j])) =
                magnitude[group_of(j)] * std::polar(1.0, params(static_cast<Eigen::Index>(j)));
        }
        return v;
    }

    [[nodiscard]] PureState state(const RVector &params) const {
        return PureState::normalized(Register::qubits(4), amplitudes(params));
    }
};

struct SearchOptions {
    std::size_t restarts = 32;
    std::uint64_t seed = 0;
    optimize::AscentOptions ascent{};
};

struct SearchResult {
    PureState state;
    double mean_entropy = 0.0;
    AnsatzKind ansatz = AnsatzKind::generic;
    std::size_t best_restart = 0;
    std::vector<double> restart_values; // achieved mean entropy per restart
};

namespace detail {

inline SearchResult search_generic(std::size_t n, const SearchOptions &opt) {
    const auto spec = EntropyLossSpec::for_qubits(n);
    const MeanEntropyObjective objective(spec);
    const optimize::ValueAndGradient f = [&](const RVector &p, RVector *grad) {
        CVector g;
        const double v = objective(unpack(p), grad ? &g : nullptr);
        if (grad) *grad = pack(g);
        return v;
    };
    std::optional<SearchResult> best;
    std::vector<double> values;
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        Rng rng = substream(opt.seed, r, n);
        std::normal_distribution<double> normal;
        RVector p0(static_cast<Eigen::Index>(2 * objective.dimension()));
        for (Eigen::Index i = 0; i < p0.size(); ++i) p0(i) = normal(rng);
        const auto res = optimize::lbfgs_ascent(f, p0, opt.ascent);
        values.push_back(res.value);
        if (!best || res.value > best->mean_entropy) {
            best = SearchResult{PureState::normalized(Register::qubits(n), unpack(res.x)), res.value,
                                AnsatzKind::generic, r, {}};
        }
    }
    best->restart_values = std::move(values);
    return std::move(*best);
}

inline SearchResult search_symmetric4(const SearchOptions &opt) {
    const auto spec = EntropyLossSpec::for_qubits(4);
    const MeanEntropyObjective objective(spec);
    std::optional<SearchResult> best;
    std::vector<double> values;
    std::size_t index = 0;
    for (const auto &ansatz : SymmetricAnsatz4::all_flag_combinations()) {
        const optimize::Value value = [&](const RVector &p) {
            return objective(ansatz.amplitudes(p), nullptr);
        };
        const auto f = optimize::with_difference_gradient(value);
        for (std::size_t r = 0; r < opt.restarts; ++r, ++index) {
            Rng rng = substream(opt.seed, index, 4000 + 4);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            std::uniform_real_distribution<double> magnitude(0.2, 1.0);
            RVector p0(static_cast<Eigen::Index>(ansatz.parameter_count()));
            for (Eigen::Index i = 0; i < 16; ++i) p0(i) = phase(rng);
            for (Eigen::Index i = 16; i < p0.size(); ++i) p0(i) = magnitude(rng);
            const auto res = optimize::lbfgs_ascent(f, p0, opt.ascent);
            values.push_back(res.value);
            if (!best || res.value > best->mean_entropy) {
                best = SearchResult{ansatz.state(res.x), res.value, AnsatzKind::symmetric4, index, {}};
            }
        }
    }
    best->restart_values = std::move(values);
    return std::move(*best);
}

} // namespace detail

inline constexpr std::size_t kSearchSiteGuard = 8;

/// Multi-start maximization of the mean floor(N/2)-site entropy. For the
/// symmetric four-qubit ansatz every flag pattern gets `restarts` starts.
/// Deterministic for a given seed; ties keep the earliest restart.
inline SearchResult search_max_entropy_state(std::size_t n, AnsatzKind kind, const SearchOptions &opt = {}) {
    if (n < 2) throw std::invalid_argument("search_max_entropy_state: need N >= 2");
    if (n > kSearchSiteGuard) {
        throw GuardViolation("search_max_entropy_state: N = " + std::to_string(n) + " exceeds guard N <= 8");
    }
    if (opt.restarts == 0) throw std::invalid_argument("search_max_entropy_state: need at least one restart");
    if (kind == AnsatzKind::symmetric4) {
        if (n != 4) throw std::invalid_argument("symmetric ansatz is defined for N = 4 only");
        return detail::search_symmetric4(opt);
    }
    return detail::search_generic(n, opt);
}

/// The ansatz used for the defensive state on N qubits.
inline AnsatzKind default_ansatz(std::size_t n) { return n == 4 ? AnsatzKind::symmetric4 : AnsatzKind::generic; }

// ---------------------------------------------------------------------------
// State cache
//
// Text file, one record per line:
//   N ansatz seed mean_entropy re_0 im_0 re_1 im_1 ... re_{2^N-1} im_{2^N-1}
// Lines starting with '#' are comments. Reals use 17 significant digits.

struct CachedState {
    std::size_t n = 0;
    AnsatzKind ansatz = AnsatzKind::generic;
    std::uint64_t seed = 0;
    double mean_entropy = 0.0;
    CVector amplitudes;
};

inline std::string format_cache_record(const CachedState &c) {
    std::ostringstream os;
    os << std::setprecision(17) << c.n << ' ' << to_string(c.ansatz) << ' ' << c.seed << ' ' << c.mean_entropy;
    for (Eigen::Index i = 0; i < c.amplitudes.size(); ++i) {
        os << ' ' << c.amplitudes(i).real() << ' ' << c.amplitudes(i).imag();
    }
    return os.str();
}

inline CachedState parse_cache_record(const std::string &line) {
    std::istringstream is(line);
    CachedState c;
    std::string kind;
    if (!(is >> c.n >> kind >> c.seed >> c.mean_entropy)) {
        throw std::runtime_error("state cache: malformed record header");
    }
    c.ansatz = ansatz_from_string(kind);
    if (c.n < 1 || c.n > kSearchSiteGuard) throw std::runtime_error("state cache: N out of range");
    const std::size_t dim = std::size_t{1} << c.n;
    c.amplitudes.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        double re = 0, im = 0;
        if (!(is >> re >> im)) throw std::runtime_error("state cache: truncated amplitude list");
        c.amplitudes(static_cast<Eigen::Index>(i)) = Complex(re, im);
    }
    std::string extra;
    if (is >> extra) throw std::runtime_error("state cache: trailing data in record");
    return c;
}

class StateCache {
  public:
    StateCache() = default;
    explicit StateCache(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#') continue;
            records_.push_back(parse_cache_record(line));
        }
    }

    [[nodiscard]] std::optional<CachedState> find(std::size_t n, AnsatzKind kind, std::uint64_t seed) const {
        for (const auto &r : records_) {
            if (r.n == n && r.ansatz == kind && r.seed == seed) return r;
        }
        return std::nullopt;
    }

    void insert(CachedState record) {
        std::erase_if(records_, [&](const CachedState &r) {
            return r.n == record.n && r.ansatz == record.ansatz && r.seed == record.seed;
        });
        records_.push_back(std::move(record));
        std::sort(records_.begin(), records_.end(), [](const CachedState &a, const CachedState &b) {
            return std::tie(a.n, a.ansatz, a.seed) < std::tie(b.n, b.ansatz, b.seed);
        });
    }

    void save() const {
        if (path_.empty()) return;
        std::ofstream out(path_);
        if (!out) throw std::runtime_error("state cache: cannot write " + path_);
        out << "# uqgame state cache v1: N ansatz seed mean_entropy then (re im) per amplitude\n";
        for (const auto &r : records_) out << format_cache_record(r) << '\n';
    }

    [[nodiscard]] const std::vector<CachedState> &records() const { return records_; }

  private:
    std::string path_;
    std::vector<CachedState> records_;
};

/// Searched state for N, reusing `cache` when it holds a matching record.
inline PureState defensive_state(std::size_t n, const SearchOptions &opt, StateCache *cache = nullptr,
                                 double *achieved = nullptr) {
    const AnsatzKind kind = default_ansatz(n);
    if (cache) {
        if (auto hit = cache->find(n, kind, opt.seed)) {
            if (achieved) *achieved = hit->mean_entropy;
            return PureState(Register::qubits(n), hit->amplitudes);
        }
    }
    auto found = search_max_entropy_state(n, kind, opt);
    if (achieved) *achieved = found.mean_entropy;
    if (cache) cache->insert(CachedState{n, kind, opt.seed, found.mean_entropy, found.state.amplitudes()});
    return std::move(found.state);
}

struct MinEnergyRow {
    std::size_t n = 0;
    std::size_t n_b = 0;
    double mean_entropy = 0.0;
    double energy = 0.0;
    double per_site_energy = 0.0;
    std::string partition;
};

/// For every N in [n_min, n_max] and 1 <= N_B <= N: B's partition-optimized
/// minimum energy against the searched maximum-entropy state of A.
inline std::vector<MinEnergyRow> fig2bc_min_energies(std::size_t n_min, std::size_t n_max, const SearchOptions &opt,
                                                     StateCache *cache = nullptr) {
    if (n_min < 2 || n_min > n_max) throw std::invalid_argument("fig2bc_min_energies: need 2 <= n_min <= n_max");
    if (n_max > kSearchSiteGuard) throw GuardViolation("fig2bc_min_energies: N exceeds guard N <= 8");
    std::vector<MinEnergyRow> rows;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        double achieved = 0.0;
        const PureState psi = defensive_state(n, opt, cache, &achieved);
        for (std::size_t nb = 1; nb <= n; ++nb) {
            const auto o = best_response_energy(psi, nb, Objective::minimize);
            rows.push_back({n, nb, achieved, o.energy, o.per_site_energy, o.partition_chosen.to_string()});
        }
    }
    return rows;
}

} // namespace uqgame
