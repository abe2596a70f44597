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
 * Mixed five-level registers: maximum energy reachable by single-site and
 * two-site unitaries from a product of diagonal states, the entropy-raising
 * ladder of symmetric two-level unitaries, and the |psi+> perfect defence.
 *
 * Site spectrum diag(p2, p1, p0, p1, p2) and Hamiltonian
 * diag(E2, E1, 0, -E1, -E2) share the level order.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/haar.hpp"
#include "uqgame/optimize.hpp"
#include "uqgame/rng.hpp"

namespace uqgame {

struct QuditSpec {
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double e1 = 1.0;
    double e2 = 4.0;
    bool degenerate = false; // some ordering inequality holds with equality

    static QuditSpec make(double p0, double p1, double p2, double e1, double e2) {
        if (std::abs(p0 + 2.0 * p1 + 2.0 * p2 - 1.0) > 1e-12) {
            throw std::invalid_argument("QuditSpec: p0 + 2 p1 + 2 p2 must equal 1");
        }
        if (!(p2 >= 0.0 && p2 <= p1 && p1 <= p0)) {
            throw std::invalid_argument("QuditSpec: require 0 <= p2 <= p1 <= p0");
        }
        if (!(e2 > e1 && e1 > 0.0)) throw std::invalid_argument("QuditSpec: require E2 > E1 > 0");
        return QuditSpec{p0, p1, p2, e1, e2, p2 == 0.0 || p2 == p1 || p1 == p0};
    }

    /// p1 fixed by the trace condition.
    static QuditSpec from_p0_p2(double p0, double p2, double e1, double e2) {
        return make(p0, (1.0 - p0 - 2.0 * p2) / 2.0, p2, e1, e2);
    }

    [[nodiscard]] RVector site_spectrum() const {
        RVector p(5);
        p << p2, p1, p0, p1, p2;
        return p;
    }

    [[nodiscard]] RVector site_energies() const {
        RVector h(5);
        h << e2, e1, 0.0, -e1, -e2;
        return h;
    }
};

/// Largest energy among unitarily rotated single sites: the anti-passive
/// arrangement p0 E2 + p1 E1 - p2 (E1 + E2).
inline double single_site_max_energy(const QuditSpec &s) { return s.p0 * s.e2 + s.p1 * s.e1 - s.p2 * (s.e1 + s.e2); }

/// Rearrangement bound for a product of diagonal states under a global
/// unitary: probabilities and energies, both multisets over the product
/// basis, paired in decreasing order.
inline double rearrangement_max_energy(const std::vector<RVector> &probabilities, const std::vector<RVector> &energies) {
    if (probabilities.size() != energies.size() || probabilities.empty()) {
        throw std::invalid_argument("rearrangement_max_energy: site count mismatch");
    }
    std::vector<double> p{1.0}, e{0.0};
    std::size_t dim = 1;
    for (std::size_t s = 0; s < probabilities.size(); ++s) {
        if (probabilities[s].size() != energies[s].size()) {
            throw std::invalid_argument("rearrangement_max_energy: local dimension mismatch");
        }
        dim *= static_cast<std::size_t>(probabilities[s].size());
        if (dim > Register::kDefaultDimensionCap) throw GuardViolation("rearrangement_max_energy: dimension cap exceeded");
        std::vector<double> np, ne;
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (Eigen::Index k = 0; k < probabilities[s].size(); ++k) {
                np.push_back(p[i] * probabilities[s](k));
                ne.push_back(e[i] + energies[s](k));
            }
        }
        p = std::move(np);
        e = std::move(ne);
    }
    std::stable_sort(p.begin(), p.end(), std::greater<>());
    std::stable_sort(e.begin(), e.end(), std::greater<>());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * e[i];
    return total;
}

/// Total (not per-site) maximum energy over unitaries on all listed sites.
inline double max_energy_oracle(const std::vector<QuditSpec> &sites) {
    std::vector<RVector> p, e;
    for (const auto &s : sites) {
        p.push_back(s.site_spectrum());
        e.push_back(s.site_energies());
    }
    return rearrangement_max_energy(p, e);
}

/// Piecewise two-site per-site energy in its published form, both branches.
/// Kept for comparison against the rearrangement bound only.
struct PrintedTwoSiteFormula {
    double le_branch = 0.0; // p0 p2 <= p1^2
    double gt_branch = 0.0; // p0 p2 >  p1^2
    bool selects_le = true;

    [[nodiscard]] double value() const { return selects_le ? le_branch : gt_branch; }
};

inline PrintedTwoSiteFormula printed_two_site_formula(const QuditSpec &s) {
    const double p0 = s.p0, p1 = s.p1, p2 = s.p2, e1 = s.e1, e2 = s.e2;
    PrintedTwoSiteFormula f;
    // the trailing (E1 + 5/2) coefficient is reproduced as printed
    f.le_branch = e2 * p0 * p0 + (e1 + 2.0 * e2) * p0 * p1 + (e2 - e1) * p1 * p1 + 2.0 * e1 * p0 * p2 -
                  (e1 + 1.5 * e2) * p1 * p2 - (e1 + 2.5) * p2 * p2;
    f.gt_branch = e2 * p0 * p0 + (e1 + 2.0 * e2) * p0 * p1 + (0.5 * e1 + e2) * p0 * p2 + 0.5 * e1 * p1 * p1 -
                  (e1 + 1.5 * e2) * p1 * p2 - (e1 + 2.5) * p2 * p2;
    f.selects_le = p0 * p2 <= p1 * p1;
    return f;
}

struct SweepRow {
    double p2 = 0.0;
    double p1 = 0.0;
    double single_site = 0.0;
    double two_site_oracle = 0.0; // per site
    double printed_formula = 0.0;   // per site, selected branch
    bool branch_le = true;        // p0 p2 <= p1^2
    bool degenerate = false;
};

/// Evaluates `points` equally spaced p2 values on [p2_min, p2_max].
inline std::vector<SweepRow> ergotropy_sweep(double p0 = 0.5, double p2_min = 0.0, double p2_max = 0.12,
                                             std::size_t points = 25, double e1 = 1.0, double e2 = 4.0) {
    if (points < 2) throw std::invalid_argument("ergotropy_sweep: need at least 2 grid points");
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < points; ++i) {
        const double p2 = p2_min + (p2_max - p2_min) * double(i) / double(points - 1);
        const auto spec = QuditSpec::from_p0_p2(p0, p2, e1, e2);
        const auto printed = printed_two_site_formula(spec);
        rows.push_back({p2, spec.p1, single_site_max_energy(spec), max_energy_oracle({spec, spec}) / 2.0,
                        printed.value(), printed.selects_le, spec.degenerate});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Ladder of symmetric two-level unitaries on two qudits

inline constexpr std::size_t kQuditLevels = 5;
inline constexpr std::size_t kLadderParamsPerLayer = 9;

/// Lower level of each layer's adjacent pair, in application order:
/// (0,1) (1,2) (2,3) (3,4) (2,3) (1,2) (0,1).
inline constexpr std::array<std::size_t, 7> kLadderLayers{0, 1, 2, 3, 2, 1, 0};
inline constexpr std::size_t kLadderParamCount = kLadderLayers.size() * kLadderParamsPerLayer;

/// Symmetric generators on two two-level systems: s_i (x) s_i for i = x, y, z,
/// then s_i (x) s_j + s_j (x) s_i for the pairs (0,x) (0,y) (0,z) (x,y)
/// (x,z) (y,z), with s_0 the identity.
inline const std::array<CMatrix, kLadderParamsPerLayer> &ladder_generators() {
    static const std::array<CMatrix, kLadderParamsPerLayer> gens = [] {
        std::array<Eigen::Matrix2cd, 4> s;
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, Complex(0, -1), Complex(0, 1), 0;
        s[3] << 1, 0, 0, -1;
        auto kron = [](const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
            CMatrix k(4, 4);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) k.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
            }
            return k;
        };
        std::array<CMatrix, kLadderParamsPerLayer> g;
        std::size_t idx = 0;
        for (int i = 1; i <= 3; ++i) g[idx++] = kron(s[i], s[i]);
        const std::array<std::pair<int, int>, 6> cross{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
        for (auto [i, j] : cross) g[idx++] = kron(s[i], s[j]) + kron(s[j], s[i]);
        return g;
    }();
    return gens;
}

/// exp(-i sum_k alpha_k G_k) on the 4-dim subspace {l, l+1} x {l, l+1}.
inline CMatrix ladder_block_unitary(std::span<const double> alpha) {
    if (alpha.size() != kLadderParamsPerLayer) throw std::invalid_argument("ladder layer needs 9 coefficients");
    const auto &g = ladder_generators();
    CMatrix a = CMatrix::Zero(4, 4);
    for (std::size_t k = 0; k < kLadderParamsPerLayer; ++k) a += alpha[k] * g[k];
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
    CVector phases(4);
    for (Eigen::Index i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -solver.eigenvalues()(i));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

namespace detail {

/// Indices in the 25-dim two-qudit space of the subspace basis
/// (l,l) (l,l+1) (l+1,l) (l+1,l+1).
inline std::array<Eigen::Index, 4> ladder_indices(std::size_t lower) {
    const auto l = static_cast<Eigen::Index>(lower);
    constexpr auto d = static_cast<Eigen::Index>(kQuditLevels);
    return {l * d + l, l * d + l + 1, (l + 1) * d + l, (l + 1) * d + l + 1};
}

/// rho <- U rho U^dagger for a layer acting on four basis indices.
inline void conjugate_by_layer(CMatrix &rho, const CMatrix &u4, const std::array<Eigen::Index, 4> &idx) {
    CMatrix rows(4, rho.cols());
    for (int i = 0; i < 4; ++i) rows.row(i) = rho.row(idx[static_cast<std::size_t>(i)]);
    rows = u4 * rows;
    for (int i = 0; i < 4; ++i) rho.row(idx[static_cast<std::size_t>(i)]) = rows.row(i);
    CMatrix cols(rho.rows(), 4);
    for (int i = 0; i < 4; ++i) cols.col(i) = rho.col(idx[static_cast<std::size_t>(i)]);
    cols = cols * u4.adjoint();
    for (int i = 0; i < 4; ++i) rho.col(idx[static_cast<std::size_t>(i)]) = cols.col(i);
}

} // namespace detail

/// Full 25 x 25 ladder unitary; layer 0 acts first.
inline CMatrix ladder_unitary(const RVector &alpha) {
    if (static_cast<std::size_t>(alpha.size()) != kLadderParamCount) {
        throw std::invalid_argument("ladder_unitary: expected 63 coefficients");
    }
    constexpr auto d2 = static_cast<Eigen::Index>(kQuditLevels * kQuditLevels);
    CMatrix u = CMatrix::Identity(d2, d2);
    for (std::size_t layer = 0; layer < kLadderLayers.size(); ++layer) {
        const CMatrix u4 = ladder_block_unitary(
            std::span<const double>(alpha.data() + layer * kLadderParamsPerLayer, kLadderParamsPerLayer));
        const auto idx = detail::ladder_indices(kLadderLayers[layer]);
        CMatrix rows(4, d2);
        for (int i = 0; i < 4; ++i) rows.row(i) = u.row(idx[static_cast<std::size_t>(i)]);
        rows = u4 * rows;
        for (int i = 0; i < 4; ++i) u.row(idx[static_cast<std::size_t>(i)]) = rows.row(i);
    }
    return u;
}

/// Base-5 entropy of the first qudit after the ladder acts on rho (x) rho.
inline double ladder_site_entropy(const RVector &site_spectrum, const RVector &alpha) {
    constexpr auto d = static_cast<Eigen::Index>(kQuditLevels);
    RVector joint(d * d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) joint(a * d + b) = site_spectrum(a) * site_spectrum(b);
    }
    CMatrix rho = joint.cast<Complex>().asDiagonal();
    for (std::size_t layer = 0; layer < kLadderLayers.size(); ++layer) {
        const CMatrix u4 = ladder_block_unitary(
            std::span<const double>(alpha.data() + layer * kLadderParamsPerLayer, kLadderParamsPerLayer));
        detail::conjugate_by_layer(rho, u4, detail::ladder_indices(kLadderLayers[layer]));
    }
    CMatrix site = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index a2 = 0; a2 < d; ++a2) {
            for (Eigen::Index b = 0; b < d; ++b) site(a, a2) += rho(a * d + b, a2 * d + b);
        }
    }
    return entropy_of_spectrum(detail::hermitian_eigenvalues(site), double(kQuditLevels));
}

struct EntropyAscentOptions {
    std::size_t restarts = 4;   // start 0 uses the given parameters, later starts are random
    double init_scale = 0.5;    // std-dev of random starting coefficients
    double entropy_tolerance = 1e-6;
    std::size_t max_iterations = 2000;
};

struct EntropyAscentResult {
    double entropy = 0.0;     // base 5, of one qudit's marginal
    RVector params;
    std::vector<double> history; // accepted steps of the winning start, nondecreasing
    std::size_t best_start = 0;
};

/// Maximizes the single-qudit entropy over the ladder, first one layer at a
/// time, then all 63 coefficients jointly, with difference gradients.
inline EntropyAscentResult entropy_ascent_two_qudits(const QuditSpec &spec, const RVector &init, std::uint64_t seed,
                                                     const EntropyAscentOptions &opt = {}) {
    if (static_cast<std::size_t>(init.size()) != kLadderParamCount) {
        throw std::invalid_argument("entropy_ascent_two_qudits: expected 63 initial coefficients");
    }
    const RVector spectrum = spec.site_spectrum();
    optimize::AscentOptions ascent;
    ascent.max_iterations = opt.max_iterations;
    ascent.gradient_tolerance = 1e-9;
    ascent.value_tolerance = opt.entropy_tolerance * 1e-3;

    std::optional<EntropyAscentResult> best;
    for (std::size_t start = 0; start < std::max<std::size_t>(1, opt.restarts); ++start) {
        RVector x = init;
        if (start > 0) {
            Rng rng = substream(seed, start, 5);
            std::normal_distribution<double> normal(0.0, opt.init_scale);
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
        }
        EntropyAscentResult run;
        double current = ladder_site_entropy(spectrum, x);
        run.history.push_back(current);

        for (std::size_t layer = 0; layer < kLadderLayers.size(); ++layer) {
            const auto offset = static_cast<Eigen::Index>(layer * kLadderParamsPerLayer);
            const optimize::Value layer_value = [&](const RVector &a) {
                RVector full = x;
                full.segment(offset, static_cast<Eigen::Index>(kLadderParamsPerLayer)) = a;
                return ladder_site_entropy(spectrum, full);
            };
            const auto res = optimize::lbfgs_ascent(optimize::with_difference_gradient(layer_value),
                                                    x.segment(offset, static_cast<Eigen::Index>(kLadderParamsPerLayer)),
                                                    ascent);
            if (res.value > current) {
                x.segment(offset, static_cast<Eigen::Index>(kLadderParamsPerLayer)) = res.x;
                current = res.value;
                run.history.insert(run.history.end(), res.history.begin() + 1, res.history.end());
            }
        }
        const optimize::Value joint = [&](const RVector &a) { return ladder_site_entropy(spectrum, a); };
        const auto res = optimize::lbfgs_ascent(optimize::with_difference_gradient(joint), x, ascent);
        if (res.value > current) {
            x = res.x;
            current = res.value;
            run.history.insert(run.history.end(), res.history.begin() + 1, res.history.end());
        }
        run.entropy = current;
        run.params = x;
        run.best_start = start;
        if (!best || run.entropy > best->entropy) best = std::move(run);
        if (best->entropy >= 1.0 - opt.entropy_tolerance) break;
    }
    return std::move(*best);
}

// ---------------------------------------------------------------------------
// Perfect defence

struct DefenceReport {
    std::size_t trials = 0;
    double max_abs_change = 0.0;
    std::vector<double> changes;
};

/// Energy change caused by `trials` sampled unitaries on a single site.
inline DefenceReport perfect_defence_check(const PureState &state, const LocalHamiltonian &h, std::size_t site,
                                           std::size_t trials, std::uint64_t seed,
                                           const UnitarySampler &sampler = sample_haar_unitary) {
    const double before = energy_expectation(state, h);
    DefenceReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = substream(seed, t, 55);
        const BlockUnitary u({site}, sampler(state.reg().dim(site), rng));
        const double change = energy_expectation(apply_block_unitary(state, u), h) - before;
        rep.changes.push_back(change);
        rep.max_abs_change = std::max(rep.max_abs_change, std::abs(change));
    }
    return rep;
}

/// Traceless local Hamiltonian used for |psi+_l>: diag(E2, E1, 0, -E1, -E2)
/// with E1 = 1, E2 = 4 when l = 5, equally spaced levels otherwise.
inline LocalHamiltonian defence_hamiltonian(std::size_t l) {
    if (l == kQuditLevels) return LocalHamiltonian::qudit(2, 1.0, 4.0);
    RVector e(static_cast<Eigen::Index>(l));
    for (std::size_t i = 0; i < l; ++i) e(static_cast<Eigen::Index>(i)) = 0.5 * double(l - 1) - double(i);
    return LocalHamiltonian(std::vector<RVector>(2, e));
}

inline DefenceReport perfect_defence_check(std::size_t l, std::size_t trials, std::uint64_t seed) {
    return perfect_defence_check(psi_plus(l), defence_hamiltonian(l), 0, trials, seed);
}

} // namespace uqgame
