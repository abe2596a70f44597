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
 * Small unconstrained maximizers used by the entanglement searches:
 * a limited-memory quasi-Newton ascent with backtracking (Armijo) line
 * search, a central-difference gradient, and a derivative-free Nelder-Mead
 * fallback. All routines maximize.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace uqgame::optimize {

using RVector = Eigen::VectorXd;

/// Objective returning f(x); writes the gradient when `grad` is non-null.
using ValueAndGradient = std::function<double(const RVector &x, RVector *grad)>;
using Value = std::function<double(const RVector &x)>;

inline constexpr double kDefaultDifferenceStep = 1e-5;

inline RVector central_difference_gradient(const Value &f, const RVector &x,
                                           double step = kDefaultDifferenceStep) {
    RVector g(x.size());
    RVector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + step;
        const double up = f(probe);
        probe(i) = x(i) - step;
        const double down = f(probe);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * step);
    }
    return g;
}

/// Wraps a value-only objective with a central-difference gradient.
inline ValueAndGradient with_difference_gradient(Value f, double step = kDefaultDifferenceStep) {
    return [f = std::move(f), step](const RVector &x, RVector *grad) {
        if (grad) *grad = central_difference_gradient(f, x, step);
        return f(x);
    };
}

struct AscentOptions {
    std::size_t max_iterations = 3000;
    std::size_t memory = 12;
    double gradient_tolerance = 1e-10; // on the max-norm of the gradient
    double value_tolerance = 1e-13;    // on the per-step improvement
    std::size_t stall_iterations = 8;  // consecutive tiny improvements before stopping
    double armijo = 1e-4;
    std::size_t max_backtracks = 50;
};

struct AscentResult {
    RVector x;
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> history; // objective after every accepted step, starting point first
    std::size_t iterations = 0;
    bool converged = false;
};

inline AscentResult lbfgs_ascent(const ValueAndGradient &f, RVector x, const AscentOptions &opt = {}) {
    AscentResult res;
    RVector g(x.size());
    double fx = f(x, &g);
    res.history.push_back(fx);

    std::deque<RVector> s_hist, y_hist; // y = change in (-gradient)
    std::deque<double> rho_hist;
    std::size_t stalled = 0;

    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) {
            res.converged = true;
            break;
        }
        // two-loop recursion on the minimization problem of -f
        RVector q = -g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(q);
            q -= alpha[k] * y_hist[k];
        }
        if (!s_hist.empty()) {
            q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        } else {
            q /= std::max(1.0, g.norm());
        }
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(q);
            q += (alpha[k] - beta) * s_hist[k];
        }
        RVector direction = -q; // ascent direction for f
        double slope = g.dot(direction);
        if (!(slope > 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            direction = g / std::max(1.0, g.norm());
            slope = g.dot(direction);
        }

        double step = 1.0;
        RVector x_new;
        RVector g_new(x.size());
        double f_new = fx;
        bool accepted = false;
        for (std::size_t bt = 0; bt < opt.max_backtracks; ++bt) {
            x_new = x + step * direction;
            f_new = f(x_new, &g_new);
            if (std::isfinite(f_new) && f_new >= fx + opt.armijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.converged = true; // no further ascent along any tested step
            break;
        }

        const RVector s = x_new - x;
        const RVector y = g - g_new;
        const double sy = s.dot(y);
        if (sy > 1e-300) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        const double improvement = f_new - fx;
        x = std::move(x_new);
        g = g_new;
        fx = f_new;
        res.history.push_back(fx);
        res.iterations = it + 1;

        stalled = improvement < opt.value_tolerance ? stalled + 1 : 0;
        if (stalled >= opt.stall_iterations) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    res.value = fx;
    return res;
}

struct NelderMeadOptions {
    std::size_t max_evaluations = 200000;
    double initial_step = 0.5;
    double value_tolerance = 1e-12; // spread of simplex values
};

/// Derivative-free fallback. Same maximization convention as lbfgs_ascent.
inline AscentResult nelder_mead_ascent(const Value &f, const RVector &x0, const NelderMeadOptions &opt = {}) {
    const Eigen::Index n = x0.size();
    std::vector<RVector> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    std::size_t evals = 0;
    auto eval = [&](const RVector &x) {
        ++evals;
        return -f(x); // minimize the negation internally
    };
    for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += opt.initial_step;
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

    AscentResult res;
    std::vector<std::size_t> order(pts.size());
    while (evals < opt.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
        res.history.push_back(-vals[best]);
        ++res.iterations;
        if (vals[worst] - vals[best] < opt.value_tolerance) {
            res.converged = true;
            break;
        }
        RVector centroid = RVector::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i != worst) centroid += pts[i];
        }
        centroid /= double(n);

        const RVector reflected = centroid + (centroid - pts[worst]);
        const double fr = eval(reflected);
        if (fr < vals[best]) {
            const RVector expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const RVector contracted = outside ? RVector(centroid + 0.5 * (reflected - centroid))
                                           : RVector(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            vals[i] = eval(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.x = pts[best];
    res.value = -vals[best];
    return res;
}

} // namespace uqgame::optimize
