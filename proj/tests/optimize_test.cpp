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

#include <gtest/gtest.h>

#include <cmath>

#include "uqgame/optimize.hpp"

using namespace uqgame::optimize;

namespace {

// Negated Rosenbrock: maximum 0 at (1, 1).
double neg_rosenbrock(const RVector &x) {
    return -(100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2));
}

} // namespace

TEST(Optimize, CentralDifferenceOnQuadratic) {
    const Value f = [](const RVector &x) { return -x.squaredNorm() + 3.0 * x(0) - x(1) * x(2); };
    RVector x(3);
    x << 0.3, -1.2, 2.0;
    const RVector g = central_difference_gradient(f, x);
    EXPECT_NEAR(g(0), -2 * 0.3 + 3.0, 1e-8);
    EXPECT_NEAR(g(1), 2 * 1.2 - 2.0, 1e-8);
    EXPECT_NEAR(g(2), -2 * 2.0 + 1.2, 1e-8);
}

TEST(Optimize, LbfgsFindsMaximum) {
    RVector x0(2);
    x0 << -1.2, 1.0;
    const auto res = lbfgs_ascent(with_difference_gradient(neg_rosenbrock), x0);
    EXPECT_NEAR(res.x(0), 1.0, 1e-4);
    EXPECT_NEAR(res.x(1), 1.0, 1e-4);
    EXPECT_GT(res.value, -1e-8);
}

TEST(Optimize, AcceptedStepsAreMonotone) {
    RVector x0(2);
    x0 << 2.0, -1.0;
    const auto res = lbfgs_ascent(with_difference_gradient(neg_rosenbrock), x0);
    ASSERT_GE(res.history.size(), 2u);
    for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_GE(res.history[i], res.history[i - 1]);
    EXPECT_EQ(res.history.back(), res.value);
}

TEST(Optimize, NelderMeadAgreesAtLooserTolerance) {
    RVector x0(2);
    x0 << -1.2, 1.0;
    const auto res = nelder_mead_ascent(neg_rosenbrock, x0);
    EXPECT_NEAR(res.x(0), 1.0, 1e-3);
    EXPECT_NEAR(res.x(1), 1.0, 1e-3);
    EXPECT_GT(res.value, -1e-6);
}
