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

#include <algorithm>
#include <cmath>

#include "uqgame/errors.hpp"
#include "uqgame/haar.hpp"

using namespace uqgame;

TEST(HaarUnitary, Unitarity) {
    for (std::size_t dim : {1, 2, 5, 16, 32}) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            Rng rng = substream(100, i, dim);
            const CMatrix u = sample_haar_unitary(dim, rng);
            const auto d = static_cast<Eigen::Index>(dim);
            EXPECT_LT((u * u.adjoint() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
            for (Eigen::Index c = 0; c < d; ++c) EXPECT_NEAR(u.col(c).norm(), 1.0, 1e-10);
        }
    }
    Rng rng(1);
    EXPECT_THROW(sample_haar_unitary(0, rng), std::invalid_argument);
}

TEST(HaarUnitary, ScalarPhaseIsUniform) {
    // mean of exp(i phi) vanishes and phi / 2pi is uniform
    const std::size_t count = 20000;
    Complex mean = 0.0;
    std::vector<double> phases;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = substream(101, i);
        const Complex z = sample_haar_unitary(1, rng)(0, 0);
        EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
        mean += z;
        phases.push_back((std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi));
    }
    EXPECT_LT(std::abs(mean / double(count)), 0.03);
    std::sort(phases.begin(), phases.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        ks = std::max({ks, std::abs(phases[i] - double(i) / count), std::abs(phases[i] - double(i + 1) / count)});
    }
    EXPECT_LT(ks, 0.015);
}

TEST(HaarUnitary, FirstEntryMarginalIsUniform) {
    // for dim 2, |U00|^2 is uniform on [0, 1]; one-sample KS statistic
    const std::size_t count = 100000;
    std::vector<double> x;
    x.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = substream(102, i);
        x.push_back(std::norm(sample_haar_unitary(2, rng)(0, 0)));
    }
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        ks = std::max({ks, std::abs(x[i] - double(i) / count), std::abs(x[i] - double(i + 1) / count)});
    }
    EXPECT_LT(ks, 0.01);
}

TEST(HaarUnitary, SecondMomentOfEntriesDim4) {
    // E|U_ij|^2 = 1/d and E|U_ij|^4 = 2/(d(d+1)) for Haar unitaries
    const std::size_t count = 20000;
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = substream(103, i);
        const double p = std::norm(sample_haar_unitary(4, rng)(1, 2));
        m2 += p;
        m4 += p * p;
    }
    EXPECT_NEAR(m2 / count, 0.25, 0.01);
    EXPECT_NEAR(m4 / count, 0.1, 0.01);
}

TEST(HaarStats, IdentitySamplerGivesProductState) {
    const UnitarySampler identity = [](std::size_t dim, Rng &) {
        return CMatrix(CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    };
    const auto rep = haar_entropy_statistics(4, 1, 0, HaarInitialState::zero, identity);
    EXPECT_NEAR(rep.mean, 0.0, 1e-12);
    EXPECT_EQ(rep.stddev, 0.0);
}

TEST(HaarStats, ReferenceBandsAndBounds) {
    const auto rep = haar_entropy_statistics(4, 1000, 7);
    EXPECT_GE(rep.mean, 1.30);
    EXPECT_LE(rep.mean, 1.36);
    EXPECT_GE(rep.stddev, 0.09);
    EXPECT_LE(rep.stddev, 0.15);
    EXPECT_GE(rep.max, rep.mean);
    for (double v : rep.per_sample) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.79);
    }
    EXPECT_NEAR(rep.pooled_mean, rep.mean, 1e-10);
}

TEST(HaarStats, SeedDeterminism) {
    const auto a = haar_entropy_statistics(4, 50, 9);
    const auto b = haar_entropy_statistics(4, 50, 9);
    EXPECT_EQ(a.per_sample, b.per_sample);
    EXPECT_EQ(a.mean, b.mean);
    const auto c = haar_entropy_statistics(4, 50, 10);
    EXPECT_NE(a.per_sample, c.per_sample);
    // prefix property: sample i depends only on (seed, i)
    const auto longer = haar_entropy_statistics(4, 60, 9);
    EXPECT_TRUE(std::equal(a.per_sample.begin(), a.per_sample.end(), longer.per_sample.begin()));
}

TEST(HaarStats, InitialStateInvariance) {
    const auto zero = haar_entropy_statistics(4, 1000, 11, HaarInitialState::zero);
    const auto plus = haar_entropy_statistics(4, 1000, 12, HaarInitialState::plus);
    const double se = std::sqrt(zero.stddev * zero.stddev / 1000.0 + plus.stddev * plus.stddev / 1000.0);
    EXPECT_LT(std::abs(zero.mean - plus.mean), 3.0 * se);
}

TEST(HaarStats, Guards) {
    EXPECT_THROW(haar_entropy_statistics(7, 10, 0), GuardViolation);
    EXPECT_THROW(haar_entropy_statistics(4, 0, 0), std::invalid_argument);
}
