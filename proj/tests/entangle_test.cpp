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

#include <cstdio>
#include <filesystem>
#include <random>

#include "test_support.hpp"
#include "uqgame/entangle.hpp"
#include "uqgame/errors.hpp"

using namespace uqgame;

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Mean entropy by the digit-level reduced density oracle over all subsets.
double oracle_mean_entropy(const PureState &psi) {
    const std::size_t n = psi.reg().size();
    const std::size_t k = n / 2;
    double total = 0.0;
    std::size_t count = 0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (std::size_t(std::popcount(mask)) != k) continue;
        std::vector<std::size_t> keep;
        for (std::size_t s = 0; s < n; ++s) {
            if ((mask >> s) & 1U) keep.push_back(s);
        }
        total += oracle::entropy_bits(oracle::reduced_density(psi.amplitudes(), psi.reg().dims(), keep));
        ++count;
    }
    return total / double(count);
}

PureState random_qubit_state(std::size_t n, std::mt19937_64 &rng) {
    return PureState(Register::qubits(n), oracle::random_vector(std::size_t{1} << n, rng));
}

SearchOptions quick(std::size_t restarts, std::uint64_t seed = 0) {
    SearchOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

} // namespace

TEST(LossSpec, SubsetCounts) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto spec = EntropyLossSpec::for_qubits(n);
        const std::uint64_t all = binomial(n, n / 2);
        EXPECT_EQ(spec.k, n / 2);
        EXPECT_EQ(spec.subsystems.size(), n % 2 == 0 ? all / 2 : all) << "n=" << n;
        EXPECT_EQ(EntropyLossSpec::for_qubits(n, false).subsystems.size(), all);
    }
}

TEST(Loss, Examples) {
    EXPECT_NEAR(mean_entropy_loss(bell_state(), EntropyLossSpec::for_qubits(2)), -1.0, 1e-12);
    EXPECT_NEAR(mean_entropy_loss(product_plus_state(4), EntropyLossSpec::for_qubits(4)), 0.0, 1e-12);
    EXPECT_NEAR(mean_entropy_loss(ghz_state(3), EntropyLossSpec::for_qubits(3)), -1.0, 1e-12);
}

TEST(Loss, HalvingIsExactForPureStates) {
    std::mt19937_64 rng(31);
    for (std::size_t n : {2, 4, 6, 8}) {
        const auto psi = random_qubit_state(n, rng);
        EXPECT_NEAR(mean_entropy(psi, EntropyLossSpec::for_qubits(n, true)),
                    mean_entropy(psi, EntropyLossSpec::for_qubits(n, false)), 1e-12);
    }
}

TEST(Loss, MatchesOracleAndBound) {
    std::mt19937_64 rng(32);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto psi = random_qubit_state(n, rng);
        const double s = mean_entropy(psi, EntropyLossSpec::for_qubits(n));
        EXPECT_NEAR(s, oracle_mean_entropy(psi), 1e-10);
        EXPECT_LE(s, double(n / 2) + 1e-12);
    }
}

TEST(Gradient, AnalyticMatchesCentralDifferences) {
    std::mt19937_64 rng(33);
    for (std::size_t n : {3, 4, 5}) {
        const detail::MeanEntropyObjective objective(EntropyLossSpec::for_qubits(n));
        const RVector p = detail::pack(oracle::random_vector(std::size_t{1} << n, rng) * 1.7);
        CVector g;
        objective(detail::unpack(p), &g);
        const optimize::Value f = [&](const RVector &x) { return objective(detail::unpack(x), nullptr); };
        const RVector fd = optimize::central_difference_gradient(f, p);
        EXPECT_LT((detail::pack(g) - fd).lpNorm<Eigen::Infinity>(), 1e-7) << "n=" << n;
    }
}

TEST(Ansatz, SymmetricGroups) {
    SymmetricAnsatz4 ansatz{{true, false, true}};
    EXPECT_EQ(ansatz.parameter_count(), 18u);
    RVector p = RVector::Zero(18);
    p(16) = 1.0; // a0
    p(17) = 2.0; // a2
    const CVector v = ansatz.amplitudes(p);
    for (std::size_t i = 0; i < 16; ++i) {
        const int w = std::popcount(i);
        const double expected = (w == 0 || w == 4) ? 1.0 : (w == 2 ? 2.0 : 0.0);
        EXPECT_NEAR(std::abs(v(static_cast<Eigen::Index>(i))), expected, 1e-15) << "index " << i;
    }
    EXPECT_EQ(SymmetricAnsatz4::all_flag_combinations().size(), 7u);
    EXPECT_NEAR(ansatz.state(p).amplitudes().norm(), 1.0, 1e-12);
}

TEST(Search, SmallAmeStatesAreFound) {
    const auto two = search_max_entropy_state(2, AnsatzKind::generic, quick(2));
    EXPECT_NEAR(two.mean_entropy, 1.0, 1e-6);
    const auto three = search_max_entropy_state(3, AnsatzKind::generic, quick(2));
    EXPECT_NEAR(three.mean_entropy, 1.0, 1e-6);
    const auto five = search_max_entropy_state(5, AnsatzKind::generic, quick(4));
    EXPECT_NEAR(five.mean_entropy, 2.0, 1e-4);
    // AME certificate: every 2-site marginal maximally mixed
    for (const auto &k : EntropyLossSpec::for_qubits(5).subsystems) {
        const CMatrix rho = partial_trace(five.state, k).matrix();
        EXPECT_LT((rho - CMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-3);
    }
}

TEST(Search, FourQubitsFallShortOfTwo) {
    SearchOptions o = quick(2);
    const auto sym = search_max_entropy_state(4, AnsatzKind::symmetric4, o);
    EXPECT_NEAR(sym.mean_entropy, 1.79, 0.01);
    EXPECT_LT(sym.mean_entropy, 2.0 - 0.1);
    EXPECT_EQ(sym.restart_values.size(), 14u);
    const auto generic = search_max_entropy_state(4, AnsatzKind::generic, quick(4));
    EXPECT_NEAR(generic.mean_entropy, 1.79, 0.01);
}

TEST(Search, IsDeterministic) {
    const auto a = search_max_entropy_state(4, AnsatzKind::generic, quick(3, 42));
    const auto b = search_max_entropy_state(4, AnsatzKind::generic, quick(3, 42));
    EXPECT_EQ(a.mean_entropy, b.mean_entropy);
    EXPECT_EQ(a.restart_values, b.restart_values);
    EXPECT_EQ(a.state.amplitudes(), b.state.amplitudes());
}

TEST(Search, DerivativeFreeFallbackAgrees) {
    const auto spec = EntropyLossSpec::for_qubits(3);
    const detail::MeanEntropyObjective objective(spec);
    const optimize::Value f = [&](const RVector &p) { return objective(detail::unpack(p), nullptr); };
    Rng rng = substream(3, 0, 3);
    std::normal_distribution<double> normal;
    RVector p0(16);
    for (Eigen::Index i = 0; i < 16; ++i) p0(i) = normal(rng);
    const auto res = optimize::nelder_mead_ascent(f, p0);
    const auto reference = search_max_entropy_state(3, AnsatzKind::generic, quick(1, 3));
    EXPECT_NEAR(res.value, reference.mean_entropy, 1e-4);
}

TEST(Search, Guards) {
    EXPECT_THROW(search_max_entropy_state(9, AnsatzKind::generic), GuardViolation);
    EXPECT_THROW(search_max_entropy_state(5, AnsatzKind::symmetric4), std::invalid_argument);
    EXPECT_THROW(search_max_entropy_state(4, AnsatzKind::generic, quick(0)), std::invalid_argument);
    EXPECT_THROW(ansatz_from_string("spiral"), std::invalid_argument);
}

TEST(Cache, RecordRoundTrip) {
    std::mt19937_64 rng(34);
    const CachedState c{3, AnsatzKind::generic, 17, 0.987654321, oracle::random_vector(8, rng)};
    const auto back = parse_cache_record(format_cache_record(c));
    EXPECT_EQ(back.n, c.n);
    EXPECT_EQ(back.ansatz, c.ansatz);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.mean_entropy, c.mean_entropy);
    EXPECT_EQ(back.amplitudes, c.amplitudes);
    EXPECT_THROW(parse_cache_record("3 generic 17 0.5 1 0"), std::runtime_error);
}

TEST(Cache, FileRoundTripAndReuse) {
    const auto path = std::filesystem::temp_directory_path() / "uqgame_cache_test.txt";
    std::filesystem::remove(path);
    double first_value = 0.0;
    {
        StateCache cache(path.string());
        defensive_state(3, quick(1, 5), &cache, &first_value);
        cache.save();
    }
    StateCache reloaded(path.string());
    ASSERT_EQ(reloaded.records().size(), 1u);
    const auto hit = reloaded.find(3, AnsatzKind::generic, 5);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->mean_entropy, first_value);
    EXPECT_FALSE(reloaded.find(3, AnsatzKind::generic, 6).has_value());
    double again = 0.0;
    const auto psi = defensive_state(3, quick(1, 5), &reloaded, &again);
    EXPECT_EQ(again, first_value);
    EXPECT_EQ(psi.amplitudes(), hit->amplitudes);
    std::filesystem::remove(path);
}

TEST(MinEnergies, SixQubitRows) {
    const auto rows = fig2bc_min_energies(2, 2, quick(1));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].energy, 0.0, 1e-6); // N = 2, N_B = 1

    const auto six = fig2bc_min_energies(6, 6, quick(2));
    ASSERT_EQ(six.size(), 6u);
    ASSERT_NEAR(six[0].mean_entropy, 3.0, 1e-4);
    EXPECT_NEAR(six[2].energy, 0.0, 1e-3);                 // N_B = 3
    EXPECT_NEAR(six[3].per_site_energy, -2.5 / 6.0, 1e-3); // N_B = 4
    EXPECT_NEAR(six[5].energy, -6.0, 1e-9);                // N_B = N undoes everything
}
