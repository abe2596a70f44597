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

#include <set>
#include <string>

#include "uqgame/errors.hpp"
#include "uqgame/partitions.hpp"

using namespace uqgame;

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// B(n) = sum_{j < m} C(n-1, j) B(n-1-j): the block holding the last element
// takes j companions.
std::uint64_t restricted_bell(std::size_t n, std::size_t m) {
    std::vector<std::uint64_t> b(n + 1, 0);
    b[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 0; j < std::min(m, k); ++j) b[k] += binomial(k - 1, j) * b[k - 1 - j];
    }
    return b[n];
}

// Brute force over restricted growth strings.
std::set<std::string> brute_force(std::size_t n, std::size_t m) {
    std::set<std::string> out;
    std::vector<std::size_t> label(n, 0);
    while (true) {
        std::vector<Sites> blocks;
        bool valid = true;
        for (std::size_t i = 0; i < n && valid; ++i) {
            if (label[i] > blocks.size()) valid = false;
            else if (label[i] == blocks.size()) blocks.push_back({i});
            else blocks[label[i]].push_back(i);
        }
        if (valid) {
            bool fits = true;
            for (const auto &b : blocks) fits = fits && b.size() <= m;
            if (fits) out.insert(BlockPartition(blocks, n, m).to_string());
        }
        std::size_t pos = 0;
        while (pos < n && ++label[pos] >= n) label[pos++] = 0;
        if (pos == n) break;
    }
    return out;
}

} // namespace

TEST(Partitions, Examples) {
    const auto two = enumerate_partitions(2, 1);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two[0].to_string(), "{0}|{1}");

    const auto three = enumerate_partitions(3, 2);
    std::set<std::string> got;
    for (const auto &p : three) got.insert(p.to_string());
    EXPECT_EQ(got, (std::set<std::string>{"{0,1}|{2}", "{0,2}|{1}", "{0}|{1,2}", "{0}|{1}|{2}"}));

    EXPECT_EQ(enumerate_partitions(5, 2).size(), 26u);
}

TEST(Partitions, CountsMatchRecurrence) {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::size_t m = 1; m <= n; ++m) {
            EXPECT_EQ(enumerate_partitions(n, m).size(), restricted_bell(n, m)) << "n=" << n << " m=" << m;
        }
    }
}

TEST(Partitions, MatchBruteForceAndAreCanonical) {
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t m = 1; m <= n; ++m) {
            const auto parts = enumerate_partitions(n, m);
            std::set<std::string> got;
            for (const auto &p : parts) {
                got.insert(p.to_string());
                for (const auto &b : p.blocks()) EXPECT_LE(b.size(), m);
            }
            EXPECT_EQ(got.size(), parts.size()) << "duplicates for n=" << n;
            EXPECT_EQ(got, brute_force(n, m)) << "n=" << n << " m=" << m;
            EXPECT_TRUE(std::is_sorted(parts.begin(), parts.end()));
        }
    }
}

TEST(Partitions, CanonicalFormIgnoresOrder) {
    const BlockPartition a({{4, 1}, {0}, {3, 2}}, 5, 2);
    const BlockPartition b({{2, 3}, {1, 4}, {0}}, 5, 2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.to_string(), "{0}|{1,4}|{2,3}");
}

TEST(Partitions, Guards) {
    EXPECT_THROW(enumerate_partitions(11, 2), GuardViolation);
    EXPECT_THROW(enumerate_partitions(0, 1), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{0, 1, 2}}, 3, 2), IllegalMove);
    EXPECT_THROW(BlockPartition({{0, 1}, {1, 2}}, 3, 2), std::invalid_argument);
    EXPECT_THROW(BlockPartition({{0, 1}}, 3, 2), std::invalid_argument);
}
