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
#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/errors.hpp"

namespace uqgame {

inline constexpr std::size_t kPartitionSiteGuard = 10;

/// Disjoint blocks covering sites 0..n-1, each no larger than `max_block`.
/// Stored canonically: sites ascending within a block, blocks ordered by
/// their smallest site.
class BlockPartition {
  public:
    BlockPartition(std::vector<Sites> blocks, std::size_t n_sites, std::size_t max_block)
        : blocks_(std::move(blocks)), n_sites_(n_sites), max_block_(max_block) {
        std::vector<bool> seen(n_sites_, false);
        std::size_t covered = 0;
        for (auto &b : blocks_) {
            if (b.empty()) throw std::invalid_argument("BlockPartition: empty block");
            if (b.size() > max_block_) {
                throw IllegalMove("BlockPartition: block of size " + std::to_string(b.size()) +
                                  " exceeds capability " + std::to_string(max_block_));
            }
            std::sort(b.begin(), b.end());
            for (std::size_t s : b) {
                if (s >= n_sites_) throw std::out_of_range("BlockPartition: site out of range");
                if (seen[s]) throw std::invalid_argument("BlockPartition: blocks overlap");
                seen[s] = true;
                ++covered;
            }
        }
        if (covered != n_sites_) throw std::invalid_argument("BlockPartition: blocks do not cover all sites");
        std::sort(blocks_.begin(), blocks_.end());
    }

    /// One block holding `block`, every other site a singleton.
    static BlockPartition block_plus_singletons(const Sites &block, std::size_t n_sites,
                                                std::size_t max_block) {
        std::vector<Sites> blocks{block};
        for (std::size_t s = 0; s < n_sites; ++s) {
            if (std::find(block.begin(), block.end(), s) == block.end()) blocks.push_back({s});
        }
        return BlockPartition(std::move(blocks), n_sites, max_block);
    }

    [[nodiscard]] const std::vector<Sites> &blocks() const { return blocks_; }
    [[nodiscard]] std::size_t n_sites() const { return n_sites_; }
    [[nodiscard]] std::size_t max_block() const { return max_block_; }

    /// Renders as "{0,1}|{2}".
    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (i) os << '|';
            os << '{';
            for (std::size_t j = 0; j < blocks_[i].size(); ++j) os << (j ? "," : "") << blocks_[i][j];
            os << '}';
        }
        return os.str();
    }

    bool operator==(const BlockPartition &o) const { return blocks_ == o.blocks_; }
    bool operator<(const BlockPartition &o) const { return blocks_ < o.blocks_; }

  private:
    std::vector<Sites> blocks_;
    std::size_t n_sites_;
    std::size_t max_block_;
};

namespace detail {

inline void grow_partitions(std::size_t site, std::size_t n, std::size_t max_block,
                            std::vector<Sites> &current, std::vector<BlockPartition> &out) {
    if (site == n) {
        out.emplace_back(current, n, max_block);
        return;
    }
    for (std::size_t i = 0; i < current.size(); ++i) {
        if (current[i].size() < max_block) {
            current[i].push_back(site);
            grow_partitions(site + 1, n, max_block, current, out);
            current[i].pop_back();
        }
    }
    current.push_back({site});
    grow_partitions(site + 1, n, max_block, current, out);
    current.pop_back();
}

} // namespace detail

/// Every set partition of {0..n-1} with blocks of size <= max_block, sorted
/// lexicographically by canonical form.
inline std::vector<BlockPartition> enumerate_partitions(std::size_t n, std::size_t max_block) {
    if (n == 0) throw std::invalid_argument("enumerate_partitions: n must be >= 1");
    if (n > kPartitionSiteGuard) {
        throw GuardViolation("enumerate_partitions: n = " + std::to_string(n) + " exceeds guard N <= " +
                             std::to_string(kPartitionSiteGuard));
    }
    if (max_block == 0) throw std::invalid_argument("enumerate_partitions: max_block must be >= 1");
    std::vector<BlockPartition> out;
    std::vector<Sites> current;
    detail::grow_partitions(0, n, std::min(max_block, n), current, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace uqgame
