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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include "uqgame/core.hpp"
#include "uqgame/entangle.hpp"
#include "uqgame/rng.hpp"

namespace uqgame {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal divided out of Q's columns.
inline CMatrix sample_haar_unitary(std::size_t dim, Rng &rng) {
    if (dim == 0) throw std::invalid_argument("sample_haar_unitary: dim must be >= 1");
    const auto d = static_cast<Eigen::Index>(dim);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
    CMatrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) z(i, j) = Complex(normal(rng), normal(rng));
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix &r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) q.col(j) *= rjj / mag;
    }
    return q;
}

enum class HaarInitialState { zero, plus };

struct HaarSampleReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> per_sample; // mean 2-site entropy of each sample, bits
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    double max = 0.0;
    double pooled_mean = 0.0; // mean over all C(N, N/2) subsets of every sample
};

using UnitarySampler = std::function<CMatrix(std::size_t dim, Rng &rng)>;

/// Applies one sampled unitary on the full register per sample and averages
/// the entropy over the complementary N/2-site bipartitions. Sample i draws
/// from substream(seed, i).
inline HaarSampleReport haar_entropy_statistics(std::size_t n, std::size_t samples, std::uint64_t seed,
                                                HaarInitialState initial = HaarInitialState::zero,
                                                const UnitarySampler &sampler = sample_haar_unitary) {
    if (n < 2 || n > 6) throw GuardViolation("haar_entropy_statistics: N must be in [2, 6]");
    if (samples == 0) throw std::invalid_argument("haar_entropy_statistics: need at least one sample");
    const Register reg = Register::qubits(n);
    const PureState start =
        initial == HaarInitialState::zero ? PureState::basis(reg, 0) : product_plus_state(reg);
    const auto halved = EntropyLossSpec::for_qubits(n, true);
    const auto full = EntropyLossSpec::for_qubits(n, false);
    Sites all(n);
    std::iota(all.begin(), all.end(), 0);

    HaarSampleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    double pooled = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng = substream(seed, i);
        const BlockUnitary u(all, sampler(reg.total_dimension(), rng));
        const PureState psi = apply_block_unitary(start, u);
        rep.per_sample.push_back(mean_entropy(psi, halved));
        pooled += mean_entropy(psi, full);
    }
    const double count = double(samples);
    rep.mean = std::accumulate(rep.per_sample.begin(), rep.per_sample.end(), 0.0) / count;
    double ss = 0.0;
    for (double v : rep.per_sample) ss += (v - rep.mean) * (v - rep.mean);
    rep.stddev = samples > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    rep.max = *std::max_element(rep.per_sample.begin(), rep.per_sample.end());
    rep.pooled_mean = pooled / count;
    return rep;
}

} // namespace uqgame
