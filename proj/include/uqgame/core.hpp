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
 * Dense state-vector and density-matrix substrate: registers of qudits,
 * block-embedded unitaries, partial traces, Schmidt spectra, entropies and
 * local diagonal Hamiltonians.
 *
 * Site convention: site 0 is the leftmost tensor factor, i.e. the most
 * significant digit of a basis index. Every embedding and partial trace in
 * this library follows that convention.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uqgame/errors.hpp"

namespace uqgame {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Sites = std::vector<std::size_t>;

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kEigenCutoff = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-10;

class Register {
  public:
    static constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 12;

    explicit Register(std::vector<std::size_t> dims,
                      std::size_t dimension_cap = kDefaultDimensionCap)
        : dims_(std::move(dims)) {
        if (dims_.empty()) {
            throw std::invalid_argument("Register: at least one site required");
        }
        total_ = 1;
        for (std::size_t d : dims_) {
            if (d < 2) {
                throw std::invalid_argument("Register: every local dimension must be >= 2");
            }
            if (total_ > dimension_cap / d) {
                throw GuardViolation("Register: total dimension exceeds cap of " +
                                     std::to_string(dimension_cap));
            }
            total_ *= d;
        }
        strides_.assign(dims_.size(), 1);
        for (std::size_t s = dims_.size() - 1; s > 0; --s) {
            strides_[s - 1] = strides_[s] * dims_[s];
        }
    }

    static Register qubits(std::size_t n) { return Register(std::vector<std::size_t>(n, 2)); }
    static Register uniform(std::size_t n, std::size_t d) {
        return Register(std::vector<std::size_t>(n, d));
    }

    [[nodiscard]] std::size_t size() const { return dims_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t site) const { return dims_.at(site); }
    [[nodiscard]] const std::vector<std::size_t> &dims() const { return dims_; }
    [[nodiscard]] std::size_t total_dimension() const { return total_; }
    [[nodiscard]] std::size_t stride(std::size_t site) const { return strides_.at(site); }

    [[nodiscard]] bool all_qubits() const {
        return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 2; });
    }

    [[nodiscard]] std::size_t digit(std::size_t index, std::size_t site) const {
        return (index / strides_[site]) % dims_[site];
    }

    /// Throws unless `sites` is nonempty, duplicate-free and in range.
    void check_sites(std::span<const std::size_t> sites) const {
        if (sites.empty()) {
            throw std::invalid_argument("site list must be nonempty");
        }
        std::vector<bool> seen(size(), false);
        for (std::size_t s : sites) {
            if (s >= size()) {
                throw std::out_of_range("site " + std::to_string(s) + " outside register of " +
                                        std::to_string(size()) + " sites");
            }
            if (seen[s]) {
                throw std::invalid_argument("duplicate site " + std::to_string(s));
            }
            seen[s] = true;
        }
    }

    [[nodiscard]] std::size_t block_dimension(std::span<const std::size_t> sites) const {
        std::size_t d = 1;
        for (std::size_t s : sites) d *= dims_.at(s);
        return d;
    }

    [[nodiscard]] Register subregister(std::span<const std::size_t> sites) const {
        std::vector<std::size_t> d;
        d.reserve(sites.size());
        for (std::size_t s : sites) d.push_back(dims_.at(s));
        return Register(std::move(d));
    }

    [[nodiscard]] Register concat(const Register &other) const {
        auto d = dims_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        return Register(std::move(d));
    }

    bool operator==(const Register &other) const { return dims_ == other.dims_; }

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

/// Bijection between full basis indices and (block index, rest index) pairs.
/// Block digits follow the order of `block_sites`; the remaining sites keep
/// ascending order.
struct IndexSplit {
    std::size_t block_dim = 1;
    std::size_t rest_dim = 1;
    std::vector<std::size_t> full_index; // [block * rest_dim + rest]

    [[nodiscard]] std::size_t at(std::size_t block, std::size_t rest) const {
        return full_index[block * rest_dim + rest];
    }
};

inline IndexSplit split_register(const Register &reg, std::span<const std::size_t> block_sites) {
    reg.check_sites(block_sites);
    std::vector<bool> in_block(reg.size(), false);
    for (std::size_t s : block_sites) in_block[s] = true;
    Sites rest_sites;
    for (std::size_t s = 0; s < reg.size(); ++s) {
        if (!in_block[s]) rest_sites.push_back(s);
    }

    IndexSplit split;
    split.block_dim = reg.block_dimension(block_sites);
    split.rest_dim = reg.total_dimension() / split.block_dim;
    split.full_index.resize(reg.total_dimension());
    for (std::size_t i = 0; i < reg.total_dimension(); ++i) {
        std::size_t b = 0;
        for (std::size_t s : block_sites) b = b * reg.dim(s) + reg.digit(i, s);
        std::size_t r = 0;
        for (std::size_t s : rest_sites) r = r * reg.dim(s) + reg.digit(i, s);
        split.full_index[b * split.rest_dim + r] = i;
    }
    return split;
}

namespace detail {

/// Reshapes a full vector into a block_dim x rest_dim matrix.
inline CMatrix gather(const CVector &v, const IndexSplit &split) {
    CMatrix a(static_cast<Eigen::Index>(split.block_dim),
              static_cast<Eigen::Index>(split.rest_dim));
    for (std::size_t b = 0; b < split.block_dim; ++b) {
        for (std::size_t r = 0; r < split.rest_dim; ++r) {
            a(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(r)) = v(
                static_cast<Eigen::Index>(split.at(b, r)));
        }
    }
    return a;
}

inline void scatter(const CMatrix &a, const IndexSplit &split, CVector &v) {
    for (std::size_t b = 0; b < split.block_dim; ++b) {
        for (std::size_t r = 0; r < split.rest_dim; ++r) {
            v(static_cast<Eigen::Index>(split.at(b, r))) =
                a(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(r));
        }
    }
}

/// Eigenvalues of a Hermitian matrix, nonincreasing.
inline std::vector<double> hermitian_eigenvalues(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    const RVector &ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline bool is_unitary(const CMatrix &u, double tol = kStateTolerance) {
    if (u.rows() != u.cols()) return false;
    const CMatrix defect = u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols());
    return defect.cwiseAbs().maxCoeff() <= tol;
}

} // namespace detail

class PureState {
  public:
    PureState(Register reg, CVector amplitudes) : reg_(std::move(reg)), psi_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(psi_.size()) != reg_.total_dimension()) {
            throw std::invalid_argument("PureState: amplitude count does not match register");
        }
        if (std::abs(psi_.norm() - 1.0) > kStateTolerance) {
            throw std::invalid_argument("PureState: amplitudes are not normalized");
        }
    }

    static PureState normalized(Register reg, CVector amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw std::invalid_argument("PureState: cannot normalize a zero or non-finite vector");
        }
        amplitudes /= n;
        return PureState(std::move(reg), std::move(amplitudes));
    }

    static PureState basis(Register reg, std::size_t index) {
        CVector v = CVector::Zero(static_cast<Eigen::Index>(reg.total_dimension()));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return PureState(std::move(reg), std::move(v));
    }

    [[nodiscard]] const Register &reg() const { return reg_; }
    [[nodiscard]] const CVector &amplitudes() const { return psi_; }

  private:
    Register reg_;
    CVector psi_;
};

class MixedState {
  public:
    struct unchecked_t {};
    static constexpr unchecked_t unchecked{};

    MixedState(Register reg, CMatrix rho) : MixedState(std::move(reg), std::move(rho), unchecked) {
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
            throw std::invalid_argument("MixedState: matrix is not Hermitian");
        }
        if (std::abs(rho_.trace().real() - 1.0) > kStateTolerance) {
            throw std::invalid_argument("MixedState: trace is not 1");
        }
        const auto ev = detail::hermitian_eigenvalues(rho_);
        if (ev.back() < -kNegativeEigenTolerance) {
            throw std::invalid_argument("MixedState: negative eigenvalue");
        }
    }

    /// Skips validation; for matrices produced by trace-preserving operations.
    MixedState(Register reg, CMatrix rho, unchecked_t) : reg_(std::move(reg)), rho_(std::move(rho)) {
        if (static_cast<std::size_t>(rho_.rows()) != reg_.total_dimension() ||
            rho_.rows() != rho_.cols()) {
            throw std::invalid_argument("MixedState: matrix shape does not match register");
        }
    }

    static MixedState from_pure(const PureState &psi) {
        return MixedState(psi.reg(), psi.amplitudes() * psi.amplitudes().adjoint(), unchecked);
    }

    static MixedState diagonal(Register reg, const RVector &probabilities) {
        return MixedState(std::move(reg), probabilities.cast<Complex>().asDiagonal().toDenseMatrix());
    }

    [[nodiscard]] const Register &reg() const { return reg_; }
    [[nodiscard]] const CMatrix &matrix() const { return rho_; }

  private:
    Register reg_;
    CMatrix rho_;
};

class BlockUnitary {
  public:
    BlockUnitary(Sites sites, CMatrix matrix) : sites_(std::move(sites)), u_(std::move(matrix)) {
        if (sites_.empty()) throw std::invalid_argument("BlockUnitary: empty site list");
        auto sorted = sites_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("BlockUnitary: duplicate site");
        }
        if (!detail::is_unitary(u_)) {
            throw std::invalid_argument("BlockUnitary: matrix is not unitary within 1e-10");
        }
    }

    static BlockUnitary identity(Sites sites, const Register &reg) {
        const auto d = static_cast<Eigen::Index>(reg.block_dimension(sites));
        return BlockUnitary(std::move(sites), CMatrix::Identity(d, d));
    }

    [[nodiscard]] const Sites &sites() const { return sites_; }
    [[nodiscard]] const CMatrix &matrix() const { return u_; }

  private:
    Sites sites_;
    CMatrix u_;
};

struct SchmidtSpectrum {
    std::vector<double> eigenvalues; // nonincreasing
    std::size_t rank = 0;
};

/// Diagonal local Hamiltonian: a sum over sites of per-site diagonal spectra.
class LocalHamiltonian {
  public:
    explicit LocalHamiltonian(std::vector<RVector> site_spectra) : spectra_(std::move(site_spectra)) {
        if (spectra_.empty()) throw std::invalid_argument("LocalHamiltonian: no sites");
    }

    /// Sum of sigma^z; |0> carries energy +1 and |1> carries -1.
    static LocalHamiltonian pauli_z(std::size_t n) {
        RVector z(2);
        z << 1.0, -1.0;
        return LocalHamiltonian(std::vector<RVector>(n, z));
    }

    /// Five-level sites with spectrum diag(E2, E1, 0, -E1, -E2).
    static LocalHamiltonian qudit(std::size_t n, double e1, double e2) {
        RVector h(5);
        h << e2, e1, 0.0, -e1, -e2;
        return LocalHamiltonian(std::vector<RVector>(n, h));
    }

    [[nodiscard]] LocalHamiltonian negated() const {
        auto s = spectra_;
        for (auto &v : s) v = -v;
        return LocalHamiltonian(std::move(s));
    }

    [[nodiscard]] std::size_t size() const { return spectra_.size(); }
    [[nodiscard]] const RVector &site(std::size_t s) const { return spectra_.at(s); }

    void check_register(const Register &reg) const {
        if (reg.size() != spectra_.size()) {
            throw std::invalid_argument("LocalHamiltonian: site count does not match register");
        }
        for (std::size_t s = 0; s < reg.size(); ++s) {
            if (static_cast<std::size_t>(spectra_[s].size()) != reg.dim(s)) {
                throw std::invalid_argument("LocalHamiltonian: local dimension mismatch at site " +
                                            std::to_string(s));
            }
        }
    }

    /// Energies of the block's basis states, indexed like the block factor
    /// of `split_register(reg, sites)`.
    [[nodiscard]] std::vector<double> block_energies(const Register &reg,
                                                     std::span<const std::size_t> sites) const {
        check_register(reg);
        reg.check_sites(sites);
        std::vector<double> e{0.0};
        for (std::size_t s : sites) {
            std::vector<double> next;
            next.reserve(e.size() * reg.dim(s));
            for (double base : e) {
                for (Eigen::Index k = 0; k < spectra_[s].size(); ++k) next.push_back(base + spectra_[s](k));
            }
            e = std::move(next);
        }
        return e;
    }

    [[nodiscard]] RVector diagonal(const Register &reg) const {
        check_register(reg);
        RVector d = RVector::Zero(static_cast<Eigen::Index>(reg.total_dimension()));
        for (std::size_t i = 0; i < reg.total_dimension(); ++i) {
            double e = 0.0;
            for (std::size_t s = 0; s < reg.size(); ++s) {
                e += spectra_[s](static_cast<Eigen::Index>(reg.digit(i, s)));
            }
            d(static_cast<Eigen::Index>(i)) = e;
        }
        return d;
    }

  private:
    std::vector<RVector> spectra_;
};

// ---------------------------------------------------------------------------
// Constructors

inline PureState product_plus_state(const Register &reg) {
    if (!reg.all_qubits()) {
        throw std::invalid_argument("product_plus_state: register must consist of qubits");
    }
    const auto dim = static_cast<Eigen::Index>(reg.total_dimension());
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    return PureState(reg, CVector::Constant(dim, Complex(amp, 0.0)));
}

inline PureState product_plus_state(std::size_t n) { return product_plus_state(Register::qubits(n)); }

inline PureState basis_state(const Register &reg, std::span<const std::size_t> digits) {
    if (digits.size() != reg.size()) throw std::invalid_argument("basis_state: digit count mismatch");
    std::size_t index = 0;
    for (std::size_t s = 0; s < reg.size(); ++s) {
        if (digits[s] >= reg.dim(s)) throw std::out_of_range("basis_state: digit out of range");
        index = index * reg.dim(s) + digits[s];
    }
    return PureState::basis(reg, index);
}

inline PureState ghz_state(std::size_t n) {
    if (n < 2) throw std::invalid_argument("ghz_state: need at least 2 qubits");
    Register reg = Register::qubits(n);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(reg.total_dimension()));
    v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState(std::move(reg), std::move(v));
}

inline PureState bell_state() { return ghz_state(2); }

/// (1/sqrt(l)) sum_i |i>|i> on two l-level sites.
inline PureState psi_plus(std::size_t l) {
    if (l < 2) throw std::invalid_argument("psi_plus: need l >= 2");
    Register reg = Register::uniform(2, l);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(l * l));
    for (std::size_t i = 0; i < l; ++i) v(static_cast<Eigen::Index>(i * l + i)) = 1.0 / std::sqrt(double(l));
    return PureState(std::move(reg), std::move(v));
}

inline PureState tensor(const PureState &a, const PureState &b) {
    const CVector &x = a.amplitudes();
    const CVector &y = b.amplitudes();
    CVector v(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) v.segment(i * y.size(), y.size()) = x(i) * y;
    return PureState(a.reg().concat(b.reg()), std::move(v));
}

inline MixedState tensor(const MixedState &a, const MixedState &b) {
    const CMatrix &x = a.matrix();
    const CMatrix &y = b.matrix();
    CMatrix m(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            m.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return MixedState(a.reg().concat(b.reg()), std::move(m), MixedState::unchecked);
}

// ---------------------------------------------------------------------------
// Operations

namespace detail {

inline void check_block(const Register &reg, const BlockUnitary &u) {
    reg.check_sites(u.sites());
    if (static_cast<std::size_t>(u.matrix().rows()) != reg.block_dimension(u.sites())) {
        throw std::invalid_argument("block unitary dimension does not match its sites");
    }
}

inline CVector apply_embedded(const CVector &v, const IndexSplit &split, const CMatrix &u) {
    CVector out(v.size());
    scatter(u * gather(v, split), split, out);
    return out;
}

} // namespace detail

inline PureState apply_block_unitary(const PureState &psi, const BlockUnitary &u) {
    detail::check_block(psi.reg(), u);
    const IndexSplit split = split_register(psi.reg(), u.sites());
    CVector out = detail::apply_embedded(psi.amplitudes(), split, u.matrix());
    return PureState::normalized(psi.reg(), std::move(out));
}

inline MixedState apply_block_unitary(const MixedState &rho, const BlockUnitary &u) {
    detail::check_block(rho.reg(), u);
    const IndexSplit split = split_register(rho.reg(), u.sites());
    // U rho U^dagger = (U (U rho)^dagger)^dagger
    CMatrix m = rho.matrix();
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m.col(c) = detail::apply_embedded(m.col(c), split, u.matrix());
        }
        m.adjointInPlace();
    }
    return MixedState(rho.reg(), std::move(m), MixedState::unchecked);
}

template <class State>
State apply_all(State state, std::span<const BlockUnitary> move) {
    for (const auto &u : move) state = apply_block_unitary(state, u);
    return state;
}

/// Reduced density matrix on `keep`, ordered by ascending site index.
inline MixedState partial_trace(const PureState &psi, std::span<const std::size_t> keep) {
    Sites k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    const IndexSplit split = split_register(psi.reg(), k);
    const CMatrix a = detail::gather(psi.amplitudes(), split);
    return MixedState(psi.reg().subregister(k), a * a.adjoint(), MixedState::unchecked);
}

inline MixedState partial_trace(const MixedState &rho, std::span<const std::size_t> keep) {
    Sites k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    const IndexSplit split = split_register(rho.reg(), k);
    const auto bd = static_cast<Eigen::Index>(split.block_dim);
    CMatrix out = CMatrix::Zero(bd, bd);
    for (std::size_t a = 0; a < split.block_dim; ++a) {
        for (std::size_t b = 0; b < split.block_dim; ++b) {
            Complex acc = 0.0;
            for (std::size_t r = 0; r < split.rest_dim; ++r) {
                acc += rho.matrix()(static_cast<Eigen::Index>(split.at(a, r)),
                                    static_cast<Eigen::Index>(split.at(b, r)));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return MixedState(rho.reg().subregister(k), std::move(out), MixedState::unchecked);
}

inline SchmidtSpectrum schmidt_spectrum(const PureState &psi, std::span<const std::size_t> subsystem) {
    SchmidtSpectrum out;
    out.eigenvalues = detail::hermitian_eigenvalues(partial_trace(psi, subsystem).matrix());
    for (double &l : out.eigenvalues) {
        if (l < 0.0) l = 0.0;
        if (l > kEigenCutoff) ++out.rank;
    }
    return out;
}

/// -sum l log_base l over a spectrum, with 0 log 0 = 0.
inline double entropy_of_spectrum(std::span<const double> eigenvalues, double log_base) {
    if (!(log_base >= 2.0)) throw std::invalid_argument("entropy: log base must be >= 2");
    const double ln_base = std::log(log_base);
    double s = 0.0;
    for (double l : eigenvalues) {
        if (l < -kNegativeEigenTolerance) {
            throw std::domain_error("entropy: negative eigenvalue " + std::to_string(l));
        }
        if (l > kEigenCutoff) s -= l * std::log(l);
    }
    const double bound = std::log(double(eigenvalues.size())) / ln_base;
    return std::clamp(s / ln_base, 0.0, bound);
}

inline double von_neumann_entropy(const MixedState &rho, double log_base = 2.0) {
    const auto ev = detail::hermitian_eigenvalues(rho.matrix());
    return entropy_of_spectrum(ev, log_base);
}

inline double energy_expectation(const PureState &psi, const LocalHamiltonian &h) {
    const RVector d = h.diagonal(psi.reg());
    return psi.amplitudes().cwiseAbs2().dot(d);
}

inline double energy_expectation(const MixedState &rho, const LocalHamiltonian &h) {
    const RVector d = h.diagonal(rho.reg());
    return rho.matrix().diagonal().real().dot(d);
}

} // namespace uqgame
