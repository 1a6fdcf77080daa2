#include "bosonlight/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace bosonlight {

std::int64_t dimension_limit() {
    if (const char* env = std::getenv("BOSONLIGHT_DIM_LIMIT")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return std::int64_t{1} << 22;
}

FockBasis::FockBasis(const LatticeGraph& lattice, std::vector<int> caps,
                     std::optional<int> sector)
    : caps_(std::move(caps)), sector_(sector) {
    if (static_cast<int>(caps_.size()) != lattice.num_sites())
        throw std::invalid_argument("FockBasis: caps size must match lattice");
    int total_cap = 0;
    for (int q : caps_) {
        if (q < 0) throw std::invalid_argument("FockBasis: negative cap");
        total_cap += q;
    }
    if (sector_ && (*sector_ < 0 || *sector_ > total_cap))
        throw std::invalid_argument("FockBasis: sector outside [0, sum of caps]");

    const int n = num_sites();
    if (!sector_) {
        std::int64_t d = 1;
        for (int q : caps_) {
            d *= (q + 1);
            if (d > dimension_limit())
                throw ResourceLimitError("FockBasis: dimension exceeds limit");
        }
        mixed_radix_.assign(n, 1);
        for (int i = n - 2; i >= 0; --i)
            mixed_radix_[i] = mixed_radix_[i + 1] * (caps_[i + 1] + 1);
        states_.reserve(d);
    }

    // Lexicographic enumeration; the sector constraint prunes by remaining total.
    std::vector<int> occ(n, 0);
    std::vector<int> suffix_cap(n + 1, 0);
    for (int i = n - 1; i >= 0; --i) suffix_cap[i] = suffix_cap[i + 1] + caps_[i];

    std::function<void(int, int)> enumerate = [&](int site, int used) {
        if (site == n) {
            if (!sector_ || used == *sector_) {
                states_.push_back(occ);
                if (static_cast<std::int64_t>(states_.size()) > dimension_limit())
                    throw ResourceLimitError("FockBasis: dimension exceeds limit");
            }
            return;
        }
        for (int q = 0; q <= caps_[site]; ++q) {
            if (sector_) {
                int rem = *sector_ - used - q;
                if (rem < 0 || rem > suffix_cap[site + 1]) continue;
            }
            occ[site] = q;
            enumerate(site + 1, used + q);
        }
        occ[site] = 0;
    };
    enumerate(0, 0);
}

std::int64_t FockBasis::rank(const std::vector<int>& occ) const {
    if (static_cast<int>(occ.size()) != num_sites()) return -1;
    for (int i = 0; i < num_sites(); ++i)
        if (occ[i] < 0 || occ[i] > caps_[i]) return -1;
    if (!sector_) {
        std::int64_t r = 0;
        for (int i = 0; i < num_sites(); ++i) r += occ[i] * mixed_radix_[i];
        return r;
    }
    auto it = std::lower_bound(states_.begin(), states_.end(), occ);
    if (it == states_.end() || *it != occ) return -1;
    return it - states_.begin();
}

SparseOperator::SparseOperator(std::int64_t dim,
                               std::vector<Eigen::Triplet<Complex>> triplets,
                               Hermitian flag)
    : hermitian_(flag) {
    matrix_.resize(dim, dim);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
    if (flag == Hermitian::Yes && !verify_hermitian())
        throw std::invalid_argument("SparseOperator: hermitian flag contradicts entries");
}

SparseOperator SparseOperator::identity(std::int64_t dim) {
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(dim);
    for (std::int64_t i = 0; i < dim; ++i) t.emplace_back(i, i, Complex{1.0, 0.0});
    return SparseOperator(dim, std::move(t), Hermitian::Yes);
}

SparseOperator SparseOperator::diagonal(std::vector<Complex> entries, Hermitian flag) {
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(entries.size());
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(entries.size()); ++i)
        if (entries[i] != Complex{0.0, 0.0}) t.emplace_back(i, i, entries[i]);
    return SparseOperator(static_cast<std::int64_t>(entries.size()), std::move(t), flag);
}

bool SparseOperator::verify_hermitian() {
    SparseMatrix diff = SparseMatrix(matrix_.adjoint()) - matrix_;
    double dev = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
            dev = std::max(dev, std::abs(it.value()));
    hermitian_ = dev <= 1e-12 ? Hermitian::Yes : Hermitian::No;
    return hermitian_ == Hermitian::Yes;
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("SparseOperator: dim mismatch");
    SparseOperator out;
    out.matrix_ = matrix_ + other.matrix_;
    out.hermitian_ = (hermitian_ == Hermitian::Yes && other.hermitian_ == Hermitian::Yes)
                         ? Hermitian::Yes
                         : Hermitian::Unchecked;
    return out;
}

SparseOperator SparseOperator::operator*(const SparseOperator& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("SparseOperator: dim mismatch");
    SparseOperator out;
    out.matrix_ = matrix_ * other.matrix_;
    out.hermitian_ = Hermitian::Unchecked;
    return out;
}

SparseOperator SparseOperator::scaled(Complex factor) const {
    SparseOperator out;
    out.matrix_ = matrix_ * factor;
    out.hermitian_ = (hermitian_ == Hermitian::Yes && factor.imag() == 0.0)
                         ? Hermitian::Yes
                         : Hermitian::Unchecked;
    return out;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out;
    out.matrix_ = matrix_.adjoint();
    out.hermitian_ = hermitian_;
    return out;
}

double SparseOperator::norm_inf() const {
    std::vector<double> row_sum(dim(), 0.0);
    for (int k = 0; k < matrix_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
            row_sum[it.row()] += std::abs(it.value());
    double best = 0.0;
    for (double s : row_sum) best = std::max(best, s);
    return best;
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    return StateVector{amplitudes / n};
}

StateVector basis_state(const FockBasis& basis, const std::vector<int>& occ) {
    std::int64_t r = basis.rank(occ);
    if (r < 0) throw std::invalid_argument("basis_state: occupation outside basis");
    StateVector psi{Eigen::VectorXcd::Zero(basis.dim())};
    psi.amplitudes[r] = 1.0;
    return psi;
}

SparseOperator op_hopping(const FockBasis& basis, int i, int j, Complex J) {
    if (i == j) throw std::invalid_argument("op_hopping: i and j must differ");
    if (i < 0 || j < 0 || i >= basis.num_sites() || j >= basis.num_sites())
        throw std::invalid_argument("op_hopping: site out of range");

    std::vector<Eigen::Triplet<Complex>> t;
    std::vector<int> occ;
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        occ = basis.occupations(k);
        // J b_i b_j^dag: moves one boson i -> j with element sqrt(n_i (n_j + 1)).
        if (occ[i] > 0 && occ[j] < basis.caps()[j]) {
            double elem = std::sqrt(static_cast<double>(occ[i]) * (occ[j] + 1));
            occ[i] -= 1;
            occ[j] += 1;
            std::int64_t r = basis.rank(occ);
            occ[i] += 1;
            occ[j] -= 1;
            if (r >= 0) {
                t.emplace_back(r, k, J * elem);
                t.emplace_back(k, r, std::conj(J) * elem);
            }
        }
    }
    SparseOperator op(basis.dim(), std::move(t));
    op.verify_hermitian();
    return op;
}

SparseOperator op_number(const FockBasis& basis, const SiteSet& X, int power) {
    if (power < 1) throw std::invalid_argument("op_number: power must be >= 1");
    std::vector<Complex> diag(basis.dim());
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        double total = 0.0;
        for (int s : X.sites()) total += occ[s];
        diag[k] = std::pow(total, power);
    }
    return SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::Yes);
}

SparseOperator projector_number(const FockBasis& basis, const SiteSet& X,
                                int min_total, int max_total) {
    std::vector<Complex> diag(basis.dim(), Complex{0.0, 0.0});
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        int total = 0;
        for (int s : X.sites()) total += occ[s];
        if (total >= min_total && total <= max_total) diag[k] = 1.0;
    }
    return SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::Yes);
}

SparseOperator weighted_number(const FockBasis& basis, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != basis.num_sites())
        throw std::invalid_argument("weighted_number: weight count must match sites");
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weighted_number: weights must be finite and >= 0");
    std::vector<Complex> diag(basis.dim());
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        double v = 0.0;
        for (int s = 0; s < basis.num_sites(); ++s) v += weights[s] * occ[s];
        diag[k] = v;
    }
    return SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::Yes);
}

Complex expectation(const StateVector& psi, const SparseOperator& O) {
    if (psi.dim() != O.dim()) throw std::invalid_argument("expectation: dim mismatch");
    return psi.amplitudes.dot(O.matrix() * psi.amplitudes);
}

double pure_state_trace_distance(const StateVector& applied) {
    return applied.norm();
}

}  // namespace bosonlight
