#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>

#include "bosonlight/lattice.hpp"

namespace bosonlight {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Basis dimension would exceed the configured cap.
class ResourceLimitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Propagation failed to converge after substep refinement.
class NumericalFailureError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Default cap on basis dimension; overridable via BOSONLIGHT_DIM_LIMIT.
std::int64_t dimension_limit();

/// Truncated occupation-number basis: per-site caps q_i, optionally restricted
/// to the total-number sector sum n_i = N.  States are enumerated in
/// lexicographic occupation order and ranked bijectively.
class FockBasis {
public:
    FockBasis(const LatticeGraph& lattice, std::vector<int> caps,
              std::optional<int> sector = std::nullopt);

    int num_sites() const { return static_cast<int>(caps_.size()); }
    std::int64_t dim() const { return static_cast<std::int64_t>(states_.size()); }
    const std::vector<int>& caps() const { return caps_; }
    std::optional<int> sector() const { return sector_; }

    const std::vector<int>& occupations(std::int64_t index) const { return states_[index]; }

    /// Index of an occupation vector; -1 when outside the basis.
    std::int64_t rank(const std::vector<int>& occ) const;

private:
    std::vector<int> caps_;
    std::optional<int> sector_;
    std::vector<std::vector<int>> states_;
    std::vector<std::int64_t> mixed_radix_;  // strides for sector-free ranking
};

/// Dimension-tagged sparse complex matrix with hermiticity metadata.
class SparseOperator {
public:
    enum class Hermitian { Yes, No, Unchecked };

    SparseOperator() = default;
    SparseOperator(std::int64_t dim, std::vector<Eigen::Triplet<Complex>> triplets,
                   Hermitian flag = Hermitian::Unchecked);

    static SparseOperator identity(std::int64_t dim);
    static SparseOperator diagonal(std::vector<Complex> entries, Hermitian flag);

    std::int64_t dim() const { return matrix_.rows(); }
    const SparseMatrix& matrix() const { return matrix_; }
    Hermitian hermitian_flag() const { return hermitian_; }
    void set_hermitian_flag(Hermitian flag) { hermitian_ = flag; }

    /// Checks entries against their conjugate transpose to 1e-12 and updates
    /// the flag.  Returns true when hermitian.
    bool verify_hermitian();

    SparseOperator operator+(const SparseOperator& other) const;
    SparseOperator operator*(const SparseOperator& other) const;
    SparseOperator scaled(Complex factor) const;
    SparseOperator adjoint() const;

    double norm_inf() const;  // max row sum of absolute values

private:
    SparseMatrix matrix_;
    Hermitian hermitian_ = Hermitian::Unchecked;
};

/// Complex amplitude vector tagged with its dimension.
struct StateVector {
    Eigen::VectorXcd amplitudes;

    std::int64_t dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
    StateVector normalized() const;
};

/// Basis state |occ>.
StateVector basis_state(const FockBasis& basis, const std::vector<int>& occ);

/// J b_i b_j^dag + conj(J) b_j b_i^dag restricted to the basis; matrix elements
/// J sqrt(n_i (n_j + 1)); transitions leaving the truncated basis are dropped
/// (the projected Hamiltonian Pi H Pi).
SparseOperator op_hopping(const FockBasis& basis, int i, int j, Complex J);

/// Diagonal (sum_{i in X} n_i)^power.
SparseOperator op_number(const FockBasis& basis, const SiteSet& X, int power = 1);

/// Diagonal 0/1 projector onto basis states whose total occupation of X lies
/// in [min_total, max_total].
SparseOperator projector_number(const FockBasis& basis, const SiteSet& X,
                                int min_total, int max_total);

/// Diagonal sum_j w_j n_j for nonnegative site weights.
SparseOperator weighted_number(const FockBasis& basis, const std::vector<double>& weights);

/// <psi| O |psi>.
Complex expectation(const StateVector& psi, const SparseOperator& O);

/// Euclidean norm of (O1(t) - O2(t))|psi>, which equals the trace norm of the
/// rank-1 operator (O1(t) - O2(t)) |psi><psi|.
double pure_state_trace_distance(const StateVector& applied);

}  // namespace bosonlight
