#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bosonlight/fock.hpp"
#include "bosonlight/lattice.hpp"

namespace bosonlight {

/// One hopping bond J b_i b_j^dag + h.c.
struct HoppingTerm {
    int i = 0;
    int j = 0;
    Complex J{0.0, 0.0};
};

/// Polynomial in the number operators on a site tuple Z, as a monomial list:
/// each monomial is (exponent per site of Z, real coefficient).
struct PotentialTerm {
    std::vector<int> sites;  // the tuple Z
    struct Monomial {
        std::vector<int> exponents;  // aligned with sites
        double coefficient = 0.0;
    };
    std::vector<Monomial> monomials;
};

/// Piecewise-constant scaling of the hopping and potential parts.
struct ScheduleInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    double hopping_scale = 1.0;
    double potential_scale = 1.0;
};

/// Symbolic Bose-Hubbard-type Hamiltonian: hopping list plus a polynomial
/// potential over number operators, optionally time-scheduled.
class HamiltonianSpec {
public:
    HamiltonianSpec(const LatticeGraph* lattice, std::vector<HoppingTerm> hoppings,
                    std::vector<PotentialTerm> potentials,
                    int interaction_range = 0,
                    std::vector<ScheduleInterval> schedule = {});

    const LatticeGraph& lattice() const { return *lattice_; }
    const std::vector<HoppingTerm>& hoppings() const { return hoppings_; }
    const std::vector<PotentialTerm>& potentials() const { return potentials_; }
    const std::vector<ScheduleInterval>& schedule() const { return schedule_; }
    bool scheduled() const { return !schedule_.empty(); }

    int interaction_range() const { return interaction_range_; }
    double max_hopping() const { return J_bar_; }       // J-bar
    int potential_degree() const { return degree_; }    // v-bar
    double coefficient_bound() const { return g_bound_; }  // g

private:
    const LatticeGraph* lattice_;
    std::vector<HoppingTerm> hoppings_;
    std::vector<PotentialTerm> potentials_;
    std::vector<ScheduleInterval> schedule_;
    int interaction_range_;
    double J_bar_ = 0.0;
    int degree_ = 0;
    double g_bound_ = 0.0;
};

/// Uniform Bose-Hubbard model: hopping J on every edge, on-site
/// (U/2) n(n-1) - mu n.  Records g = |U|/2 + |mu|, v-bar = 2, k = 0.
HamiltonianSpec bose_hubbard_spec(const LatticeGraph& lattice, double J, double U,
                                  double mu);

/// Restriction H_X: hoppings with both endpoints in X, potentials with Z in X.
HamiltonianSpec subset_hamiltonian(const HamiltonianSpec& spec, const SiteSet& X);

/// Sparse matrix of the spec on the basis; hermitian for real schedules.
/// `time` selects the schedule interval and is required for scheduled specs.
SparseOperator assemble(const HamiltonianSpec& spec, const FockBasis& basis,
                        std::optional<double> time = std::nullopt);

/// Diagonal of the potential part alone (number basis).
std::vector<double> potential_diagonal(const HamiltonianSpec& spec, const FockBasis& basis);

/// P H P for a diagonal 0/1 idempotent projector.
SparseOperator effective(const HamiltonianSpec& spec, const FockBasis& basis,
                         const SparseOperator& projector);

}  // namespace bosonlight
