#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bosonlight/bounds.hpp"
#include "bosonlight/evolve.hpp"
#include "bosonlight/hamiltonian.hpp"

namespace bosonlight {

struct HHKLConfig {
    int block_size = 1;       // ell
    double dt = 0.1;          // slice length
    double t_total = 1.0;     // m_0 = t_total / dt must be integral
    int truncation = -1;      // q-bar; < 0 keeps the basis caps
    bool interaction_picture = false;
    double rotation_substep_divisor = 4.0;  // substep = dt / divisor
    EvolutionConfig evolution;
};

struct HHKLStep {
    int slice = 0;
    SiteSet block;
    double t_start = 0.0;
    double t_end = 0.0;
    bool forward = true;
};

using HHKLSequence = std::vector<HHKLStep>;

/// Forward/backward/forward block pattern per slice: odd pair-blocks forward,
/// interior single blocks backward, even pair-blocks forward.
HHKLSequence hhkl_sequence(const LatticeGraph& lattice, const HHKLConfig& cfg);

/// Serialize a sequence as a JSON array of
/// {slice, block_sites, t_start, t_end, direction}.
std::string hhkl_sequence_to_json(const HHKLSequence& seq);

/// Diagonal interaction part and the rotated hopping generator
/// H0(x) = e^{iVx} H0 e^{-iVx}: each hopping entry picks up the phase
/// e^{i (V_row - V_col) x}.
struct InteractionSplit {
    std::vector<double> potential;  // diagonal V in the number basis
    std::function<SparseOperator(double)> rotated_hopping;  // H0(x)
    SparseOperator hopping_at(double x) const { return rotated_hopping(x); }
};

InteractionSplit interaction_split(const HamiltonianSpec& spec, const FockBasis& basis);

/// Apply e^{-iVt} as a diagonal phase.
StateVector apply_potential_phase(const std::vector<double>& potential,
                                  const StateVector& psi, double t);

/// Approximate e^{-iHt}|psi0> by the block sequence.
StateVector simulate_hhkl(const StateVector& psi0, const HamiltonianSpec& spec,
                          const FockBasis& basis, const HHKLConfig& cfg);

/// Errors ||psi_hhkl - psi_exact|| per block size, with a linear fit of
/// log-error against ell (slope = -mu estimate).
BoundReport hhkl_error_scan(const StateVector& psi0, const HamiltonianSpec& spec,
                            const FockBasis& basis, const std::vector<int>& ell_values,
                            const HHKLConfig& cfg);

/// Symbolic gate-cost assembly: dt = 1/q-bar, ell = log(|Lambda| t / eps),
/// per-block cost |B|^4 log^2(|B|/eps) log(q-bar).
struct GateCountEstimate {
    std::int64_t num_sites = 0;
    double t = 0.0;
    double truncation = 0.0;  // q-bar
    double epsilon = 0.0;
    int D = 1;
    double block_size = 0.0;
    double dt = 0.0;
    double per_block = 0.0;
    double num_blocks = 0.0;
    double total = 0.0;
    double depth = 0.0;
};

/// block_size_override > 0 pins |B| instead of deriving it from
/// ell = log(|Lambda| t / eps); with |B| pinned the total is exactly linear
/// in the number of sites.
GateCountEstimate gate_count(std::int64_t num_sites, double t, double q_bar,
                             double epsilon, int D,
                             double block_size_override = 0.0);

}  // namespace bosonlight
