#pragma once

#include <string>
#include <vector>

#include "bosonlight/bounds.hpp"
#include "bosonlight/evolve.hpp"
#include "bosonlight/fock.hpp"
#include "bosonlight/hamiltonian.hpp"

namespace bosonlight {

/// Two-site boson transfer |N,1> -> |0,N+1> via a swap stage under the free
/// hopping and a resonant stage under H0 + h n_2 - U n_2^2 with h = (2N+1)U.
struct TransferGateSpec {
    int N = 1;
    double J = 1.0;
    double U = 1.0;
    double duration = 0.0;  // 0: scan window derived from the two-level scale
};

/// Four-site controlled flip: logical |1> = |nbar,nbar>, |0> = |nbar-1,nbar+1>;
/// H = J(b3^dag b4 + h.c.) + h (n_2 - n_1) n_3 + U (n_3 n_4 + n_4 - nbar).
struct CnotGateSpec {
    int nbar = 1;
    double J = 1.0;
    double U = 1.0;
    double h = 1.0;
    double duration = 0.0;
};

struct GateResult {
    std::vector<std::pair<std::string, double>> fidelities;
    double optimal_time = 0.0;
    double two_level_time = 0.0;  // pi / (2 J sqrt(..)) reference
    double degeneracy_deviation = 0.0;  // max |diag - closed form| over the pair
};

GateResult transfer_gate(const TransferGateSpec& spec,
                         const EvolutionConfig& cfg = {});

GateResult cnot_gate(const CnotGateSpec& spec, const EvolutionConfig& cfg = {});

/// Optimal flip times per nbar with the constancy check of
/// t*(nbar) sqrt(nbar (nbar+1)).
BoundReport gate_time_scaling(const std::vector<int>& nbar_values, double J, double U,
                              double h, const EvolutionConfig& cfg = {});

/// Sequential CNOT chain down a ladder of two-site rungs; spectator rungs are
/// frozen, so the state stays factorized per rung.
struct PropagationRecord {
    struct Row {
        int rung = 0;
        double fidelity_flip = 0.0;    // to logical |1>
        double fidelity_hold = 0.0;    // to logical |0>
    };
    std::vector<Row> rows;
    int furthest_flipped = 0;  // last rung with flip fidelity >= 0.9
    double total_time = 0.0;
    bool completed = true;
};

PropagationRecord acceleration_demo(int rungs, int nbar, double J, double U, double h,
                                    double t_budget, bool flip_branch,
                                    const EvolutionConfig& cfg = {});

}  // namespace bosonlight
