#pragma once

#include <vector>

#include "bosonlight/fock.hpp"

namespace bosonlight {

enum class EvolveMethod { Dense, Krylov, Auto };

struct EvolutionConfig {
    EvolveMethod method = EvolveMethod::Auto;
    double tolerance = 1e-10;
    int krylov_dim = 30;
    double max_substep = 0.0;  // 0: no explicit cap
};

/// e^{-i H t} |psi> for hermitian H.  Auto: dense scaling-and-squaring up to
/// dim 512, Krylov (Lanczos) with adaptive substeps beyond.
StateVector evolve(const SparseOperator& H, const StateVector& psi, double t,
                   const EvolutionConfig& cfg = {});

/// Ordered product of interval propagators: intervals applied first-to-last.
struct EvolutionInterval {
    const SparseOperator* H = nullptr;
    double duration = 0.0;
};
StateVector evolve_schedule(const std::vector<EvolutionInterval>& intervals,
                            const StateVector& psi, const EvolutionConfig& cfg = {});

}  // namespace bosonlight
