#include "bosonlight/evolve.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace bosonlight {

namespace {

constexpr std::int64_t kDenseLimit = 512;

StateVector evolve_dense(const SparseOperator& H, const StateVector& psi, double t) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd(H.matrix()) * Complex{0.0, -t};
    return StateVector{A.exp() * psi.amplitudes};
}

// One Lanczos step of size at most m; returns the propagated vector and an
// error estimate from the last subdiagonal element.
struct KrylovStep {
    Eigen::VectorXcd result;
    double error_estimate = 0.0;
};

KrylovStep krylov_step(const SparseMatrix& H, const Eigen::VectorXcd& v, double dt, int m) {
    const std::int64_t n = v.size();
    const double beta0 = v.norm();
    if (beta0 == 0.0) return {v, 0.0};

    m = static_cast<int>(std::min<std::int64_t>(m, n));
    Eigen::MatrixXcd V(n, m);
    Eigen::VectorXd alpha(m), beta(m);  // beta[k] connects k and k+1
    V.col(0) = v / beta0;

    int built = m;
    double next_beta = 0.0;
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXcd w = H * V.col(k);
        if (k > 0) w -= beta[k - 1] * V.col(k - 1);
        alpha[k] = std::real(V.col(k).dot(w));
        w -= alpha[k] * V.col(k);
        // full reorthogonalization; subspaces are small
        for (int j = 0; j <= k; ++j) w -= V.col(j).dot(w) * V.col(j);
        double b = w.norm();
        if (k + 1 < m) {
            beta[k] = b;
            if (b < 1e-14) {  // happy breakdown
                built = k + 1;
                next_beta = 0.0;
                break;
            }
            V.col(k + 1) = w / b;
        } else {
            next_beta = b;
        }
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (int k = 0; k < built; ++k) {
        T(k, k) = alpha[k];
        if (k + 1 < built) T(k, k + 1) = T(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXcd phases(built);
    for (int k = 0; k < built; ++k)
        phases[k] = std::polar(1.0, -dt * es.eigenvalues()[k]);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(built);
    e1[0] = 1.0;
    Eigen::VectorXcd y = es.eigenvectors().cast<Complex>() *
                         phases.asDiagonal() *
                         (es.eigenvectors().transpose().cast<Complex>() * e1);

    KrylovStep out;
    out.result = beta0 * (V.leftCols(built) * y);
    out.error_estimate = next_beta * std::abs(y[built - 1]) * std::abs(dt) * beta0;
    return out;
}

StateVector evolve_krylov(const SparseOperator& H, const StateVector& psi, double t,
                          const EvolutionConfig& cfg) {
    Eigen::VectorXcd v = psi.amplitudes;
    int substeps = 1;
    if (cfg.max_substep > 0.0)
        substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / cfg.max_substep)));

    const int max_refinements = 40;
    for (int attempt = 0; attempt < max_refinements; ++attempt) {
        Eigen::VectorXcd cur = v;
        double dt = t / substeps;
        double per_step_tol = cfg.tolerance / substeps;
        bool ok = true;
        for (int s = 0; s < substeps; ++s) {
            KrylovStep step = krylov_step(H.matrix(), cur, dt, cfg.krylov_dim);
            if (step.error_estimate > per_step_tol) {
                ok = false;
                break;
            }
            cur = std::move(step.result);
        }
        if (ok) return StateVector{cur};
        substeps *= 2;
    }
    throw NumericalFailureError(
        "evolve: Krylov propagation did not converge after substep refinement "
        "(dim=" + std::to_string(H.dim()) + ", t=" + std::to_string(t) +
        ", krylov_dim=" + std::to_string(cfg.krylov_dim) + ")");
}

}  // namespace

StateVector evolve(const SparseOperator& H, const StateVector& psi, double t,
                   const EvolutionConfig& cfg) {
    if (H.dim() != psi.dim()) throw std::invalid_argument("evolve: dim mismatch");
    if (cfg.tolerance <= 0.0 || cfg.krylov_dim < 2)
        throw std::invalid_argument("evolve: bad config");
    if (t == 0.0) return psi;

    switch (cfg.method) {
        case EvolveMethod::Dense:
            return evolve_dense(H, psi, t);
        case EvolveMethod::Krylov:
            return evolve_krylov(H, psi, t, cfg);
        case EvolveMethod::Auto:
            return H.dim() <= kDenseLimit ? evolve_dense(H, psi, t)
                                          : evolve_krylov(H, psi, t, cfg);
    }
    throw std::logic_error("evolve: unreachable");
}

StateVector evolve_schedule(const std::vector<EvolutionInterval>& intervals,
                            const StateVector& psi, const EvolutionConfig& cfg) {
    StateVector cur = psi;
    for (const auto& iv : intervals) cur = evolve(*iv.H, cur, iv.duration, cfg);
    return cur;
}

}  // namespace bosonlight
