#include "bosonlight/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bosonlight {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Weight on basis states where some site sits exactly at its cap while the
// cap actually truncates.  The dynamics conserves the total boson number, so
// a cap only truncates when it is below the state's own total occupation;
// sector-complete caps contribute nothing.
double cap_saturation_weight(const StateVector& psi, const FockBasis& basis) {
    const auto& caps = basis.caps();
    double w = 0.0;
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        const int total = std::accumulate(occ.begin(), occ.end(), 0);
        for (int i = 0; i < basis.num_sites(); ++i) {
            if (occ[i] == caps[i] && caps[i] < total) {
                w += std::norm(psi.amplitudes[k]);
                break;
            }
        }
    }
    return w;
}

void require_margin(const StateVector& psi0, const StateVector& psi_t,
                    const FockBasis& basis, const char* who) {
    constexpr double kLeakageTol = 1e-10;
    double w0 = cap_saturation_weight(psi0, basis);
    double wt = cap_saturation_weight(psi_t, basis);
    if (w0 > kLeakageTol || wt > kLeakageTol)
        throw MarginError(std::string(who) +
                          ": truncation leakage " + std::to_string(std::max(w0, wt)) +
                          " exceeds 1e-10; enlarge the caps");
}

std::vector<double> boundary_exp_weights(const LatticeGraph& lattice, const SiteSet& X) {
    // w_j = sum_{i in bd X} e^{-d(i,j)}
    std::vector<double> w(lattice.num_sites(), 0.0);
    const SiteSet bd = boundary(lattice, X);
    for (int j = 0; j < lattice.num_sites(); ++j)
        for (int i : bd.sites()) w[j] += std::exp(-lattice.distance(i, j));
    return w;
}

std::vector<double> exterior_decay_weights(const LatticeGraph& lattice, const SiteSet& XR) {
    // e^{-3 d(j, X[R]) / 4} outside X[R], zero inside
    std::vector<double> w(lattice.num_sites(), 0.0);
    for (int j = 0; j < lattice.num_sites(); ++j)
        if (!XR.contains(j)) w[j] = std::exp(-0.75 * distance_to_set(lattice, j, XR));
    return w;
}

// <psi| (a n_A + b D + c)^s |psi> for diagonal weights; everything here is
// diagonal in the occupation basis.
double diagonal_power_expectation(const StateVector& psi, const FockBasis& basis,
                                  const SiteSet& A, double a,
                                  const std::vector<double>& weights, double b,
                                  double c, int s) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        double nA = 0.0;
        for (int site : A.sites()) nA += occ[site];
        double d = 0.0;
        for (int site = 0; site < basis.num_sites(); ++site) d += weights[site] * occ[site];
        acc += std::pow(a * nA + b * d + c, s) * std::norm(psi.amplitudes[k]);
    }
    return acc;
}

}  // namespace

double lambda_c(double c, int D, double gamma) {
    if (c <= 0.0) throw std::invalid_argument("lambda_c: c must be positive");
    return 1.0 + std::pow(c, -D - 1) * std::exp(c) * gamma * factorial(D);
}

ConstantsTable compute_constants(const ConstantsInput& in) {
    if (!(in.tau > 0.0) || in.tau > 1.0 / (4.0 * in.gamma * in.J_bar))
        throw std::invalid_argument("compute_constants: need 0 < tau <= 1/(4 gamma Jbar)");
    ConstantsTable c;
    c.in = in;
    c.lambda_half = lambda_c(0.5, in.D, in.gamma);
    c.lambda_quarter = lambda_c(0.25, in.D, in.gamma);
    c.lambda_three_quarter = lambda_c(0.75, in.D, in.gamma);
    const double gJt = in.gamma * in.J_bar * in.tau;
    c.c_tau_1 = 40.0 * std::exp(4.0 * gJt);
    c.c_tau_2 = std::exp(4.0 * gJt + 1.0) * (1.0 + 8.0 * gJt + in.tau);
    c.f_tau = 0.5 * std::log(1.0 + 1.0 / (5.0 * c.c_tau_1 * c.lambda_half + 2.0));
    c.delta_ell = 5.0 * c.c_tau_1 * c.lambda_half * std::exp(-c.f_tau * in.ell);
    const double steps = in.tau > 0.0 ? in.t / in.tau : 0.0;
    c.delta_tilde_ell =
        c.c_tau_2 * steps *
        (3.0 * steps * c.delta_ell +
         2.0 * c.c_tau_1 * c.lambda_three_quarter * std::exp(-3.0 * in.ell / 16.0) *
             in.boundary_size);
    c.ell_t = in.ell_t_coeff * in.t * std::log(std::max(in.t, 2.0));
    return c;
}

StateVector make_initial_state(const InitialStateSpec& spec, const FockBasis& basis) {
    switch (spec.kind) {
        case InitialStateSpec::Kind::Mott: {
            std::vector<int> occ(basis.num_sites(), spec.mott_filling);
            return basis_state(basis, occ);
        }
        case InitialStateSpec::Kind::CoherentTruncated: {
            const double alpha = std::sqrt(spec.coherent_mean);
            Eigen::VectorXcd amp(basis.dim());
            for (std::int64_t k = 0; k < basis.dim(); ++k) {
                const auto& occ = basis.occupations(k);
                double a = 1.0;
                for (int n : occ) a *= std::pow(alpha, n) / std::sqrt(factorial(n));
                amp[k] = a;
            }
            return StateVector{amp}.normalized();
        }
        case InitialStateSpec::Kind::Custom: {
            if (static_cast<std::int64_t>(spec.custom_amplitudes.size()) != basis.dim())
                throw std::invalid_argument("make_initial_state: amplitude count mismatch");
            Eigen::VectorXcd amp(basis.dim());
            for (std::int64_t k = 0; k < basis.dim(); ++k) amp[k] = spec.custom_amplitudes[k];
            return StateVector{amp}.normalized();
        }
    }
    throw std::logic_error("make_initial_state: unreachable");
}

StateVector random_state(const FockBasis& basis, std::mt19937_64& rng, int max_site_occ) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(basis.dim());
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const auto& occ = basis.occupations(k);
        if (max_site_occ >= 0 &&
            *std::max_element(occ.begin(), occ.end()) > max_site_occ)
            continue;
        amp[k] = Complex{gauss(rng), gauss(rng)};
    }
    StateVector psi{amp};
    if (psi.norm() == 0.0)
        throw std::invalid_argument("random_state: admissible sub-basis is empty");
    return psi.normalized();
}

bool BoundReport::all_satisfied() const {
    return std::all_of(points.begin(), points.end(),
                       [](const BoundPoint& p) { return p.satisfied; });
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinearFit fit;
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n) return fit;
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t k = 0; k < n; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.valid = true;
    return fit;
}

bool bound_satisfied(double lhs, double rhs) {
    return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

BoundReport schuch_check(const StateVector& psi, const SiteSet& X, double tau, int s,
                         const HamiltonianSpec& spec, const FockBasis& basis,
                         double gamma, const EvolutionConfig& cfg) {
    if (s < 1) throw std::invalid_argument("schuch_check: s must be >= 1");
    const double J_bar = spec.max_hopping();
    if (!(tau > 0.0) || tau > 1.0 / (4.0 * gamma * J_bar))
        throw std::invalid_argument("schuch_check: need 0 < tau <= 1/(4 gamma Jbar)");

    ConstantsInput in;
    in.gamma = gamma;
    in.J_bar = J_bar;
    in.tau = tau;
    in.D = spec.lattice().dimension();
    in.t = tau;
    const ConstantsTable ct = compute_constants(in);

    const SparseOperator H = assemble(spec, basis);
    const StateVector psi_t = evolve(H, psi, tau, cfg);
    require_margin(psi, psi_t, basis, "schuch_check");

    const double lhs = std::real(expectation(psi_t, op_number(basis, X, s)));

    const SiteSet bd = boundary(spec.lattice(), X);
    std::vector<double> weights(spec.lattice().num_sites(), 0.0);
    if (!bd.empty()) weights = boundary_exp_weights(spec.lattice(), X);
    const double rhs = diagonal_power_expectation(psi, basis, X, 1.0, weights, ct.c_tau_1,
                                                  ct.c_tau_2 * s, s);

    BoundReport report;
    report.experiment = "schuch";
    report.points.push_back(
        {"s", static_cast<double>(s), lhs, rhs, bound_satisfied(lhs, rhs), true});
    return report;
}

int minimal_admissible_radius(double t, double tau, double gamma, double J_bar, int D) {
    ConstantsInput in;
    in.gamma = gamma;
    in.J_bar = J_bar;
    in.tau = tau;
    in.D = D;
    in.t = t;
    const ConstantsTable ct = compute_constants(in);
    const double steps = t / tau;
    const double ell_min =
        std::log(5.0 * ct.c_tau_1 * ct.lambda_half * steps) / ct.f_tau;
    return static_cast<int>(std::ceil(steps * std::ceil(ell_min)));
}

BoundReport transport_check(const StateVector& psi, const SiteSet& X, int R, double t,
                            int s, const HamiltonianSpec& spec, const FockBasis& basis,
                            double gamma, double tau, bool enforce_ell_condition,
                            const EvolutionConfig& cfg) {
    if (s < 1) throw std::invalid_argument("transport_check: s must be >= 1");
    if (R < 0) throw std::invalid_argument("transport_check: R must be >= 0");
    const double J_bar = spec.max_hopping();
    if (!(tau > 0.0) || tau > 1.0 / (4.0 * gamma * J_bar))
        throw std::invalid_argument("transport_check: need 0 < tau <= 1/(4 gamma Jbar)");
    const double steps = t / tau;
    if (std::abs(steps - std::round(steps)) > 1e-9)
        throw std::invalid_argument("transport_check: t/tau must be an integer");

    const int ell = static_cast<int>(std::floor(R / steps));
    const SiteSet XR = ball(spec.lattice(), X, R);
    const SiteSet bd_XR = boundary(spec.lattice(), XR);

    ConstantsInput in;
    in.gamma = gamma;
    in.J_bar = J_bar;
    in.tau = tau;
    in.D = spec.lattice().dimension();
    in.ell = ell;
    in.t = t;
    in.R = R;
    in.boundary_size = bd_XR.size();
    const ConstantsTable ct = compute_constants(in);

    const double ell_min = std::log(5.0 * ct.c_tau_1 * ct.lambda_half * steps) / ct.f_tau;
    const bool admissible = ell >= ell_min;
    if (!admissible && enforce_ell_condition)
        throw std::invalid_argument(
            "transport_check: block length condition unmet; minimal admissible R = " +
            std::to_string(minimal_admissible_radius(t, tau, gamma, J_bar, in.D)));

    const SparseOperator H = assemble(spec, basis);
    const StateVector psi_t = evolve(H, psi, t, cfg);
    require_margin(psi, psi_t, basis, "transport_check");

    const double lhs = std::real(expectation(psi_t, op_number(basis, X, s)));

    const std::vector<double> weights = exterior_decay_weights(spec.lattice(), XR);
    const double a = 1.0 + 3.0 * steps * ct.delta_ell;
    const double b = 2.0 * ct.c_tau_1 * std::exp(-3.0 * ell / 16.0);
    const double c = (ct.c_tau_2 * steps + ct.delta_tilde_ell) * s;
    const double rhs = diagonal_power_expectation(psi, basis, XR, a, weights, b, c, s);

    BoundReport report;
    report.experiment = "transport";
    report.points.push_back(
        {"R", static_cast<double>(R), lhs, rhs, bound_satisfied(lhs, rhs), admissible});
    return report;
}

double number_tail(const StateVector& psi_t, const SiteSet& region, int x,
                   const FockBasis& basis) {
    if (x <= 0) return std::real(expectation(psi_t, SparseOperator::identity(basis.dim())));
    int cap_total = 0;
    for (int i : region.sites()) cap_total += basis.caps()[i];
    if (x > cap_total) return 0.0;
    return std::real(
        expectation(psi_t, projector_number(basis, region, x, cap_total)));
}

double lr_error(const StateVector& psi0, const SparseOperator& O, const SiteSet& X0,
                int R, double t, const HamiltonianSpec& spec, const FockBasis& basis,
                const EvolutionConfig& cfg) {
    if (X0.empty()) throw std::invalid_argument("lr_error: empty support");
    if (O.dim() != basis.dim()) throw std::invalid_argument("lr_error: operator dim mismatch");

    const SiteSet XR = ball(spec.lattice(), X0, R);
    const HamiltonianSpec sub = subset_hamiltonian(spec, XR);
    const SparseOperator H = assemble(spec, basis);
    const SparseOperator H_sub = assemble(sub, basis);

    auto heisenberg_apply = [&](const SparseOperator& ham) {
        StateVector v = evolve(ham, psi0, t, cfg);
        v = StateVector{O.matrix() * v.amplitudes};
        return evolve(ham, v, -t, cfg);
    };
    const StateVector full = heisenberg_apply(H);
    const StateVector local = heisenberg_apply(H_sub);
    return pure_state_trace_distance(StateVector{full.amplitudes - local.amplitudes});
}

}  // namespace bosonlight
