#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bosonlight/evolve.hpp"
#include "bosonlight/fock.hpp"
#include "bosonlight/hamiltonian.hpp"

namespace bosonlight {

/// Evolved occupancy would touch the truncation cap, so the check cannot
/// certify the untruncated inequality.
class MarginError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// lambda_c = 1 + c^{-D-1} e^c gamma D!
double lambda_c(double c, int D, double gamma);

struct ConstantsInput {
    double gamma = 0.0;
    double J_bar = 0.0;
    double tau = 0.0;
    int D = 1;
    double ell = 0.0;
    double t = 0.0;
    double R = 0.0;
    double boundary_size = 1.0;  // |bd X[R]| entering delta_tilde_ell
    double ell_t_coeff = 1.0;    // prefactor of the t log t light-cone scale
};

/// Closed-form constants of the moment and transport bounds.
struct ConstantsTable {
    ConstantsInput in;
    double lambda_half = 0.0;
    double lambda_quarter = 0.0;
    double lambda_three_quarter = 0.0;
    double c_tau_1 = 0.0;       // 40 e^{4 gamma Jbar tau}
    double c_tau_2 = 0.0;       // e^{4 gamma Jbar tau + 1} (1 + 8 gamma Jbar tau + tau)
    double f_tau = 0.0;         // (1/2) log(1 + 1/(5 c1 lambda_{1/2} + 2))
    double delta_ell = 0.0;     // 5 c1 lambda_{1/2} e^{-f_tau ell}
    double delta_tilde_ell = 0.0;
    double ell_t = 0.0;         // coeff * t * log(max(t, 2))
};

ConstantsTable compute_constants(const ConstantsInput& in);

/// Initial-state family for the experiments.
struct InitialStateSpec {
    enum class Kind { Mott, CoherentTruncated, Custom };
    Kind kind = Kind::Mott;
    int mott_filling = 1;
    double coherent_mean = 1.0;            // |alpha|^2 per site
    std::vector<Complex> custom_amplitudes;
    double b0 = 1.0;   // low-boson-density certificate
    double kappa = 1.0;
};

StateVector make_initial_state(const InitialStateSpec& spec, const FockBasis& basis);

/// Normalized state with iid complex Gaussian amplitudes on the sub-basis of
/// states whose occupations are all <= max_site_occ (no restriction when < 0).
StateVector random_state(const FockBasis& basis, std::mt19937_64& rng,
                         int max_site_occ = -1);

struct BoundPoint {
    std::string param_name;
    double param_value = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    bool admissible = true;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool valid = false;
};

struct BoundReport {
    std::string experiment;
    std::vector<BoundPoint> points;
    std::optional<LinearFit> fit;

    bool all_satisfied() const;
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// lhs <= rhs + 1e-9 max(1, |rhs|)
bool bound_satisfied(double lhs, double rhs);

/// Short-time moment bound:
///   <psi(tau)| n_X^s |psi(tau)>  <=  <psi| (n_X + c1 D_X + c2 s)^s |psi>
/// with D_X weights w_j = sum_{i in bd X} e^{-d(i,j)}.
BoundReport schuch_check(const StateVector& psi, const SiteSet& X, double tau, int s,
                         const HamiltonianSpec& spec, const FockBasis& basis,
                         double gamma, const EvolutionConfig& cfg = {});

/// Multi-step transport bound with ell = floor(R / (t/tau)):
///   <n_X(t)^s>  <=  <((1 + 3t delta_ell/tau) n_{X[R]}
///                     + 2 c1 e^{-3 ell/16} Dscr_{X[R]}
///                     + (c2 t/tau + delta_tilde_ell) s)^s>
/// where Dscr has weights e^{-3 d(j, X[R])/4} outside X[R].
/// When enforce_ell_condition is set, an inadmissible ell raises
/// invalid-argument naming the minimal admissible R; otherwise the point is
/// evaluated and marked inadmissible.
BoundReport transport_check(const StateVector& psi, const SiteSet& X, int R, double t,
                            int s, const HamiltonianSpec& spec, const FockBasis& basis,
                            double gamma, double tau,
                            bool enforce_ell_condition = true,
                            const EvolutionConfig& cfg = {});

/// Minimal R for which ell = floor(R/(t/tau)) meets the transport condition.
int minimal_admissible_radius(double t, double tau, double gamma, double J_bar, int D);

/// <psi_t| Pi_{region, >= x} |psi_t>
double number_tail(const StateVector& psi_t, const SiteSet& region, int x,
                   const FockBasis& basis);

/// || (O(H,t) - O(H_{X0[R]},t)) |psi0> || via four state propagations.
double lr_error(const StateVector& psi0, const SparseOperator& O, const SiteSet& X0,
                int R, double t, const HamiltonianSpec& spec, const FockBasis& basis,
                const EvolutionConfig& cfg = {});

}  // namespace bosonlight
