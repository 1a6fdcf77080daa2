#include "bosonlight/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace bosonlight {

namespace {

// Gate searches evaluate e^{-iHt}|psi> at hundreds of times for one fixed H;
// a single eigendecomposition makes each evaluation O(dim^2).
class DensePropagator {
public:
    explicit DensePropagator(const SparseOperator& H) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            Eigen::MatrixXcd(H.matrix()));
        evals_ = solver.eigenvalues();
        evecs_ = solver.eigenvectors();
    }

    StateVector apply(const StateVector& psi, double t) const {
        Eigen::VectorXcd coeffs = evecs_.adjoint() * psi.amplitudes;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k)
            coeffs[k] *= std::polar(1.0, -evals_[k] * t);
        return StateVector{evecs_ * coeffs};
    }

private:
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
};

double overlap_sq(const StateVector& a, const StateVector& b) {
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

// Coarse grid scan followed by golden-section refinement of the bracketing
// interval; the fidelity curves here are smooth Rabi-type oscillations.
double maximize_fidelity(const std::function<double(double)>& fidelity, double t_max) {
    constexpr int grid = 257;
    const double step = t_max / (grid - 1);
    std::vector<double> vals(grid);
    double best_val = 0.0;
    for (int k = 0; k < grid; ++k) {
        vals[k] = fidelity(k * step);
        best_val = std::max(best_val, vals[k]);
    }
    // The overlap is an almost-periodic Rabi curve whose peaks are equal up to
    // off-resonant leakage; take the earliest near-maximal local peak so the
    // reported time is the first passage, not a marginally higher revival.
    int best = grid - 1;
    for (int k = 1; k < grid; ++k) {
        const bool local_max =
            vals[k] >= vals[k - 1] && (k == grid - 1 || vals[k] >= vals[k + 1]);
        if (local_max && vals[k] >= 0.95 * best_val) {
            best = k;
            break;
        }
    }
    double a = std::max(0.0, (best - 1) * step);
    double b = std::min(t_max, (best + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = fidelity(x1);
    double f2 = fidelity(x2);
    for (int iter = 0; iter < 60 && (b - a) > 1e-13 * std::max(1.0, t_max); ++iter) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fidelity(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fidelity(x2);
        }
    }
    return 0.5 * (a + b);
}

HamiltonianSpec cnot_spec(const LatticeGraph& lattice, const CnotGateSpec& g) {
    std::vector<HoppingTerm> hops{{2, 3, Complex{g.J, 0.0}}};
    std::vector<PotentialTerm> pots;
    pots.push_back({{1, 2}, {{{1, 1}, g.h}}});       // h n_2 n_3
    pots.push_back({{0, 2}, {{{1, 1}, -g.h}}});      // -h n_1 n_3
    pots.push_back({{2, 3}, {{{1, 1}, g.U}}});       // U n_3 n_4
    pots.push_back({{3}, {{{1}, g.U}, {{0}, -g.U * g.nbar}}});  // U (n_4 - nbar)
    return HamiltonianSpec(&lattice, std::move(hops), std::move(pots), 2);
}

std::vector<int> logical_occ(int nbar, bool one) {
    return one ? std::vector<int>{nbar, nbar} : std::vector<int>{nbar - 1, nbar + 1};
}

}  // namespace

GateResult transfer_gate(const TransferGateSpec& spec, const EvolutionConfig& cfg) {
    if (spec.N < 1) throw std::invalid_argument("transfer_gate: N must be >= 1");
    if (!(spec.J > 0.0) || !(spec.U > 0.0))
        throw std::invalid_argument("transfer_gate: J and U must be positive");

    const LatticeGraph lattice = LatticeGraph::hypercubic({2}, {false});
    const FockBasis basis(lattice, {spec.N + 1, spec.N + 1}, spec.N + 1);

    const HamiltonianSpec free_spec(&lattice, {{0, 1, Complex{spec.J, 0.0}}}, {}, 0);
    const double h = (2 * spec.N + 1) * spec.U;
    std::vector<PotentialTerm> pots;
    pots.push_back({{1}, {{{1}, h}, {{2}, -spec.U}}});  // h n_2 - U n_2^2
    const HamiltonianSpec resonant_spec(&lattice, {{0, 1, Complex{spec.J, 0.0}}},
                                        std::move(pots), 0);

    GateResult result;
    result.two_level_time =
        std::numbers::pi / (2.0 * spec.J * std::sqrt(spec.N + 1.0));

    // Degeneracy of the resonant pair |1,N> and |0,N+1> at U N (N+1), with the
    // remaining diagonal entries at least 2U below.
    {
        const std::vector<double> V = potential_diagonal(resonant_spec, basis);
        const double target = spec.U * spec.N * (spec.N + 1.0);
        const std::int64_t r1 = basis.rank({1, spec.N});
        const std::int64_t r2 = basis.rank({0, spec.N + 1});
        result.degeneracy_deviation =
            std::max(std::abs(V[r1] - target), std::abs(V[r2] - target));
        for (std::int64_t k = 0; k < basis.dim(); ++k) {
            if (k == r1 || k == r2) continue;
            if (V[k] > target - 2.0 * spec.U + 1e-9)
                throw std::logic_error("transfer_gate: off-resonant level too close");
        }
    }

    // Stage 1: free-hopping swap |N,1> -> |1,N> at t = pi/(2J).
    (void)cfg;
    const DensePropagator U_free(assemble(free_spec, basis));
    const StateVector start = basis_state(basis, {spec.N, 1});
    const StateVector swapped_target = basis_state(basis, {1, spec.N});
    const double t_swap = std::numbers::pi / (2.0 * spec.J);
    const StateVector after_swap = U_free.apply(start, t_swap);
    result.fidelities.emplace_back("swap", overlap_sq(after_swap, swapped_target));

    // Stage 2: resonant flip |1,N> -> |0,N+1>.
    const DensePropagator U_res(assemble(resonant_spec, basis));
    const StateVector final_target = basis_state(basis, {0, spec.N + 1});
    auto flip_fid = [&](double t) {
        return overlap_sq(U_res.apply(swapped_target, t), final_target);
    };
    const double t_star = spec.duration > 0.0
                              ? spec.duration
                              : maximize_fidelity(flip_fid, 4.0 * result.two_level_time);
    result.optimal_time = t_star;
    result.fidelities.emplace_back("flip", flip_fid(t_star));
    result.fidelities.emplace_back(
        "overall", overlap_sq(U_res.apply(after_swap, t_star), final_target));
    return result;
}

GateResult cnot_gate(const CnotGateSpec& spec, const EvolutionConfig& cfg) {
    if (spec.nbar < 1) throw std::invalid_argument("cnot_gate: nbar must be >= 1");
    if (!(spec.J > 0.0) || !(spec.U > 0.0) || !(spec.h > 0.0))
        throw std::invalid_argument("cnot_gate: J, U, h must be positive");

    const int nbar = spec.nbar;
    const LatticeGraph lattice = LatticeGraph::hypercubic({4}, {false});
    const FockBasis basis(lattice, std::vector<int>(4, 2 * nbar), 4 * nbar);
    const HamiltonianSpec hspec = cnot_spec(lattice, spec);
    (void)cfg;
    const DensePropagator U_gate(assemble(hspec, basis));

    GateResult result;
    result.two_level_time =
        std::numbers::pi / (2.0 * spec.J * std::sqrt(nbar * (nbar + 1.0)));

    // Diagonal of V on |nbar,nbar,nbar-j,nbar+j> is U (nbar^2 - j^2 + j);
    // j = 0 and j = 1 are degenerate, the rest sit >= 2U away.
    {
        const std::vector<double> V = potential_diagonal(hspec, basis);
        double dev = 0.0;
        for (int j = 0; j <= nbar; ++j) {
            const std::int64_t r = basis.rank({nbar, nbar, nbar - j, nbar + j});
            const double target = spec.U * (nbar * nbar - j * j + j);
            dev = std::max(dev, std::abs(V[r] - target));
        }
        result.degeneracy_deviation = dev;
    }

    auto product = [&](bool control_one, bool target_one) {
        const auto c = logical_occ(nbar, control_one);
        const auto t = logical_occ(nbar, target_one);
        return basis_state(basis, {c[0], c[1], t[0], t[1]});
    };

    auto fid = [&](const StateVector& in, const StateVector& out, double t) {
        return overlap_sq(U_gate.apply(in, t), out);
    };
    auto flip_fid = [&](double t) { return fid(product(true, true), product(true, false), t); };

    const double t_star = spec.duration > 0.0
                              ? spec.duration
                              : maximize_fidelity(flip_fid, 4.0 * result.two_level_time);
    result.optimal_time = t_star;
    result.fidelities.emplace_back("flip_11_to_10", flip_fid(t_star));
    result.fidelities.emplace_back("flip_10_to_11",
                                   fid(product(true, false), product(true, true), t_star));
    result.fidelities.emplace_back("hold_01",
                                   fid(product(false, true), product(false, true), t_star));
    result.fidelities.emplace_back("hold_00",
                                   fid(product(false, false), product(false, false), t_star));
    return result;
}

BoundReport gate_time_scaling(const std::vector<int>& nbar_values, double J, double U,
                              double h, const EvolutionConfig& cfg) {
    BoundReport report;
    report.experiment = "gate_time_scaling";
    const double ideal = std::numbers::pi / (2.0 * J);
    std::vector<double> xs, ys;
    for (int nbar : nbar_values) {
        CnotGateSpec g;
        g.nbar = nbar;
        g.J = J;
        g.U = U;
        g.h = h;
        const GateResult r = cnot_gate(g, cfg);
        const double scaled = r.optimal_time * std::sqrt(nbar * (nbar + 1.0));
        report.points.push_back({"nbar", static_cast<double>(nbar), scaled, ideal,
                                 std::abs(scaled - ideal) <= 0.05 * ideal, true});
        xs.push_back(std::log(static_cast<double>(nbar)));
        ys.push_back(std::log(r.optimal_time));
    }
    if (xs.size() >= 3) report.fit = linear_fit(xs, ys);
    return report;
}

PropagationRecord acceleration_demo(int rungs, int nbar, double J, double U, double h,
                                    double t_budget, bool flip_branch,
                                    const EvolutionConfig& cfg) {
    if (rungs < 2) throw std::invalid_argument("acceleration_demo: need >= 2 rungs");

    CnotGateSpec g;
    g.nbar = nbar;
    g.J = J;
    g.U = U;
    g.h = h;
    const GateResult gate = cnot_gate(g, cfg);
    const double t_star = gate.optimal_time;

    const LatticeGraph rung_lattice = LatticeGraph::hypercubic({2}, {false});
    const FockBasis rung_basis(rung_lattice, {2 * nbar, 2 * nbar}, 2 * nbar);
    const LatticeGraph joint_lattice = LatticeGraph::hypercubic({4}, {false});
    const FockBasis joint_basis(joint_lattice, std::vector<int>(4, 2 * nbar), 4 * nbar);
    const DensePropagator U_gate(assemble(cnot_spec(joint_lattice, g), joint_basis));

    const StateVector logical_one = basis_state(rung_basis, logical_occ(nbar, true));
    const StateVector logical_zero = basis_state(rung_basis, logical_occ(nbar, false));

    PropagationRecord record;
    record.rows.push_back({0, flip_branch ? 1.0 : 0.0, flip_branch ? 0.0 : 1.0});

    // Each gate conserves the control-rung occupations site by site, so the
    // ladder state stays factorized; amplitudes are carried unnormalized so
    // row fidelities include the accumulated leakage of earlier gates.
    StateVector control = flip_branch ? logical_one : logical_zero;
    for (int r = 1; r < rungs; ++r) {
        if (record.total_time + t_star > t_budget) {
            record.completed = false;
            break;
        }
        // control (x) |0>_target embedded in the joint sector basis
        Eigen::VectorXcd joint = Eigen::VectorXcd::Zero(joint_basis.dim());
        for (std::int64_t a = 0; a < rung_basis.dim(); ++a) {
            const Complex ca = control.amplitudes[a];
            if (std::abs(ca) < 1e-300) continue;
            const auto& occ_c = rung_basis.occupations(a);
            const auto zero = logical_occ(nbar, false);
            const std::int64_t k =
                joint_basis.rank({occ_c[0], occ_c[1], zero[0], zero[1]});
            joint[k] = ca;
        }
        const StateVector evolved = U_gate.apply(StateVector{joint}, t_star);

        // Contract the control sites against their pre-gate state.
        Eigen::VectorXcd target = Eigen::VectorXcd::Zero(rung_basis.dim());
        for (std::int64_t k = 0; k < joint_basis.dim(); ++k) {
            const Complex amp = evolved.amplitudes[k];
            if (std::abs(amp) < 1e-300) continue;
            const auto& occ = joint_basis.occupations(k);
            const std::int64_t a = rung_basis.rank({occ[0], occ[1]});
            const std::int64_t b = rung_basis.rank({occ[2], occ[3]});
            if (a < 0 || b < 0) continue;
            target[b] += std::conj(control.amplitudes[a]) * amp;
        }
        const StateVector target_state{target};
        const double f_flip = overlap_sq(target_state, logical_one);
        const double f_hold = overlap_sq(target_state, logical_zero);
        record.rows.push_back({r, f_flip, f_hold});
        record.total_time += t_star;
        control = target_state;
    }

    for (const auto& row : record.rows)
        if ((flip_branch ? row.fidelity_flip : row.fidelity_hold) >= 0.9)
            record.furthest_flipped = row.rung;
    return record;
}

}  // namespace bosonlight
