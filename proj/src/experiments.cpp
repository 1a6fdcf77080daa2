#include "bosonlight/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <filesystem>
#include <functional>
#include <sstream>
#include <thread>

#include "bosonlight/evolve.hpp"
#include "bosonlight/hhkl.hpp"
#include "bosonlight/protocol.hpp"
#include "bosonlight/report.hpp"

namespace bosonlight {

namespace {

std::string format_param(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

// Ordered fan-out of independent sweep points: results land in input order
// regardless of which worker finishes first.
template <typename Fn>
std::vector<std::vector<BoundPoint>> parallel_points(int n, int workers, Fn&& fn) {
    std::vector<std::vector<BoundPoint>> results(n);
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int k = 0; k < n; ++k) results[k] = fn(k);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1))
                    results[k] = fn(k);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

struct Problem {
    LatticeGraph lattice;
    std::optional<HamiltonianSpec> spec;
    std::optional<FockBasis> basis;
    EvolutionConfig evolution;
};

LatticeGraph lattice_from_config(const TomlTable& cfg) {
    if (!cfg.has("lattice.dims"))
        throw ConfigError("missing config key 'lattice.dims'");
    const auto dims64 = cfg.get_int_array("lattice.dims");
    std::vector<int> dims(dims64.begin(), dims64.end());
    std::vector<bool> periodic;
    if (cfg.has("lattice.periodic")) periodic = cfg.get_bool_array("lattice.periodic");
    return LatticeGraph::hypercubic(dims, periodic);
}

EvolutionConfig evolution_from_config(const TomlTable& cfg) {
    EvolutionConfig ev;
    const std::string method = cfg.get_string_or("evolve.method", "auto");
    if (method == "dense")
        ev.method = EvolveMethod::Dense;
    else if (method == "krylov")
        ev.method = EvolveMethod::Krylov;
    else if (method == "auto")
        ev.method = EvolveMethod::Auto;
    else
        throw ConfigError("evolve.method must be auto, dense, or krylov");
    ev.tolerance = cfg.get_double_or("evolve.tolerance", ev.tolerance);
    ev.krylov_dim = static_cast<int>(cfg.get_int_or("evolve.krylov_dim", ev.krylov_dim));
    return ev;
}

Problem problem_from_config(const TomlTable& cfg) {
    Problem p;
    p.lattice = lattice_from_config(cfg);
    p.evolution = evolution_from_config(cfg);

    const double J = cfg.get_double("model.J");
    const double U = cfg.get_double_or("model.U", 0.0);
    const double mu = cfg.get_double_or("model.mu", 0.0);
    p.spec = bose_hubbard_spec(p.lattice, J, U, mu);

    const int cap = static_cast<int>(cfg.get_int("basis.cap"));
    std::optional<int> sector;
    if (cfg.has("basis.sector")) sector = static_cast<int>(cfg.get_int("basis.sector"));
    p.basis.emplace(p.lattice, std::vector<int>(p.lattice.num_sites(), cap), sector);
    return p;
}

InitialStateSpec state_from_config(const TomlTable& cfg) {
    InitialStateSpec s;
    const std::string kind = cfg.get_string_or("state.kind", "mott");
    if (kind == "mott")
        s.kind = InitialStateSpec::Kind::Mott;
    else if (kind == "coherent")
        s.kind = InitialStateSpec::Kind::CoherentTruncated;
    else
        throw ConfigError("state.kind must be mott or coherent");
    s.mott_filling = static_cast<int>(cfg.get_int_or("state.filling", 1));
    s.coherent_mean = cfg.get_double_or("state.mean", 1.0);
    return s;
}

SiteSet sites_from_config(const TomlTable& cfg, const std::string& key,
                          const LatticeGraph& lattice) {
    const auto ids64 = cfg.get_int_array(key);
    std::vector<int> ids(ids64.begin(), ids64.end());
    for (int i : ids)
        if (i < 0 || i >= lattice.num_sites())
            throw ConfigError("config key '" + key + "' has site id out of range");
    return SiteSet(std::move(ids));
}

double gamma_from_config(const TomlTable& cfg, const std::string& key,
                         const LatticeGraph& lattice) {
    if (cfg.has(key)) return cfg.get_double(key);
    const auto est = estimate_gamma(lattice, std::min(4, std::max(1, lattice.diameter())));
    if (!est) throw ConfigError("could not estimate gamma; set " + key);
    return est->gamma;
}

BoundReport run_constants(const TomlTable& cfg, std::string& message) {
    ConstantsInput in;
    in.gamma = cfg.get_double("constants.gamma");
    in.J_bar = cfg.get_double("constants.j_bar");
    in.tau = cfg.get_double("constants.tau");
    in.D = static_cast<int>(cfg.get_int_or("constants.dim", 1));
    in.ell = cfg.get_double_or("constants.ell", 1.0);
    in.t = cfg.get_double_or("constants.t", in.tau);
    in.R = cfg.get_double_or("constants.radius", 1.0);
    in.boundary_size = cfg.get_double_or("constants.boundary_size", 1.0);
    in.ell_t_coeff = cfg.get_double_or("constants.ell_t_coeff", 1.0);
    const ConstantsTable table = compute_constants(in);

    BoundReport report;
    report.experiment = "constants";
    auto row = [&](const std::string& name, double value) {
        report.points.push_back({name, 0.0, value, value, true, true});
    };
    row("lambda_half", table.lambda_half);
    row("lambda_quarter", table.lambda_quarter);
    row("lambda_three_quarter", table.lambda_three_quarter);
    row("c_tau_1", table.c_tau_1);
    row("c_tau_2", table.c_tau_2);
    row("f_tau", table.f_tau);
    row("delta_ell", table.delta_ell);
    row("delta_tilde_ell", table.delta_tilde_ell);
    row("ell_t", table.ell_t);

    std::ostringstream out;
    for (const auto& p : report.points) out << p.param_name << " = " << p.lhs << "\n";
    message = out.str();
    return report;
}

BoundReport run_transport(const TomlTable& cfg, const RunOptions& opt,
                          std::uint64_t seed) {
    Problem p = problem_from_config(cfg);
    const SiteSet X = sites_from_config(cfg, "transport.x_sites", p.lattice);
    const double tau = cfg.get_double("transport.tau");
    const double gamma = gamma_from_config(cfg, "transport.gamma", p.lattice);
    const auto s64 = cfg.get_int_array("transport.s_values");
    const std::string mode = cfg.get_string_or("transport.mode", "schuch");

    BoundReport report;
    report.experiment = "transport";
    if (mode == "schuch") {
        const int instances = static_cast<int>(cfg.get_int_or("transport.instances", 20));
        const int max_occ = static_cast<int>(cfg.get_int_or("transport.max_site_occ", -1));
        auto run_one = [&](int k) {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
            const StateVector psi = random_state(*p.basis, rng, max_occ);
            std::vector<BoundPoint> pts;
            for (auto s : s64) {
                BoundReport r = schuch_check(psi, X, tau, static_cast<int>(s), *p.spec,
                                             *p.basis, gamma, p.evolution);
                for (auto& pt : r.points) {
                    pt.param_name = "i" + std::to_string(k) + "_s";
                    pts.push_back(pt);
                }
            }
            return pts;
        };
        for (auto& chunk : parallel_points(instances, opt.workers, run_one))
            report.points.insert(report.points.end(), chunk.begin(), chunk.end());
        return report;
    }
    if (mode != "theorem1")
        throw ConfigError("transport.mode must be schuch or theorem1");

    const StateVector psi = make_initial_state(state_from_config(cfg), *p.basis);
    const auto t_values = cfg.get_double_array("transport.t_values");
    const auto radii64 = cfg.get_int_array("transport.radii");
    const bool enforce = cfg.get_bool_or("transport.enforce_ell_condition", false);

    struct Point {
        double t;
        int R;
        std::int64_t s;
    };
    std::vector<Point> sweep;
    for (double t : t_values)
        for (auto R : radii64)
            for (auto s : s64) sweep.push_back({t, static_cast<int>(R), s});

    auto run_one = [&](int k) {
        const Point& q = sweep[k];
        BoundReport r = transport_check(psi, X, q.R, q.t, static_cast<int>(q.s), *p.spec,
                                        *p.basis, gamma, tau, enforce, p.evolution);
        for (auto& pt : r.points) {
            pt.param_name = "t" + format_param(q.t) + "_s" + std::to_string(q.s);
            pt.param_value = q.R;
        }
        return r.points;
    };
    for (auto& chunk :
         parallel_points(static_cast<int>(sweep.size()), opt.workers, run_one))
        report.points.insert(report.points.end(), chunk.begin(), chunk.end());
    return report;
}

BoundReport run_lr(const TomlTable& cfg, const RunOptions& opt) {
    Problem p = problem_from_config(cfg);
    const SiteSet X0 = sites_from_config(cfg, "lr.x_sites", p.lattice);
    const double t = cfg.get_double("lr.t");
    const auto radii64 = cfg.get_int_array("lr.radii");
    const StateVector psi0 = make_initial_state(state_from_config(cfg), *p.basis);

    const std::string obs = cfg.get_string_or("lr.observable", "phase");
    SparseOperator O;
    if (obs == "phase") {
        const double theta = cfg.get_double_or("lr.theta", std::atan(1.0));
        std::vector<Complex> diag(p.basis->dim());
        for (std::int64_t k = 0; k < p.basis->dim(); ++k) {
            int n = 0;
            for (int i : X0.sites()) n += p.basis->occupations(k)[i];
            diag[k] = std::polar(1.0, theta * n);
        }
        O = SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::No);
    } else if (obs == "number") {
        O = op_number(*p.basis, X0);
    } else {
        throw ConfigError("lr.observable must be phase or number");
    }

    auto run_one = [&](int k) {
        const int R = static_cast<int>(radii64[k]);
        const double err = lr_error(psi0, O, X0, R, t, *p.spec, *p.basis, p.evolution);
        return std::vector<BoundPoint>{
            {"R", static_cast<double>(R), err, 0.0, true, true}};
    };
    BoundReport report;
    report.experiment = "lr";
    auto chunks = parallel_points(static_cast<int>(radii64.size()), opt.workers, run_one);
    double prev = -1.0;
    for (auto& chunk : chunks)
        for (auto& pt : chunk) {
            pt.rhs = prev < 0.0 ? pt.lhs : prev;
            pt.satisfied = prev < 0.0 || pt.lhs <= prev + 1e-12;
            prev = pt.lhs;
            report.points.push_back(pt);
        }
    return report;
}

BoundReport run_hhkl(const TomlTable& cfg, const RunOptions& opt) {
    const std::string mode = cfg.get_string_or("hhkl.mode", "sim");
    BoundReport report;
    report.experiment = "hhkl";
    if (mode == "gates") {
        const auto t_values = cfg.get_double_array("hhkl.t_values");
        const double q_bar = cfg.get_double("hhkl.q_bar");
        const double epsilon = cfg.get_double("hhkl.epsilon");
        const int D = static_cast<int>(cfg.get_int_or("hhkl.dim", 1));
        const auto sites = cfg.get_int_array("hhkl.num_sites_values");
        for (auto n : sites)
            for (double t : t_values) {
                const GateCountEstimate est = gate_count(n, t, q_bar, epsilon, D);
                report.points.push_back({"sites" + std::to_string(n) + "_t", t,
                                         est.total, est.depth, true, true});
            }
        return report;
    }
    if (mode != "sim") throw ConfigError("hhkl.mode must be sim or gates");

    Problem p = problem_from_config(cfg);
    const StateVector psi0 = make_initial_state(state_from_config(cfg), *p.basis);
    const auto ells64 = cfg.get_int_array("hhkl.ells");
    std::vector<int> ells(ells64.begin(), ells64.end());
    HHKLConfig hc;
    hc.dt = cfg.get_double("hhkl.dt");
    hc.t_total = cfg.get_double("hhkl.t_total");
    hc.truncation = static_cast<int>(cfg.get_int_or("hhkl.truncation", -1));
    hc.interaction_picture = cfg.get_bool_or("hhkl.interaction_picture", false);
    hc.evolution = p.evolution;
    (void)opt;
    return hhkl_error_scan(psi0, *p.spec, *p.basis, ells, hc);
}

BoundReport run_protocol(const TomlTable& cfg, const RunOptions& opt) {
    const std::string mode = cfg.get_string_or("protocol.mode", "cnot");
    const double J = cfg.get_double_or("protocol.j", 1.0);
    const double U = J * cfg.get_double_or("protocol.u_over_j", 1000.0);
    // default h well above U: at h = U an accidental resonance unfreezes the
    // control-0 target (the h and U detunings cancel on the reverse hop)
    const double h = J * cfg.get_double_or("protocol.h_over_j", 1.0e6);
    const auto n64 = cfg.has("protocol.n_values") ? cfg.get_int_array("protocol.n_values")
                                                  : std::vector<std::int64_t>{1};
    (void)opt;

    BoundReport report;
    report.experiment = "protocol";
    if (mode == "transfer") {
        for (auto N : n64) {
            TransferGateSpec g;
            g.N = static_cast<int>(N);
            g.J = J;
            g.U = U;
            const GateResult r = transfer_gate(g);
            for (const auto& [name, fid] : r.fidelities)
                report.points.push_back({name + "_N", static_cast<double>(N), fid, 0.99,
                                         fid >= 0.99, true});
            report.points.push_back({"time_ratio_N", static_cast<double>(N),
                                     r.optimal_time / r.two_level_time, 1.05,
                                     std::abs(r.optimal_time / r.two_level_time - 1.0) <=
                                         0.05,
                                     true});
        }
        return report;
    }
    if (mode == "cnot") {
        for (auto n : n64) {
            CnotGateSpec g;
            g.nbar = static_cast<int>(n);
            g.J = J;
            g.U = U;
            g.h = h;
            const GateResult r = cnot_gate(g);
            for (const auto& [name, fid] : r.fidelities) {
                const bool hold = name.rfind("hold", 0) == 0;
                const double threshold = hold ? 0.999 : 0.99;
                report.points.push_back({name + "_n", static_cast<double>(n), fid,
                                         threshold, fid >= threshold, true});
            }
            report.points.push_back({"time_ratio_n", static_cast<double>(n),
                                     r.optimal_time / r.two_level_time, 1.05,
                                     std::abs(r.optimal_time / r.two_level_time - 1.0) <=
                                         0.05,
                                     true});
        }
        return report;
    }
    if (mode == "scaling") {
        std::vector<int> ns(n64.begin(), n64.end());
        return gate_time_scaling(ns, J, U, h);
    }
    if (mode == "acceleration") {
        const int rungs = static_cast<int>(cfg.get_int_or("protocol.rungs", 6));
        const int nbar = static_cast<int>(n64.front());
        const double budget = cfg.get_double_or("protocol.t_budget", 1e9);
        const bool flip = cfg.get_bool_or("protocol.flip", true);
        const PropagationRecord rec =
            acceleration_demo(rungs, nbar, J, U, h, budget, flip);
        for (const auto& row : rec.rows) {
            const double fid = flip ? row.fidelity_flip : row.fidelity_hold;
            report.points.push_back({flip ? "flip_rung" : "hold_rung",
                                     static_cast<double>(row.rung), fid, 0.9, fid >= 0.9,
                                     true});
        }
        return report;
    }
    throw ConfigError("protocol.mode must be transfer, cnot, scaling, or acceleration");
}

}  // namespace

std::int64_t estimate_basis_dimension(int num_sites, int cap, std::optional<int> sector) {
    if (num_sites < 1 || cap < 0) throw std::invalid_argument("bad basis shape");
    if (!sector) {
        double d = 1.0;
        for (int i = 0; i < num_sites; ++i) {
            d *= cap + 1.0;
            if (d > 9e18) return std::numeric_limits<std::int64_t>::max();
        }
        return static_cast<std::int64_t>(d);
    }
    // counts of occupation vectors with per-site cap summing to each total
    std::vector<double> count(*sector + 1, 0.0);
    count[0] = 1.0;
    for (int i = 0; i < num_sites; ++i) {
        std::vector<double> next(*sector + 1, 0.0);
        for (int tot = 0; tot <= *sector; ++tot)
            for (int n = 0; n <= cap && n <= tot; ++n) next[tot] += count[tot - n];
        count = std::move(next);
        for (double c : count)
            if (c > 9e18) return std::numeric_limits<std::int64_t>::max();
    }
    return static_cast<std::int64_t>(count[*sector]);
}

RunOutcome run_experiment(const std::string& experiment, const std::string& config_text,
                          const RunOptions& options) {
    RunOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const TomlTable cfg = parse_toml(config_text);
        const std::uint64_t seed =
            options.seed_override
                ? *options.seed_override
                : static_cast<std::uint64_t>(cfg.get_int_or("run.seed", 1));

        if (experiment == "constants")
            out.report = run_constants(cfg, out.message);
        else if (experiment == "transport")
            out.report = run_transport(cfg, options, seed);
        else if (experiment == "lr")
            out.report = run_lr(cfg, options);
        else if (experiment == "hhkl")
            out.report = run_hhkl(cfg, options);
        else if (experiment == "protocol")
            out.report = run_protocol(cfg, options);
        else
            throw ConfigError("unknown experiment '" + experiment + "'");

        const std::string hash = config_hash(config_text);
        std::filesystem::create_directories(options.out_dir);
        const std::string base = options.out_dir + "/" + experiment;
        write_report_csv(out.report, base + ".csv", hash);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_report_json(out.report, base + ".json", hash, config_text, elapsed);

        out.exit_code = out.report.all_satisfied() ? kExitOk : kExitBoundFailure;
        if (out.exit_code == kExitBoundFailure && out.message.empty())
            out.message = "one or more bound checks failed";
    } catch (const ConfigError& e) {
        out.exit_code = kExitInvalidConfig;
        out.message = e.what();
    } catch (const ResourceLimitError& e) {
        out.exit_code = kExitResourceLimit;
        out.message = e.what();
    } catch (const NumericalFailureError& e) {
        out.exit_code = kExitNumericalFailure;
        out.message = e.what();
    } catch (const MarginError& e) {
        out.exit_code = kExitBoundFailure;
        out.message = e.what();
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitInvalidConfig;
        out.message = e.what();
    }
    return out;
}

std::string validate_config(const std::string& experiment,
                            const std::string& config_text) {
    std::ostringstream out;
    try {
        const TomlTable cfg = parse_toml(config_text);
        if (experiment == "constants") {
            ConstantsInput in;
            in.gamma = cfg.get_double("constants.gamma");
            in.J_bar = cfg.get_double("constants.j_bar");
            in.tau = cfg.get_double("constants.tau");
            if (in.tau > 1.0 / (4.0 * in.gamma * in.J_bar))
                out << "warning: tau exceeds 1/(4 gamma J_bar)\n";
            else
                out << "ok: tau within the short-time window\n";
            return out.str();
        }
        const LatticeGraph lattice = lattice_from_config(cfg);
        out << "lattice: " << lattice.num_sites() << " sites, dimension "
            << lattice.dimension() << "\n";
        const int cap = static_cast<int>(cfg.get_int("basis.cap"));
        std::optional<int> sector;
        if (cfg.has("basis.sector")) sector = static_cast<int>(cfg.get_int("basis.sector"));
        const std::int64_t dim = estimate_basis_dimension(lattice.num_sites(), cap, sector);
        out << "estimated basis dimension: " << dim << " (limit " << dimension_limit()
            << ")\n";
        if (dim > dimension_limit()) out << "warning: dimension exceeds the limit\n";

        if (cfg.has("transport.tau")) {
            const double tau = cfg.get_double("transport.tau");
            const double gamma = gamma_from_config(cfg, "transport.gamma", lattice);
            const double J = cfg.get_double("model.J");
            if (tau > 1.0 / (4.0 * gamma * std::abs(J)))
                out << "warning: tau exceeds 1/(4 gamma J_bar)\n";
            if (cfg.get_string_or("transport.mode", "schuch") == "theorem1" &&
                cfg.has("transport.t_values")) {
                const auto ts = cfg.get_double_array("transport.t_values");
                const double t_max = *std::max_element(ts.begin(), ts.end());
                const int r_min = minimal_admissible_radius(t_max, tau, gamma,
                                                            std::abs(J),
                                                            lattice.dimension());
                out << "minimal admissible radius at t=" << t_max << ": " << r_min
                    << "\n";
            }
        }
        out << "ok\n";
    } catch (const std::exception& e) {
        out << "invalid: " << e.what() << "\n";
    }
    return out.str();
}

}  // namespace bosonlight
