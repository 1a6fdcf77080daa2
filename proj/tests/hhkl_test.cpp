#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "bosonlight/bounds.hpp"
#include "bosonlight/hhkl.hpp"

using namespace bosonlight;

namespace {

StateVector exact_state(const HamiltonianSpec& spec, const FockBasis& basis,
                        const StateVector& psi0, double t) {
    return evolve(assemble(spec, basis), psi0, t);
}

double hhkl_err(const StateVector& psi0, const HamiltonianSpec& spec,
                const FockBasis& basis, const HHKLConfig& cfg) {
    const auto approx = simulate_hhkl(psi0, spec, basis, cfg);
    const auto exact = exact_state(spec, basis, psi0, cfg.t_total);
    return (approx.amplitudes - exact.amplitudes).norm();
}

}  // namespace

TEST_CASE("sequence pattern for a chain of four blocks") {
    const auto lat = LatticeGraph::hypercubic({8}, {false});
    HHKLConfig cfg;
    cfg.block_size = 2;
    cfg.dt = 0.5;
    cfg.t_total = 1.0;
    const auto seq = hhkl_sequence(lat, cfg);
    // per slice: 2 odd pair-blocks + 2 backward singles + 1 even pair-block
    REQUIRE(seq.size() == 10);
    for (int slice = 0; slice < 2; ++slice) {
        const auto* s = &seq[slice * 5];
        CHECK(s[0].forward);
        CHECK(s[0].block == SiteSet({0, 1, 2, 3}));
        CHECK(s[1].forward);
        CHECK(s[1].block == SiteSet({4, 5, 6, 7}));
        CHECK(!s[2].forward);
        CHECK(s[2].block == SiteSet({2, 3}));
        CHECK(!s[3].forward);
        CHECK(s[3].block == SiteSet({4, 5}));
        CHECK(s[4].forward);
        CHECK(s[4].block == SiteSet({2, 3, 4, 5}));
        // support union over the slice is the whole lattice
        std::vector<bool> covered(8, false);
        for (int k = 0; k < 5; ++k)
            for (int site : s[k].block.sites()) covered[site] = true;
        for (bool c : covered) CHECK(c);
    }
}

TEST_CASE("sequence validation") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    HHKLConfig cfg;
    cfg.block_size = 5;
    cfg.dt = 0.5;
    cfg.t_total = 1.0;
    CHECK_THROWS_AS(hhkl_sequence(lat, cfg), std::invalid_argument);
    cfg.block_size = 2;
    cfg.t_total = 0.75;  // not an integer number of slices
    CHECK_THROWS_AS(hhkl_sequence(lat, cfg), std::invalid_argument);
}

TEST_CASE("sequence serializes to JSON") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    HHKLConfig cfg;
    cfg.block_size = 2;
    cfg.dt = 1.0;
    cfg.t_total = 1.0;
    const auto seq = hhkl_sequence(lat, cfg);
    const auto parsed = nlohmann::json::parse(hhkl_sequence_to_json(seq));
    REQUIRE(parsed.size() == seq.size());
    CHECK(parsed[0]["slice"] == 0);
    CHECK(parsed[0]["direction"] == "forward");
    CHECK(parsed[0]["block_sites"] == std::vector<int>({0, 1, 2, 3}));
    CHECK(parsed[0]["t_start"] == 0.0);
    CHECK(parsed[0]["t_end"] == 1.0);
}

TEST_CASE("single block or zero time is exact") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    const FockBasis b(lat, {2, 2, 2, 2}, 2);
    const auto spec = bose_hubbard_spec(lat, 1.0, 1.5, 0.0);
    std::mt19937_64 rng(31);
    const auto psi0 = random_state(b, rng);

    HHKLConfig cfg;
    cfg.block_size = 4;
    cfg.dt = 0.25;
    cfg.t_total = 1.0;
    CHECK(hhkl_err(psi0, spec, b, cfg) <= 1e-10);
    CHECK(simulate_hhkl(psi0, spec, b, cfg).norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("commuting blocks (J = 0) are exact") {
    const auto lat = LatticeGraph::hypercubic({6}, {false});
    const FockBasis b(lat, {2, 2, 2, 2, 2, 2}, 3);
    const auto spec = bose_hubbard_spec(lat, 0.0, 1.3, 0.4);
    std::mt19937_64 rng(8);
    const auto psi0 = random_state(b, rng);
    HHKLConfig cfg;
    cfg.block_size = 2;
    cfg.dt = 0.5;
    cfg.t_total = 1.0;
    CHECK(hhkl_err(psi0, spec, b, cfg) <= 1e-10);
}

TEST_CASE("larger blocks reduce the error on the 8-site chain") {
    const auto lat = LatticeGraph::hypercubic({8}, {false});
    const FockBasis b(lat, std::vector<int>(8, 1), 1);
    const auto spec = bose_hubbard_spec(lat, 1.0, 0.0, 0.0);
    std::vector<int> occ(8, 0);
    occ[3] = 1;
    const auto psi0 = basis_state(b, occ);
    HHKLConfig cfg;
    cfg.dt = 0.25;
    cfg.t_total = 1.0;
    cfg.block_size = 2;
    const double e2 = hhkl_err(psi0, spec, b, cfg);
    cfg.block_size = 4;
    const double e4 = hhkl_err(psi0, spec, b, cfg);
    CHECK(e4 < e2);
    CHECK(simulate_hhkl(psi0, spec, b, cfg).norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("halving the slice does not inflate the error") {
    const auto lat = LatticeGraph::hypercubic({8}, {false});
    const FockBasis b(lat, std::vector<int>(8, 1), 1);
    const auto spec = bose_hubbard_spec(lat, 1.0, 0.0, 0.0);
    std::vector<int> occ(8, 0);
    occ[4] = 1;
    const auto psi0 = basis_state(b, occ);
    HHKLConfig cfg;
    cfg.block_size = 4;
    cfg.t_total = 1.0;
    cfg.dt = 0.5;
    const double base = hhkl_err(psi0, spec, b, cfg);
    cfg.dt = 0.25;
    const double halved = hhkl_err(psi0, spec, b, cfg);
    CHECK(halved <= 2.0 * base + 1e-12);
}

TEST_CASE("interaction split: constant when V = 0 and pure phase when J = 0") {
    const auto lat = LatticeGraph::hypercubic({3}, {false});
    const FockBasis b(lat, {2, 2, 2}, 2);

    const auto free_spec = bose_hubbard_spec(lat, 0.8, 0.0, 0.0);
    const auto split0 = interaction_split(free_spec, b);
    const auto h_at_0 = split0.hopping_at(0.0);
    const auto h_at_2 = split0.hopping_at(2.0);
    CHECK((h_at_0.matrix() - h_at_2.matrix()).norm() <= 1e-14);

    const auto diag_spec = bose_hubbard_spec(lat, 0.0, 1.7, 0.3);
    const auto split1 = interaction_split(diag_spec, b);
    std::mt19937_64 rng(4);
    const auto psi = random_state(b, rng);
    const auto phased = apply_potential_phase(split1.potential, psi, 1.1);
    const auto direct = evolve(assemble(diag_spec, b), psi, 1.1);
    CHECK((phased.amplitudes - direct.amplitudes).norm() <= 1e-10);
}

TEST_CASE("interaction-picture propagation matches the direct evolution") {
    const auto lat = LatticeGraph::hypercubic({2}, {false});
    const FockBasis b(lat, {2, 2}, 2);
    const auto spec = bose_hubbard_spec(lat, 0.9, 1.4, 0.0);
    const auto psi0 = basis_state(b, {1, 1});

    HHKLConfig cfg;
    cfg.block_size = 2;
    cfg.dt = 0.01;
    cfg.t_total = 0.5;
    cfg.interaction_picture = true;
    // midpoint sampling error scales with the squared substep
    cfg.rotation_substep_divisor = 128;
    CHECK(hhkl_err(psi0, spec, b, cfg) <= 1e-8);
}

TEST_CASE("error scan reports decreasing errors with a negative slope") {
    const auto lat = LatticeGraph::hypercubic({16}, {false});
    const FockBasis b(lat, std::vector<int>(16, 1), 1);
    const auto spec = bose_hubbard_spec(lat, 1.0, 0.0, 0.0);
    std::vector<int> occ(16, 0);
    occ[7] = 1;
    const auto psi0 = basis_state(b, occ);
    HHKLConfig cfg;
    cfg.dt = 0.25;
    cfg.t_total = 1.0;
    const auto report = hhkl_error_scan(psi0, spec, b, {2, 4, 6}, cfg);
    REQUIRE(report.points.size() == 3);
    CHECK(report.points[1].lhs < report.points[0].lhs);
    CHECK(report.points[2].lhs < report.points[1].lhs);
    CHECK(report.all_satisfied());
    REQUIRE(report.fit.has_value());
    CHECK(report.fit->slope < 0.0);
}

TEST_CASE("q-bar truncation matches the projected Hamiltonian dynamics") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    const FockBasis b(lat, {4, 4, 4, 4}, 4);
    const auto spec = bose_hubbard_spec(lat, 1.0, 1.0, 0.0);
    InitialStateSpec mott;
    mott.mott_filling = 1;
    const auto psi0 = make_initial_state(mott, b);

    HHKLConfig cfg;
    cfg.block_size = 4;  // single block: isolates the truncation effect
    cfg.dt = 0.5;
    cfg.t_total = 1.0;
    cfg.truncation = 2;
    const auto got = simulate_hhkl(psi0, spec, b, cfg);

    std::vector<Complex> diag(b.dim());
    for (std::int64_t k = 0; k < b.dim(); ++k) {
        const auto& occ = b.occupations(k);
        bool ok = true;
        for (int n : occ) ok = ok && n <= 2;
        diag[k] = ok ? 1.0 : 0.0;
    }
    const SparseOperator P(SparseOperator::diagonal(std::move(diag),
                                                    SparseOperator::Hermitian::Yes));
    const auto expect = evolve(effective(spec, b, P), psi0, 1.0);
    CHECK((got.amplitudes - expect.amplitudes).norm() <= 1e-9);
}

TEST_CASE("gate count arithmetic") {
    const auto base = gate_count(64, 4.0, 2.0, 1e-3, 1);
    CHECK(base.dt == doctest::Approx(0.5));
    CHECK(base.block_size == doctest::Approx(std::log(64 * 4.0 / 1e-3)));
    CHECK(base.total == doctest::Approx(base.per_block * base.num_blocks));

    // linearity in the number of sites at pinned block size
    const double B = 8.0;
    const auto n1 = gate_count(64, 4.0, 2.0, 1e-3, 1, B);
    const auto n2 = gate_count(128, 4.0, 2.0, 1e-3, 1, B);
    CHECK(n2.total == doctest::Approx(2.0 * n1.total).epsilon(1e-12));

    // tightening epsilon costs only a polylog factor
    const auto tight = gate_count(64, 4.0, 2.0, 0.5e-3, 1);
    CHECK(tight.total / base.total > 1.0);
    CHECK(tight.total / base.total < 10.0);

    CHECK_THROWS_AS(gate_count(0, 1.0, 1.0, 1e-3, 1), std::invalid_argument);
}
