#include <doctest.h>

#include <cmath>

#include "bosonlight/hamiltonian.hpp"

using namespace bosonlight;

namespace {

Complex element(const SparseOperator& op, std::int64_t row, std::int64_t col) {
    return op.matrix().coeff(row, col);
}

}  // namespace

TEST_CASE("bose_hubbard_spec records the coupling bookkeeping") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    const auto spec = bose_hubbard_spec(lat, 0.8, 3.0, 0.25);
    CHECK(spec.hoppings().size() == 3);
    CHECK(spec.max_hopping() == doctest::Approx(0.8));
    CHECK(spec.potential_degree() == 2);
    CHECK(spec.coefficient_bound() == doctest::Approx(3.0 / 2.0 + 0.25));
    CHECK(spec.interaction_range() == 0);
}

TEST_CASE("zero couplings give the zero Hamiltonian") {
    const auto lat = LatticeGraph::hypercubic({3}, {false});
    const FockBasis b(lat, {2, 2, 2}, 2);
    const auto H = assemble(bose_hubbard_spec(lat, 0.0, 0.0, 0.0), b);
    CHECK(H.matrix().norm() == 0.0);
}

TEST_CASE("two-site Bose-Hubbard matrix against hand evaluation") {
    const double J = 0.6, U = 1.7, mu = 0.3;
    const auto lat = LatticeGraph::hypercubic({2}, {false});
    const FockBasis b(lat, {2, 2}, 2);
    const auto H = assemble(bose_hubbard_spec(lat, J, U, mu), b);

    const std::int64_t r20 = b.rank({2, 0});
    const std::int64_t r11 = b.rank({1, 1});
    const std::int64_t r02 = b.rank({0, 2});
    CHECK(element(H, r20, r20).real() == doctest::Approx(U - 2 * mu));
    CHECK(element(H, r11, r11).real() == doctest::Approx(-2 * mu));
    CHECK(element(H, r02, r02).real() == doctest::Approx(U - 2 * mu));
    CHECK(element(H, r11, r20).real() == doctest::Approx(J * std::sqrt(2.0)));
    CHECK(element(H, r02, r11).real() == doctest::Approx(J * std::sqrt(2.0)));
    CHECK(element(H, r02, r20) == Complex{0.0, 0.0});
}

TEST_CASE("single-boson chain assembles the tridiagonal hopping matrix") {
    const auto lat = LatticeGraph::hypercubic({3}, {false});
    const FockBasis b(lat, {1, 1, 1}, 1);
    const auto H = assemble(bose_hubbard_spec(lat, 0.5, 9.0, 0.0), b);
    // occupation order: |001>, |010>, |100>; U is inert with one boson
    for (std::int64_t r = 0; r < 3; ++r)
        for (std::int64_t c = 0; c < 3; ++c) {
            const double expect = std::abs(r - c) == 1 ? 0.5 : 0.0;
            CHECK(element(H, r, c).real() == doctest::Approx(expect));
        }
}

TEST_CASE("subset restriction drops exactly the boundary hoppings") {
    const auto lat = LatticeGraph::hypercubic({6}, {false});
    const auto spec = bose_hubbard_spec(lat, 1.0, 2.0, 0.0);
    const auto sub = subset_hamiltonian(spec, SiteSet({2, 3, 4}));
    CHECK(sub.hoppings().size() == 2);  // bonds (2,3) and (3,4)
    CHECK(sub.potentials().size() == 3);

    const auto full = subset_hamiltonian(spec, SiteSet::all(lat));
    CHECK(full.hoppings().size() == spec.hoppings().size());
    CHECK(full.potentials().size() == spec.potentials().size());
}

TEST_CASE("subset Hamiltonian commutes with the subset number operator") {
    const auto lat = LatticeGraph::hypercubic({5}, {false});
    const FockBasis b(lat, {3, 3, 3, 3, 3}, 3);
    const auto spec = bose_hubbard_spec(lat, 0.7, 1.1, 0.2);
    const SiteSet X({1, 2});
    const auto HX = assemble(subset_hamiltonian(spec, X), b);
    const auto nX = op_number(b, X);
    const double norm =
        (HX * nX + nX.scaled(Complex{-1.0, 0.0}) * HX).matrix().norm();
    CHECK(norm <= 1e-12);
}

TEST_CASE("interior, exterior, and boundary terms partition the Hamiltonian") {
    const auto lat = LatticeGraph::hypercubic({6}, {false});
    const FockBasis b(lat, {2, 2, 2, 2, 2, 2}, 2);
    const auto spec = bose_hubbard_spec(lat, 0.9, 1.3, 0.1);
    const SiteSet X({0, 1, 2});

    const auto HX = assemble(subset_hamiltonian(spec, X), b);
    const auto Hc = assemble(subset_hamiltonian(spec, complement(lat, X)), b);
    // boundary piece: hoppings crossing X / X^c
    std::vector<HoppingTerm> crossing;
    for (const auto& h : spec.hoppings())
        if (X.contains(h.i) != X.contains(h.j)) crossing.push_back(h);
    REQUIRE(crossing.size() == 1);
    const auto Hbd = op_hopping(b, crossing[0].i, crossing[0].j, crossing[0].J);

    const auto H = assemble(spec, b);
    const auto sum = HX + Hc + Hbd;
    CHECK((H.matrix() - sum.matrix()).norm() <= 1e-12);
}

TEST_CASE("assembled Hamiltonian commutes with the total number operator") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    const FockBasis b(lat, {4, 4, 4, 4}, 4);
    const auto H = assemble(bose_hubbard_spec(lat, 1.0, 2.0, 0.5), b);
    const auto nL = op_number(b, SiteSet::all(lat));
    const double norm =
        (H * nL + nL.scaled(Complex{-1.0, 0.0}) * H).matrix().norm();
    CHECK(norm <= 1e-12);
}

TEST_CASE("schedule scaling is constant within an interval") {
    const auto lat = LatticeGraph::hypercubic({3}, {false});
    const FockBasis b(lat, {2, 2, 2}, 2);
    auto base = bose_hubbard_spec(lat, 1.0, 2.0, 0.0);
    std::vector<ScheduleInterval> sched{{0.0, 1.0, 1.0, 0.0}, {1.0, 2.0, 0.5, 1.0}};
    const HamiltonianSpec spec(&lat, base.hoppings(), base.potentials(), 0, sched);

    const auto Ha = assemble(spec, b, 0.2);
    const auto Hb = assemble(spec, b, 0.9);
    CHECK((Ha.matrix() - Hb.matrix()).norm() == 0.0);

    const auto Hc = assemble(spec, b, 1.5);
    CHECK((Ha.matrix() - Hc.matrix()).norm() > 0.1);
    CHECK_THROWS_AS(assemble(spec, b), std::invalid_argument);
    CHECK_THROWS_AS(assemble(spec, b, 5.0), std::invalid_argument);
}

TEST_CASE("effective Hamiltonian projections") {
    const auto lat = LatticeGraph::hypercubic({3}, {false});
    const FockBasis b(lat, {2, 2, 2}, 2);
    const auto spec = bose_hubbard_spec(lat, 0.8, 1.0, 0.0);
    const auto H = assemble(spec, b);

    const auto P1 = SparseOperator::identity(b.dim());
    CHECK((effective(spec, b, P1).matrix() - H.matrix()).norm() <= 1e-12);

    // projector onto states with every site <= 1 boson
    std::vector<Complex> diag(b.dim());
    for (std::int64_t k = 0; k < b.dim(); ++k) {
        const auto& occ = b.occupations(k);
        bool ok = true;
        for (int n : occ) ok = ok && n <= 1;
        diag[k] = ok ? 1.0 : 0.0;
    }
    const auto P = SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::Yes);
    const auto Heff = effective(spec, b, P);
    // rows/cols with a doubly-occupied site must vanish
    for (std::int64_t k = 0; k < b.dim(); ++k) {
        const auto& occ = b.occupations(k);
        bool high = false;
        for (int n : occ) high = high || n > 1;
        if (high)
            for (std::int64_t r = 0; r < b.dim(); ++r) {
                CHECK(element(Heff, r, k) == Complex{0.0, 0.0});
                CHECK(element(Heff, k, r) == Complex{0.0, 0.0});
            }
    }

    std::vector<Eigen::Triplet<Complex>> t{{0, 0, Complex{0.5, 0.0}}};
    SparseOperator bad(b.dim(), std::move(t));
    CHECK_THROWS_AS(effective(spec, b, bad), std::invalid_argument);
}

TEST_CASE("spec validation rejects malformed terms") {
    const auto lat = LatticeGraph::hypercubic({4}, {false});
    CHECK_THROWS_AS(HamiltonianSpec(&lat, {{0, 0, Complex{1.0, 0.0}}}, {}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(HamiltonianSpec(&lat, {{0, 2, Complex{1.0, 0.0}}}, {}, 0),
                    std::invalid_argument);
    // potential tuple wider than the declared interaction range
    PotentialTerm wide{{0, 3}, {{{1, 1}, 1.0}}};
    CHECK_THROWS_AS(HamiltonianSpec(&lat, {}, {wide}, 1), std::invalid_argument);
    CHECK_NOTHROW(HamiltonianSpec(&lat, {}, {wide}, 3));
}
