#include "bosonlight/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace bosonlight {

namespace {

int tuple_diameter(const LatticeGraph& lattice, const std::vector<int>& sites) {
    int d = 0;
    for (size_t a = 0; a < sites.size(); ++a)
        for (size_t b = a + 1; b < sites.size(); ++b)
            d = std::max(d, lattice.distance(sites[a], sites[b]));
    return d;
}

const ScheduleInterval* find_interval(const std::vector<ScheduleInterval>& schedule,
                                      double time) {
    for (const auto& iv : schedule)
        if (time >= iv.t_start && time < iv.t_end) return &iv;
    if (!schedule.empty() && time == schedule.back().t_end) return &schedule.back();
    return nullptr;
}

}  // namespace

HamiltonianSpec::HamiltonianSpec(const LatticeGraph* lattice,
                                 std::vector<HoppingTerm> hoppings,
                                 std::vector<PotentialTerm> potentials,
                                 int interaction_range,
                                 std::vector<ScheduleInterval> schedule)
    : lattice_(lattice),
      hoppings_(std::move(hoppings)),
      potentials_(std::move(potentials)),
      schedule_(std::move(schedule)),
      interaction_range_(interaction_range) {
    for (const auto& h : hoppings_) {
        if (h.i < 0 || h.j < 0 || h.i >= lattice_->num_sites() || h.j >= lattice_->num_sites())
            throw std::invalid_argument("HamiltonianSpec: hopping site out of range");
        if (h.i == h.j) throw std::invalid_argument("HamiltonianSpec: hopping i == j");
        if (lattice_->distance(h.i, h.j) != 1)
            throw std::invalid_argument("HamiltonianSpec: hopping between non-adjacent sites");
        J_bar_ = std::max(J_bar_, std::abs(h.J));
    }
    for (const auto& p : potentials_) {
        for (int s : p.sites)
            if (s < 0 || s >= lattice_->num_sites())
                throw std::invalid_argument("HamiltonianSpec: potential site out of range");
        if (p.sites.size() > 1 && tuple_diameter(*lattice_, p.sites) > interaction_range_)
            throw std::invalid_argument("HamiltonianSpec: potential tuple exceeds range k");
        for (const auto& m : p.monomials) {
            if (m.exponents.size() != p.sites.size())
                throw std::invalid_argument("HamiltonianSpec: monomial arity mismatch");
            int deg = 0;
            for (int e : m.exponents) deg += e;
            degree_ = std::max(degree_, deg);
            g_bound_ = std::max(g_bound_, std::abs(m.coefficient));
        }
    }
    for (const auto& iv : schedule_)
        if (!(iv.t_end > iv.t_start))
            throw std::invalid_argument("HamiltonianSpec: empty schedule interval");
}

HamiltonianSpec bose_hubbard_spec(const LatticeGraph& lattice, double J, double U,
                                  double mu) {
    std::vector<HoppingTerm> hops;
    for (int i = 0; i < lattice.num_sites(); ++i)
        for (int j : lattice.neighbors(i))
            if (j > i) hops.push_back({i, j, Complex{J, 0.0}});

    // (U/2) n(n-1) - mu n = (U/2) n^2 - (U/2 + mu) n per site
    std::vector<PotentialTerm> pots;
    for (int i = 0; i < lattice.num_sites(); ++i) {
        PotentialTerm p;
        p.sites = {i};
        p.monomials.push_back({{2}, U / 2.0});
        p.monomials.push_back({{1}, -(U / 2.0 + mu)});
        pots.push_back(std::move(p));
    }
    return HamiltonianSpec(&lattice, std::move(hops), std::move(pots), /*k=*/0);
}

HamiltonianSpec subset_hamiltonian(const HamiltonianSpec& spec, const SiteSet& X) {
    if (X.empty()) throw std::invalid_argument("subset_hamiltonian: empty subset");
    std::vector<HoppingTerm> hops;
    for (const auto& h : spec.hoppings())
        if (X.contains(h.i) && X.contains(h.j)) hops.push_back(h);
    std::vector<PotentialTerm> pots;
    for (const auto& p : spec.potentials()) {
        bool inside = std::all_of(p.sites.begin(), p.sites.end(),
                                  [&](int s) { return X.contains(s); });
        if (inside) pots.push_back(p);
    }
    return HamiltonianSpec(&spec.lattice(), std::move(hops), std::move(pots),
                           spec.interaction_range(), spec.schedule());
}

std::vector<double> potential_diagonal(const HamiltonianSpec& spec, const FockBasis& basis) {
    std::vector<double> diag(basis.dim(), 0.0);
    for (const auto& p : spec.potentials()) {
        for (std::int64_t k = 0; k < basis.dim(); ++k) {
            const auto& occ = basis.occupations(k);
            for (const auto& m : p.monomials) {
                double v = m.coefficient;
                for (size_t a = 0; a < p.sites.size(); ++a)
                    v *= std::pow(static_cast<double>(occ[p.sites[a]]), m.exponents[a]);
                diag[k] += v;
            }
        }
    }
    return diag;
}

SparseOperator assemble(const HamiltonianSpec& spec, const FockBasis& basis,
                        std::optional<double> time) {
    if (basis.num_sites() != spec.lattice().num_sites())
        throw std::invalid_argument("assemble: basis lattice mismatch");

    double hop_scale = 1.0;
    double pot_scale = 1.0;
    if (spec.scheduled()) {
        if (!time) throw std::invalid_argument("assemble: scheduled spec needs a time");
        const ScheduleInterval* iv = find_interval(spec.schedule(), *time);
        if (!iv) throw std::invalid_argument("assemble: time outside schedule");
        hop_scale = iv->hopping_scale;
        pot_scale = iv->potential_scale;
    }

    SparseOperator H = SparseOperator::diagonal(
        std::vector<Complex>(basis.dim(), Complex{0.0, 0.0}), SparseOperator::Hermitian::Yes);
    for (const auto& h : spec.hoppings())
        H = H + op_hopping(basis, h.i, h.j, h.J * hop_scale);

    auto pot = potential_diagonal(spec, basis);
    std::vector<Complex> diag(basis.dim());
    for (std::int64_t k = 0; k < basis.dim(); ++k) diag[k] = pot[k] * pot_scale;
    H = H + SparseOperator::diagonal(std::move(diag), SparseOperator::Hermitian::Yes);
    H.verify_hermitian();
    return H;
}

SparseOperator effective(const HamiltonianSpec& spec, const FockBasis& basis,
                         const SparseOperator& projector) {
    // projector must be diagonal 0/1 (idempotent)
    const auto& P = projector.matrix();
    for (int k = 0; k < P.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(P, k); it; ++it) {
            bool diag01 = it.row() == it.col() &&
                          (std::abs(it.value() - Complex{1.0, 0.0}) <= 1e-12 ||
                           std::abs(it.value()) <= 1e-12);
            if (!diag01)
                throw std::invalid_argument("effective: projector must be diagonal 0/1");
        }
    SparseOperator H = assemble(spec, basis);
    SparseOperator out = projector * H * projector;
    out.verify_hermitian();
    return out;
}

}  // namespace bosonlight
