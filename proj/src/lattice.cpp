#include "bosonlight/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace bosonlight {

LatticeGraph::LatticeGraph(const LatticeGraph& other)
    : dimension_(other.dimension_),
      adjacency_(other.adjacency_),
      coords_(other.coords_),
      dist_cache_(other.dist_cache_) {}

LatticeGraph::LatticeGraph(LatticeGraph&& other) noexcept
    : dimension_(other.dimension_),
      adjacency_(std::move(other.adjacency_)),
      coords_(std::move(other.coords_)),
      dist_cache_(std::move(other.dist_cache_)) {}

LatticeGraph& LatticeGraph::operator=(const LatticeGraph& other) {
    if (this != &other) {
        dimension_ = other.dimension_;
        adjacency_ = other.adjacency_;
        coords_ = other.coords_;
        dist_cache_ = other.dist_cache_;
    }
    return *this;
}

LatticeGraph& LatticeGraph::operator=(LatticeGraph&& other) noexcept {
    if (this != &other) {
        dimension_ = other.dimension_;
        adjacency_ = std::move(other.adjacency_);
        coords_ = std::move(other.coords_);
        dist_cache_ = std::move(other.dist_cache_);
    }
    return *this;
}

LatticeGraph LatticeGraph::hypercubic(const std::vector<int>& dims,
                                      const std::vector<bool>& periodic) {
    if (dims.empty()) throw std::invalid_argument("lattice: empty extent list");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("lattice: extent must be >= 1");
    if (!periodic.empty() && periodic.size() != dims.size())
        throw std::invalid_argument("lattice: periodic flags must match dims");

    const int D = static_cast<int>(dims.size());
    int n = 1;
    for (int d : dims) n *= d;

    LatticeGraph g;
    g.dimension_ = D;
    g.adjacency_.resize(n);
    g.coords_.resize(n);

    // row-major id <-> coordinate
    std::vector<int> stride(D, 1);
    for (int a = D - 2; a >= 0; --a) stride[a] = stride[a + 1] * dims[a + 1];

    for (int id = 0; id < n; ++id) {
        std::vector<int> c(D);
        int rem = id;
        for (int a = 0; a < D; ++a) {
            c[a] = rem / stride[a];
            rem %= stride[a];
        }
        g.coords_[id] = c;
        for (int a = 0; a < D; ++a) {
            bool per = !periodic.empty() && periodic[a];
            for (int step : {-1, 1}) {
                int x = c[a] + step;
                if (per) {
                    x = (x + dims[a]) % dims[a];
                } else if (x < 0 || x >= dims[a]) {
                    continue;
                }
                if (x == c[a]) continue;  // extent 1 or 2 periodic wrap onto self/duplicate
                int nb = id + (x - c[a]) * stride[a];
                g.adjacency_[id].push_back(nb);
            }
        }
        auto& adj = g.adjacency_[id];
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return g;
}

LatticeGraph LatticeGraph::from_edges(int num_sites,
                                      const std::vector<std::pair<int, int>>& edges,
                                      int dimension) {
    if (num_sites < 1) throw std::invalid_argument("lattice: need at least one site");
    LatticeGraph g;
    g.dimension_ = dimension;
    g.adjacency_.resize(num_sites);
    g.coords_.assign(num_sites, std::vector<int>(1, 0));
    for (int i = 0; i < num_sites; ++i) g.coords_[i][0] = i;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_sites || b >= num_sites || a == b)
            throw std::invalid_argument("lattice: bad edge");
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    for (auto& adj : g.adjacency_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return g;
}

const std::vector<int>& LatticeGraph::dist_row(int source) const {
    std::lock_guard<std::mutex> lock(dist_mutex_);
    if (dist_cache_.empty()) dist_cache_.resize(num_sites());
    auto& row = dist_cache_[source];
    if (!row.empty()) return row;
    row.assign(num_sites(), -1);
    std::deque<int> queue{source};
    row[source] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adjacency_[u]) {
            if (row[v] < 0) {
                row[v] = row[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return row;
}

int LatticeGraph::distance(int i, int j) const {
    if (i < 0 || j < 0 || i >= num_sites() || j >= num_sites())
        throw std::invalid_argument("lattice: site id out of range");
    int d = dist_row(i)[j];
    if (d < 0) throw std::invalid_argument("lattice: disconnected sites");
    return d;
}

int LatticeGraph::diameter() const {
    int best = 0;
    for (int i = 0; i < num_sites(); ++i)
        for (int j = i + 1; j < num_sites(); ++j) best = std::max(best, distance(i, j));
    return best;
}

SiteSet::SiteSet(std::vector<int> sites) : sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    auto it = std::unique(sites_.begin(), sites_.end());
    if (it != sites_.end()) throw std::invalid_argument("SiteSet: duplicate site id");
}

SiteSet SiteSet::all(const LatticeGraph& lattice) {
    std::vector<int> ids(lattice.num_sites());
    std::iota(ids.begin(), ids.end(), 0);
    return SiteSet(std::move(ids));
}

bool SiteSet::contains(int site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
}

int distance_to_set(const LatticeGraph& lattice, int site, const SiteSet& X) {
    if (X.empty()) throw std::invalid_argument("distance_to_set: empty set");
    int best = -1;
    for (int x : X.sites()) {
        int d = lattice.distance(site, x);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

SiteSet ball(const LatticeGraph& lattice, const SiteSet& X, int r) {
    if (X.empty()) throw std::invalid_argument("ball: empty seed set");
    if (r < 0) throw std::invalid_argument("ball: negative radius");
    std::vector<int> out;
    for (int i = 0; i < lattice.num_sites(); ++i)
        if (distance_to_set(lattice, i, X) <= r) out.push_back(i);
    return SiteSet(std::move(out));
}

SiteSet boundary(const LatticeGraph& lattice, const SiteSet& X) {
    if (X.empty()) throw std::invalid_argument("boundary: empty set");
    std::vector<int> out;
    for (int i : X.sites()) {
        for (int nb : lattice.neighbors(i)) {
            if (!X.contains(nb)) {
                out.push_back(i);
                break;
            }
        }
    }
    return SiteSet(std::move(out));
}

SiteSet complement(const LatticeGraph& lattice, const SiteSet& X) {
    std::vector<int> out;
    for (int i = 0; i < lattice.num_sites(); ++i)
        if (!X.contains(i)) out.push_back(i);
    return SiteSet(std::move(out));
}

namespace {

// Connected seed sets used by the gamma search: every singleton plus every
// coordinate-aligned interval (D=1) or box (D>=2) up to the full lattice.
std::vector<SiteSet> gamma_seeds(const LatticeGraph& lattice) {
    std::vector<SiteSet> seeds;
    const int n = lattice.num_sites();
    for (int i = 0; i < n; ++i) seeds.push_back(SiteSet::single(i));

    const auto& coords = lattice.coordinates();
    const int D = lattice.dimension();
    std::vector<int> lo(D), hi(D);
    for (int a = 0; a < D; ++a) {
        lo[a] = coords[0][a];
        hi[a] = coords[0][a];
        for (int i = 1; i < n; ++i) {
            lo[a] = std::min(lo[a], coords[i][a]);
            hi[a] = std::max(hi[a], coords[i][a]);
        }
    }
    // Enumerate boxes [b_lo, b_hi] per axis; skip degenerate singletons already added.
    std::vector<std::pair<int, int>> ranges(D);
    std::vector<int> axis(D, 0);
    // recursive enumeration over per-axis subintervals
    std::vector<std::vector<std::pair<int, int>>> per_axis(D);
    for (int a = 0; a < D; ++a)
        for (int s = lo[a]; s <= hi[a]; ++s)
            for (int e = s; e <= hi[a]; ++e) per_axis[a].push_back({s, e});
    std::vector<size_t> idx(D, 0);
    while (true) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i) {
            bool in = true;
            for (int a = 0; a < D; ++a) {
                auto [s, e] = per_axis[a][idx[a]];
                if (coords[i][a] < s || coords[i][a] > e) {
                    in = false;
                    break;
                }
            }
            if (in) members.push_back(i);
        }
        if (members.size() > 1) seeds.emplace_back(std::move(members));
        int a = 0;
        for (; a < D; ++a) {
            if (++idx[a] < per_axis[a].size()) break;
            idx[a] = 0;
        }
        if (a == D) break;
    }
    return seeds;
}

}  // namespace

std::optional<StructuralConstant> estimate_gamma(const LatticeGraph& lattice, int max_ell) {
    if (max_ell < 1) throw std::invalid_argument("estimate_gamma: max_ell must be >= 1");
    const int D = lattice.dimension();
    const SiteSet full = SiteSet::all(lattice);

    double required = 0.0;
    for (const auto& X : gamma_seeds(lattice)) {
        const auto bd_X = boundary(lattice, X);
        if (bd_X.empty()) continue;  // X = Lambda: both inequalities vacuous
        for (int ell = 1; ell <= max_ell; ++ell) {
            const auto X_ell = ball(lattice, X, ell);
            const double growth = static_cast<double>(X_ell.size() - X.size());
            const double ell_D = std::pow(static_cast<double>(ell), D);
            const double ell_Dm1 = std::pow(static_cast<double>(ell), D - 1);
            required = std::max(required, (growth + 1.0) / (ell_D * bd_X.size()));
            const auto bd_ball = boundary(lattice, X_ell);
            required = std::max(required, bd_ball.size() / (ell_Dm1 * X.size()));
        }
    }

    const double gamma = std::ceil(required * 4.0) / 4.0;
    if (gamma > 64.0) return std::nullopt;
    return StructuralConstant{std::max(gamma, 0.25), max_ell};
}

}  // namespace bosonlight
