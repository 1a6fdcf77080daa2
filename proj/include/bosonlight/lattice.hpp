#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

namespace bosonlight {

/// A finite D-dimensional site graph.  Sites carry integer coordinates and
/// dense ids in row-major coordinate order; adjacency is stored as a symmetric
/// neighbor list.  Immutable after construction.
class LatticeGraph {
public:
    LatticeGraph() = default;
    LatticeGraph(const LatticeGraph& other);
    LatticeGraph(LatticeGraph&& other) noexcept;
    LatticeGraph& operator=(const LatticeGraph& other);
    LatticeGraph& operator=(LatticeGraph&& other) noexcept;

    /// Hypercubic lattice with the given extents and per-axis periodicity.
    static LatticeGraph hypercubic(const std::vector<int>& dims,
                                   const std::vector<bool>& periodic);

    /// General graph from an explicit edge list (undirected).
    static LatticeGraph from_edges(int num_sites,
                                   const std::vector<std::pair<int, int>>& edges,
                                   int dimension = 1);

    int dimension() const { return dimension_; }
    int num_sites() const { return static_cast<int>(adjacency_.size()); }
    const std::vector<int>& neighbors(int site) const { return adjacency_.at(site); }
    const std::vector<std::vector<int>>& coordinates() const { return coords_; }

    /// Graph distance via BFS, memoized per source site.
    int distance(int i, int j) const;

    /// Largest pairwise graph distance.
    int diameter() const;

private:
    int dimension_ = 1;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::vector<int>> coords_;
    mutable std::vector<std::vector<int>> dist_cache_;  // per-source BFS rows
    mutable std::mutex dist_mutex_;  // keeps lazy BFS safe across workers

    const std::vector<int>& dist_row(int source) const;
};

/// Sorted, duplicate-free set of site ids inside a parent lattice.
class SiteSet {
public:
    SiteSet() = default;
    explicit SiteSet(std::vector<int> sites);

    static SiteSet single(int site) { return SiteSet({site}); }
    static SiteSet all(const LatticeGraph& lattice);

    const std::vector<int>& sites() const { return sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    bool empty() const { return sites_.empty(); }
    bool contains(int site) const;

    bool operator==(const SiteSet& other) const { return sites_ == other.sites_; }

private:
    std::vector<int> sites_;
};

/// d(i, X) = min over x in X of d(i, x).
int distance_to_set(const LatticeGraph& lattice, int site, const SiteSet& X);

/// X[r] = { i : d(i, X) <= r }.
SiteSet ball(const LatticeGraph& lattice, const SiteSet& X, int r);

/// Inner boundary: { i in X : d(i, complement of X) = 1 }.
SiteSet boundary(const LatticeGraph& lattice, const SiteSet& X);

SiteSet complement(const LatticeGraph& lattice, const SiteSet& X);

/// Lattice constant gamma with the two defining inequalities
///   |X[l] \ X|  <= gamma l^D |bd X| - 1
///   |bd (X[l])| <= gamma l^(D-1) |X|
/// verified for all tested seeds X and l <= max_ell_verified.
struct StructuralConstant {
    double gamma = 0.0;        // multiple of 1/4
    int max_ell_verified = 0;
};

/// Smallest gamma on the grid {1/4, 2/4, ...} (capped at 64) satisfying both
/// inequalities over all singleton and interval/box seeds and l <= max_ell.
/// Returns nullopt when no gamma <= 64 works.
std::optional<StructuralConstant> estimate_gamma(const LatticeGraph& lattice, int max_ell);

}  // namespace bosonlight
