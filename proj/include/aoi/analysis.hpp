#pragma once

#include <cstddef>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/solver.hpp"

namespace aoi {

/// sum_i w_i / 2 + (1/2) sum_i w_i A*_i, where A* are the average ages of
/// the optimal stationary randomized policy. No scheduling policy can do
/// better. Throws InfeasibleInstance when P has an all-zero column.
double lower_bound(const WeightVector& w, const CorrelationMatrix& P,
                   const SolverOptions& options = {});

/// Same bound from an already computed optimal objective sum_i w_i A*_i.
double lower_bound_from_objective(const WeightVector& w, double optimal_randomized_objective);

/// Optimal weighted age for n uncorrelated, equally weighted sources: (n+1)/2.
double uncorrelated_baseline(std::size_t n);

/// Directed graph over sources; edge (i, j) means i's updates carry
/// information about j with probability above the threshold.
struct Digraph {
    std::vector<std::vector<SourceIndex>> out;  // ascending neighbor lists

    std::size_t size() const noexcept { return out.size(); }
    bool has_edge(SourceIndex from, SourceIndex to) const;
};

/// Edge (i, j) iff p_ij > threshold, self-loops included.
Digraph build_threshold_digraph(const CorrelationMatrix& P, double threshold);

struct CoverResult {
    std::vector<SourceIndex> cover;        // ascending
    std::size_t size = 0;
    double threshold = 0.0;
    std::vector<SourceIndex> uncoverable;  // vertices without any in-edge

    bool complete() const noexcept { return uncoverable.empty(); }
};

/// True when every vertex has an in-edge from some member of `set`.
bool is_vertex_cover(const Digraph& g, const std::vector<SourceIndex>& set);

/// Repeatedly adds the vertex whose out-neighborhood covers the most
/// still-uncovered vertices (ties toward the smaller index). Vertices with
/// no in-edge cannot be covered and are listed in `uncoverable`.
CoverResult greedy_vertex_cover(const Digraph& g, double threshold = 0.0);

/// Round robin over any cover of the threshold digraph keeps every
/// equally weighted source below cover_size / p.
double cover_bound(std::size_t cover_size, double p);

/// 2 / (p r^2) for an RGG with radius r and neighbor correlation p.
double rgg_bound(double p, double r);

/// Lower bound on max-AoI-first for the star matrix:
/// (n-1)^2 / (2n - (n+1)(1-p)^(n-1)). Requires n >= 2 and p >= 1/(n-1).
double maf_star_lower_bound(std::size_t n, double p);

}  // namespace aoi
