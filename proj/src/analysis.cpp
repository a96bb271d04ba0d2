#include "aoi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoi {

double lower_bound_from_objective(const WeightVector& w, double optimal_randomized_objective) {
    return 0.5 * w.total() + 0.5 * optimal_randomized_objective;
}

double lower_bound(const WeightVector& w, const CorrelationMatrix& P, const SolverOptions& options) {
    const auto rep = solve_optimal_randomized(P, w, options);
    return lower_bound_from_objective(w, rep.objective);
}

double uncorrelated_baseline(std::size_t n) {
    if (n == 0) throw std::invalid_argument("need at least one source");
    return 0.5 * (static_cast<double>(n) + 1.0);
}

bool Digraph::has_edge(SourceIndex from, SourceIndex to) const {
    const auto& o = out.at(from);
    return std::binary_search(o.begin(), o.end(), to);
}

Digraph build_threshold_digraph(const CorrelationMatrix& P, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("correlation threshold must lie in (0,1)");
    Digraph g;
    g.out.resize(P.size());
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < P.size(); ++j)
            if (P(i, j) > threshold) g.out[i].push_back(j);
    return g;
}

bool is_vertex_cover(const Digraph& g, const std::vector<SourceIndex>& set) {
    std::vector<bool> covered(g.size(), false);
    for (auto s : set)
        for (auto j : g.out.at(s)) covered[j] = true;
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

CoverResult greedy_vertex_cover(const Digraph& g, double threshold) {
    const std::size_t n = g.size();
    CoverResult res;
    res.threshold = threshold;

    std::vector<bool> has_in(n, false);
    for (const auto& o : g.out)
        for (auto j : o) has_in[j] = true;
    std::vector<bool> covered(n, false);
    std::size_t remaining = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!has_in[j]) {
            res.uncoverable.push_back(j);
            covered[j] = true;
        } else {
            ++remaining;
        }
    }

    std::vector<bool> chosen(n, false);
    while (remaining > 0) {
        SourceIndex best = n;
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            std::size_t gain = 0;
            for (auto j : g.out[i]) gain += covered[j] ? 0 : 1;
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == n) break;  // unreachable when every remaining vertex has an in-edge
        chosen[best] = true;
        res.cover.push_back(best);
        for (auto j : g.out[best]) {
            if (!covered[j]) {
                covered[j] = true;
                --remaining;
            }
        }
    }
    std::sort(res.cover.begin(), res.cover.end());
    res.size = res.cover.size();
    return res;
}

double cover_bound(std::size_t cover_size, double p) {
    if (cover_size == 0) throw std::invalid_argument("cover must contain at least one source");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("threshold p must lie in (0,1]");
    return static_cast<double>(cover_size) / p;
}

double rgg_bound(double p, double r) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0,1]");
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    return 2.0 / (p * r * r);
}

double maf_star_lower_bound(std::size_t n, double p) {
    if (n < 2) throw std::invalid_argument("star bound needs n >= 2");
    const double nn = static_cast<double>(n);
    if (!(p >= 1.0 / (nn - 1.0) && p <= 1.0))
        throw std::invalid_argument("star bound requires 1/(n-1) <= p <= 1");
    const double q = std::pow(1.0 - p, nn - 1.0);
    return (nn - 1.0) * (nn - 1.0) / (2.0 * nn - (nn + 1.0) * q);
}

}  // namespace aoi
