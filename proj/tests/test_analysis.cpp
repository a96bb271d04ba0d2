#include <doctest.h>

#include <cmath>
#include <limits>

#include "aoi/analysis.hpp"
#include "aoi/rng.hpp"
#include "aoi/sim.hpp"
#include "aoi/topology.hpp"

using namespace aoi;

namespace {

// smallest cover by trying every subset
std::size_t exact_min_cover(const Digraph& g) {
    const std::size_t n = g.size();
    std::size_t best = n;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<SourceIndex> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) s.push_back(i);
        if (s.size() >= best) continue;
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            bool hit = false;
            for (auto u : s) hit = hit || g.has_edge(u, v);
            ok = hit;
        }
        if (ok) best = s.size();
    }
    return best;
}

CorrelationMatrix thresholded_random(std::size_t n, double p, double density, Rng& rng) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            e[i * n + j] = i == j ? 1.0 : (rng.uniform() < density ? p + (1 - p) * rng.uniform() : 0.0);
    return CorrelationMatrix(n, e);
}

}  // namespace

TEST_CASE("lower bound: identity and single source") {
    CHECK(lower_bound(WeightVector::equal(4), CorrelationMatrix::identity(4)) == doctest::Approx(2.5));
    CHECK(lower_bound(WeightVector({1.0}), CorrelationMatrix::identity(1)) == doctest::Approx(1.0));
    for (std::size_t n = 1; n <= 12; ++n) {
        CHECK(lower_bound(WeightVector::equal(n), CorrelationMatrix::identity(n)) ==
              doctest::Approx(uncorrelated_baseline(n)).epsilon(1e-8));
        // equal weights of 1: n/2 + n*n/2
        CHECK(lower_bound(WeightVector(std::vector<double>(n, 1.0)), CorrelationMatrix::identity(n)) ==
              doctest::Approx(n / 2.0 + n * n / 2.0).epsilon(1e-8));
    }
}

TEST_CASE("lower bound on the n = 5 star matches a grid search") {
    auto P = star_matrix(5, 0.5);
    auto w = WeightVector::equal(5);
    const int K = 40;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b)
            for (int c = 0; a + b + c <= K; ++c)
                for (int d = 0; a + b + c + d <= K; ++d) {
                    double pi[5] = {a / double(K), b / double(K), c / double(K), d / double(K),
                                    (K - a - b - c - d) / double(K)};
                    double f = 0;
                    for (int i = 0; i < 5; ++i) {
                        double r = 0;
                        for (int j = 0; j < 5; ++j) r += pi[j] * P(j, i);
                        f += r > 0 ? w[i] / r : std::numeric_limits<double>::infinity();
                    }
                    best = std::min(best, f);
                }
    const double lb_grid = 0.5 + 0.5 * best;
    const double lb = lower_bound(w, P);
    CHECK(lb <= lb_grid + 1e-9);
    CHECK(lb_grid - lb < 5e-3);
}

TEST_CASE("uncorrelated baseline") {
    CHECK(uncorrelated_baseline(1) == 1);
    CHECK(uncorrelated_baseline(9) == 5);

    SimConfig cfg;
    cfg.horizon = 100000;
    cfg.policy.kind = PolicyKind::round_robin;
    SimInstance inst{CorrelationMatrix::identity(9), WeightVector::equal(9)};
    auto rep = run_simulation(cfg, inst);
    CHECK(std::abs(rep.weighted_avg_aoi - 5.0) <= 0.01);
}

TEST_CASE("threshold digraph") {
    auto g = build_threshold_digraph(CorrelationMatrix::identity(4), 0.5);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(g.has_edge(i, j) == (i == j));

    auto s = build_threshold_digraph(star_matrix(5, 0.7), 0.5);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(s.has_edge(0, j));
        CHECK(s.has_edge(j, 0));
        CHECK(s.has_edge(j, j));
    }
    CHECK_FALSE(s.has_edge(1, 2));

    auto t = build_threshold_digraph(star_matrix(5, 0.7), 0.7);
    CHECK_FALSE(t.has_edge(0, 1));
    CHECK(t.has_edge(1, 1));

    CHECK_THROWS(build_threshold_digraph(CorrelationMatrix::identity(2), 0.0));
    CHECK_THROWS(build_threshold_digraph(CorrelationMatrix::identity(2), 1.0));
}

TEST_CASE("greedy cover examples") {
    auto star = greedy_vertex_cover(build_threshold_digraph(star_matrix(6, 0.7), 0.5), 0.5);
    CHECK(star.cover == std::vector<SourceIndex>{0});
    CHECK(star.size == 1);
    CHECK(star.complete());

    auto self = greedy_vertex_cover(build_threshold_digraph(CorrelationMatrix::identity(5), 0.5), 0.5);
    CHECK(self.size == 5);

    CorrelationMatrix hole(2, {0.2, 0.9, 0.0, 0.3});
    auto h = greedy_vertex_cover(build_threshold_digraph(hole, 0.5), 0.5);
    CHECK_FALSE(h.complete());
    CHECK(h.uncoverable == std::vector<SourceIndex>{0});
}

TEST_CASE("greedy cover vs exhaustive minimum on 8 vertices") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        auto P = thresholded_random(8, 0.6, 0.25, rng);
        auto g = build_threshold_digraph(P, 0.5);
        auto c = greedy_vertex_cover(g, 0.5);
        REQUIRE(c.complete());
        CHECK(is_vertex_cover(g, c.cover));
        const auto opt = exact_min_cover(g);
        CHECK(c.size >= opt);
        CHECK(c.size <= (1 + std::log(8.0)) * opt);
        CHECK(cover_bound(c.size, 0.6) >= cover_bound(opt, 0.6));
    }
}

TEST_CASE("cover bound and simulated round robin over the cover") {
    CHECK(cover_bound(1, 0.5) == 2);
    CHECK(cover_bound(3, 0.6) == doctest::Approx(5));
    CHECK_THROWS(cover_bound(0, 0.5));

    Rng rng(32);
    for (std::uint64_t k = 0; k < 10; ++k) {
        const double p = 0.4 + 0.05 * k;
        auto P = thresholded_random(12, p, 0.3, rng);
        const double thr = std::nextafter(p, 0.0);
        SimConfig cfg;
        cfg.horizon = 20000;
        cfg.seed = 100 + k;
        cfg.policy.kind = PolicyKind::round_robin;
        cfg.policy.cover_threshold = thr;
        auto cover = greedy_vertex_cover(build_threshold_digraph(P, thr), thr);
        auto rep = run_simulation(cfg, {P, WeightVector::equal(12)});
        CHECK(rep.weighted_avg_aoi <= cover_bound(cover.size, p) + 3 * rep.weighted_stderr);
    }
}

TEST_CASE("rgg bound") {
    CHECK(rgg_bound(0.5, 0.25) == doctest::Approx(64));
    CHECK(rgg_bound(1.0, std::sqrt(2.0)) == doctest::Approx(1));
    CHECK_THROWS(rgg_bound(0.0, 0.5));

    for (std::uint64_t s = 1; s <= 10; ++s) {
        TopologySpec spec;
        spec.n = 90;
        spec.r = 0.25;
        spec.p = 0.5;
        spec.seed = s;
        auto g = generate_topology(spec);
        SimConfig cfg;
        cfg.horizon = 20000;
        cfg.seed = s;
        auto rep = run_simulation(cfg, {g.P, WeightVector::equal(90)});
        CHECK(rep.weighted_avg_aoi <= 64);
    }
}

TEST_CASE("max-AoI-first star bound") {
    CHECK(maf_star_lower_bound(100, 0.5) == doctest::Approx(99.0 * 99 / (200 - 101 * std::pow(0.5, 99))));
    CHECK(maf_star_lower_bound(100, 0.5) == doctest::Approx(49.005).epsilon(1e-6));
    CHECK(maf_star_lower_bound(2, 1.0) == doctest::Approx(0.25));
    CHECK_THROWS(maf_star_lower_bound(100, 0.005));
    CHECK_THROWS(maf_star_lower_bound(1, 0.5));
}
