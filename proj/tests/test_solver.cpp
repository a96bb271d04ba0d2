#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "aoi/rng.hpp"
#include "aoi/solver.hpp"
#include "aoi/topology.hpp"

using namespace aoi;

namespace {

CorrelationMatrix dense_random(std::size_t n, Rng& rng) {
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = i == j ? 1.0 : rng.uniform();
    return CorrelationMatrix(n, e);
}

// objective written out directly from the definition
double f_oracle(const CorrelationMatrix& P, const WeightVector& w, const std::vector<double>& pi) {
    double f = 0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        double r = 0;
        for (std::size_t j = 0; j < P.size(); ++j) r += pi[j] * P(j, i);
        if (r <= 0) return std::numeric_limits<double>::infinity();
        f += w[i] / r;
    }
    return f;
}

// exhaustive search over the 2-simplex on a 1e-3 grid
std::vector<double> grid_oracle(const CorrelationMatrix& P, const WeightVector& w) {
    const int K = 1000;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> arg(3);
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b) {
            std::vector<double> pi{a / double(K), b / double(K), (K - a - b) / double(K)};
            double f = f_oracle(P, w, pi);
            if (f < best) {
                best = f;
                arg = pi;
            }
        }
    return arg;
}

}  // namespace

TEST_CASE("closed-form average age") {
    auto a = eval_avg_aoi(CorrelationMatrix::identity(3), PolicyDistribution::uniform(3));
    for (double v : a) CHECK(v == doctest::Approx(3));

    std::vector<double> pi(6, 0.0);
    pi[0] = 1;
    auto s = eval_avg_aoi(star_matrix(6, 0.4), PolicyDistribution(pi));
    CHECK(s[0] == doctest::Approx(1));
    for (std::size_t j = 1; j < 6; ++j) CHECK(s[j] == doctest::Approx(1 / 0.4));

    auto inf = eval_avg_aoi(CorrelationMatrix::identity(2), PolicyDistribution({1, 0}));
    CHECK(inf[0] == 1);
    CHECK(std::isinf(inf[1]));
}

TEST_CASE("identity with w = (1,4) gives pi proportional to sqrt(w)") {
    auto r = solve_optimal_randomized(CorrelationMatrix::identity(2), WeightVector({1, 4}));
    CHECK(r.converged);
    CHECK(std::abs(r.pi_star[0] - 1.0 / 3) <= 1e-6);
    CHECK(std::abs(r.pi_star[1] - 2.0 / 3) <= 1e-6);
    CHECK(r.objective == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("single source") {
    auto r = solve_optimal_randomized(CorrelationMatrix(1, {0.4}), WeightVector({2.0}));
    CHECK(r.pi_star[0] == doctest::Approx(1.0));
    CHECK(r.objective == doctest::Approx(5.0));
}

TEST_CASE("star n = 3 agrees with the grid search") {
    auto P = star_matrix(3, 0.9);
    auto w = WeightVector::equal(3);
    auto r = solve_optimal_randomized(P, w);
    auto g = grid_oracle(P, w);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r.pi_star[i] - g[i]) <= 2e-3);
}

TEST_CASE("KKT check on known points") {
    WeightVector w({1, 4, 9});
    auto P = CorrelationMatrix::identity(3);
    PolicyDistribution opt({1.0 / 6, 2.0 / 6, 3.0 / 6});
    CHECK(check_kkt(P, w, opt).residual <= 1e-12);
    CHECK(check_kkt(P, w, PolicyDistribution::uniform(3)).residual > 0.1);
}

TEST_CASE("random instances certify and match the grid search") {
    Rng rng(21);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = k < 3 ? 3 : 2 + k % 7;
        auto P = dense_random(n, rng);
        std::vector<double> wv(n);
        for (auto& v : wv) v = 0.1 + rng.uniform();
        WeightVector w(wv);
        auto r = solve_optimal_randomized(P, w);
        CHECK(r.converged);
        CHECK(r.kkt_residual <= 1e-6);
        CHECK(r.off_support_excess <= 1e-6);
        CHECK(std::abs(r.pi_star.total() - 1) <= 1e-9);
        CHECK(r.objective <= f_oracle(P, w, std::vector<double>(n, 1.0 / n)) + 1e-12);
        if (k < 3) {
            auto g = grid_oracle(P, w);
            // the grid point can only be worse than the true optimum
            CHECK(r.objective <= f_oracle(P, w, g) + 1e-9);
        }
    }
}

TEST_CASE("sparse geometric instances also certify") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed, Stream::topology);
        auto g = rgg_generate(60, 0.2, 0.6, rng);
        auto r = solve_optimal_randomized(g.P, WeightVector::equal(60));
        CHECK(r.converged);
        CHECK(r.kkt_residual <= 1e-6);
        CHECK(r.off_support_excess <= 1e-6);
    }
}

TEST_CASE("objective is convex") {
    Rng rng(22);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + rep % 5;
        auto P = dense_random(n, rng);
        auto w = WeightVector::equal(n);
        std::vector<double> a(n), b(n), m(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform();
            b[i] = rng.uniform();
        }
        a = project_to_simplex(a);
        b = project_to_simplex(b);
        const double th = rng.uniform();
        for (std::size_t i = 0; i < n; ++i) m[i] = th * a[i] + (1 - th) * b[i];
        CHECK(randomized_objective(P, w, m) <=
              th * randomized_objective(P, w, a) + (1 - th) * randomized_objective(P, w, b) + 1e-9);
    }
}

TEST_CASE("simplex projection") {
    Rng rng(23);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rep % 9;
        std::vector<double> v(n);
        for (auto& x : v) x = 4 * rng.uniform() - 2;
        auto p = project_to_simplex(v);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double x : p) CHECK(x >= 0);
        auto q = project_to_simplex(p);
        for (std::size_t i = 0; i < n; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-12));
        // the projection is no farther from v than a random simplex point
        std::vector<double> z(n);
        for (auto& x : z) x = rng.uniform();
        z = project_to_simplex(z);
        double dp = 0, dz = 0;
        for (std::size_t i = 0; i < n; ++i) {
            dp += (p[i] - v[i]) * (p[i] - v[i]);
            dz += (z[i] - v[i]) * (z[i] - v[i]);
        }
        CHECK(dp <= dz + 1e-12);
    }
}

TEST_CASE("deterministic, and infeasible inputs are rejected") {
    Rng rng(24);
    auto P = dense_random(6, rng);
    auto w = WeightVector::equal(6);
    auto a = solve_optimal_randomized(P, w), b = solve_optimal_randomized(P, w);
    CHECK(a.iterations == b.iterations);
    for (std::size_t i = 0; i < 6; ++i) CHECK(a.pi_star[i] == b.pi_star[i]);

    CorrelationMatrix Z(2, {1, 0, 0, 0});
    CHECK_THROWS_AS(solve_optimal_randomized(Z, WeightVector::equal(2)), InfeasibleInstance);
    CHECK_THROWS_AS(solve_optimal_randomized(CorrelationMatrix::identity(2), WeightVector({1, -1})),
                    std::invalid_argument);
}

TEST_CASE("adding correlation never hurts the optimum") {
    Rng rng(25);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 3 + rep % 5;
        auto P = dense_random(n, rng);
        std::vector<double> e(P.entries().begin(), P.entries().end());
        for (auto& v : e) v = v + (1 - v) * rng.uniform() * 0.5;
        CorrelationMatrix Q(n, e);
        auto w = WeightVector::equal(n);
        CHECK(solve_optimal_randomized(Q, w).objective <= solve_optimal_randomized(P, w).objective + 1e-6);
    }
}
