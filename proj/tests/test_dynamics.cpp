#include <doctest.h>

#include <cmath>

#include "aoi/dynamics.hpp"
#include "aoi/rng.hpp"

using namespace aoi;

TEST_CASE("constant model returns p") {
    CorrelationModel m{CorrelationKind::constant};
    CorrelationMatrix P(2, {1, 0.6, 0.6, 1});
    Rng rng(1);
    for (int i = 0; i < 50; ++i) CHECK(sample_row(m, P, 0, rng).x[1] == 0.6);
}

TEST_CASE("bernoulli with p = 1 always delivers, p = 0 never") {
    CorrelationModel m;
    CorrelationMatrix P(2, {1, 0, 0, 1});
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        auto d = sample_row(m, P, 0, rng);
        CHECK(d.x[0] == 1.0);
        CHECK(d.x[1] == 0.0);
    }
    CHECK(m.draw(0.0, 0.0) == 0.0);
}

TEST_CASE("bernoulli mean matches p") {
    CorrelationModel m;
    CorrelationMatrix P(2, {1, 0.5, 0.5, 1});
    Rng rng(3);
    double s = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) s += sample_row(m, P, 0, rng).x[1];
    CHECK(std::abs(s / N - 0.5) < 0.01);
}

TEST_CASE("uniform jitter stays in range and keeps the mean") {
    CorrelationModel m{CorrelationKind::uniform_jitter, 0.1};
    Rng rng(4);
    for (double p : {0.0, 0.03, 0.5, 0.95, 1.0}) {
        double s = 0, lo = 2, hi = -1;
        const int N = 40000;
        for (int i = 0; i < N; ++i) {
            double x = m.draw(p, rng.uniform());
            s += x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        CHECK(lo >= 0.0);
        CHECK(hi <= 1.0);
        CHECK(std::abs(s / N - p) < 0.002);
        CHECK(hi - lo <= 2 * 0.1 + 1e-12);
    }
    CHECK(m.draw(0.0, 0.7) == 0.0);
    CHECK(m.draw(1.0, 0.2) == 1.0);
    CHECK(m.draw(0.5, 0.0) == doctest::Approx(0.4));
}

TEST_CASE("coupled threshold draws") {
    CorrelationModel m;
    CorrelationMatrix hi(2, {1, 0.5, 0.5, 1}), lo(2, {1, 0.2, 0.2, 1});
    std::vector<double> u{0.9, 0.3};
    CHECK(sample_row_coupled(m, hi, 0, u).x[1] == 1.0);
    CHECK(sample_row_coupled(m, lo, 0, u).x[1] == 0.0);

    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(16), b(16), uu(4);
        for (std::size_t k = 0; k < 16; ++k) {
            a[k] = rng.uniform();
            b[k] = a[k] * rng.uniform();
        }
        for (auto& v : uu) v = rng.uniform();
        CorrelationMatrix PA(4, a), PB(4, b);
        for (std::size_t s = 0; s < 4; ++s) {
            auto xa = sample_row_coupled(m, PA, s, uu).x;
            auto xb = sample_row_coupled(m, PB, s, uu).x;
            for (std::size_t j = 0; j < 4; ++j) CHECK(xb[j] <= xa[j]);
        }
    }
}

TEST_CASE("step_aoi arithmetic") {
    AoiState s{{5, 7, 4}, 3};
    auto n = step_aoi(s, {0}, CorrelationDraw{{1, 0, 0.5}});
    CHECK(n.ages[0] == 1);
    CHECK(n.ages[1] == 8);
    CHECK(n.ages[2] == 3);
    CHECK(n.slot == 4);
}

TEST_CASE("ages stay >= 1 and integer under bernoulli") {
    Rng rng(6);
    AoiState s = AoiState::ones(5);
    for (int t = 0; t < 2000; ++t) {
        std::vector<double> x(5);
        for (auto& v : x) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
        auto prev = s.ages;
        step_aoi_inplace(s, x);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(s.ages[j] >= 1.0);
            CHECK(s.ages[j] == std::floor(s.ages[j]));
            CHECK(s.ages[j] == (x[j] == 1.0 ? 1.0 : prev[j] + 1));
        }
    }
    for (int t = 0; t < 500; ++t) {
        std::vector<double> x(5);
        for (auto& v : x) v = rng.uniform();
        step_aoi_inplace(s, x);
        for (double a : s.ages) CHECK(a >= 1.0);
    }
}

TEST_CASE("model names") {
    CHECK(correlation_kind_from_string(to_string(CorrelationKind::uniform_jitter)) ==
          CorrelationKind::uniform_jitter);
    CHECK(correlation_kind_from_string("uniform") == CorrelationKind::uniform_jitter);
    CHECK_THROWS(correlation_kind_from_string("gaussian"));
}
