#include <doctest.h>

#include <cmath>
#include <limits>

#include "aoi/model.hpp"
#include "aoi/rng.hpp"

using namespace aoi;

namespace {

bool has_kind(const std::vector<Diagnostic>& d, DiagnosticKind k) {
    for (const auto& x : d)
        if (x.kind == k) return true;
    return false;
}

}  // namespace

TEST_CASE("identity instance validates cleanly") {
    auto d = validate_instance(CorrelationMatrix::identity(3), WeightVector::equal(3));
    CHECK(d.empty());
}

TEST_CASE("all-zero column is reported with a 1-based label") {
    CorrelationMatrix P(3, {1, 0, 0,
                            0, 0, 0,
                            0, 0, 1});
    auto d = validate_instance(P, WeightVector::equal(3));
    REQUIRE(has_kind(d, DiagnosticKind::unreachable_source));
    bool named = false;
    for (const auto& x : d)
        if (x.kind == DiagnosticKind::unreachable_source)
            named = x.message.find("source 2") != std::string::npos;
    CHECK(named);
    CHECK_THROWS_AS(require_valid(P, WeightVector::equal(3)), std::invalid_argument);
}

TEST_CASE("zero weight is flagged") {
    auto d = validate_instance(CorrelationMatrix::identity(2), WeightVector({0.0, 1.0}));
    CHECK(has_kind(d, DiagnosticKind::nonpositive_weight));
}

TEST_CASE("range, finiteness and dimension problems") {
    CorrelationMatrix P(2, {1.2, 0, std::nan(""), 1});
    auto d = validate_instance(P, WeightVector::equal(2));
    CHECK(has_kind(d, DiagnosticKind::out_of_range_entry));
    CHECK(has_kind(d, DiagnosticKind::non_finite_entry));
    CHECK(has_kind(validate_instance(P, WeightVector::equal(3)), DiagnosticKind::dimension_mismatch));
    CHECK_THROWS_AS(CorrelationMatrix(2, {1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(CorrelationMatrix(0, {}), std::invalid_argument);
}

TEST_CASE("diagonal below one is allowed") {
    CorrelationMatrix P(2, {0.5, 0.2, 0.3, 0.9});
    CHECK(validate_instance(P, WeightVector::equal(2)).empty());
}

TEST_CASE("validate_instance is pure") {
    CorrelationMatrix P(2, {1, 0, 0, 0});
    WeightVector w({-1.0, 1.0});
    auto a = validate_instance(P, w);
    auto b = validate_instance(P, w);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].message == b[i].message);
    }
}

TEST_CASE("matrix JSON round trip is bit exact") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + rep % 7;
        std::vector<double> e(n * n);
        for (auto& v : e) v = rng.uniform();
        e[0] = std::nextafter(1.0, 0.0);
        CorrelationMatrix P(n, e);
        auto back = matrix_from_json(nlohmann::json::parse(matrix_to_json(P).dump()));
        CHECK(back == P);
    }
}

TEST_CASE("instance JSON: weights default to equal") {
    auto j = nlohmann::json::parse(R"({"n":2,"P":[[1,0.5],[0,1]]})");
    auto inst = instance_from_json(j);
    CHECK(inst.P(0, 1) == 0.5);
    CHECK(inst.w == WeightVector::equal(2));
    auto again = instance_from_json(to_json(inst));
    CHECK(again.P == inst.P);
    CHECK(again.w == inst.w);
    CHECK_THROWS(instance_from_json(nlohmann::json::parse(R"({"n":3,"P":[[1,0],[0,1]]})")));
}

TEST_CASE("policy distribution feasibility") {
    CHECK(PolicyDistribution({0.5, 0.5}).normalized());
    CHECK(PolicyDistribution({0.2, 0.3}).feasible());
    CHECK_FALSE(PolicyDistribution({0.2, 0.3}).normalized());
    CHECK_FALSE(PolicyDistribution({0.7, 0.7}).feasible());
    CHECK_FALSE(PolicyDistribution({-0.1, 1.1}).feasible());
    auto c = PolicyDistribution({1.0, 3.0}).normalized_copy();
    CHECK(c[1] == doctest::Approx(0.75));
    CHECK_THROWS(PolicyDistribution({0.0, 0.0}).normalized_copy());
}

TEST_CASE("rng streams are independent and reproducible") {
    Rng a(5, Stream::scheduling), b(5, Stream::scheduling), c(5, Stream::correlation);
    int same = 0;
    for (int i = 0; i < 100; ++i) {
        auto x = a(), y = b(), z = c();
        CHECK(x == y);
        same += x == z;
    }
    CHECK(same == 0);
    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
        double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}
