#include "aoi/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aoi {

double rgg_connectivity_radius(std::size_t n) {
    if (n < 2) return 1.0;
    const double nn = static_cast<double>(n);
    return 1.1 * std::sqrt(std::log(nn) / nn);
}

CorrelationMatrix rebuild_rgg(const SourceLayout& layout, double r, double p) {
    if (!(r > 0.0)) throw std::invalid_argument("rgg radius must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("rgg correlation must lie in [0,1]");
    const std::size_t n = layout.size();
    auto P = CorrelationMatrix::identity(n);
    const double r2 = r * r;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = layout.positions[i][0] - layout.positions[j][0];
            const double dy = layout.positions[i][1] - layout.positions[j][1];
            if (dx * dx + dy * dy < r2) {
                P.set(i, j, p);
                P.set(j, i, p);
            }
        }
    }
    return P;
}

RggInstance rgg_generate(std::size_t n, double r, double p, Rng& rng) {
    if (n == 0) throw std::invalid_argument("need at least one source");
    SourceLayout layout;
    layout.positions.resize(n);
    for (auto& pt : layout.positions) {
        pt[0] = rng.uniform();
        pt[1] = rng.uniform();
    }
    auto P = rebuild_rgg(layout, r, p);
    return {std::move(layout), std::move(P)};
}

namespace {

struct PolarPoint {
    double radius;
    double angle;
};

std::vector<PolarPoint> place_on_disk(const std::vector<double>& u_radius,
                                      const std::vector<double>& u_angle, double R, double alpha) {
    std::vector<PolarPoint> pts(u_radius.size());
    const double scale = std::cosh(alpha * R) - 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i].radius = std::acosh(1.0 + scale * u_radius[i]) / alpha;
        pts[i].angle = 2.0 * std::numbers::pi * u_angle[i];
    }
    return pts;
}

// cosh d = cosh(r1 - r2) + 2 sin^2(dtheta/2) sinh r1 sinh r2, stable for large radii.
bool within(const PolarPoint& a, const PolarPoint& b, double cosh_R) {
    const double s = std::sin(0.5 * (a.angle - b.angle));
    const double c = std::cosh(a.radius - b.radius) +
                     2.0 * s * s * std::sinh(a.radius) * std::sinh(b.radius);
    return c < cosh_R;
}

std::vector<std::pair<std::size_t, std::size_t>> hyperbolic_edges(
    const std::vector<PolarPoint>& pts, double R) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const double cosh_R = std::cosh(R);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (within(pts[i], pts[j], cosh_R)) edges.emplace_back(i, j);
    return edges;
}

}  // namespace

CorrelationMatrix hgg_generate(std::size_t n, const HggOptions& opt, double p, Rng& rng) {
    if (n == 0) throw std::invalid_argument("need at least one source");
    if (!(opt.gamma > 2.0)) throw std::invalid_argument("hgg exponent gamma must exceed 2");
    if (!(opt.target_avg_degree >= 1.0))
        throw std::invalid_argument("hgg target average degree must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("hgg correlation must lie in [0,1]");
    auto P = CorrelationMatrix::identity(n);
    if (n == 1) return P;

    std::vector<double> u_radius(n), u_angle(n);
    for (std::size_t i = 0; i < n; ++i) {
        u_radius[i] = rng.uniform();
        u_angle[i] = rng.uniform();
    }
    const double alpha = 0.5 * (opt.gamma - 1.0);
    const double base = 2.0 * std::log(static_cast<double>(n));
    auto avg_degree = [&](double C) {
        const double R = std::max(base + C, 1e-6);
        auto e = hyperbolic_edges(place_on_disk(u_radius, u_angle, R, alpha), R);
        return 2.0 * static_cast<double>(e.size()) / static_cast<double>(n);
    };

    // Average degree shrinks as the disk grows.
    double lo = -base + 1e-3, hi = 40.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (avg_degree(mid) > opt.target_avg_degree) lo = mid;
        else hi = mid;
    }
    const double R = std::max(base + hi, 1e-6);
    for (auto [i, j] : hyperbolic_edges(place_on_disk(u_radius, u_angle, R, alpha), R)) {
        P.set(i, j, p);
        P.set(j, i, p);
    }
    return P;
}

CorrelationMatrix star_matrix(std::size_t n, double p) {
    if (n == 0) throw std::invalid_argument("need at least one source");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("star correlation must lie in [0,1]");
    auto P = CorrelationMatrix::identity(n);
    for (std::size_t j = 1; j < n; ++j) {
        P.set(0, j, p);
        P.set(j, 0, p);
    }
    return P;
}

namespace {
double reflect_unit(double x) {
    while (x < 0.0 || x > 1.0) x = x < 0.0 ? -x : 2.0 - x;
    return x;
}
}  // namespace

SourceLayout brownian_step(const SourceLayout& layout, double v_max, Rng& rng) {
    if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be nonnegative");
    SourceLayout out = layout;
    if (v_max == 0.0) return out;
    for (auto& pt : out.positions) {
        double dx = rng.normal(0.0, 0.5 * v_max);
        double dy = rng.normal(0.0, 0.5 * v_max);
        const double norm = std::hypot(dx, dy);
        if (norm > v_max) {
            dx *= v_max / norm;
            dy *= v_max / norm;
        }
        pt[0] = reflect_unit(pt[0] + dx);
        pt[1] = reflect_unit(pt[1] + dy);
    }
    return out;
}

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::rgg: return "rgg";
        case TopologyKind::hgg: return "hgg";
        case TopologyKind::star: return "star";
        case TopologyKind::identity: return "identity";
        case TopologyKind::explicit_matrix: return "explicit";
    }
    return "unknown";
}

double TopologySpec::effective_radius() const { return r > 0.0 ? r : rgg_connectivity_radius(n); }

GeneratedTopology generate_topology(const TopologySpec& spec) {
    Rng rng(spec.seed, Stream::topology);
    switch (spec.kind) {
        case TopologyKind::rgg: {
            auto g = rgg_generate(spec.n, spec.effective_radius(), spec.p, rng);
            return {std::move(g.P), std::move(g.layout)};
        }
        case TopologyKind::hgg:
            return {hgg_generate(spec.n, spec.hgg, spec.p, rng), std::nullopt};
        case TopologyKind::star:
            return {star_matrix(spec.n, spec.p), std::nullopt};
        case TopologyKind::identity:
            return {CorrelationMatrix::identity(spec.n), std::nullopt};
        case TopologyKind::explicit_matrix:
            if (!spec.matrix) throw std::invalid_argument("explicit topology needs a matrix");
            return {*spec.matrix, std::nullopt};
    }
    throw std::invalid_argument("unknown topology kind");
}

nlohmann::json to_json(const TopologySpec& spec) {
    nlohmann::json j = {{"kind", to_string(spec.kind)}, {"n", spec.n}, {"seed", spec.seed}};
    switch (spec.kind) {
        case TopologyKind::rgg:
            j["r"] = spec.effective_radius();
            j["p"] = spec.p;
            break;
        case TopologyKind::hgg:
            j["p"] = spec.p;
            j["avg_degree"] = spec.hgg.target_avg_degree;
            j["gamma"] = spec.hgg.gamma;
            break;
        case TopologyKind::star:
            j["p"] = spec.p;
            break;
        case TopologyKind::identity:
            break;
        case TopologyKind::explicit_matrix:
            j["P"] = matrix_to_json(*spec.matrix);
            break;
    }
    return j;
}

TopologySpec topology_from_json(const nlohmann::json& j) {
    TopologySpec s;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rgg") s.kind = TopologyKind::rgg;
    else if (kind == "hgg") s.kind = TopologyKind::hgg;
    else if (kind == "star") s.kind = TopologyKind::star;
    else if (kind == "identity") s.kind = TopologyKind::identity;
    else if (kind == "explicit") s.kind = TopologyKind::explicit_matrix;
    else throw std::invalid_argument("unknown topology kind '" + kind + "'");

    if (s.kind == TopologyKind::explicit_matrix) {
        s.matrix = matrix_from_json(j.at("P"));
        s.n = s.matrix->size();
    } else {
        s.n = j.at("n").get<std::size_t>();
    }
    if (j.contains("r") && !j.at("r").is_null()) s.r = j.at("r").get<double>();
    else s.r = s.kind == TopologyKind::rgg ? 0.0 : s.r;
    s.p = j.value("p", s.p);
    s.hgg.target_avg_degree = j.value("avg_degree", s.hgg.target_avg_degree);
    s.hgg.gamma = j.value("gamma", s.hgg.gamma);
    s.seed = j.value("seed", s.seed);
    if (s.n == 0) throw std::invalid_argument("topology needs n >= 1");
    return s;
}

nlohmann::json layout_to_json(const SourceLayout& layout) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : layout.positions) arr.push_back({pt[0], pt[1]});
    return arr;
}

}  // namespace aoi
