#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoi/model.hpp"
#include "aoi/rng.hpp"

namespace aoi {

using Point2 = std::array<double, 2>;

/// Source positions on the unit square [0,1]^2.
struct SourceLayout {
    std::vector<Point2> positions;
    std::size_t size() const noexcept { return positions.size(); }
};

/// Connection radius slightly above the RGG connectivity threshold:
/// 1.1 * sqrt(ln n / n).
double rgg_connectivity_radius(std::size_t n);

/// p_ij = p_ji = p when |x_i - x_j| < r (strict), 0 otherwise; unit diagonal.
CorrelationMatrix rebuild_rgg(const SourceLayout& layout, double r, double p);

struct RggInstance {
    SourceLayout layout;
    CorrelationMatrix P;
};

/// n uniform points on the unit square, correlated by rebuild_rgg.
RggInstance rgg_generate(std::size_t n, double r, double p, Rng& rng);

struct HggOptions {
    double target_avg_degree = 10.0;
    double gamma = 2.5;  // power-law exponent of the degree distribution, > 2
};

/// Threshold hyperbolic random graph on a disk of radius R = 2 ln n + C.
///
/// Angles are uniform; radii follow the density
/// alpha sinh(alpha r) / (cosh(alpha R) - 1) with alpha = (gamma - 1) / 2.
/// Two sources are connected when their hyperbolic distance is below R.
/// C is found by bisection so the realized average degree matches
/// target_avg_degree (with the same underlying uniforms at every trial).
CorrelationMatrix hgg_generate(std::size_t n, const HggOptions& opt, double p, Rng& rng);

/// First row and column p (source 1 correlated with everyone), identity elsewhere.
CorrelationMatrix star_matrix(std::size_t n, double p);

/// Gaussian step (sd v_max/2 per axis) clamped to norm v_max, then
/// reflected at the walls of the unit square.
SourceLayout brownian_step(const SourceLayout& layout, double v_max, Rng& rng);

enum class TopologyKind { rgg, hgg, star, identity, explicit_matrix };

std::string to_string(TopologyKind kind);

/// Instance generator description. Fields not used by `kind` are ignored.
struct TopologySpec {
    TopologyKind kind = TopologyKind::rgg;
    std::size_t n = 1;
    double r = 0.25;            // rgg; <= 0 selects rgg_connectivity_radius(n)
    double p = 0.7;             // rgg, hgg, star
    HggOptions hgg;             // hgg
    std::optional<CorrelationMatrix> matrix;  // explicit_matrix
    std::uint64_t seed = 1;

    /// Radius actually used for rgg specs.
    double effective_radius() const;
};

struct GeneratedTopology {
    CorrelationMatrix P;
    std::optional<SourceLayout> layout;  // rgg only
};

GeneratedTopology generate_topology(const TopologySpec& spec);

nlohmann::json to_json(const TopologySpec& spec);
TopologySpec topology_from_json(const nlohmann::json& j);
nlohmann::json layout_to_json(const SourceLayout& layout);

}  // namespace aoi
