#pragma once

#include <span>
#include <string>

#include "aoi/model.hpp"
#include "aoi/rng.hpp"

namespace aoi {

enum class CorrelationKind { bernoulli, constant, uniform_jitter };

std::string to_string(CorrelationKind kind);
CorrelationKind correlation_kind_from_string(const std::string& s);

/// How the realized overlap X_{s,j}(t) is drawn from p_{s,j}.
///
///  - bernoulli:       X ~ Bern(p)
///  - constant:        X = p
///  - uniform_jitter:  X = p + Unif[-h, h] with h = min(jitter_halfwidth, p, 1 - p),
///                     so the draw stays in [0,1] and E[X] = p exactly.
///                     Entries at 0 or 1 are therefore deterministic.
struct CorrelationModel {
    CorrelationKind kind = CorrelationKind::bernoulli;
    double jitter_halfwidth = 0.1;

    /// One draw for a single entry from an externally supplied uniform u in [0,1).
    /// Bernoulli uses the threshold rule x = 1{u <= p}, with p = 0 never delivering.
    double draw(double p, double u) const noexcept;
};

/// Samples X_{sender, j} independently for every subject j.
CorrelationDraw sample_row(const CorrelationModel& model, const CorrelationMatrix& P,
                           SourceIndex sender, Rng& rng);

/// Deterministic draw from supplied uniforms (one per subject). For
/// Bernoulli, x_j = 1{u_j <= p_sj} except that p = 0 never delivers, so
/// an elementwise-larger P never yields a smaller draw under the same
/// uniforms.
CorrelationDraw sample_row_coupled(const CorrelationModel& model, const CorrelationMatrix& P,
                                   SourceIndex sender, std::span<const double> uniforms);

/// A_j <- A_j + 1 - x_j * A_j for every subject, slot advances by one.
AoiState step_aoi(const AoiState& state, const ScheduleDecision& decision,
                  const CorrelationDraw& draw);

/// In-place form of step_aoi used by the simulation loop.
void step_aoi_inplace(AoiState& state, std::span<const double> x) noexcept;

}  // namespace aoi
