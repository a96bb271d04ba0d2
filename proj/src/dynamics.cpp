#include "aoi/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace aoi {

std::string to_string(CorrelationKind kind) {
    switch (kind) {
        case CorrelationKind::bernoulli: return "bernoulli";
        case CorrelationKind::constant: return "constant";
        case CorrelationKind::uniform_jitter: return "uniform_jitter";
    }
    return "unknown";
}

CorrelationKind correlation_kind_from_string(const std::string& s) {
    if (s == "bernoulli") return CorrelationKind::bernoulli;
    if (s == "constant") return CorrelationKind::constant;
    if (s == "uniform_jitter" || s == "uniform") return CorrelationKind::uniform_jitter;
    throw std::invalid_argument("unknown correlation model '" + s + "'");
}

double CorrelationModel::draw(double p, double u) const noexcept {
    switch (kind) {
        case CorrelationKind::bernoulli:
            return (p > 0.0 && u <= p) ? 1.0 : 0.0;
        case CorrelationKind::constant:
            return p;
        case CorrelationKind::uniform_jitter: {
            const double h = std::min({jitter_halfwidth, p, 1.0 - p});
            if (!(h > 0.0)) return p;
            return std::clamp(p + h * (2.0 * u - 1.0), 0.0, 1.0);
        }
    }
    return p;
}

CorrelationDraw sample_row(const CorrelationModel& model, const CorrelationMatrix& P,
                           SourceIndex sender, Rng& rng) {
    if (sender >= P.size()) throw std::out_of_range("sender index out of range");
    CorrelationDraw d;
    d.x.resize(P.size());
    auto row = P.row(sender);
    for (std::size_t j = 0; j < row.size(); ++j) d.x[j] = model.draw(row[j], rng.uniform());
    return d;
}

CorrelationDraw sample_row_coupled(const CorrelationModel& model, const CorrelationMatrix& P,
                                   SourceIndex sender, std::span<const double> uniforms) {
    if (sender >= P.size()) throw std::out_of_range("sender index out of range");
    if (uniforms.size() != P.size()) throw std::invalid_argument("need one uniform per subject");
    CorrelationDraw d;
    d.x.resize(P.size());
    auto row = P.row(sender);
    for (std::size_t j = 0; j < row.size(); ++j) d.x[j] = model.draw(row[j], uniforms[j]);
    return d;
}

AoiState step_aoi(const AoiState& state, const ScheduleDecision& decision,
                  const CorrelationDraw& draw) {
    if (draw.x.size() != state.size()) throw std::invalid_argument("draw size mismatch");
    if (decision.source >= state.size()) throw std::out_of_range("scheduled source out of range");
    AoiState next = state;
    step_aoi_inplace(next, draw.x);
    return next;
}

void step_aoi_inplace(AoiState& state, std::span<const double> x) noexcept {
    for (std::size_t j = 0; j < state.ages.size(); ++j) {
        const double a = state.ages[j];
        state.ages[j] = a + 1.0 - x[j] * a;
    }
    ++state.slot;
}

}  // namespace aoi
