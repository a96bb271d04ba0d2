#include "aoi/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aoi {

CorrelationMatrix::CorrelationMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
    if (n_ == 0) throw std::invalid_argument("correlation matrix must have n >= 1");
    if (entries_.size() != n_ * n_)
        throw std::invalid_argument("correlation matrix is not square: expected " +
                                    std::to_string(n_ * n_) + " entries, got " +
                                    std::to_string(entries_.size()));
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return CorrelationMatrix(n, std::move(e));
}

WeightVector WeightVector::equal(std::size_t n) {
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double WeightVector::total() const noexcept { return std::accumulate(w_.begin(), w_.end(), 0.0); }

PolicyDistribution PolicyDistribution::uniform(std::size_t n) {
    return PolicyDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double PolicyDistribution::total() const noexcept {
    return std::accumulate(pi_.begin(), pi_.end(), 0.0);
}

bool PolicyDistribution::feasible() const noexcept {
    for (double v : pi_)
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
    return total() <= 1.0 + 1e-12;
}

bool PolicyDistribution::normalized() const noexcept {
    return !pi_.empty() && feasible() && std::abs(total() - 1.0) <= 1e-9;
}

PolicyDistribution PolicyDistribution::normalized_copy() const {
    const double s = total();
    if (!(s > 0.0)) throw std::invalid_argument("cannot normalize a zero distribution");
    std::vector<double> out(pi_);
    for (double& v : out) v /= s;
    return PolicyDistribution(std::move(out));
}

std::string to_string(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::dimension_mismatch: return "dimension_mismatch";
        case DiagnosticKind::out_of_range_entry: return "out_of_range_entry";
        case DiagnosticKind::non_finite_entry: return "non_finite_entry";
        case DiagnosticKind::nonpositive_weight: return "nonpositive_weight";
        case DiagnosticKind::unreachable_source: return "unreachable_source";
        case DiagnosticKind::empty_instance: return "empty_instance";
    }
    return "unknown";
}

std::vector<Diagnostic> validate_instance(const CorrelationMatrix& P, const WeightVector& w) {
    std::vector<Diagnostic> out;
    const std::size_t n = P.size();
    if (n == 0) {
        out.push_back({DiagnosticKind::empty_instance, "instance has no sources"});
        return out;
    }
    if (w.size() != n) {
        out.push_back({DiagnosticKind::dimension_mismatch,
                       "weight vector has " + std::to_string(w.size()) + " entries, P is " +
                           std::to_string(n) + "x" + std::to_string(n)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = P(i, j);
            std::ostringstream where;
            where << "P(" << i + 1 << "," << j + 1 << ") = " << v;
            if (!std::isfinite(v))
                out.push_back({DiagnosticKind::non_finite_entry, where.str() + " is not finite"});
            else if (v < 0.0 || v > 1.0)
                out.push_back({DiagnosticKind::out_of_range_entry, where.str() + " outside [0,1]"});
        }
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            std::ostringstream m;
            m << "nonpositive weight w(" << i + 1 << ") = " << w[i];
            out.push_back({DiagnosticKind::nonpositive_weight, m.str()});
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < n && !any; ++i) any = P(i, j) > 0.0;
        if (!any)
            out.push_back({DiagnosticKind::unreachable_source,
                           "source " + std::to_string(j + 1) +
                               " unreachable: column is all zeros, average age unbounded"});
    }
    return out;
}

void require_valid(const CorrelationMatrix& P, const WeightVector& w) {
    const auto diags = validate_instance(P, w);
    if (diags.empty()) return;
    std::string msg = "invalid instance:";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw std::invalid_argument(msg);
}

nlohmann::json matrix_to_json(const CorrelationMatrix& P) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto r = P.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

CorrelationMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("P must be a nonempty array of rows");
    const std::size_t n = j.size();
    std::vector<double> e;
    e.reserve(n * n);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument("P must be square: every row needs " + std::to_string(n) +
                                        " entries");
        for (const auto& v : row) e.push_back(v.get<double>());
    }
    return CorrelationMatrix(n, std::move(e));
}

nlohmann::json to_json(const Instance& inst) {
    auto w = inst.w.values();
    return {{"n", inst.size()},
            {"P", matrix_to_json(inst.P)},
            {"w", std::vector<double>(w.begin(), w.end())}};
}

Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    inst.P = matrix_from_json(j.at("P"));
    if (j.contains("n") && j.at("n").get<std::size_t>() != inst.P.size())
        throw std::invalid_argument("field n disagrees with the size of P");
    if (j.contains("w"))
        inst.w = WeightVector(j.at("w").get<std::vector<double>>());
    else
        inst.w = WeightVector::equal(inst.P.size());
    return inst;
}

}  // namespace aoi
