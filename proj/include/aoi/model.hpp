#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace aoi {

using SourceIndex = std::size_t;

/// N x N matrix of pairwise correlation probabilities.
///
/// Entry (i, j) is the probability (or fraction) that an update sent by
/// source i also carries information about source j. Row = sender,
/// column = subject. The diagonal is 1 for matrices built through
/// identity(), but any entry may be set explicitly (p_ii < 1 is allowed).
///
/// The type does not reject out-of-range entries on its own; use
/// validate_instance() / require_valid() before simulating.
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;

    /// Row-major entries; throws std::invalid_argument when
    /// entries.size() != n * n or n == 0.
    CorrelationMatrix(std::size_t n, std::vector<double> entries);

    static CorrelationMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    double operator()(SourceIndex sender, SourceIndex subject) const noexcept {
        return entries_[sender * n_ + subject];
    }

    void set(SourceIndex sender, SourceIndex subject, double value) noexcept {
        entries_[sender * n_ + subject] = value;
    }

    std::span<const double> row(SourceIndex sender) const noexcept {
        return {entries_.data() + sender * n_, n_};
    }

    std::span<const double> entries() const noexcept { return entries_; }

    bool operator==(const CorrelationMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Positive per-source weights. Not required to sum to 1.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}

    /// w_i = 1/n for every source.
    static WeightVector equal(std::size_t n);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](SourceIndex i) const noexcept { return w_[i]; }
    std::span<const double> values() const noexcept { return w_; }
    double total() const noexcept;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> w_;
};

/// Ages at the base station. Stored as reals so that fractional
/// correlation models share the same state.
struct AoiState {
    std::vector<double> ages;
    std::uint64_t slot = 0;

    static AoiState ones(std::size_t n) { return {std::vector<double>(n, 1.0), 0}; }
    std::size_t size() const noexcept { return ages.size(); }
};

struct ScheduleDecision {
    SourceIndex source = 0;
    bool operator==(const ScheduleDecision&) const = default;
};

/// Realized per-subject overlap X_{s,j} for the scheduled sender s.
struct CorrelationDraw {
    std::vector<double> x;
};

/// Scheduling probabilities of a stationary randomized policy.
class PolicyDistribution {
public:
    PolicyDistribution() = default;
    explicit PolicyDistribution(std::vector<double> pi) : pi_(std::move(pi)) {}

    static PolicyDistribution uniform(std::size_t n);

    std::size_t size() const noexcept { return pi_.size(); }
    double operator[](SourceIndex i) const noexcept { return pi_[i]; }
    std::span<const double> values() const noexcept { return pi_; }
    double total() const noexcept;

    /// Entries nonnegative and total within 1 + 1e-12.
    bool feasible() const noexcept;
    /// Feasible and total within 1e-9 of 1.
    bool normalized() const noexcept;
    /// Copy rescaled to sum to 1; throws std::invalid_argument if the total is 0.
    PolicyDistribution normalized_copy() const;

private:
    std::vector<double> pi_;
};

/// One problem instance: correlation structure plus weights.
struct Instance {
    CorrelationMatrix P;
    WeightVector w;

    std::size_t size() const noexcept { return P.size(); }
};

enum class DiagnosticKind {
    dimension_mismatch,
    out_of_range_entry,
    non_finite_entry,
    nonpositive_weight,
    unreachable_source,
    empty_instance,
};

std::string to_string(DiagnosticKind kind);

struct Diagnostic {
    DiagnosticKind kind;
    std::string message;
};

/// Lists every problem with (P, w). Sources are reported with 1-based
/// labels in messages. An all-zero column j means source j can never be
/// refreshed (unbounded average age) and is flagged as unreachable.
std::vector<Diagnostic> validate_instance(const CorrelationMatrix& P, const WeightVector& w);

/// Throws std::invalid_argument listing all diagnostics when any exist.
void require_valid(const CorrelationMatrix& P, const WeightVector& w);

// JSON: {"n": int, "P": [[...]], "w": [...]}
nlohmann::json to_json(const Instance& inst);
nlohmann::json matrix_to_json(const CorrelationMatrix& P);
CorrelationMatrix matrix_from_json(const nlohmann::json& j);
/// Parses an instance file. Shape errors throw std::invalid_argument;
/// value-range problems are left to validate_instance().
Instance instance_from_json(const nlohmann::json& j);

}  // namespace aoi
