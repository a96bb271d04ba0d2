#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/rng.hpp"

namespace aoi {

// All deciders break ties toward the larger source index.

/// Samples source s with probability pi_s. Throws std::invalid_argument
/// unless pi sums to 1.
ScheduleDecision decide_randomized(const PolicyDistribution& pi, Rng& rng);

/// argmax_i sqrt(w_i) * A_i.
ScheduleDecision decide_max_aoi_first(const WeightVector& w, const AoiState& A);

/// argmax_i sum_j w_j p_ij A_j (A_j + 2): the sender whose update removes
/// the most expected quadratic Lyapunov mass sum_j w_j A_j^2.
ScheduleDecision decide_quadratic_mw(const WeightVector& w, const CorrelationMatrix& P_used,
                                     const AoiState& A);

/// Linear Lyapunov weights alpha_i = w_i / sum_j pi*_j p_ji.
struct LinearMwState {
    std::vector<double> alpha;
};

/// Throws InfeasibleInstance if some source has zero rate under pi_star.
LinearMwState make_linear_mw_state(const CorrelationMatrix& P, const WeightVector& w,
                                   const PolicyDistribution& pi_star);

/// argmax_i sum_j p_ij alpha_j A_j.
ScheduleDecision decide_linear_mw(const LinearMwState& st, const CorrelationMatrix& P,
                                  const AoiState& A);

/// order[t mod |order|]. Throws std::invalid_argument on an empty order.
ScheduleDecision decide_round_robin(std::span<const SourceIndex> order, std::uint64_t slot);

/// Running estimate of P for the EMA max-weight policy.
struct EmaState {
    CorrelationMatrix p_hat;
    double alpha_rate = 0.4;

    /// P_hat starts at the identity (no assumed correlation).
    static EmaState fresh(std::size_t n, double alpha_rate);
};

/// Only row `scheduled` moves: p_sj <- (1 - a) p_sj + a * delivered_j.
EmaState ema_observe_and_update(const EmaState& st, SourceIndex scheduled,
                                std::span<const double> delivered);

/// Quadratic max-weight on the current estimate.
ScheduleDecision decide_ema_mw(const EmaState& st, const WeightVector& w, const AoiState& A);

// ---------------------------------------------------------------------------
// Policy selection for the simulation loop.

enum class PolicyKind {
    stationary_randomized,
    uniform_randomized,
    optimal_randomized,
    max_aoi_first,
    quadratic_max_weight,
    linear_max_weight,
    round_robin,
    ema_max_weight,
    oracle_max_weight,
};

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& s);

struct PolicySpec {
    PolicyKind kind = PolicyKind::optimal_randomized;
    std::vector<double> pi;               // stationary_randomized
    std::vector<SourceIndex> order;       // round_robin, 0-based
    std::optional<double> cover_threshold;  // round_robin over a greedy cover when order is empty
    double ema_rate = 0.4;                // ema_max_weight
    std::optional<CorrelationMatrix> p_used;  // quadratic_max_weight; defaults to the initial P
    std::vector<double> alpha;            // linear_max_weight; solved from P when empty
};

/// Stateful decision maker driven by the simulation loop.
class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual ScheduleDecision decide(const AoiState& A, Rng& rng) = 0;

    /// Realized overlap of the slot's transmission (one entry per subject).
    virtual void observe(SourceIndex /*scheduled*/, std::span<const double> /*x*/) {}

    /// The true correlation matrix changed (mobility).
    virtual void on_matrix_update(const CorrelationMatrix& /*P*/) {}

    virtual PolicyKind kind() const = 0;
};

/// Everything a scheduler may need, fully resolved by the caller:
/// randomized kinds need `pi`, linear max-weight needs `alpha`,
/// round robin needs a nonempty `order`.
struct ResolvedPolicy {
    PolicyKind kind;
    std::vector<double> pi;
    std::vector<double> alpha;
    std::vector<SourceIndex> order;
    double ema_rate = 0.4;
    std::optional<CorrelationMatrix> p_used;
};

std::unique_ptr<Scheduler> make_scheduler(const ResolvedPolicy& policy, const Instance& inst);

}  // namespace aoi
