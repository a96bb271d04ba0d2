#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

/// Thrown when no stationary randomized policy gives every source a
/// finite average age (some column of P is all zeros).
class InfeasibleInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-source delivery rate r_i = sum_j pi_j p_ji.
std::vector<double> delivery_rates(const CorrelationMatrix& P, std::span<const double> pi);

/// Closed-form average age under a stationary randomized policy:
/// 1 / sum_j pi_j p_ji, or +infinity when that rate is zero.
std::vector<double> eval_avg_aoi(const CorrelationMatrix& P, const PolicyDistribution& pi);

/// sum_i w_i * avg_aoi_i; +infinity if any weighted source is unreachable.
double randomized_objective(const CorrelationMatrix& P, const WeightVector& w,
                            std::span<const double> pi);

/// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_to_simplex(std::span<const double> v);

struct KktReport {
    double lambda = 0.0;              // max support score
    double residual = 0.0;            // max |score_i - lambda| / lambda over the support
    double off_support_excess = 0.0;  // max (score_i - lambda) / lambda over non-support, >= 0
    std::vector<SourceIndex> support;
    std::vector<SourceIndex> violators;  // off-support indices with score > lambda * (1 + tol)
    std::vector<double> scores;          // sum_j p_ij w_j A_j^2 for every i
};

/// Optimality check for problem min sum_i w_i / sum_j pi_j p_ji over the simplex.
/// On the support (pi_i > support_eps) the scores sum_j p_ij w_j A_j^2 must all
/// equal lambda; off the support they must not exceed it.
KktReport check_kkt(const CorrelationMatrix& P, const WeightVector& w,
                    const PolicyDistribution& pi, double support_eps = 1e-8,
                    double violation_tol = 1e-6);

struct SolverOptions {
    double tol = 1e-6;
    std::size_t max_iter = 100000;
    double support_eps = 1e-8;
};

struct SolverReport {
    PolicyDistribution pi_star;
    double lambda = 0.0;
    std::vector<double> avg_aoi;
    double kkt_residual = 0.0;
    double off_support_excess = 0.0;
    std::size_t iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

/// Optimal stationary randomized policy by projected gradient descent on the
/// simplex, started from the uniform distribution. Each step tries a
/// Barzilai-Borwein length and halves it until the projected point gives
/// sufficient decrease. Points where a weighted source's rate falls below
/// 1e-12 count as +infinity and are always rejected.
///
/// Deterministic. Throws InfeasibleInstance for an all-zero column and
/// std::invalid_argument for malformed input. If max_iter is hit, the best
/// iterate is returned with converged = false.
SolverReport solve_optimal_randomized(const CorrelationMatrix& P, const WeightVector& w,
                                      const SolverOptions& options = {});

}  // namespace aoi
