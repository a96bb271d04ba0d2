#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoi/dynamics.hpp"
#include "aoi/model.hpp"
#include "aoi/policies.hpp"
#include "aoi/solver.hpp"
#include "aoi/topology.hpp"

namespace aoi {

inline constexpr std::uint64_t kMaxHorizon = 100'000'000;

struct MobilityConfig {
    bool enabled = false;
    double v_max = 0.01;
    std::uint64_t rebuild_every = 1;
};

enum class InitialAges { ones, index, explicit_values };

struct SimConfig {
    std::uint64_t horizon = 10'000;
    std::uint64_t seed = 1;
    CorrelationModel model;
    PolicySpec policy;
    MobilityConfig mobility;
    std::size_t window = 100;
    InitialAges initial = InitialAges::ones;  // index: A_i = i (1-based)
    std::vector<double> initial_values;       // explicit_values
    std::size_t batches = 20;                 // batch means for the standard error
    SolverOptions solver;
};

/// Problem instance as seen by the simulator. Mobile runs need the layout
/// and the RGG parameters used to rebuild P as sources move.
struct SimInstance {
    CorrelationMatrix P;
    WeightVector w;
    std::optional<SourceLayout> layout;
    double rgg_r = 0.0;
    double rgg_p = 0.0;

    Instance instance() const { return {P, w}; }
};

struct SimReport {
    std::string policy;
    std::vector<double> avg_aoi;        // per-source time averages
    double weighted_avg_aoi = 0.0;      // sum_i w_i avg_aoi_i
    double weighted_stderr = 0.0;       // batch-means standard error of the above
    std::vector<double> window_series;  // block means of sum_i w_i A_i(t), stride = window
    std::size_t window = 0;
    std::vector<double> sched_fraction;  // f_j
    std::vector<double> delivery_rate;   // r_i: time average of realized overlap about i
    std::uint64_t slots = 0;
    double wall_ms = 0.0;
    std::optional<double> solver_objective;  // set when the policy needed the solver
};

/// Fills in whatever the policy needs from the instance: the optimal
/// distribution, linear max-weight weights, or a greedy cover order.
/// Throws InfeasibleInstance / std::invalid_argument before any slot runs.
struct PreparedPolicy {
    ResolvedPolicy resolved;
    std::optional<SolverReport> solver;
};
PreparedPolicy prepare_policy(const PolicySpec& spec, const Instance& inst,
                              const SolverOptions& solver = {});

/// Runs exactly cfg.horizon slots: decide, draw the sender's row, advance
/// ages, accumulate. Mobile runs move every source each slot and rebuild P
/// every `rebuild_every` slots. Ages are recorded after each slot's update.
/// Deterministic in (cfg, inst).
SimReport run_simulation(const SimConfig& cfg, const SimInstance& inst);

/// Same as run_simulation with an already prepared policy.
SimReport run_simulation(const SimConfig& cfg, const SimInstance& inst,
                         const PreparedPolicy& policy);

/// Non-overlapping block means of `trace`, one per full window.
std::vector<double> windowed_series(std::span<const double> trace, std::size_t window);

/// Age trajectories of a fixed round-robin schedule under several
/// correlation matrices, all driven by the same uniforms (Bernoulli
/// threshold draws). Result[m][t][i] is source i's age after slot t under
/// matrices[m].
std::vector<std::vector<std::vector<double>>> coupled_round_robin_trajectories(
    std::span<const CorrelationMatrix> matrices, std::span<const SourceIndex> order,
    std::uint64_t horizon, std::uint64_t seed);

nlohmann::json to_json(const SimReport& rep);

}  // namespace aoi
