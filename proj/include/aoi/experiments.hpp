#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aoi/dynamics.hpp"
#include "aoi/policies.hpp"
#include "aoi/sim.hpp"
#include "aoi/topology.hpp"

namespace aoi {

enum class Scale { desk, paper };

Scale scale_from_string(const std::string& s);
std::string to_string(Scale s);

/// Sweep description. Every simulation cell it expands into is fully
/// determined by these fields.
struct ExperimentPreset {
    std::string name;
    Scale scale = Scale::desk;

    TopologyKind topology = TopologyKind::rgg;
    std::vector<std::size_t> n_values;
    std::vector<double> p_values;
    double radius = 0.0;  // <= 0: 1.1 sqrt(ln n / n)
    double hgg_gamma = 2.5;

    std::vector<CorrelationKind> models{CorrelationKind::bernoulli};
    std::vector<PolicyKind> policies;
    std::size_t replications = 1;
    std::uint64_t base_seed = 1;
    std::uint64_t horizon = 10'000;
    std::size_t window = 100;
    double ema_rate = 0.4;
    MobilityConfig mobility;
    InitialAges initial = InitialAges::ones;

    bool bound_rows = true;       // one lower-bound row per instance
    bool maf_star_row = false;    // extra max-AoI-first star bound row
    bool time_series = false;     // emit the windowed time-series CSV
};

/// Known names: fig3_rgg_scaling, fig4_hgg_scaling, fig5_correlation_models,
/// fig6_mobile_ema, thm7_separation. Throws std::invalid_argument otherwise.
ExperimentPreset make_preset(const std::string& name, Scale scale = Scale::desk);
std::vector<std::string> preset_names();

/// One generated problem instance, shared by every cell that runs on it.
struct InstanceDescriptor {
    TopologySpec topology;
    std::size_t replication = 0;
};

enum class RowKind { simulation, lower_bound, maf_star_bound };

struct ExperimentCell {
    std::string preset;
    RowKind kind = RowKind::simulation;
    std::size_t instance = 0;  // index into ExpandedExperiment::instances
    SimConfig config;          // policy, model, seed, horizon, mobility
    std::size_t n = 0;
    double p = 0.0;
    double r = 0.0;

    std::string policy_label() const;
};

struct ExpandedExperiment {
    std::vector<InstanceDescriptor> instances;
    std::vector<ExperimentCell> cells;
};

/// Full factorial expansion: n/p values x replications x models x policies,
/// plus bound rows. Pure.
ExpandedExperiment expand_preset(const ExperimentPreset& preset);

struct ExperimentOptions {
    std::size_t threads = 0;  // 0: hardware concurrency
    bool record_timing = false;  // off keeps the CSV byte-reproducible
};

struct ExperimentResult {
    std::filesystem::path summary_csv;
    std::optional<std::filesystem::path> timeseries_csv;
    std::size_t cells_total = 0;
    std::size_t cells_completed = 0;
    std::vector<std::string> errors;

    bool ok() const noexcept { return cells_completed == cells_total && errors.empty(); }
};

inline constexpr const char* kSummaryHeader =
    "preset,policy,n,p,r,model,seed,T,weighted_avg_aoi,lower_bound,cover_bound,"
    "solver_objective,wall_ms";
inline constexpr const char* kTimeSeriesHeader = "preset,policy,seed,t,window_avg";

/// Runs every cell and writes <out_dir>/<preset>_summary.csv (and
/// <preset>_timeseries.csv when requested) plus <preset>_cells.jsonl with
/// the materialized per-cell configs. Completed rows are appended to a
/// .partial file as they finish; the final files are written in expansion
/// order.
ExperimentResult run_experiment(const ExperimentPreset& preset,
                                const std::filesystem::path& out_dir,
                                const ExperimentOptions& options = {});

/// Deterministic CSV number formatting shared by all writers.
std::string format_number(double v);

}  // namespace aoi
