#pragma once

#include <json.hpp>

#include "aoi/sim.hpp"
#include "aoi/topology.hpp"

namespace aoi {

// JSON configuration for single simulations. Source labels in JSON
// (round-robin orders, cover listings) are 1-based.

nlohmann::json to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CorrelationModel& model);
CorrelationModel correlation_model_from_json(const nlohmann::json& j);

/// Every field, defaults included.
nlohmann::json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const nlohmann::json& j);

/// A fully described single run: configuration plus the instance it runs on.
struct SimulationJob {
    SimConfig config;
    SimInstance instance;
    std::optional<TopologySpec> topology;  // when the instance was generated
};

/// Accepts either "instance": {n, P, w} or "topology": {...} plus an
/// optional "weights" ("equal" or an explicit array).
SimulationJob simulation_job_from_json(const nlohmann::json& j);

/// Materialized config echo for a job (defaults written out).
nlohmann::json to_json(const SimulationJob& job);

}  // namespace aoi
