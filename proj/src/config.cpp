#include "aoi/config.hpp"

#include <stdexcept>

namespace aoi {

namespace {

std::vector<SourceIndex> labels_to_indices(const std::vector<long long>& labels) {
    std::vector<SourceIndex> out;
    out.reserve(labels.size());
    for (auto l : labels) {
        if (l < 1) throw std::invalid_argument("source labels are 1-based");
        out.push_back(static_cast<SourceIndex>(l - 1));
    }
    return out;
}

std::vector<long long> indices_to_labels(const std::vector<SourceIndex>& idx) {
    std::vector<long long> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(static_cast<long long>(i) + 1);
    return out;
}

std::string initial_to_string(InitialAges a) {
    switch (a) {
        case InitialAges::ones: return "ones";
        case InitialAges::index: return "index";
        case InitialAges::explicit_values: return "explicit";
    }
    return "ones";
}

}  // namespace

nlohmann::json to_json(const PolicySpec& spec) {
    nlohmann::json j = {{"kind", to_string(spec.kind)}};
    switch (spec.kind) {
        case PolicyKind::stationary_randomized:
            j["pi"] = spec.pi;
            break;
        case PolicyKind::round_robin:
            if (!spec.order.empty()) j["order"] = indices_to_labels(spec.order);
            if (spec.cover_threshold) j["cover_threshold"] = *spec.cover_threshold;
            break;
        case PolicyKind::ema_max_weight:
            j["rate"] = spec.ema_rate;
            break;
        case PolicyKind::quadratic_max_weight:
            if (spec.p_used) j["p_used"] = matrix_to_json(*spec.p_used);
            break;
        case PolicyKind::linear_max_weight:
            if (!spec.alpha.empty()) j["alpha"] = spec.alpha;
            break;
        default:
            break;
    }
    return j;
}

PolicySpec policy_from_json(const nlohmann::json& j) {
    PolicySpec s;
    if (j.is_string()) {
        s.kind = policy_kind_from_string(j.get<std::string>());
        return s;
    }
    s.kind = policy_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("pi")) s.pi = j.at("pi").get<std::vector<double>>();
    if (j.contains("order")) s.order = labels_to_indices(j.at("order").get<std::vector<long long>>());
    if (j.contains("cover_threshold")) s.cover_threshold = j.at("cover_threshold").get<double>();
    s.ema_rate = j.value("rate", s.ema_rate);
    if (j.contains("p_used")) s.p_used = matrix_from_json(j.at("p_used"));
    if (j.contains("alpha")) s.alpha = j.at("alpha").get<std::vector<double>>();
    if (s.kind == PolicyKind::stationary_randomized && s.pi.empty())
        throw std::invalid_argument("stationary_randomized needs a 'pi' array");
    return s;
}

nlohmann::json to_json(const CorrelationModel& model) {
    return {{"kind", to_string(model.kind)}, {"jitter_halfwidth", model.jitter_halfwidth}};
}

CorrelationModel correlation_model_from_json(const nlohmann::json& j) {
    CorrelationModel m;
    if (j.is_string()) {
        m.kind = correlation_kind_from_string(j.get<std::string>());
        return m;
    }
    m.kind = correlation_kind_from_string(j.value("kind", std::string("bernoulli")));
    m.jitter_halfwidth = j.value("jitter_halfwidth", m.jitter_halfwidth);
    if (!(m.jitter_halfwidth >= 0.0)) throw std::invalid_argument("jitter_halfwidth must be >= 0");
    return m;
}

nlohmann::json to_json(const SimConfig& cfg) {
    nlohmann::json j = {
        {"horizon", cfg.horizon},
        {"seed", cfg.seed},
        {"model", to_json(cfg.model)},
        {"policy", to_json(cfg.policy)},
        {"mobility",
         {{"enabled", cfg.mobility.enabled},
          {"v_max", cfg.mobility.v_max},
          {"rebuild_every", cfg.mobility.rebuild_every}}},
        {"window", cfg.window},
        {"batches", cfg.batches},
        {"solver",
         {{"tol", cfg.solver.tol},
          {"max_iter", cfg.solver.max_iter},
          {"support_eps", cfg.solver.support_eps}}},
    };
    if (cfg.initial == InitialAges::explicit_values) j["initial_ages"] = cfg.initial_values;
    else j["initial_ages"] = initial_to_string(cfg.initial);
    return j;
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
    SimConfig c;
    c.horizon = j.value("horizon", c.horizon);
    c.seed = j.value("seed", c.seed);
    if (j.contains("model")) c.model = correlation_model_from_json(j.at("model"));
    if (j.contains("policy")) c.policy = policy_from_json(j.at("policy"));
    if (j.contains("mobility")) {
        const auto& m = j.at("mobility");
        c.mobility.enabled = m.value("enabled", true);
        c.mobility.v_max = m.value("v_max", c.mobility.v_max);
        c.mobility.rebuild_every = m.value("rebuild_every", c.mobility.rebuild_every);
    }
    c.window = j.value("window", c.window);
    c.batches = j.value("batches", c.batches);
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.solver.tol = s.value("tol", c.solver.tol);
        c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
        c.solver.support_eps = s.value("support_eps", c.solver.support_eps);
    }
    if (j.contains("initial_ages")) {
        const auto& a = j.at("initial_ages");
        if (a.is_array()) {
            c.initial = InitialAges::explicit_values;
            c.initial_values = a.get<std::vector<double>>();
        } else {
            const auto s = a.get<std::string>();
            if (s == "ones") c.initial = InitialAges::ones;
            else if (s == "index") c.initial = InitialAges::index;
            else throw std::invalid_argument("initial_ages must be 'ones', 'index' or an array");
        }
    }
    if (c.horizon < 1 || c.horizon > kMaxHorizon)
        throw std::invalid_argument("horizon must lie in [1, 1e8]");
    if (c.window < 1) throw std::invalid_argument("window must be >= 1");
    return c;
}

SimulationJob simulation_job_from_json(const nlohmann::json& j) {
    SimulationJob job;
    job.config = sim_config_from_json(j);
    if (j.contains("instance")) {
        auto inst = instance_from_json(j.at("instance"));
        job.instance.P = std::move(inst.P);
        job.instance.w = std::move(inst.w);
    } else if (j.contains("topology")) {
        job.topology = topology_from_json(j.at("topology"));
        auto g = generate_topology(*job.topology);
        job.instance.P = std::move(g.P);
        job.instance.layout = std::move(g.layout);
        if (job.topology->kind == TopologyKind::rgg) {
            job.instance.rgg_r = job.topology->effective_radius();
            job.instance.rgg_p = job.topology->p;
        }
        job.instance.w = WeightVector::equal(job.instance.P.size());
    } else {
        throw std::invalid_argument("config needs an 'instance' or a 'topology'");
    }
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (w.is_string()) {
            if (w.get<std::string>() != "equal")
                throw std::invalid_argument("weights must be 'equal' or an array");
            job.instance.w = WeightVector::equal(job.instance.P.size());
        } else {
            job.instance.w = WeightVector(w.get<std::vector<double>>());
        }
    }
    if (job.config.mobility.enabled && !job.instance.layout)
        throw std::invalid_argument("mobility requires an rgg topology");
    return job;
}

nlohmann::json to_json(const SimulationJob& job) {
    auto j = to_json(job.config);
    if (job.topology) j["topology"] = to_json(*job.topology);
    else j["instance"] = to_json(job.instance.instance());
    auto w = job.instance.w.values();
    j["weights"] = std::vector<double>(w.begin(), w.end());
    return j;
}

}  // namespace aoi
