#include "aoi/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aoi/analysis.hpp"
#include "aoi/config.hpp"
#include "aoi/solver.hpp"

namespace aoi {

Scale scale_from_string(const std::string& s) {
    if (s == "desk") return Scale::desk;
    if (s == "paper") return Scale::paper;
    throw std::invalid_argument("scale must be 'desk' or 'paper'");
}

std::string to_string(Scale s) { return s == Scale::desk ? "desk" : "paper"; }

std::vector<std::string> preset_names() {
    return {"fig3_rgg_scaling", "fig4_hgg_scaling", "fig5_correlation_models", "fig6_mobile_ema",
            "thm7_separation"};
}

ExperimentPreset make_preset(const std::string& name, Scale scale) {
    const bool paper = scale == Scale::paper;
    ExperimentPreset e;
    e.name = name;
    e.scale = scale;
    if (name == "fig3_rgg_scaling" || name == "fig4_hgg_scaling") {
        e.topology = name == "fig3_rgg_scaling" ? TopologyKind::rgg : TopologyKind::hgg;
        e.n_values = {20, 40, 60, 80, 100};
        e.p_values = {0.7};
        e.policies = {PolicyKind::uniform_randomized, PolicyKind::optimal_randomized,
                      PolicyKind::max_aoi_first, PolicyKind::linear_max_weight};
        e.replications = 10;
        e.horizon = 10'000;
        e.base_seed = name == "fig3_rgg_scaling" ? 3000 : 4000;
    } else if (name == "fig5_correlation_models") {
        e.n_values = {90};
        e.radius = 0.25;
        e.p_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        e.models = {CorrelationKind::bernoulli, CorrelationKind::constant,
                    CorrelationKind::uniform_jitter};
        e.policies = {PolicyKind::optimal_randomized, PolicyKind::linear_max_weight};
        e.replications = paper ? 10 : 1;
        e.horizon = 100'000;
        e.base_seed = 5000;
    } else if (name == "fig6_mobile_ema") {
        e.n_values = {90};
        e.radius = 0.25;
        e.p_values = {0.7};
        e.policies = {PolicyKind::max_aoi_first, PolicyKind::ema_max_weight,
                      PolicyKind::oracle_max_weight};
        e.replications = 10;
        e.horizon = paper ? 100'000 : 20'000;
        e.mobility = {true, 0.01, 1};
        e.ema_rate = 0.4;
        e.base_seed = 6000;
        e.bound_rows = false;
        e.time_series = true;
    } else if (name == "thm7_separation") {
        e.topology = TopologyKind::star;
        e.n_values = {100};
        e.p_values = {0.5};
        e.policies = {PolicyKind::linear_max_weight, PolicyKind::max_aoi_first};
        e.replications = paper ? 10 : 3;
        e.horizon = paper ? 1'000'000 : 200'000;
        e.initial = InitialAges::index;
        e.base_seed = 7000;
        e.maf_star_row = true;
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return e;
}

std::string ExperimentCell::policy_label() const {
    switch (kind) {
        case RowKind::lower_bound: return "lower_bound";
        case RowKind::maf_star_bound: return "maf_star_lower_bound";
        case RowKind::simulation: break;
    }
    return to_string(config.policy.kind);
}

ExpandedExperiment expand_preset(const ExperimentPreset& e) {
    ExpandedExperiment out;
    for (std::size_t n : e.n_values) {
        for (double p : e.p_values) {
            for (std::size_t rep = 0; rep < e.replications; ++rep) {
                TopologySpec topo;
                topo.kind = e.topology;
                topo.n = n;
                topo.p = p;
                topo.r = e.radius > 0.0 ? e.radius : rgg_connectivity_radius(n);
                topo.seed = e.base_seed + rep;
                if (e.topology == TopologyKind::hgg) {
                    topo.hgg.gamma = e.hgg_gamma;
                    topo.hgg.target_avg_degree = std::max(
                        1.0, static_cast<double>(n - 1) * std::numbers::pi * topo.r * topo.r);
                }
                const std::size_t inst = out.instances.size();
                out.instances.push_back({topo, rep});
                const double r_col = e.topology == TopologyKind::rgg ? topo.r : 0.0;

                ExperimentCell base;
                base.preset = e.name;
                base.instance = inst;
                base.n = n;
                base.p = p;
                base.r = r_col;
                base.config.horizon = e.horizon;
                base.config.seed = topo.seed;
                base.config.window = e.window;
                base.config.mobility = e.mobility;
                base.config.initial = e.initial;

                for (auto model : e.models) {
                    for (auto pk : e.policies) {
                        ExperimentCell c = base;
                        c.config.model.kind = model;
                        c.config.policy.kind = pk;
                        c.config.policy.ema_rate = e.ema_rate;
                        out.cells.push_back(std::move(c));
                    }
                }
                if (e.bound_rows) {
                    ExperimentCell c = base;
                    c.kind = RowKind::lower_bound;
                    out.cells.push_back(std::move(c));
                }
                if (e.maf_star_row) {
                    ExperimentCell c = base;
                    c.kind = RowKind::maf_star_bound;
                    out.cells.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct PreparedInstance {
    SimInstance sim;
    std::optional<SolverReport> solver;
    double lower_bound = std::nan("");
    double cover_bound = std::nan("");
    std::string error;
};

PreparedInstance prepare_instance(const InstanceDescriptor& d) {
    PreparedInstance out;
    auto g = generate_topology(d.topology);
    out.sim.P = std::move(g.P);
    out.sim.w = WeightVector::equal(out.sim.P.size());
    out.sim.layout = std::move(g.layout);
    if (d.topology.kind == TopologyKind::rgg) {
        out.sim.rgg_r = d.topology.effective_radius();
        out.sim.rgg_p = d.topology.p;
    }
    out.solver = solve_optimal_randomized(out.sim.P, out.sim.w);
    out.lower_bound = lower_bound_from_objective(out.sim.w, out.solver->objective);

    // Every off-diagonal entry of the generated families equals p, so the
    // digraph with edges p_ij >= p is the one the cover bound needs.
    const double p = d.topology.p;
    if (p > 0.0 && p <= 1.0) {
        const double thr = std::nextafter(p, 0.0);
        auto cover = greedy_vertex_cover(build_threshold_digraph(out.sim.P, thr), thr);
        if (cover.complete()) out.cover_bound = cover_bound(cover.size, p);
    }
    return out;
}

PreparedPolicy policy_for(const ExperimentCell& c, const PreparedInstance& inst) {
    const auto& spec = c.config.policy;
    if (spec.kind == PolicyKind::optimal_randomized || spec.kind == PolicyKind::linear_max_weight) {
        PreparedPolicy pp;
        pp.solver = inst.solver;
        pp.resolved.kind = spec.kind;
        if (spec.kind == PolicyKind::optimal_randomized) {
            const auto pn = inst.solver->pi_star.normalized_copy();
            auto v = pn.values();
            pp.resolved.pi.assign(v.begin(), v.end());
        } else {
            pp.resolved.alpha =
                make_linear_mw_state(inst.sim.P, inst.sim.w, inst.solver->pi_star).alpha;
        }
        return pp;
    }
    return prepare_policy(spec, inst.sim.instance());
}

struct CellOutput {
    bool done = false;
    std::string row;
    std::vector<std::string> series_rows;
};

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPreset& preset, const std::filesystem::path& out_dir,
                                const ExperimentOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto expanded = expand_preset(preset);

    ExperimentResult res;
    res.summary_csv = out_dir / (preset.name + "_summary.csv");
    if (preset.time_series) res.timeseries_csv = out_dir / (preset.name + "_timeseries.csv");
    res.cells_total = expanded.cells.size();

    std::size_t threads = options.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<PreparedInstance> instances(expanded.instances.size());
    parallel_for(instances.size(), threads, [&](std::size_t i) {
        try {
            instances[i] = prepare_instance(expanded.instances[i]);
        } catch (const std::exception& ex) {
            instances[i].error = ex.what();
        }
    });

    const fs::path partial = res.summary_csv.string() + ".partial";
    std::ofstream partial_out(partial, std::ios::trunc);
    partial_out << kSummaryHeader << '\n';
    std::mutex io_mutex;

    std::vector<CellOutput> outputs(expanded.cells.size());
    parallel_for(expanded.cells.size(), threads, [&](std::size_t ci) {
        const auto& c = expanded.cells[ci];
        const auto& inst = instances[c.instance];
        auto& out = outputs[ci];
        std::string err;
        try {
            if (!inst.error.empty()) throw std::runtime_error(inst.error);
            double value = 0.0;
            double wall = 0.0;
            std::optional<SimReport> rep;
            switch (c.kind) {
                case RowKind::lower_bound:
                    value = inst.lower_bound;
                    break;
                case RowKind::maf_star_bound:
                    value = maf_star_lower_bound(c.n, c.p);
                    break;
                case RowKind::simulation:
                    rep = run_simulation(c.config, inst.sim, policy_for(c, inst));
                    value = rep->weighted_avg_aoi;
                    wall = rep->wall_ms;
                    break;
            }
            const bool sim = c.kind == RowKind::simulation;
            std::ostringstream row;
            row << c.preset << ',' << c.policy_label() << ',' << c.n << ',' << format_number(c.p)
                << ',' << format_number(c.r) << ','
                << (sim ? to_string(c.config.model.kind) : std::string("none")) << ','
                << c.config.seed << ',' << (sim ? c.config.horizon : 0) << ','
                << format_number(value) << ',' << format_number(inst.lower_bound) << ','
                << format_number(inst.cover_bound) << ','
                << format_number(inst.solver ? inst.solver->objective : std::nan("")) << ','
                << format_number(options.record_timing ? wall : 0.0);
            out.row = row.str();
            if (preset.time_series && rep) {
                for (std::size_t k = 0; k < rep->window_series.size(); ++k) {
                    std::ostringstream s;
                    s << c.preset << ',' << c.policy_label() << ',' << c.config.seed << ','
                      << (k + 1) * rep->window << ',' << format_number(rep->window_series[k]);
                    out.series_rows.push_back(s.str());
                }
            }
            out.done = true;
        } catch (const std::exception& ex) {
            err = "cell " + std::to_string(ci) + " (" + c.policy_label() + ", n=" +
                  std::to_string(c.n) + ", seed=" + std::to_string(c.config.seed) +
                  "): " + ex.what();
        }
        std::lock_guard lock(io_mutex);
        if (out.done) {
            partial_out << out.row << '\n';
            partial_out.flush();
        } else {
            res.errors.push_back(err);
        }
    });
    partial_out.close();

    {
        std::ofstream f(res.summary_csv, std::ios::trunc);
        f << kSummaryHeader << '\n';
        for (const auto& o : outputs)
            if (o.done) {
                f << o.row << '\n';
                ++res.cells_completed;
            }
        if (!f) res.errors.push_back("failed writing " + res.summary_csv.string());
    }
    if (res.timeseries_csv) {
        std::ofstream f(*res.timeseries_csv, std::ios::trunc);
        f << kTimeSeriesHeader << '\n';
        for (const auto& o : outputs)
            for (const auto& r : o.series_rows) f << r << '\n';
        if (!f) res.errors.push_back("failed writing " + res.timeseries_csv->string());
    }
    {
        std::ofstream f(out_dir / (preset.name + "_cells.jsonl"), std::ios::trunc);
        for (const auto& c : expanded.cells) {
            nlohmann::json j = {{"preset", c.preset},
                                {"row", c.policy_label()},
                                {"topology", to_json(expanded.instances[c.instance].topology)},
                                {"config", to_json(c.config)}};
            f << j.dump() << '\n';
        }
    }
    std::error_code ec;
    if (res.errors.empty()) fs::remove(partial, ec);
    std::sort(res.errors.begin(), res.errors.end());
    return res;
}

}  // namespace aoi
