#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/analysis.hpp"
#include "aoi/config.hpp"
#include "aoi/experiments.hpp"
#include "aoi/sim.hpp"
#include "aoi/solver.hpp"
#include "aoi/topology.hpp"

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<long long> labels(const std::vector<aoi::SourceIndex>& idx) {
    std::vector<long long> out;
    for (auto i : idx) out.push_back(static_cast<long long>(i) + 1);
    return out;
}

json solver_json(const aoi::SolverReport& r, const aoi::Instance& inst) {
    auto pi = r.pi_star.values();
    json avg = json::array();
    for (double a : r.avg_aoi) avg.push_back(finite_or_null(a));
    auto kkt = aoi::check_kkt(inst.P, inst.w, r.pi_star);
    return {{"pi_star", std::vector<double>(pi.begin(), pi.end())},
            {"lambda", r.lambda},
            {"avg_aoi", avg},
            {"objective", finite_or_null(r.objective)},
            {"kkt_residual", r.kkt_residual},
            {"off_support_excess", r.off_support_excess},
            {"support", labels(kkt.support)},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

aoi::Instance load_instance(const std::string& path) {
    auto j = read_json(path);
    if (j.contains("topology") || (j.contains("kind") && !j.contains("P"))) {
        auto g = aoi::generate_topology(
            aoi::topology_from_json(j.contains("topology") ? j.at("topology") : j));
        auto n = g.P.size();
        return {std::move(g.P), aoi::WeightVector::equal(n)};
    }
    return aoi::instance_from_json(j.contains("instance") ? j.at("instance") : j);
}

int cmd_simulate(const std::string& path, bool timing) {
    auto job = aoi::simulation_job_from_json(read_json(path));
    auto rep = aoi::run_simulation(job.config, job.instance);
    if (!timing) rep.wall_ms = 0.0;
    json out = aoi::to_json(rep);
    out["config"] = aoi::to_json(job);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_solve(const std::string& path, double tol, std::size_t max_iter) {
    auto inst = load_instance(path);
    aoi::SolverOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    auto r = aoi::solve_optimal_randomized(inst.P, inst.w, opt);
    std::cout << solver_json(r, inst).dump(2) << '\n';
    return r.converged ? 0 : 3;
}

int cmd_bounds(const std::string& path, double threshold, double radius, double p_override) {
    auto inst = load_instance(path);
    const auto n = inst.P.size();
    json out;
    out["n"] = n;
    out["total_weight"] = inst.w.total();

    try {
        auto r = aoi::solve_optimal_randomized(inst.P, inst.w);
        out["optimal_randomized_objective"] = r.objective;
        out["lower_bound"] = aoi::lower_bound_from_objective(inst.w, r.objective);
    } catch (const aoi::InfeasibleInstance& e) {
        out["lower_bound"] = nullptr;
        out["infeasible"] = e.what();
    }
    out["uncorrelated_baseline"] = aoi::uncorrelated_baseline(n);

    const double p = p_override > 0.0 ? p_override : threshold;
    auto cover = aoi::greedy_vertex_cover(aoi::build_threshold_digraph(inst.P, threshold), threshold);
    json c = {{"threshold", threshold}, {"cover", labels(cover.cover)}, {"size", cover.size}};
    if (!cover.complete()) {
        c["uncoverable"] = labels(cover.uncoverable);
        c["bound"] = nullptr;
    } else {
        // edges have p_ij > threshold, so each delivery probability exceeds p
        c["p"] = p;
        c["bound"] = aoi::cover_bound(cover.size, p);
    }
    out["cover"] = c;
    if (radius > 0.0) out["rgg_bound"] = aoi::rgg_bound(p, radius);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_gen_graph(const std::string& path) {
    auto j = read_json(path);
    auto spec = aoi::topology_from_json(j.contains("topology") ? j.at("topology") : j);
    auto g = aoi::generate_topology(spec);
    json out = {{"topology", aoi::to_json(spec)}, {"P", aoi::matrix_to_json(g.P)}};
    if (g.layout) out["layout"] = aoi::layout_to_json(*g.layout);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_experiment(const std::string& preset, const std::string& out, const std::string& scale,
                   std::size_t threads, bool timing) {
    auto p = aoi::make_preset(preset, aoi::scale_from_string(scale));
    aoi::ExperimentOptions opt;
    opt.threads = threads;
    opt.record_timing = timing;
    auto res = aoi::run_experiment(p, out, opt);
    json j = {{"preset", preset},
              {"scale", scale},
              {"summary_csv", res.summary_csv.string()},
              {"cells_total", res.cells_total},
              {"cells_completed", res.cells_completed},
              {"errors", res.errors}};
    if (res.timeseries_csv) j["timeseries_csv"] = res.timeseries_csv->string();
    std::cout << j.dump(2) << '\n';
    return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-of-information scheduling with correlated sources"};
    app.require_subcommand(1);

    std::string path;
    bool timing = false;

    auto* sim = app.add_subcommand("simulate", "run one simulation from a JSON config");
    sim->add_option("config", path, "config JSON")->required();
    sim->add_flag("--timing", timing, "report wall-clock time");

    double tol = 1e-6;
    std::size_t max_iter = 100000;
    auto* solve = app.add_subcommand("solve", "optimal stationary randomized policy");
    solve->add_option("instance", path, "instance JSON")->required();
    solve->add_option("--tol", tol);
    solve->add_option("--max-iter", max_iter);

    double threshold = 0.5, radius = 0.0, p_override = 0.0;
    auto* bounds = app.add_subcommand("bounds", "lower/upper bounds for an instance");
    bounds->add_option("instance", path, "instance JSON")->required();
    bounds->add_option("--threshold", threshold, "digraph threshold")->required()
        ->check(CLI::Range(0.0, 1.0));
    bounds->add_option("--radius", radius, "RGG radius for the 2/(p r^2) bound");
    bounds->add_option("--p", p_override, "correlation p for cover/rgg bounds (default: threshold)");

    auto* gen = app.add_subcommand("gen-graph", "generate a correlation matrix");
    gen->add_option("spec", path, "topology JSON")->required();

    std::string preset, out_dir = "results", scale = "desk";
    std::size_t threads = 0;
    auto* exp = app.add_subcommand("experiment", "run a preset sweep and write CSVs");
    exp->add_option("preset", preset)->required()->check(CLI::IsMember(aoi::preset_names()));
    exp->add_option("--out", out_dir)->required();
    exp->add_option("--scale", scale)->check(CLI::IsMember({"desk", "paper"}));
    exp->add_option("--threads", threads, "0: all cores");
    exp->add_flag("--timing", timing, "fill the wall_ms column");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(path, timing);
        if (*solve) return cmd_solve(path, tol, max_iter);
        if (*bounds) return cmd_bounds(path, threshold, radius, p_override);
        if (*gen) return cmd_gen_graph(path);
        if (*exp) return cmd_experiment(preset, out_dir, scale, threads, timing);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
