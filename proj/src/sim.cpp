#include "aoi/sim.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "aoi/analysis.hpp"

namespace aoi {

PreparedPolicy prepare_policy(const PolicySpec& spec, const Instance& inst,
                              const SolverOptions& solver) {
    const std::size_t n = inst.size();
    PreparedPolicy out;
    ResolvedPolicy& r = out.resolved;
    r.kind = spec.kind;
    r.ema_rate = spec.ema_rate;
    r.p_used = spec.p_used;

    switch (spec.kind) {
        case PolicyKind::stationary_randomized:
            r.pi = spec.pi;
            if (r.pi.size() != n) throw std::invalid_argument("pi has wrong dimension");
            break;
        case PolicyKind::uniform_randomized:
            r.pi = std::vector<double>(n, 1.0 / static_cast<double>(n));
            break;
        case PolicyKind::optimal_randomized: {
            out.solver = solve_optimal_randomized(inst.P, inst.w, solver);
            const auto pn = out.solver->pi_star.normalized_copy();
            auto v = pn.values();
            r.pi.assign(v.begin(), v.end());
            break;
        }
        case PolicyKind::linear_max_weight:
            if (!spec.alpha.empty()) {
                r.alpha = spec.alpha;
            } else {
                out.solver = solve_optimal_randomized(inst.P, inst.w, solver);
                r.alpha = make_linear_mw_state(inst.P, inst.w, out.solver->pi_star).alpha;
            }
            break;
        case PolicyKind::round_robin:
            if (!spec.order.empty()) {
                r.order = spec.order;
            } else if (spec.cover_threshold) {
                auto cover = greedy_vertex_cover(
                    build_threshold_digraph(inst.P, *spec.cover_threshold), *spec.cover_threshold);
                if (!cover.complete())
                    throw std::invalid_argument("threshold digraph has vertices with no in-edge");
                r.order = cover.cover;
            } else {
                for (std::size_t i = 0; i < n; ++i) r.order.push_back(i);
            }
            break;
        default:
            break;
    }
    return out;
}

std::vector<double> windowed_series(std::span<const double> trace, std::size_t window) {
    if (window == 0) throw std::invalid_argument("window must be >= 1");
    std::vector<double> out;
    const std::size_t blocks = trace.size() / window;
    out.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < window; ++k) s += trace[b * window + k];
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

namespace {

AoiState initial_state(const SimConfig& cfg, std::size_t n) {
    AoiState st = AoiState::ones(n);
    switch (cfg.initial) {
        case InitialAges::ones:
            break;
        case InitialAges::index:
            for (std::size_t i = 0; i < n; ++i) st.ages[i] = static_cast<double>(i + 1);
            break;
        case InitialAges::explicit_values:
            if (cfg.initial_values.size() != n)
                throw std::invalid_argument("initial ages have wrong dimension");
            for (double a : cfg.initial_values)
                if (!(a >= 1.0)) throw std::invalid_argument("initial ages must be >= 1");
            st.ages = cfg.initial_values;
            break;
    }
    return st;
}

struct RowPattern {
    std::vector<std::size_t> start;
    std::vector<SourceIndex> col;
    std::vector<double> val;

    void assign(const CorrelationMatrix& P) {
        const std::size_t n = P.size();
        start.assign(n + 1, 0);
        col.clear();
        val.clear();
        for (std::size_t i = 0; i < n; ++i) {
            auto row = P.row(i);
            for (std::size_t j = 0; j < n; ++j)
                if (row[j] != 0.0) {
                    col.push_back(j);
                    val.push_back(row[j]);
                }
            start[i + 1] = col.size();
        }
    }
};

}  // namespace

SimReport run_simulation(const SimConfig& cfg, const SimInstance& inst) {
    return run_simulation(cfg, inst, prepare_policy(cfg.policy, inst.instance(), cfg.solver));
}

SimReport run_simulation(const SimConfig& cfg, const SimInstance& inst,
                         const PreparedPolicy& policy) {
    const auto t0 = std::chrono::steady_clock::now();
    require_valid(inst.P, inst.w);
    if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (cfg.horizon > kMaxHorizon) throw std::invalid_argument("horizon exceeds 1e8 slots");
    if (cfg.window < 1) throw std::invalid_argument("window must be >= 1");
    if (cfg.mobility.enabled) {
        if (!inst.layout) throw std::invalid_argument("mobility needs a source layout");
        if (cfg.mobility.rebuild_every < 1) throw std::invalid_argument("rebuild_every must be >= 1");
    }

    const std::size_t n = inst.P.size();
    const Instance base = inst.instance();
    auto scheduler = make_scheduler(policy.resolved, base);

    Rng sched_rng(cfg.seed, Stream::scheduling);
    Rng corr_rng(cfg.seed, Stream::correlation);
    Rng mob_rng(cfg.seed, Stream::mobility);

    CorrelationMatrix P = inst.P;
    std::optional<SourceLayout> layout = inst.layout;
    RowPattern rows;
    rows.assign(P);

    AoiState state = initial_state(cfg, n);
    std::vector<double> x(n, 0.0);
    std::vector<double> age_sum(n, 0.0), overlap_sum(n, 0.0);
    std::vector<std::uint64_t> sched_count(n, 0);

    const std::size_t batches = std::max<std::size_t>(1, std::min<std::size_t>(cfg.batches, cfg.horizon));
    const std::uint64_t batch_len = cfg.horizon / batches;
    std::vector<double> batch_sum(batches, 0.0);

    SimReport rep;
    rep.window = cfg.window;
    rep.window_series.reserve(cfg.horizon / cfg.window);
    double window_acc = 0.0;
    std::size_t window_fill = 0;

    for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
        if (cfg.mobility.enabled && t > 0) {
            *layout = brownian_step(*layout, cfg.mobility.v_max, mob_rng);
            if (t % cfg.mobility.rebuild_every == 0) {
                P = rebuild_rgg(*layout, inst.rgg_r, inst.rgg_p);
                rows.assign(P);
                scheduler->on_matrix_update(P);
            }
        }

        const SourceIndex s = scheduler->decide(state, sched_rng).source;
        ++sched_count[s];

        for (std::size_t k = rows.start[s]; k < rows.start[s + 1]; ++k)
            x[rows.col[k]] = cfg.model.draw(rows.val[k], corr_rng.uniform());

        scheduler->observe(s, x);
        step_aoi_inplace(state, x);

        double weighted = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            age_sum[i] += state.ages[i];
            weighted += inst.w[i] * state.ages[i];
        }
        for (std::size_t k = rows.start[s]; k < rows.start[s + 1]; ++k) {
            overlap_sum[rows.col[k]] += x[rows.col[k]];
            x[rows.col[k]] = 0.0;
        }

        const std::uint64_t b = std::min<std::uint64_t>(t / batch_len, batches - 1);
        batch_sum[b] += weighted;

        window_acc += weighted;
        if (++window_fill == cfg.window) {
            rep.window_series.push_back(window_acc / static_cast<double>(cfg.window));
            window_acc = 0.0;
            window_fill = 0;
        }
    }

    const double T = static_cast<double>(cfg.horizon);
    rep.policy = to_string(policy.resolved.kind);
    rep.slots = cfg.horizon;
    rep.avg_aoi.resize(n);
    rep.sched_fraction.resize(n);
    rep.delivery_rate.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.avg_aoi[i] = age_sum[i] / T;
        rep.weighted_avg_aoi += inst.w[i] * rep.avg_aoi[i];
        rep.sched_fraction[i] = static_cast<double>(sched_count[i]) / T;
        rep.delivery_rate[i] = overlap_sum[i] / T;
    }

    if (batches >= 2) {
        std::vector<double> means(batches);
        double grand = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            const double len = b + 1 == batches
                                   ? static_cast<double>(cfg.horizon - batch_len * (batches - 1))
                                   : static_cast<double>(batch_len);
            means[b] = batch_sum[b] / len;
            grand += means[b];
        }
        grand /= static_cast<double>(batches);
        double ss = 0.0;
        for (double m : means) ss += (m - grand) * (m - grand);
        rep.weighted_stderr = std::sqrt(ss / static_cast<double>(batches - 1) /
                                        static_cast<double>(batches));
    }
    if (policy.solver) rep.solver_objective = policy.solver->objective;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<std::vector<std::vector<double>>> coupled_round_robin_trajectories(
    std::span<const CorrelationMatrix> matrices, std::span<const SourceIndex> order,
    std::uint64_t horizon, std::uint64_t seed) {
    if (matrices.empty()) return {};
    const std::size_t n = matrices.front().size();
    for (const auto& M : matrices)
        if (M.size() != n) throw std::invalid_argument("coupled matrices differ in size");
    const CorrelationModel bern{CorrelationKind::bernoulli, 0.0};

    Rng rng(seed, Stream::correlation);
    std::vector<AoiState> states(matrices.size(), AoiState::ones(n));
    std::vector<std::vector<std::vector<double>>> traj(matrices.size());
    for (auto& tr : traj) tr.reserve(horizon);
    std::vector<double> u(n);
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const auto s = decide_round_robin(order, t).source;
        for (double& v : u) v = rng.uniform();
        for (std::size_t m = 0; m < matrices.size(); ++m) {
            const auto draw = sample_row_coupled(bern, matrices[m], s, u);
            step_aoi_inplace(states[m], draw.x);
            traj[m].push_back(states[m].ages);
        }
    }
    return traj;
}

nlohmann::json to_json(const SimReport& rep) {
    nlohmann::json j = {{"policy", rep.policy},
                        {"avg_aoi", rep.avg_aoi},
                        {"weighted_avg_aoi", rep.weighted_avg_aoi},
                        {"weighted_stderr", rep.weighted_stderr},
                        {"window", rep.window},
                        {"window_series", rep.window_series},
                        {"sched_fraction", rep.sched_fraction},
                        {"delivery_rate", rep.delivery_rate},
                        {"slots", rep.slots},
                        {"wall_ms", rep.wall_ms}};
    if (rep.solver_objective) j["solver_objective"] = *rep.solver_objective;
    return j;
}

}  // namespace aoi
