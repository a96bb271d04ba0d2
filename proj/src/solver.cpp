#include "aoi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRateFloor = 1e-12;

// r_i for all i, column-wise accumulation over senders with nonzero pi.
void rates_into(const CorrelationMatrix& P, std::span<const double> pi, std::vector<double>& r) {
    const std::size_t n = P.size();
    r.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double pj = pi[j];
        if (pj == 0.0) continue;
        auto row = P.row(j);
        for (std::size_t i = 0; i < n; ++i) r[i] += pj * row[i];
    }
}

double objective_from_rates(const WeightVector& w, const std::vector<double>& r) {
    double f = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < kRateFloor) return kInf;
        f += w[i] / r[i];
    }
    return f;
}

// score_k = sum_i p_ki w_i / r_i^2, the negated gradient of the objective.
void scores_into(const CorrelationMatrix& P, const WeightVector& w, const std::vector<double>& r,
                 std::vector<double>& score) {
    const std::size_t n = P.size();
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = w[i] / (r[i] * r[i]);
    score.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        auto row = P.row(k);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += row[i] * c[i];
        score[k] = s;
    }
}

}  // namespace

std::vector<double> delivery_rates(const CorrelationMatrix& P, std::span<const double> pi) {
    if (pi.size() != P.size()) throw std::invalid_argument("pi and P dimensions differ");
    std::vector<double> r;
    rates_into(P, pi, r);
    return r;
}

std::vector<double> eval_avg_aoi(const CorrelationMatrix& P, const PolicyDistribution& pi) {
    auto r = delivery_rates(P, pi.values());
    for (double& v : r) v = v > 0.0 ? 1.0 / v : kInf;
    return r;
}

double randomized_objective(const CorrelationMatrix& P, const WeightVector& w,
                            std::span<const double> pi) {
    auto r = delivery_rates(P, pi);
    double f = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) f += r[i] > 0.0 ? w[i] / r[i] : kInf;
    return f;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return {};
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double running = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        running += u[k];
        const double t = (running - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(v[i] - theta, 0.0);
    return x;
}

KktReport check_kkt(const CorrelationMatrix& P, const WeightVector& w,
                    const PolicyDistribution& pi, double support_eps, double violation_tol) {
    const std::size_t n = P.size();
    if (w.size() != n || pi.size() != n) throw std::invalid_argument("dimension mismatch");
    KktReport rep;
    std::vector<double> r;
    rates_into(P, pi.values(), r);
    for (double v : r)
        if (!(v > 0.0)) throw InfeasibleInstance("policy leaves a source unreachable");
    scores_into(P, w, r, rep.scores);

    for (std::size_t i = 0; i < n; ++i)
        if (pi[i] > support_eps) rep.support.push_back(i);
    if (rep.support.empty()) return rep;

    for (auto i : rep.support) rep.lambda = std::max(rep.lambda, rep.scores[i]);
    for (auto i : rep.support)
        rep.residual = std::max(rep.residual, std::abs(rep.scores[i] - rep.lambda) / rep.lambda);
    for (std::size_t i = 0; i < n; ++i) {
        if (pi[i] > support_eps) continue;
        const double excess = (rep.scores[i] - rep.lambda) / rep.lambda;
        rep.off_support_excess = std::max(rep.off_support_excess, excess);
        if (excess > violation_tol) rep.violators.push_back(i);
    }
    return rep;
}

SolverReport solve_optimal_randomized(const CorrelationMatrix& P, const WeightVector& w,
                                      const SolverOptions& opt) {
    const std::size_t n = P.size();
    if (n == 0) throw std::invalid_argument("empty instance");
    if (w.size() != n) throw std::invalid_argument("weight vector and P dimensions differ");
    for (const auto& d : validate_instance(P, w)) {
        if (d.kind == DiagnosticKind::unreachable_source) throw InfeasibleInstance(d.message);
        throw std::invalid_argument(d.message);
    }

    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> r, g, r_trial, g_prev, x_prev;
    rates_into(P, x, r);
    double f = objective_from_rates(w, r);
    scores_into(P, w, r, g);

    SolverReport rep;
    double step = 1.0 / std::max(1.0, *std::max_element(g.begin(), g.end()));
    std::size_t it = 0;
    std::vector<double> trial(n);

    auto certified = [&](const std::vector<double>& pt) {
        auto k = check_kkt(P, w, PolicyDistribution(pt), opt.support_eps, opt.tol);
        return std::pair{k, k.residual <= opt.tol && k.off_support_excess <= opt.tol};
    };

    bool done = certified(x).second;
    while (!done && it < opt.max_iter) {
        ++it;
        // Barzilai-Borwein trial length from the last accepted step.
        if (!x_prev.empty()) {
            double sxx = 0.0, sxg = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = x[i] - x_prev[i];
                const double dg = -(g[i] - g_prev[i]);  // gradient is -g
                sxx += dx * dx;
                sxg += dx * dg;
            }
            if (sxg > 0.0 && sxx > 0.0) step = sxx / sxg;
            else step *= 2.0;
        }
        step = std::clamp(step, 1e-30, 1e30);

        double f_trial = kInf;
        bool accepted = false;
        for (int halvings = 0; halvings < 200; ++halvings) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * g[i];
            trial = project_to_simplex(trial);
            rates_into(P, trial, r_trial);
            f_trial = objective_from_rates(w, r_trial);
            double lin = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = trial[i] - x[i];
                lin += -g[i] * d;
                sq += d * d;
            }
            if (sq == 0.0) break;
            if (f_trial <= f + lin + sq / (2.0 * step) + 1e-15 * std::abs(f)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stationary to machine precision or stalled

        x_prev = x;
        g_prev = g;
        x = trial;
        r = r_trial;
        f = f_trial;
        scores_into(P, w, r, g);
        done = certified(x).second;
    }

    auto [kkt, ok] = certified(x);
    rep.pi_star = PolicyDistribution(x);
    rep.lambda = kkt.lambda;
    rep.kkt_residual = kkt.residual;
    rep.off_support_excess = kkt.off_support_excess;
    rep.iterations = it;
    rep.avg_aoi = eval_avg_aoi(P, rep.pi_star);
    rep.objective = f;
    rep.converged = ok;
    return rep;
}

}  // namespace aoi
