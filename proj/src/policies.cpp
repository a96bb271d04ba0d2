#include "aoi/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoi/solver.hpp"

namespace aoi {

namespace {

// Per-subject value of a refresh under each Lyapunov function. Deciders
// score a sender as sum_j p_ij * value_j.
void quadratic_values(const WeightVector& w, const AoiState& A, std::vector<double>& c) {
    c.resize(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) c[j] = (w[j] * A.ages[j]) * (A.ages[j] + 2.0);
}

void linear_values(std::span<const double> alpha, const AoiState& A, std::vector<double>& c) {
    c.resize(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) c[j] = alpha[j] * A.ages[j];
}

SourceIndex argmax_dense(const CorrelationMatrix& P, const std::vector<double>& c) {
    SourceIndex best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto row = P.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0.0) s += row[j] * c[j];
        if (s >= best_score) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

SourceIndex argmax_scaled_age(std::span<const double> scale, const AoiState& A) {
    SourceIndex best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double s = scale[i] * A.ages[i];
        if (s >= best_score) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

std::vector<double> sqrt_weights(const WeightVector& w) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::sqrt(w[i]);
    return out;
}

void check_ages(std::size_t n, const AoiState& A) {
    if (A.size() != n) throw std::invalid_argument("age state and instance sizes differ");
    if (n == 0) throw std::invalid_argument("no sources to schedule");
}

// Nonzero pattern of P, row by row, ascending column.
struct SparseRows {
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
            for (std::size_t j = 0; j < n; ++j) {
                if (row[j] != 0.0) {
                    col.push_back(j);
                    val.push_back(row[j]);
                }
            }
            start[i + 1] = col.size();
        }
    }

    SourceIndex argmax(const std::vector<double>& c) const {
        SourceIndex best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < start.size(); ++i) {
            double s = 0.0;
            for (std::size_t k = start[i]; k < start[i + 1]; ++k) s += val[k] * c[col[k]];
            if (s >= best_score) {
                best_score = s;
                best = i;
            }
        }
        return best;
    }
};

class RandomizedScheduler final : public Scheduler {
public:
    RandomizedScheduler(PolicyKind kind, PolicyDistribution pi) : kind_(kind), pi_(std::move(pi)) {
        if (!pi_.normalized()) throw std::invalid_argument("scheduling distribution must sum to 1");
    }
    ScheduleDecision decide(const AoiState&, Rng& rng) override { return decide_randomized(pi_, rng); }
    PolicyKind kind() const override { return kind_; }

private:
    PolicyKind kind_;
    PolicyDistribution pi_;
};

class MaxAoiFirstScheduler final : public Scheduler {
public:
    explicit MaxAoiFirstScheduler(const WeightVector& w) : sqrt_w_(sqrt_weights(w)) {}
    ScheduleDecision decide(const AoiState& A, Rng&) override {
        return {argmax_scaled_age(sqrt_w_, A)};
    }
    PolicyKind kind() const override { return PolicyKind::max_aoi_first; }

private:
    std::vector<double> sqrt_w_;
};

class QuadraticScheduler final : public Scheduler {
public:
    QuadraticScheduler(PolicyKind kind, const CorrelationMatrix& P, WeightVector w)
        : kind_(kind), w_(std::move(w)) {
        rows_.assign(P);
    }
    ScheduleDecision decide(const AoiState& A, Rng&) override {
        quadratic_values(w_, A, c_);
        return {rows_.argmax(c_)};
    }
    void on_matrix_update(const CorrelationMatrix& P) override {
        if (kind_ == PolicyKind::oracle_max_weight) rows_.assign(P);
    }
    PolicyKind kind() const override { return kind_; }

private:
    PolicyKind kind_;
    WeightVector w_;
    SparseRows rows_;
    std::vector<double> c_;
};

class LinearScheduler final : public Scheduler {
public:
    LinearScheduler(const CorrelationMatrix& P, std::vector<double> alpha) : alpha_(std::move(alpha)) {
        rows_.assign(P);
    }
    ScheduleDecision decide(const AoiState& A, Rng&) override {
        linear_values(alpha_, A, c_);
        return {rows_.argmax(c_)};
    }
    PolicyKind kind() const override { return PolicyKind::linear_max_weight; }

private:
    std::vector<double> alpha_;
    SparseRows rows_;
    std::vector<double> c_;
};

class RoundRobinScheduler final : public Scheduler {
public:
    explicit RoundRobinScheduler(std::vector<SourceIndex> order) : order_(std::move(order)) {}
    ScheduleDecision decide(const AoiState& A, Rng&) override {
        return decide_round_robin(order_, A.slot);
    }
    PolicyKind kind() const override { return PolicyKind::round_robin; }

private:
    std::vector<SourceIndex> order_;
};

class EmaScheduler final : public Scheduler {
public:
    EmaScheduler(std::size_t n, double rate, WeightVector w)
        : st_(EmaState::fresh(n, rate)), w_(std::move(w)) {}
    ScheduleDecision decide(const AoiState& A, Rng&) override { return decide_ema_mw(st_, w_, A); }
    void observe(SourceIndex scheduled, std::span<const double> x) override {
        // A subject counts as delivered when any overlap was realized.
        const double a = st_.alpha_rate;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] > 0.0 ? 1.0 : 0.0;
            st_.p_hat.set(scheduled, j, (1.0 - a) * st_.p_hat(scheduled, j) + a * d);
        }
    }
    PolicyKind kind() const override { return PolicyKind::ema_max_weight; }

private:
    EmaState st_;
    WeightVector w_;
};

}  // namespace

ScheduleDecision decide_randomized(const PolicyDistribution& pi, Rng& rng) {
    if (!pi.normalized()) throw std::invalid_argument("scheduling distribution must sum to 1");
    const double u = rng.uniform();
    double cum = 0.0;
    SourceIndex last_positive = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] <= 0.0) continue;
        last_positive = i;
        cum += pi[i];
        if (u < cum) return {i};
    }
    return {last_positive};
}

ScheduleDecision decide_max_aoi_first(const WeightVector& w, const AoiState& A) {
    check_ages(w.size(), A);
    return {argmax_scaled_age(sqrt_weights(w), A)};
}

ScheduleDecision decide_quadratic_mw(const WeightVector& w, const CorrelationMatrix& P_used,
                                     const AoiState& A) {
    check_ages(P_used.size(), A);
    std::vector<double> c;
    quadratic_values(w, A, c);
    return {argmax_dense(P_used, c)};
}

LinearMwState make_linear_mw_state(const CorrelationMatrix& P, const WeightVector& w,
                                   const PolicyDistribution& pi_star) {
    auto r = delivery_rates(P, pi_star.values());
    LinearMwState st;
    st.alpha.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0))
            throw InfeasibleInstance("source " + std::to_string(i + 1) +
                                     " has zero delivery rate; linear max-weight undefined");
        st.alpha[i] = w[i] / r[i];
    }
    return st;
}

ScheduleDecision decide_linear_mw(const LinearMwState& st, const CorrelationMatrix& P,
                                  const AoiState& A) {
    check_ages(P.size(), A);
    if (st.alpha.size() != P.size()) throw std::invalid_argument("alpha size mismatch");
    std::vector<double> c;
    linear_values(st.alpha, A, c);
    return {argmax_dense(P, c)};
}

ScheduleDecision decide_round_robin(std::span<const SourceIndex> order, std::uint64_t slot) {
    if (order.empty()) throw std::invalid_argument("round-robin order is empty");
    return {order[slot % order.size()]};
}

EmaState EmaState::fresh(std::size_t n, double alpha_rate) {
    if (!(alpha_rate > 0.0 && alpha_rate <= 1.0))
        throw std::invalid_argument("EMA learning rate must lie in (0, 1]");
    return {CorrelationMatrix::identity(n), alpha_rate};
}

EmaState ema_observe_and_update(const EmaState& st, SourceIndex scheduled,
                                std::span<const double> delivered) {
    const std::size_t n = st.p_hat.size();
    if (delivered.size() != n) throw std::invalid_argument("delivery vector size mismatch");
    if (scheduled >= n) throw std::out_of_range("scheduled source out of range");
    EmaState next = st;
    const double a = st.alpha_rate;
    for (std::size_t j = 0; j < n; ++j)
        next.p_hat.set(scheduled, j, (1.0 - a) * st.p_hat(scheduled, j) + a * delivered[j]);
    return next;
}

ScheduleDecision decide_ema_mw(const EmaState& st, const WeightVector& w, const AoiState& A) {
    return decide_quadratic_mw(w, st.p_hat, A);
}

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::stationary_randomized: return "stationary_randomized";
        case PolicyKind::uniform_randomized: return "uniform_randomized";
        case PolicyKind::optimal_randomized: return "optimal_randomized";
        case PolicyKind::max_aoi_first: return "max_aoi_first";
        case PolicyKind::quadratic_max_weight: return "quadratic_max_weight";
        case PolicyKind::linear_max_weight: return "linear_max_weight";
        case PolicyKind::round_robin: return "round_robin";
        case PolicyKind::ema_max_weight: return "ema_max_weight";
        case PolicyKind::oracle_max_weight: return "oracle_max_weight";
    }
    return "unknown";
}

PolicyKind policy_kind_from_string(const std::string& s) {
    for (auto k : {PolicyKind::stationary_randomized, PolicyKind::uniform_randomized,
                   PolicyKind::optimal_randomized, PolicyKind::max_aoi_first,
                   PolicyKind::quadratic_max_weight, PolicyKind::linear_max_weight,
                   PolicyKind::round_robin, PolicyKind::ema_max_weight,
                   PolicyKind::oracle_max_weight})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown policy '" + s + "'");
}

std::unique_ptr<Scheduler> make_scheduler(const ResolvedPolicy& p, const Instance& inst) {
    const std::size_t n = inst.size();
    switch (p.kind) {
        case PolicyKind::stationary_randomized:
        case PolicyKind::optimal_randomized:
            if (p.pi.size() != n) throw std::invalid_argument("pi has wrong dimension");
            return std::make_unique<RandomizedScheduler>(p.kind, PolicyDistribution(p.pi));
        case PolicyKind::uniform_randomized:
            return std::make_unique<RandomizedScheduler>(p.kind, PolicyDistribution::uniform(n));
        case PolicyKind::max_aoi_first:
            return std::make_unique<MaxAoiFirstScheduler>(inst.w);
        case PolicyKind::quadratic_max_weight:
            return std::make_unique<QuadraticScheduler>(p.kind, p.p_used ? *p.p_used : inst.P, inst.w);
        case PolicyKind::oracle_max_weight:
            return std::make_unique<QuadraticScheduler>(p.kind, inst.P, inst.w);
        case PolicyKind::linear_max_weight:
            if (p.alpha.size() != n) throw std::invalid_argument("alpha has wrong dimension");
            for (double a : p.alpha)
                if (!(a > 0.0) || !std::isfinite(a))
                    throw std::invalid_argument("linear max-weight needs finite positive alpha");
            return std::make_unique<LinearScheduler>(inst.P, p.alpha);
        case PolicyKind::round_robin:
            if (p.order.empty()) throw std::invalid_argument("round-robin order is empty");
            for (auto s : p.order)
                if (s >= n) throw std::out_of_range("round-robin order names an unknown source");
            return std::make_unique<RoundRobinScheduler>(p.order);
        case PolicyKind::ema_max_weight:
            return std::make_unique<EmaScheduler>(n, p.ema_rate, inst.w);
    }
    throw std::invalid_argument("unhandled policy kind");
}

}  // namespace aoi
