#include "hbeq/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace hbeq {

void validate_sim(const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw InvalidParam("sim.n_paths", "must be at least 1");
    if (cfg.batch_size < 1) throw InvalidParam("sim.batch_size", "must be at least 1");
    if (cfg.batch_size > cfg.n_paths) throw InvalidParam("sim.batch_size", "must not exceed sim.n_paths");
    if (cfg.threads < 1) throw InvalidParam("threads", "must be at least 1");
}

namespace {

double cara_demand(double expected, double price, double alpha, double variance, const char* what) {
    if (!(variance > std::numeric_limits<double>::min()) || !std::isfinite(variance))
        throw ZeroVariance(std::string(what) + " = " + std::to_string(variance));
    return (expected - price) / (alpha * variance);
}

void check_period(int t) {
    if (t < 0 || t > 2) throw InvalidParam("t", "demand is defined for t = 0, 1, 2 (got " + std::to_string(t) + ")");
}

// Runs fn(batch_index, first_path, end_path) for every batch and returns the
// per-batch results in batch order, so the final reduction is independent of
// the thread count.
template <typename Result, typename Fn>
std::vector<Result> run_batches(const SimConfig& cfg, Fn&& fn) {
    const std::uint64_t n_batches = (cfg.n_paths + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<Result> out(n_batches);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < n_batches; b = next++) {
            const std::uint64_t first = b * cfg.batch_size;
            const std::uint64_t end = std::min(cfg.n_paths, first + cfg.batch_size);
            out[b] = fn(first, end);
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads, n_batches));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    return out;
}

struct RunningSum {
    double sum = 0;
    double sum_sq = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
    }
    void merge(const RunningSum& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
};

// Mean of per-path values with its standard error.
Estimate mean_estimate(const RunningSum& s, double n) {
    Estimate e;
    const double mean = s.sum / n;
    e.value = mean;
    if (n > 1) {
        const double var = std::max(0.0, (s.sum_sq - n * mean * mean) / (n - 1));
        e.se = std::sqrt(var / n);
    }
    return e;
}

// Unbiased covariance from centered products u_i = (x_i - x̄)(y_i - ȳ).
Estimate covariance_estimate(const RunningSum& u, double n) {
    Estimate e;
    if (n < 2) return e;
    const double mean_u = u.sum / n;
    e.value = u.sum / (n - 1);
    const double var = std::max(0.0, (u.sum_sq - n * mean_u * mean_u) / (n - 1));
    e.se = std::sqrt(var / n);
    return e;
}

}  // namespace

double informed_demand(int t, double signal, const PricePath<double>& prices, const EquilibriumCoefficientsd& c,
                       const SingleParamsd& p) {
    check_period(t);
    if (t == 0) {
        const double var = c.b1_star * c.b1_star *
                           (p.sigma_d2 + p.sigma_s2 + c.c1_star * c.c1_star * p.sigma_theta2_informed);
        return cara_demand(c.a1_star, prices.s0, p.alpha, var, "Var_1(S_1)");
    }
    if (t == 1) {
        const double loading = c.b2_star * c.c2;
        const double var = loading * loading * p.sigma_theta2_informed;
        return cara_demand(c.a2_star + c.b2_star * (signal - p.d_bar), prices.s1, p.alpha, var, "Var_1(S_2)");
    }
    const double beta_s = p.sigma_d2 / (p.sigma_d2 + p.sigma_s2);
    const double expected = p.d_bar + beta_s * (signal - p.d_bar);
    return cara_demand(expected, prices.s2, p.alpha, beta_s * p.sigma_s2, "Var_1(D)");
}

double uninformed_demand(int t, const PricePath<double>& prices, const EquilibriumCoefficientsd& c, const SingleParamsd& p) {
    check_period(t);
    if (t == 0) {
        const double var = c.b1 * c.b1 * (p.sigma_d2 + p.sigma_s2 + c.c1 * c.c1 * p.sigma_theta2_true);
        return cara_demand(c.a1, prices.s0, p.alpha, var, "Var_2(S_1)");
    }
    if (t == 1) {
        // The period-1 price is read as a signal on the composite (S_1 - a_1)/b_1.
        const double expected = c.a2 + (c.b2 / c.b1) * (prices.s1 - c.a1);
        const double loading = c.b2 * c.c2;
        return cara_demand(expected, prices.s1, p.alpha, loading * loading * p.sigma_theta2_true, "Var_2(S_2)");
    }
    const double sigma_xi2 = p.sigma_s2 + c.c2 * c.c2 * p.sigma_theta2_true;
    const double beta_xi = p.sigma_d2 / (p.sigma_d2 + sigma_xi2);
    const double xi = (prices.s2 - c.a2) / c.b2;
    return cara_demand(p.d_bar + beta_xi * xi, prices.s2, p.alpha, beta_xi * sigma_xi2, "Var_2(D)");
}

double agent_demand(AgentType type, int t, const WorldRealization<double>& world, const PricePath<double>& prices,
                    const EquilibriumCoefficientsd& c, const SingleParamsd& p) {
    return type == AgentType::informed ? informed_demand(t, world.s, prices, c, p) : uninformed_demand(t, prices, c, p);
}

namespace {

struct PathOutcome {
    PathRecord record;
    double clearing_residual = 0;
    double budget_residual = 0;
};

PathOutcome evaluate_path(const SingleParamsd& p, const EquilibriumCoefficientsd& c, const WorldRealization<double>& w,
                          std::uint64_t index) {
    PathOutcome o;
    PathRecord& r = o.record;
    r.index = index;
    r.world = w;
    r.prices = price_path(c, w);
    const double s[4] = {r.prices.s0, r.prices.s1, r.prices.s2, r.prices.s3};

    const double w0 = r.prices.s0 + p.riskless_supply;
    r.w_informed[0] = w0;
    r.w_uninformed[0] = w0;
    double aggregate = w0;
    for (int t = 0; t < 3; ++t) {
        const double x1 = informed_demand(t, w.s, r.prices, c, p);
        const double x2 = uninformed_demand(t, r.prices, c, p);
        r.x_informed[t] = x1;
        r.x_uninformed[t] = x2;
        const double gain = s[t + 1] - s[t];
        r.w_informed[t + 1] = r.w_informed[t] + x1 * gain;
        r.w_uninformed[t + 1] = r.w_uninformed[t] + x2 * gain;
        aggregate += supply(t, w) * gain;
        o.clearing_residual = std::max(o.clearing_residual, std::abs(p.pi * x1 + (1 - p.pi) * x2 - supply(t, w)));
    }
    o.budget_residual = std::abs(p.pi * r.w_informed[3] + (1 - p.pi) * r.w_uninformed[3] - aggregate);
    return o;
}

}  // namespace

PathRecord simulate_path(const SingleParamsd& p, const EquilibriumCoefficientsd& c, std::uint64_t seed, std::uint64_t index) {
    PhiloxStream rng(seed, index, 0);
    return evaluate_path(p, c, draw_world(p, rng), index).record;
}

std::vector<PathRecord> simulate_paths(const SingleParamsd& p, const EquilibriumCoefficientsd& c, std::uint64_t seed,
                                       std::uint64_t count) {
    std::vector<PathRecord> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(simulate_path(p, c, seed, i));
    return out;
}

namespace {

struct ScalarPassOne {
    RunningSum cond_m, cond_r;
    double sum_ds1 = 0, sum_ds2 = 0, sum_ds3 = 0;
    double sum_d = 0;
    double sum_w1 = 0, sum_w2 = 0;
    double clearing = 0, budget = 0;
};

struct ScalarPassTwo {
    RunningSum unc_m, unc_r;
    double ss_w1 = 0, ss_w2 = 0;
};

}  // namespace

SampleMoments simulate(const SingleParamsd& p, const EquilibriumCoefficientsd& c, const SimConfig& cfg) {
    validate_sim(cfg);

    // Pass 1: paired conditional products, identities, first moments.
    auto pass1 = run_batches<ScalarPassOne>(cfg, [&](std::uint64_t first, std::uint64_t end) {
        ScalarPassOne acc;
        for (std::uint64_t i = first; i < end; ++i) {
            PhiloxStream rng(cfg.seed, i, 0);
            PhiloxStream twin_rng(cfg.seed, i, 1);
            const auto w = draw_world(p, rng);
            const auto twin = draw_world_given_payoff(p, w.d, twin_rng);
            const auto o = evaluate_path(p, c, w, i);
            const auto& a = o.record.prices;
            const auto b = price_path(c, twin);

            const double d1 = (a.s1 - a.s0) - (b.s1 - b.s0);
            const double d2 = (a.s2 - a.s1) - (b.s2 - b.s1);
            const double d3 = (a.s3 - a.s2) - (b.s3 - b.s2);
            acc.cond_m.add(0.5 * d2 * d1);
            acc.cond_r.add(0.5 * d2 * d3);

            acc.sum_ds1 += a.s1 - a.s0;
            acc.sum_ds2 += a.s2 - a.s1;
            acc.sum_ds3 += a.s3 - a.s2;
            acc.sum_d += w.d;
            acc.sum_w1 += o.record.w_informed[3];
            acc.sum_w2 += o.record.w_uninformed[3];
            acc.clearing = std::max(acc.clearing, o.clearing_residual);
            acc.budget = std::max(acc.budget, o.budget_residual);
        }
        return acc;
    });

    ScalarPassOne tot;
    for (const auto& b : pass1) {
        tot.cond_m.merge(b.cond_m);
        tot.cond_r.merge(b.cond_r);
        tot.sum_ds1 += b.sum_ds1;
        tot.sum_ds2 += b.sum_ds2;
        tot.sum_ds3 += b.sum_ds3;
        tot.sum_d += b.sum_d;
        tot.sum_w1 += b.sum_w1;
        tot.sum_w2 += b.sum_w2;
        tot.clearing = std::max(tot.clearing, b.clearing);
        tot.budget = std::max(tot.budget, b.budget);
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double m1 = tot.sum_ds1 / n, m2 = tot.sum_ds2 / n, m3 = tot.sum_ds3 / n;
    const double mw1 = tot.sum_w1 / n, mw2 = tot.sum_w2 / n;

    // Pass 2: regenerate the same worlds and accumulate centered products.
    auto pass2 = run_batches<ScalarPassTwo>(cfg, [&](std::uint64_t first, std::uint64_t end) {
        ScalarPassTwo acc;
        for (std::uint64_t i = first; i < end; ++i) {
            PhiloxStream rng(cfg.seed, i, 0);
            const auto o = evaluate_path(p, c, draw_world(p, rng), i);
            const auto& a = o.record.prices;
            const double x1 = (a.s1 - a.s0) - m1;
            const double x2 = (a.s2 - a.s1) - m2;
            const double x3 = (a.s3 - a.s2) - m3;
            acc.unc_m.add(x2 * x1);
            acc.unc_r.add(x2 * x3);
            acc.ss_w1 += (o.record.w_informed[3] - mw1) * (o.record.w_informed[3] - mw1);
            acc.ss_w2 += (o.record.w_uninformed[3] - mw2) * (o.record.w_uninformed[3] - mw2);
        }
        return acc;
    });
    ScalarPassTwo tot2;
    for (const auto& b : pass2) {
        tot2.unc_m.merge(b.unc_m);
        tot2.unc_r.merge(b.unc_r);
        tot2.ss_w1 += b.ss_w1;
        tot2.ss_w2 += b.ss_w2;
    }

    SampleMoments m;
    m.n_paths = cfg.n_paths;
    m.gamma_m = mean_estimate(tot.cond_m, n);
    m.gamma_r = mean_estimate(tot.cond_r, n);
    m.gamma_m_unconditional = covariance_estimate(tot2.unc_m, n);
    m.gamma_r_unconditional = covariance_estimate(tot2.unc_r, n);
    m.clearing_residual_max = tot.clearing;
    m.budget_residual_max = tot.budget;
    m.mean_payoff = tot.sum_d / n;
    m.wealth_informed = {mw1, n > 1 ? tot2.ss_w1 / (n - 1) : 0.0};
    m.wealth_uninformed = {mw2, n > 1 ? tot2.ss_w2 / (n - 1) : 0.0};
    return m;
}

// ---------------------------------------------------------------------------
// Multi-asset

MultiPricePath price_path(const MultiCoefficientsd& c, const MultiWorld& w) {
    MultiPricePath path;
    path.s0 = c.S0;
    path.s1 = c.A1 + c.B1 * (w.s - c.d_bar - c.C1 * w.theta1);
    path.s2 = c.A2 + c.B2 * (w.s - c.d_bar - c.C2 * w.theta2);
    path.s3 = w.d;
    return path;
}

namespace {

Matrixd scaled_precision(const Matrixd& var, double alpha, const char* what) {
    if (!var.allFinite() || !(var.diagonal().minCoeff() > std::numeric_limits<double>::min()))
        throw ZeroVariance(what);
    return checked_inverse(Matrixd(alpha * var), what);
}

}  // namespace

MultiAgents::MultiAgents(const MultiParamsd& p, const MultiCoefficientsd& c) : p_(p), c_(c) {
    b1_inv_ = checked_inverse(c.B1, "B_1");
    b2_inv_ = checked_inverse(c.B2, "B_2");

    const Matrixd sigma_xi = p.sigma_s + c.C2 * p.sigma_theta_true * c.C2.transpose();
    beta_s_ = p.sigma_d * checked_inverse(Matrixd(p.sigma_d + p.sigma_s), "sigma_d + sigma_s");
    beta_xi_ = p.sigma_d * checked_inverse(Matrixd(p.sigma_d + sigma_xi), "sigma_d + sigma_xi");

    const Matrixd var_s = p.sigma_d + p.sigma_s;
    const Matrixd l1s = c.B2_star * c.C2;
    const Matrixd l2 = c.B2 * c.C2;
    prec_informed_[0] = scaled_precision(
        c.B1_star * (var_s + c.C1_star * p.sigma_theta_informed * c.C1_star.transpose()) * c.B1_star.transpose(), p.alpha,
        "Var_1(S_1)");
    prec_uninformed_[0] = scaled_precision(
        c.B1 * (var_s + c.C1 * p.sigma_theta_true * c.C1.transpose()) * c.B1.transpose(), p.alpha, "Var_2(S_1)");
    prec_informed_[1] = scaled_precision(l1s * p.sigma_theta_informed * l1s.transpose(), p.alpha, "Var_1(S_2)");
    prec_uninformed_[1] = scaled_precision(l2 * p.sigma_theta_true * l2.transpose(), p.alpha, "Var_2(S_2)");
    prec_informed_[2] = scaled_precision(beta_s_ * p.sigma_s, p.alpha, "Var_1(D)");
    prec_uninformed_[2] = scaled_precision(beta_xi_ * sigma_xi, p.alpha, "Var_2(D)");
}

Vectord MultiAgents::demand(AgentType type, int t, const MultiWorld& world, const MultiPricePath& prices) const {
    check_period(t);
    const bool informed = type == AgentType::informed;
    Vectord expected;
    Vectord price;
    if (t == 0) {
        expected = informed ? c_.A1_star : c_.A1;
        price = prices.s0;
    } else if (t == 1) {
        expected = informed ? Vectord(c_.A2_star + c_.B2_star * (world.s - p_.d_bar))
                            : Vectord(c_.A2 + c_.B2 * (b1_inv_ * (prices.s1 - c_.A1)));
        price = prices.s1;
    } else {
        expected = informed ? Vectord(p_.d_bar + beta_s_ * (world.s - p_.d_bar))
                            : Vectord(p_.d_bar + beta_xi_ * (b2_inv_ * (prices.s2 - c_.A2)));
        price = prices.s2;
    }
    const Matrixd& prec = informed ? prec_informed_[t] : prec_uninformed_[t];
    return prec * (expected - price);
}

Vectord agent_demand(AgentType type, int t, const MultiWorld& world, const MultiPricePath& prices,
                     const MultiCoefficientsd& c, const MultiParamsd& p) {
    return MultiAgents(p, c).demand(type, t, world, prices);
}

MultiSampler::MultiSampler(const MultiParamsd& p) : d_bar(p.d_bar) {
    auto chol = [](const Matrixd& m, const char* name) {
        Eigen::LLT<Matrixd> llt(m);
        if (llt.info() != Eigen::Success) throw InvalidParam(name, "Cholesky factorization failed");
        return Matrixd(llt.matrixL());
    };
    l_d = chol(p.sigma_d, "sigma_d");
    l_s = chol(p.sigma_s, "sigma_s");
    l_theta = chol(p.sigma_theta_true, "sigma_theta_true");
}

namespace {

struct MatrixSum {
    Matrixd sum, sum_sq;

    explicit MatrixSum(Eigen::Index n = 0) : sum(Matrixd::Zero(n, n)), sum_sq(Matrixd::Zero(n, n)) {}
    void add(const Matrixd& v) {
        sum += v;
        sum_sq += v.cwiseProduct(v);
    }
    void merge(const MatrixSum& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
};

MatrixEstimate mean_estimate(const MatrixSum& s, double n) {
    MatrixEstimate e;
    e.value = s.sum / n;
    const Matrixd var = ((s.sum_sq - n * e.value.cwiseProduct(e.value)) / (n - 1)).cwiseMax(0.0);
    e.se = (var / n).cwiseSqrt();
    return e;
}

MatrixEstimate covariance_estimate(const MatrixSum& u, double n) {
    MatrixEstimate e;
    const Matrixd mean_u = u.sum / n;
    e.value = u.sum / (n - 1);
    const Matrixd var = ((u.sum_sq - n * mean_u.cwiseProduct(mean_u)) / (n - 1)).cwiseMax(0.0);
    e.se = (var / n).cwiseSqrt();
    return e;
}

struct MultiPathOutcome {
    MultiPricePath prices;
    double w1 = 0, w2 = 0;
    double clearing = 0, budget = 0;
};

MultiPathOutcome evaluate_multi_path(const MultiParamsd& p, const MultiCoefficientsd& c, const MultiAgents& agents,
                                     const MultiWorld& w) {
    MultiPathOutcome o;
    o.prices = price_path(c, w);
    const Vectord* s[4] = {&o.prices.s0, &o.prices.s1, &o.prices.s2, &o.prices.s3};
    const Eigen::Index n = p.n();
    const double w0 = o.prices.s0.sum() + p.riskless_supply;
    o.w1 = w0;
    o.w2 = w0;
    double aggregate = w0;
    for (int t = 0; t < 3; ++t) {
        const Vectord x1 = agents.demand(AgentType::informed, t, w, o.prices);
        const Vectord x2 = agents.demand(AgentType::uninformed, t, w, o.prices);
        const Vectord supply_t = Vectord::Ones(n) + (t == 1 ? w.theta1 : t == 2 ? w.theta2 : Vectord::Zero(n));
        const Vectord gain = *s[t + 1] - *s[t];
        o.w1 += x1.dot(gain);
        o.w2 += x2.dot(gain);
        aggregate += supply_t.dot(gain);
        o.clearing = std::max(o.clearing, (p.pi * x1 + (1 - p.pi) * x2 - supply_t).cwiseAbs().maxCoeff());
    }
    o.budget = std::abs(p.pi * o.w1 + (1 - p.pi) * o.w2 - aggregate);
    return o;
}

struct MultiPassOne {
    MatrixSum cond_m, cond_r;
    Vectord sum_ds1, sum_ds2, sum_ds3, sum_d;
    double sum_w1 = 0, sum_w2 = 0;
    double clearing = 0, budget = 0;

    explicit MultiPassOne(Eigen::Index n = 0)
        : cond_m(n), cond_r(n), sum_ds1(Vectord::Zero(n)), sum_ds2(Vectord::Zero(n)), sum_ds3(Vectord::Zero(n)),
          sum_d(Vectord::Zero(n)) {}
};

struct MultiPassTwo {
    MatrixSum unc_m, unc_r;
    double ss_w1 = 0, ss_w2 = 0;

    explicit MultiPassTwo(Eigen::Index n = 0) : unc_m(n), unc_r(n) {}
};

}  // namespace

MultiSampleMoments simulate_multi(const MultiParamsd& p, const MultiCoefficientsd& c, const SimConfig& cfg) {
    validate_sim(cfg);
    const Eigen::Index n = p.n();
    const MultiAgents agents(p, c);
    const MultiSampler sampler(p);

    auto pass1 = run_batches<MultiPassOne>(cfg, [&](std::uint64_t first, std::uint64_t end) {
        MultiPassOne acc(n);
        for (std::uint64_t i = first; i < end; ++i) {
            PhiloxStream rng(cfg.seed, i, 0);
            PhiloxStream twin_rng(cfg.seed, i, 1);
            const MultiWorld w = sampler.draw(rng);
            const MultiWorld twin = sampler.draw_given_payoff(w.d, twin_rng);
            const auto o = evaluate_multi_path(p, c, agents, w);
            const auto& a = o.prices;
            const auto b = price_path(c, twin);

            const Vectord d1 = (a.s1 - a.s0) - (b.s1 - b.s0);
            const Vectord d2 = (a.s2 - a.s1) - (b.s2 - b.s1);
            const Vectord d3 = (a.s3 - a.s2) - (b.s3 - b.s2);
            acc.cond_m.add(0.5 * d2 * d1.transpose());
            acc.cond_r.add(0.5 * d2 * d3.transpose());
            acc.sum_ds1 += a.s1 - a.s0;
            acc.sum_ds2 += a.s2 - a.s1;
            acc.sum_ds3 += a.s3 - a.s2;
            acc.sum_d += w.d;
            acc.sum_w1 += o.w1;
            acc.sum_w2 += o.w2;
            acc.clearing = std::max(acc.clearing, o.clearing);
            acc.budget = std::max(acc.budget, o.budget);
        }
        return acc;
    });

    MultiPassOne tot(n);
    for (const auto& b : pass1) {
        tot.cond_m.merge(b.cond_m);
        tot.cond_r.merge(b.cond_r);
        tot.sum_ds1 += b.sum_ds1;
        tot.sum_ds2 += b.sum_ds2;
        tot.sum_ds3 += b.sum_ds3;
        tot.sum_d += b.sum_d;
        tot.sum_w1 += b.sum_w1;
        tot.sum_w2 += b.sum_w2;
        tot.clearing = std::max(tot.clearing, b.clearing);
        tot.budget = std::max(tot.budget, b.budget);
    }
    const double np = static_cast<double>(cfg.n_paths);
    const Vectord m1 = tot.sum_ds1 / np, m2 = tot.sum_ds2 / np, m3 = tot.sum_ds3 / np;
    const double mw1 = tot.sum_w1 / np, mw2 = tot.sum_w2 / np;

    auto pass2 = run_batches<MultiPassTwo>(cfg, [&](std::uint64_t first, std::uint64_t end) {
        MultiPassTwo acc(n);
        for (std::uint64_t i = first; i < end; ++i) {
            PhiloxStream rng(cfg.seed, i, 0);
            const auto o = evaluate_multi_path(p, c, agents, sampler.draw(rng));
            const auto& a = o.prices;
            const Vectord x1 = (a.s1 - a.s0) - m1;
            const Vectord x2 = (a.s2 - a.s1) - m2;
            const Vectord x3 = (a.s3 - a.s2) - m3;
            acc.unc_m.add(x2 * x1.transpose());
            acc.unc_r.add(x2 * x3.transpose());
            acc.ss_w1 += (o.w1 - mw1) * (o.w1 - mw1);
            acc.ss_w2 += (o.w2 - mw2) * (o.w2 - mw2);
        }
        return acc;
    });
    MultiPassTwo tot2(n);
    for (const auto& b : pass2) {
        tot2.unc_m.merge(b.unc_m);
        tot2.unc_r.merge(b.unc_r);
        tot2.ss_w1 += b.ss_w1;
        tot2.ss_w2 += b.ss_w2;
    }

    MultiSampleMoments m;
    m.n_paths = cfg.n_paths;
    if (cfg.n_paths > 1) {
        m.gamma_m = mean_estimate(tot.cond_m, np);
        m.gamma_r = mean_estimate(tot.cond_r, np);
        m.gamma_m_unconditional = covariance_estimate(tot2.unc_m, np);
        m.gamma_r_unconditional = covariance_estimate(tot2.unc_r, np);
    }
    m.clearing_residual_max = tot.clearing;
    m.budget_residual_max = tot.budget;
    m.mean_payoff = tot.sum_d / np;
    m.wealth_informed = {mw1, np > 1 ? tot2.ss_w1 / (np - 1) : 0.0};
    m.wealth_uninformed = {mw2, np > 1 ? tot2.ss_w2 / (np - 1) : 0.0};
    return m;
}

}  // namespace hbeq
