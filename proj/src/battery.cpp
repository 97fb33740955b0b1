#include "hbeq/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hbeq/simulator.hpp"
#include "hbeq/single_asset.hpp"

namespace hbeq {

SingleParamsd designated_p0() { return {100.0, 4.0, 1.0, 1.0, 4.0, 0.5, 0.5, 0.0}; }

SingleParamsd designated_p_mom() {
    auto p = designated_p0();
    p.alpha = 0.1;
    return p;
}

bool BatteryReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed(); });
}

namespace {

std::string format_tolerance(double tol) {
    std::ostringstream os;
    os << tol;
    return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double max_abs(const Matrixd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrixd random_spd(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> z;
    Matrixd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = z(rng);
    return a * a.transpose() / static_cast<double>(n) + 0.1 * Matrixd::Identity(n, n);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

CheckOutcome named(std::string name, bool asserted) {
    CheckOutcome c;
    c.name = std::move(name);
    c.asserted = asserted;
    return c;
}

void record(CheckOutcome& c, bool ok) {
    ++c.cases;
    if (!ok) ++c.failures;
}

}  // namespace

SingleParamsd random_single(std::mt19937_64& rng) {
    SingleParamsd p;
    p.d_bar = uniform(rng, -100.0, 100.0);
    p.sigma_d2 = log_uniform(rng, 0.1, 10.0);
    p.sigma_s2 = log_uniform(rng, 0.1, 10.0);
    p.sigma_theta2_true = log_uniform(rng, 0.1, 10.0);
    // ratio in (1, 10]: 1 + 9u with u in (0, 1]
    const double u = 1.0 - uniform(rng, 0.0, 1.0);
    p.sigma_theta2_informed = p.sigma_theta2_true * (1.0 + 9.0 * u);
    p.alpha = uniform(rng, 0.05, 2.0);
    p.pi = uniform(rng, 0.1, 0.9);
    p.riskless_supply = 0.0;
    return p;
}

MultiParamsd random_multi(std::mt19937_64& rng, Eigen::Index n) {
    MultiParamsd p;
    p.d_bar = Vectord(n);
    for (Eigen::Index i = 0; i < n; ++i) p.d_bar(i) = uniform(rng, -1.0, 1.0);
    p.sigma_d = random_spd(rng, n);
    p.sigma_s = random_spd(rng, n);
    p.sigma_theta_true = random_spd(rng, n);
    p.sigma_theta_informed = p.sigma_theta_true + random_spd(rng, n);
    p.alpha = uniform(rng, 0.05, 2.0);
    p.pi = uniform(rng, 0.1, 0.9);
    p.riskless_supply = 0.0;
    return p;
}

std::vector<SingleParamsd> single_suite(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<SingleParamsd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(validate_single(random_single(rng)));
    return out;
}

std::vector<MultiParamsd> multi_suite(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<MultiParamsd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(validate_multi(random_multi(rng, 2 + i % 3)));
    return out;
}

CheckOutcome check_reversal(const std::vector<SingleParamsd>& sets) {
    CheckOutcome c = named("reversal gamma_r < 0", true);
    c.worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : sets) {
        const auto m = measures(equilibrium(p), p);
        record(c, m.gamma_r < 0);
        c.worst = std::max(c.worst, m.gamma_r);
    }
    c.note = "max gamma_r = " + fmt(c.worst);
    return c;
}

CheckOutcome check_ordering(const std::vector<SingleParamsd>& sets) {
    CheckOutcome c = named("ordering b2* < b1 < b2, beta_xi < b2 < beta_s", true);
    c.worst = std::numeric_limits<double>::infinity();
    for (const auto& p : sets) {
        const auto e = equilibrium(p);
        const double margin = std::min({e.b1 - e.b2_star, e.b2 - e.b1, e.b2 - e.beta_xi, e.beta_s - e.b2});
        record(c, margin > 1e-12);
        c.worst = std::min(c.worst, margin);
    }
    c.note = "smallest margin = " + fmt(c.worst);
    return c;
}

CheckOutcome check_clearing(const std::vector<SingleParamsd>& sets, int worlds, std::uint64_t seed, double tol) {
    CheckOutcome c = named("clearing identity (relative " + format_tolerance(tol) + ")", true);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto& p = sets[k];
        const auto e = equilibrium(p);
        for (int w = 0; w < worlds; ++w) {
            PhiloxStream rng(seed, k * static_cast<std::uint64_t>(worlds) + static_cast<std::uint64_t>(w), 2);
            const auto world = draw_world(p, rng);
            const auto prices = price_path(e, world);
            double worst = 0;
            for (int t = 0; t < 3; ++t) {
                const double x1 = informed_demand(t, world.s, prices, e, p);
                const double x2 = uninformed_demand(t, prices, e, p);
                const double scale = std::max(1.0, p.pi * std::abs(x1) + (1 - p.pi) * std::abs(x2));
                worst = std::max(worst, std::abs(p.pi * x1 + (1 - p.pi) * x2 - supply(t, world)) / scale);
            }
            record(c, worst < tol);
            c.worst = std::max(c.worst, worst);
        }
    }
    c.note = "max relative residual = " + fmt(c.worst);
    return c;
}

CheckOutcome check_collapse(std::uint64_t seed, int count) {
    CheckOutcome c = named("homogeneous collapse b1 = b2 = b2*, a1 = a1*", true);
    std::mt19937_64 rng(seed + 17);
    ValidationOptions opts;
    opts.allow_homogeneous = true;
    for (int i = 0; i < count; ++i) {
        auto p = random_single(rng);
        p.sigma_theta2_informed = p.sigma_theta2_true;
        const auto e = equilibrium(validate_single(p, opts));
        const double err = std::max({rel_err(e.b1, e.b2), rel_err(e.b2_star, e.b2), rel_err(e.a1_star, e.a1)});
        record(c, err <= 1e-12);
        c.worst = std::max(c.worst, err);
    }
    c.note = "max deviation = " + fmt(c.worst);
    return c;
}

CheckOutcome check_regimes(const std::vector<SingleParamsd>& sets) {
    CheckOutcome c = named("momentum regimes reachable", true);
    const auto g = [](const SingleParamsd& p) { return measures(equilibrium(p), p).gamma_m; };
    const double g_mom = g(designated_p_mom());
    const double g_p0 = g(designated_p0());
    std::uint64_t pos = g_mom > 0 ? 1 : 0;
    std::uint64_t neg = g_p0 < 0 ? 1 : 0;
    std::uint64_t suite_pos = 0;
    for (const auto& p : sets) {
        if (g(p) > 0) ++suite_pos;
    }
    c.cases = 2;
    c.failures = (g_mom > 0 ? 0 : 1) + (g_p0 < 0 ? 0 : 1);
    pos += suite_pos;
    neg += sets.size() - suite_pos;
    c.worst = g_mom;
    c.note = "gamma_m(P_mom) = " + fmt(g_mom) + ", gamma_m(P0) = " + fmt(g_p0) + "; random suite: " +
             std::to_string(suite_pos) + " positive, " + std::to_string(sets.size() - suite_pos) + " negative";
    if (pos == 0 || neg == 0) c.failures = std::max<std::uint64_t>(c.failures, 1);
    return c;
}

CheckOutcome check_embedding(const std::vector<SingleParamsd>& sets) {
    CheckOutcome c = named("n=1 embedding matches scalar solver (1e-12)", true);
    for (const auto& p : sets) {
        const auto s = equilibrium(p);
        const auto sm = measures(s, p);
        const auto mp = embed(p);
        const auto m = equilibrium_multi(mp);
        const auto cm = cross_measures(m, mp);
        const double err = std::max({
            rel_err(m.A2(0), s.a2), rel_err(m.B2(0, 0), s.b2), rel_err(m.C2(0, 0), s.c2),
            rel_err(m.A2_star(0), s.a2_star), rel_err(m.B2_star(0, 0), s.b2_star),
            rel_err(m.A1(0), s.a1), rel_err(m.B1(0, 0), s.b1), rel_err(m.C1(0, 0), s.c1),
            rel_err(m.A1_star(0), s.a1_star), rel_err(m.B1_star(0, 0), s.b1_star), rel_err(m.C1_star(0, 0), s.c1_star),
            rel_err(m.S0(0), s.s0), rel_err(m.var1_s2(0, 0), s.var1_s2), rel_err(m.var2_s2(0, 0), s.var2_s2),
            rel_err(m.var1_s1(0, 0), s.var1_s1), rel_err(m.var2_s1(0, 0), s.var2_s1),
            rel_err(cm.Gamma_m(0, 0), sm.gamma_m), rel_err(cm.Gamma_r(0, 0), sm.gamma_r),
        });
        record(c, err <= 1e-12);
        c.worst = std::max(c.worst, err);
    }
    c.note = "max relative deviation = " + fmt(c.worst);
    return c;
}

namespace {

Matrixd block_diag(const Matrixd& a, const Matrixd& b) {
    Matrixd m = Matrixd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

double cross_block(const Matrixd& m, Eigen::Index n1) {
    const Eigen::Index n2 = m.rows() - n1;
    return std::max(max_abs(m.topRightCorner(n1, n2)), max_abs(m.bottomLeftCorner(n2, n1)));
}

double block_err(const Matrixd& full, const Matrixd& part, Eigen::Index offset) {
    const Matrixd sub = full.block(offset, offset, part.rows(), part.cols());
    return max_abs(sub - part) / std::max(1.0, max_abs(part));
}

}  // namespace

CheckOutcome check_decoupling(std::uint64_t seed, int count) {
    CheckOutcome c = named("block-diagonal decoupling (1e-10)", true);
    std::mt19937_64 rng(seed + 31);
    for (int i = 0; i < count; ++i) {
        const Eigen::Index n1 = 1 + i % 2;
        const Eigen::Index n2 = 1 + (i / 2) % 2;
        auto a = random_multi(rng, n1);
        auto b = random_multi(rng, n2);
        b.alpha = a.alpha;
        b.pi = a.pi;
        MultiParamsd p;
        p.d_bar = Vectord(n1 + n2);
        p.d_bar << a.d_bar, b.d_bar;
        p.sigma_d = block_diag(a.sigma_d, b.sigma_d);
        p.sigma_s = block_diag(a.sigma_s, b.sigma_s);
        p.sigma_theta_true = block_diag(a.sigma_theta_true, b.sigma_theta_true);
        p.sigma_theta_informed = block_diag(a.sigma_theta_informed, b.sigma_theta_informed);
        p.alpha = a.alpha;
        p.pi = a.pi;

        const auto full = equilibrium_multi(validate_multi(p));
        const auto fm = cross_measures(full, p);
        const double cross = std::max({cross_block(full.B1, n1), cross_block(full.B2, n1), cross_block(full.C1, n1),
                                       cross_block(fm.Gamma_m, n1), cross_block(fm.Gamma_r, n1)});
        const auto ea = equilibrium_multi(a);
        const auto eb = equilibrium_multi(b);
        const auto ma = cross_measures(ea, a);
        const auto mb = cross_measures(eb, b);
        const double own = std::max({block_err(full.B1, ea.B1, 0), block_err(full.B1, eb.B1, n1),
                                     block_err(full.B2, ea.B2, 0), block_err(full.B2, eb.B2, n1),
                                     block_err(fm.Gamma_m, ma.Gamma_m, 0), block_err(fm.Gamma_m, mb.Gamma_m, n1),
                                     block_err(fm.Gamma_r, ma.Gamma_r, 0), block_err(fm.Gamma_r, mb.Gamma_r, n1),
                                     block_err(Matrixd(full.S0), Matrixd(Vectord(ea.S0)), 0)});
        const double err = std::max(cross, own);
        record(c, cross < 1e-10 && own < 1e-10);
        c.worst = std::max(c.worst, err);
    }
    c.note = "max cross-block / per-block deviation = " + fmt(c.worst);
    return c;
}

CheckOutcome check_reversal_multi(const std::vector<MultiParamsd>& sets) {
    CheckOutcome c = named("Gamma_r negative semi-definite (1e-10)", true);
    c.worst = -std::numeric_limits<double>::infinity();
    double asym = 0;
    for (const auto& p : sets) {
        const auto m = cross_measures(equilibrium_multi(p), p);
        const double top = symmetric_eigenvalues(m.Gamma_r).maxCoeff();
        record(c, top <= 1e-10);
        c.worst = std::max(c.worst, top);
        asym = std::max(asym, asymmetry(m.Gamma_r));
    }
    c.note = "max eigenvalue of sym(Gamma_r) = " + fmt(c.worst) + ", max asymmetry = " + fmt(asym);
    return c;
}

CheckOutcome check_clearing_multi(const std::vector<MultiParamsd>& sets, int worlds, std::uint64_t seed, double tol) {
    CheckOutcome c = named("multi-asset clearing identity (" + format_tolerance(tol) + ")", true);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto& p = sets[k];
        const auto e = equilibrium_multi(p);
        const MultiAgents agents(p, e);
        const MultiSampler sampler(p);
        const Eigen::Index n = p.n();
        for (int w = 0; w < worlds; ++w) {
            PhiloxStream rng(seed, k * static_cast<std::uint64_t>(worlds) + static_cast<std::uint64_t>(w), 3);
            const auto world = sampler.draw(rng);
            const auto prices = price_path(e, world);
            double worst = 0;
            for (int t = 0; t < 3; ++t) {
                const Vectord x1 = agents.demand(AgentType::informed, t, world, prices);
                const Vectord x2 = agents.demand(AgentType::uninformed, t, world, prices);
                const Vectord supply_t =
                    Vectord::Ones(n) + (t == 1 ? world.theta1 : t == 2 ? world.theta2 : Vectord::Zero(n));
                const double scale = std::max(1.0, (p.pi * x1.cwiseAbs() + (1 - p.pi) * x2.cwiseAbs()).maxCoeff());
                worst = std::max(worst, (p.pi * x1 + (1 - p.pi) * x2 - supply_t).cwiseAbs().maxCoeff() / scale);
            }
            record(c, worst < tol);
            c.worst = std::max(c.worst, worst);
        }
    }
    c.note = "max relative residual = " + fmt(c.worst);
    return c;
}

CheckOutcome finding_sign_agreement(const std::vector<SingleParamsd>& sets) {
    CheckOutcome c = named("sign(gamma_m) vs simplified condition", false);
    for (const auto& p : sets) {
        const auto m = measures(equilibrium(p), p);
        record(c, (m.gamma_m > 0) == (m.condition_value > 0));
    }
    c.note = std::to_string(c.failures) + " disagreements of " + std::to_string(c.cases);
    return c;
}

namespace {

struct StaticClaim {
    const char* label;
    MeasureTarget target;
    StaticParam wrt;
    int sign;
};

constexpr StaticClaim static_claims[] = {
    {"d gamma_m / d pi > 0", MeasureTarget::gamma_m, StaticParam::pi, +1},
    {"d gamma_m / d delta_sigma_theta2 > 0", MeasureTarget::gamma_m, StaticParam::delta_sigma_theta2, +1},
    {"d gamma_r / d sigma_theta2 < 0", MeasureTarget::gamma_r, StaticParam::sigma_theta2, -1},
    {"d gamma_r / d sigma_s2 < 0", MeasureTarget::gamma_r, StaticParam::sigma_s2, -1},
};

}  // namespace

std::vector<CheckOutcome> finding_static_signs(const std::vector<SingleParamsd>& sets) {
    std::vector<CheckOutcome> out;
    for (const auto& claim : static_claims) {
        CheckOutcome c = named(std::string("random suite: ") + claim.label, false);
        for (const auto& p : sets) {
            const double d = comparative_static(p, claim.target, claim.wrt);
            record(c, d * claim.sign > 0);
        }
        c.note = std::to_string(c.failures) + " counterexamples of " + std::to_string(c.cases);
        out.push_back(c);
    }
    return out;
}

std::vector<CheckOutcome> finding_designated_statics() {
    std::vector<CheckOutcome> out;
    for (const auto& claim : static_claims) {
        const bool at_mom = claim.target == MeasureTarget::gamma_m;
        const auto p = at_mom ? designated_p_mom() : designated_p0();
        CheckOutcome c = named(std::string(at_mom ? "P_mom: " : "P0: ") + claim.label, false);
        const double d = comparative_static(p, claim.target, claim.wrt);
        record(c, d * claim.sign > 0);
        c.worst = d;
        c.note = "derivative = " + fmt(d);
        out.push_back(c);
    }
    return out;
}

CheckOutcome finding_comovement_pd(const std::vector<MultiParamsd>& sets) {
    CheckOutcome c = named("Gamma_c1..3 positive definite", false);
    c.worst = std::numeric_limits<double>::infinity();
    for (const auto& p : sets) {
        const auto m = cross_measures(equilibrium_multi(p), p);
        double low = std::numeric_limits<double>::infinity();
        for (const auto& g : m.Gamma_c) low = std::min(low, symmetric_eigenvalues(g).minCoeff());
        record(c, low > 0);
        c.worst = std::min(c.worst, low);
    }
    c.note = std::to_string(c.failures) + " violations; smallest eigenvalue = " + fmt(c.worst);
    return c;
}

std::vector<CheckOutcome> finding_multi_ordering(const std::vector<MultiParamsd>& sets) {
    CheckOutcome star = named("B2 - B2* has eigenvalues with positive real part", false);
    CheckOutcome one = named("B2 - B1 has eigenvalues with positive real part", false);
    for (const auto& p : sets) {
        const auto e = equilibrium_multi(p);
        const auto real_min = [](const Matrixd& m) {
            return Eigen::EigenSolver<Matrixd>(m, false).eigenvalues().real().minCoeff();
        };
        record(star, real_min(e.B2 - e.B2_star) > 0);
        record(one, real_min(e.B2 - e.B1) > 0);
    }
    star.note = std::to_string(star.failures) + " violations of " + std::to_string(star.cases);
    one.note = std::to_string(one.failures) + " violations of " + std::to_string(one.cases);
    return {star, one};
}

CheckOutcome finding_gamma_m_psd(const std::vector<MultiParamsd>& sets) {
    CheckOutcome c = named("Gamma_m positive semi-definite (cross-sectional momentum)", false);
    std::uint64_t psd = 0;
    for (const auto& p : sets) {
        const auto m = cross_measures(equilibrium_multi(p), p);
        const bool is_psd = symmetric_eigenvalues(m.Gamma_m).minCoeff() >= -1e-10;
        ++c.cases;
        if (is_psd) ++psd;
    }
    c.note = std::to_string(psd) + " PSD instances of " + std::to_string(c.cases);
    return c;
}

BatteryReport run_battery(const BatteryOptions& opts) {
    const auto singles = single_suite(opts.seed, opts.single_sets);
    const auto multis = multi_suite(opts.seed, opts.multi_sets);

    BatteryReport r;
    r.checks.push_back(check_reversal(singles));
    r.checks.push_back(check_ordering(singles));
    r.checks.push_back(check_clearing(singles, opts.worlds, opts.seed, opts.clearing_tol));
    r.checks.push_back(check_collapse(opts.seed, opts.single_sets / 10 + 1));
    r.checks.push_back(check_regimes(singles));
    r.checks.push_back(check_embedding(singles));
    r.checks.push_back(check_decoupling(opts.seed, opts.decoupled_sets));
    r.checks.push_back(check_reversal_multi(multis));
    r.checks.push_back(check_clearing_multi(multis, 20, opts.seed, opts.clearing_tol));

    r.checks.push_back(finding_sign_agreement(singles));
    for (auto& c : finding_designated_statics()) r.checks.push_back(std::move(c));
    for (auto& c : finding_static_signs(singles)) r.checks.push_back(std::move(c));
    r.checks.push_back(finding_comovement_pd(multis));
    for (auto& c : finding_multi_ordering(multis)) r.checks.push_back(std::move(c));
    r.checks.push_back(finding_gamma_m_psd(multis));
    return r;
}

}  // namespace hbeq
