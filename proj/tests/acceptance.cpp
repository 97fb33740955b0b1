// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "hbeq/battery.hpp"
#include "hbeq/multi_asset.hpp"
#include "hbeq/simulator.hpp"
#include "hbeq/single_asset.hpp"

using namespace hbeq;

namespace {

constexpr std::uint64_t suite_seed = 20240611;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string capture(const std::string& cmd, int& code) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        code = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    code = pclose(pipe);
    return out;
}

Verdict reversal() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = check_reversal(single_suite(suite_seed, 1000));
    const double dt = seconds_since(t0);
    return {c.failures == 0 && c.cases == 1000 && dt < 1.0,
            std::to_string(c.failures) + "/" + std::to_string(c.cases) + " sets with gamma_r >= 0, max gamma_r " +
                fmt(c.worst) + ", " + fmt(dt) + " s (limit 1 s)"};
}

Verdict ordering() {
    const auto c = check_ordering(single_suite(suite_seed, 1000));
    return {c.failures == 0 && c.cases == 1000,
            std::to_string(c.failures) + "/" + std::to_string(c.cases) + " sets with a margin <= 1e-12, smallest margin " +
                fmt(c.worst)};
}

Verdict clearing() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = check_clearing(single_suite(suite_seed, 1000), 100, suite_seed, 1e-8);
    const double dt = seconds_since(t0);
    return {c.failures == 0 && c.cases == 1000 * 100 && dt < 10.0,
            std::to_string(c.failures) + "/" + std::to_string(c.cases) + " (set, world) pairs with a residual >= 1e-8 at some t, worst " +
                fmt(c.worst) + ", " + fmt(dt) + " s (limit 10 s)"};
}

Verdict simulator() {
    const auto p = designated_p_mom();
    const auto c = equilibrium(p);
    const auto m = measures(c, p);
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = simulate(p, c, SimConfig{1000000, 42, 10000, 1});
    const double dt = seconds_since(t0);
    const double zm = (s.gamma_m.value - m.gamma_m) / s.gamma_m.se;
    const double zr = (s.gamma_r.value - m.gamma_r) / s.gamma_r.se;
    const bool ok = std::abs(zm) <= 3 && std::abs(zr) <= 3 && s.gamma_m.value > 0 && s.gamma_r.value < 0 && dt < 60.0;
    return {ok, "gamma_m " + fmt(s.gamma_m.value) + " vs " + fmt(m.gamma_m) + " (z " + fmt(zm) + "), gamma_r " +
                    fmt(s.gamma_r.value) + " vs " + fmt(m.gamma_r) + " (z " + fmt(zr) + "), 1e6 paths in " + fmt(dt) +
                    " s single-threaded (limit 60 s)"};
}

Verdict regimes() {
    int positive = 0, negative = 0;
    for (const auto& p : single_suite(suite_seed, 1000)) {
        const double g = measures(equilibrium(p), p).gamma_m;
        positive += g > 0;
        negative += g < 0;
    }
    const auto witnesses = check_regimes({});
    const double g_mom = measures(equilibrium(designated_p_mom()), designated_p_mom()).gamma_m;
    const double g_p0 = measures(equilibrium(designated_p0()), designated_p0()).gamma_m;
    return {positive > 0 && negative > 0 && witnesses.failures == 0 && g_mom > 0 && g_p0 < 0,
            "random suite: " + std::to_string(positive) + " sets with gamma_m > 0, " + std::to_string(negative) +
                " with gamma_m < 0; gamma_m(P_mom) " + fmt(g_mom) + ", gamma_m(P0) " + fmt(g_p0)};
}

Verdict multi_asset() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto embedding = check_embedding(single_suite(suite_seed, 1000));
    const auto decoupling = check_decoupling(suite_seed, 50);
    const auto reversal = check_reversal_multi(multi_suite(suite_seed, 200));
    const double dt = seconds_since(t0);
    const bool ok = embedding.failures == 0 && decoupling.failures == 0 && reversal.failures == 0 &&
                    reversal.cases == 200 && dt < 30.0;
    return {ok, "embedding worst " + fmt(embedding.worst) + " (1e-12), decoupling worst " + fmt(decoupling.worst) +
                    " (1e-10), max eig sym(Gamma_r) " + fmt(reversal.worst) + " over " + std::to_string(reversal.cases) +
                    " sets (1e-10), " + fmt(dt) + " s (limit 30 s)"};
}

Verdict statics() {
    const auto pm = designated_p_mom();
    const auto p0 = designated_p0();
    const double dpi = comparative_static(pm, MeasureTarget::gamma_m, StaticParam::pi);
    const double ddelta = comparative_static(pm, MeasureTarget::gamma_m, StaticParam::delta_sigma_theta2);
    const double dth = comparative_static(p0, MeasureTarget::gamma_r, StaticParam::sigma_theta2);
    const double dss = comparative_static(p0, MeasureTarget::gamma_r, StaticParam::sigma_s2);
    const auto mark = [](bool ok) { return ok ? " ok" : " WRONG SIGN"; };
    return {dpi > 0 && ddelta > 0 && dth < 0 && dss < 0,
            "P_mom: dgamma_m/dpi " + fmt(dpi) + mark(dpi > 0) + ", dgamma_m/ddelta_sigma_theta2 " + fmt(ddelta) +
                mark(ddelta > 0) + "; P0: dgamma_r/dsigma_theta2 " + fmt(dth) + mark(dth < 0) +
                ", dgamma_r/dsigma_s2 " + fmt(dss) + mark(dss < 0)};
}

MultiParamsd payoff_linked_pair(double rho) {
    MultiParamsd p;
    p.d_bar = Vectord::Zero(2);
    p.sigma_d.resize(2, 2);
    p.sigma_d << 1, rho, rho, 1;
    p.sigma_s = Matrixd::Identity(2, 2);
    p.sigma_theta_true = Matrixd::Identity(2, 2);
    p.sigma_theta_informed = 3 * Matrixd::Identity(2, 2);
    p.alpha = 0.5;
    p.pi = 0.5;
    return validate_multi(p);
}

Verdict leadlag() {
    Vectord s(2);
    s << 1.0, 0.0;  // good news on asset 1; asset 2 muted
    const auto linked = leadlag_experiment(payoff_linked_pair(0.5), {1}, s);
    const auto diagonal = leadlag_experiment(payoff_linked_pair(0.0), {1}, s);
    const double d_linked = linked.response.drift_t1(1);
    const double d_diag = diagonal.response.drift_t1(1);
    const double d_diag2 = diagonal.response.drift_t2(1);
    return {d_linked > 0 && d_diag == 0.0 && d_diag2 == 0.0,
            "muted asset 2 drift with cov(D1, D2) = 0.5: " + fmt(d_linked) + "; with diagonal Sigma_D: " + fmt(d_diag) +
                ", " + fmt(d_diag2)};
}

Verdict reproducibility() {
    const std::string cmd = std::string("'") + HBEQ_CLI + "' simulate '" + HBEQ_CONFIG_DIR + "/simulate.cfg' 2>/dev/null";
    int c1 = 0, c2 = 0;
    const auto a = capture(cmd, c1);
    const auto b = capture(cmd, c2);
    return {c1 == 0 && c2 == 0 && !a.empty() && a == b,
            "two runs of configs/simulate.cfg (seed 42, batch 10000): " + std::to_string(a.size()) + " and " +
                std::to_string(b.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"reversal universality", reversal},
        {"coefficient ordering", ordering},
        {"market-clearing identity", clearing},
        {"simulator vs analytic at P_mom", simulator},
        {"momentum regime existence", regimes},
        {"multi-asset consistency", multi_asset},
        {"comparative statics at designated points", statics},
        {"lead-lag demonstration", leadlag},
        {"reproducibility", reproducibility},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << index << " " << name << ": " << v.detail << '\n';
    }
    std::cout << (9 - failed) << "/9 criteria pass\n";
    return failed == 0 ? 0 : 1;
}
