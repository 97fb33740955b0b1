#include <gtest/gtest.h>

#include <cmath>

#include "hbeq/battery.hpp"
#include "hbeq/simulator.hpp"

using namespace hbeq;

namespace {

SimConfig sim(std::uint64_t n, std::uint64_t seed, std::uint64_t batch, unsigned threads = 1) {
    return {n, seed, batch, threads};
}

void expect_within_se(const Estimate& e, double analytic, double k, const char* what) {
    EXPECT_LE(std::abs(e.value - analytic), k * e.se) << what << ": estimate " << e.value << " analytic " << analytic
                                                      << " se " << e.se;
}

}  // namespace

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreIndependentOfEachOther) {
    PhiloxStream a(1, 5, 0), b(1, 5, 0), c(1, 6, 0), d(1, 5, 1);
    for (int i = 0; i < 9; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
        EXPECT_NE(x, d());
    }
}

TEST(Simulate, ValidatesConfig) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    EXPECT_THROW(simulate(p, c, sim(0, 1, 1)), InvalidParam);
    EXPECT_THROW(simulate(p, c, sim(10, 1, 0)), InvalidParam);
    EXPECT_THROW(simulate(p, c, sim(10, 1, 11)), InvalidParam);
    EXPECT_THROW(simulate(p, c, sim(10, 1, 5, 0)), InvalidParam);
}

TEST(Simulate, DeterministicForSeed) {
    const auto p = designated_p_mom();
    const auto c = equilibrium(p);
    const auto a = simulate(p, c, sim(20000, 99, 1000));
    const auto b = simulate(p, c, sim(20000, 99, 1000));
    EXPECT_EQ(a.gamma_m.value, b.gamma_m.value);
    EXPECT_EQ(a.gamma_r.se, b.gamma_r.se);
    EXPECT_EQ(a.wealth_informed.variance, b.wealth_informed.variance);
    const auto other = simulate(p, c, sim(20000, 100, 1000));
    EXPECT_NE(a.gamma_m.value, other.gamma_m.value);
}

TEST(Simulate, ThreadCountDoesNotChangeResults) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const auto one = simulate(p, c, sim(50000, 3, 1000, 1));
    const auto four = simulate(p, c, sim(50000, 3, 1000, 4));
    EXPECT_EQ(one.gamma_m.value, four.gamma_m.value);
    EXPECT_EQ(one.gamma_r.value, four.gamma_r.value);
    EXPECT_EQ(one.gamma_m_unconditional.se, four.gamma_m_unconditional.se);
    EXPECT_EQ(one.clearing_residual_max, four.clearing_residual_max);
    EXPECT_EQ(one.wealth_uninformed.mean, four.wealth_uninformed.mean);
}

TEST(Simulate, BatchSizeOnlyReordersSums) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const auto a = simulate(p, c, sim(30000, 3, 30000));
    const auto b = simulate(p, c, sim(30000, 3, 777));
    EXPECT_NEAR(a.gamma_m.value, b.gamma_m.value, 1e-10 * std::abs(a.gamma_m.value));
    EXPECT_NEAR(a.gamma_r.value, b.gamma_r.value, 1e-10 * std::abs(a.gamma_r.value));
    EXPECT_NEAR(a.gamma_r.se, b.gamma_r.se, 1e-10 * a.gamma_r.se);
}

TEST(Simulate, MatchesAnalyticAtP0) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const auto m = measures(c, p);
    const auto s = simulate(p, c, sim(200000, 11, 10000, 2));
    expect_within_se(s.gamma_m, m.gamma_m, 3, "gamma_m");
    expect_within_se(s.gamma_r, m.gamma_r, 3, "gamma_r");
    expect_within_se(s.gamma_m_unconditional, m.gamma_m_unconditional, 3, "gamma_m unconditional");
    expect_within_se(s.gamma_r_unconditional, m.gamma_r_unconditional, 3, "gamma_r unconditional");
    EXPECT_LT(s.clearing_residual_max, 1e-8);
    EXPECT_LT(s.budget_residual_max, 1e-8);
}

TEST(Simulate, StandardErrorShrinksWithRootN) {
    const auto p = designated_p_mom();
    const auto c = equilibrium(p);
    const auto small = simulate(p, c, sim(25000, 5, 5000));
    const auto large = simulate(p, c, sim(100000, 6, 5000));
    EXPECT_NEAR(small.gamma_m.se / large.gamma_m.se, 2.0, 0.4);
    EXPECT_NEAR(small.gamma_r.se / large.gamma_r.se, 2.0, 0.4);
}

TEST(Simulate, PayoffMeanObeysCentralLimit) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const std::uint64_t n = 100000;
    const auto s = simulate(p, c, sim(n, 17, 10000));
    EXPECT_LE(std::abs(s.mean_payoff - p.d_bar), 4 * std::sqrt(p.sigma_d2 / n));
}

TEST(Simulate, PathsClearAndCarryWealth) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    for (const auto& r : simulate_paths(p, c, 8, 50)) {
        for (int t = 0; t < 3; ++t) {
            const double agg = p.pi * r.x_informed[t] + (1 - p.pi) * r.x_uninformed[t];
            EXPECT_NEAR(agg, supply(t, r.world), 1e-9 * std::max(1.0, std::abs(r.x_informed[t])));
        }
        EXPECT_DOUBLE_EQ(r.w_informed[0], c.s0 + p.riskless_supply);
        EXPECT_DOUBLE_EQ(r.prices.s3, r.world.d);
    }
    // Single paths are addressable by index.
    const auto third = simulate_path(p, c, 8, 2);
    EXPECT_EQ(third.prices.s2, simulate_paths(p, c, 8, 3)[2].prices.s2);
}

TEST(Demand, ZeroWhenPriceEqualsExpectation) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    PricePath<double> prices{c.s0, c.a1, c.a2, 0.0};
    prices.s2 = p.d_bar;
    EXPECT_EQ(informed_demand(2, p.d_bar, prices, c, p), 0.0);
    prices.s1 = c.a2_star;
    EXPECT_EQ(informed_demand(1, p.d_bar, prices, c, p), 0.0);
    prices.s0 = c.a1;
    EXPECT_EQ(uninformed_demand(0, prices, c, p), 0.0);
}

TEST(Demand, InverselyProportionalToRiskAversion) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    auto p2 = p;
    p2.alpha *= 2;
    const PricePath<double> prices{90.0, 95.0, 97.0, 0.0};
    for (int t = 0; t < 3; ++t) {
        EXPECT_NEAR(informed_demand(t, 101.0, prices, c, p2), informed_demand(t, 101.0, prices, c, p) / 2, 1e-12);
        EXPECT_NEAR(uninformed_demand(t, prices, c, p2), uninformed_demand(t, prices, c, p) / 2, 1e-12);
    }
}

TEST(Demand, RejectsBadPeriod) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const WorldRealization<double> w{100, 100, 0, 0};
    EXPECT_THROW(agent_demand(AgentType::informed, 3, w, price_path(c, w), c, p), InvalidParam);
}

TEST(SimulateMulti, OneAssetAgreesWithScalar) {
    const auto s = designated_p0();
    const auto p = embed(s);
    const auto scalar = simulate(s, equilibrium(s), sim(100000, 21, 10000));
    const auto multi = simulate_multi(p, equilibrium_multi(p), sim(100000, 21, 10000));
    const auto agree = [](double a, double sa, double b, double sb) {
        return std::abs(a - b) <= 4 * std::hypot(sa, sb);
    };
    EXPECT_TRUE(agree(scalar.gamma_m.value, scalar.gamma_m.se, multi.gamma_m.value(0, 0), multi.gamma_m.se(0, 0)));
    EXPECT_TRUE(agree(scalar.gamma_r.value, scalar.gamma_r.se, multi.gamma_r.value(0, 0), multi.gamma_r.se(0, 0)));
    EXPECT_NEAR(multi.mean_payoff(0), scalar.mean_payoff, 0.1);
}

TEST(SimulateMulti, MatchesAnalyticOnTwoAssets) {
    MultiParamsd p;
    p.d_bar = Vectord(2);
    p.d_bar << 100, 50;
    p.sigma_d.resize(2, 2);
    p.sigma_d << 4, .5, .5, 2;
    p.sigma_s.resize(2, 2);
    p.sigma_s << 1, .2, .2, .5;
    p.sigma_theta_true.resize(2, 2);
    p.sigma_theta_true << 1, .3, .3, 2;
    p.sigma_theta_informed.resize(2, 2);
    p.sigma_theta_informed << 3, .8, .8, 3;
    p.alpha = 0.5;
    p.pi = 0.4;
    const auto c = equilibrium_multi(p);
    const auto m = cross_measures(c, p);
    const auto s = simulate_multi(p, c, sim(100000, 4, 10000, 2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            EXPECT_LE(std::abs(s.gamma_m.value(i, j) - m.Gamma_m(i, j)), 3.5 * s.gamma_m.se(i, j)) << i << j;
            EXPECT_LE(std::abs(s.gamma_r.value(i, j) - m.Gamma_r(i, j)), 3.5 * s.gamma_r.se(i, j)) << i << j;
        }
    EXPECT_LT(s.clearing_residual_max, 1e-8);
}

TEST(SimulateMulti, DecoupledCrossEntriesVanish) {
    MultiParamsd p;
    p.d_bar = Vectord::Zero(2);
    p.sigma_d = Matrixd::Identity(2, 2);
    p.sigma_s = Matrixd::Identity(2, 2);
    p.sigma_theta_true = Matrixd::Identity(2, 2);
    p.sigma_theta_informed = 4 * Matrixd::Identity(2, 2);
    p.alpha = 0.5;
    p.pi = 0.5;
    const auto s = simulate_multi(p, equilibrium_multi(p), sim(50000, 12, 10000));
    EXPECT_LE(std::abs(s.gamma_m.value(0, 1)), 3.5 * s.gamma_m.se(0, 1));
    EXPECT_LE(std::abs(s.gamma_r.value(1, 0)), 3.5 * s.gamma_r.se(1, 0));
}
