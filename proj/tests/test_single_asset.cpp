#include <gtest/gtest.h>

#include <cmath>

#include "hbeq/battery.hpp"
#include "hbeq/single_asset.hpp"

using namespace hbeq;

namespace {

// Reference values from tests/oracle/oracle.py, which solves each period's
// clearing condition numerically from Gaussian conditioning on (D, s, θ1, θ2)
// without using any of the closed forms.
constexpr double oracle_tol = 1e-9;

void expect_rel(double actual, double expected, const char* what) {
    EXPECT_NEAR(actual, expected, oracle_tol * std::max(1.0, std::abs(expected))) << what;
}

}  // namespace

TEST(OracleP0, Coefficients) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    expect_rel(c.a2, 99.5, "a2");
    expect_rel(c.b2, 0.75, "b2");
    expect_rel(c.c2, 1.0, "c2");
    expect_rel(c.a2_star, 99.41176470588235, "a2*");
    expect_rel(c.b2_star, 0.7058823529411767, "b2*");
    expect_rel(c.a1, 99.04188880426503, "a1");
    expect_rel(c.b1, 0.7402894135567407, "b1");
    expect_rel(c.c1, 2.82352941176472, "c1");
    expect_rel(c.a1_star, 98.41522491349478, "a1*");
    expect_rel(c.b1_star, 0.70588235294118, "b1*");
    expect_rel(c.c1_star, 2.8235294117647, "c1*");
    expect_rel(c.s0, 93.74067752232017, "s0");
}

TEST(OracleP0, Measures) {
    const auto p = designated_p0();
    const auto m = measures(equilibrium(p), p);
    expect_rel(m.gamma_m, -4.361868345479916, "gamma_m");
    expect_rel(m.gamma_r, -0.5697829398324519, "gamma_r");
    expect_rel(m.gamma_m_unconditional, -4.333113768106428, "gamma_m unconditional");
    expect_rel(m.gamma_r_unconditional, -0.5600723533891934, "gamma_r unconditional");
    EXPECT_FALSE(m.momentum_holds);
}

TEST(OraclePMom, Coefficients) {
    const auto p = designated_p_mom();
    const auto c = equilibrium(p);
    expect_rel(c.a2, 99.91875, "a2");
    expect_rel(c.b2, 0.796875, "b2");
    expect_rel(c.c2, 0.2, "c2");
    expect_rel(c.a2_star, 99.91532846715329, "a2*");
    expect_rel(c.b2_star, 0.7883211678832114, "b2*");
    expect_rel(c.a1, 99.91400739585501, "a1");
    expect_rel(c.b1, 0.7951345013796075, "b1");
    expect_rel(c.c1, 0.025226277372283, "c1");
    expect_rel(c.a1_star, 99.90538526293356, "a1*");
    expect_rel(c.s0, 99.59616075725418, "s0");
}

TEST(OraclePMom, Measures) {
    const auto p = designated_p_mom();
    const auto m = measures(equilibrium(p), p);
    expect_rel(m.gamma_m, 0.0009815957665117, "gamma_m");
    expect_rel(m.gamma_r, -0.0267873504631283, "gamma_r");
    expect_rel(m.gamma_m_unconditional, 0.0065173177772267, "gamma_m unconditional");
    expect_rel(m.gamma_r_unconditional, -0.0253731953340583, "gamma_r unconditional");
    EXPECT_TRUE(m.momentum_holds);
}

TEST(OracleP0, InformedViewIsStarred) {
    const auto p = designated_p0();
    const auto iv = equilibrium(informed_view(p));
    const auto c = equilibrium(p);
    expect_rel(iv.b2, 0.70588235294118, "informed-view b2");
    expect_rel(iv.s0, 89.22481771051595, "informed-view s0");
    EXPECT_DOUBLE_EQ(iv.b2, c.b2_star);
    EXPECT_DOUBLE_EQ(iv.a2, c.a2_star);
    EXPECT_DOUBLE_EQ(iv.b1, c.b1_star);
}

TEST(OracleStatics, DesignatedPoints) {
    const auto pm = designated_p_mom();
    const auto p0 = designated_p0();
    // The oracle differentiates numerically solved equilibria (h = 1e-4), so
    // its derivatives are good to roughly 1e-12 / h.
    const auto near = [](double actual, double expected) {
        EXPECT_NEAR(actual, expected, 1e-5 * std::abs(expected));
    };
    near(comparative_static(pm, MeasureTarget::gamma_m, StaticParam::pi), 0.0011546072025434093);
    near(comparative_static(pm, MeasureTarget::gamma_m, StaticParam::delta_sigma_theta2), -3.572555109165529e-05);
    near(comparative_static(p0, MeasureTarget::gamma_r, StaticParam::sigma_theta2), -0.5152031991179085);
    near(comparative_static(p0, MeasureTarget::gamma_r, StaticParam::sigma_s2), -0.8052381766426864);
}

TEST(Equilibrium, LongDoubleAgreesWithDouble) {
    for (const auto& p : single_suite(7, 50)) {
        const auto cd = equilibrium(p);
        const auto cl = equilibrium(p.cast<long double>());
        const auto md = measures(cd, p);
        const auto ml = measures(cl, p.cast<long double>());
        const auto close = [](double a, long double b) {
            return std::abs(a - static_cast<double>(b)) <= 1e-10 * std::max(1.0, std::abs(a));
        };
        EXPECT_TRUE(close(cd.s0, cl.s0));
        EXPECT_TRUE(close(cd.b1, cl.b1));
        EXPECT_TRUE(close(md.gamma_m, ml.gamma_m));
        EXPECT_TRUE(close(md.gamma_r, ml.gamma_r));
    }
}

TEST(Equilibrium, HomogeneousBeliefsCollapseStarred) {
    auto p = designated_p0();
    p.sigma_theta2_informed = p.sigma_theta2_true;
    const auto c = equilibrium(p);
    EXPECT_NEAR(c.b2_star, c.b2, 1e-14);
    EXPECT_NEAR(c.a2_star, c.a2, 1e-12);
    EXPECT_NEAR(c.b1, c.b2, 1e-14);
    EXPECT_NEAR(c.a1_star, c.a1, 1e-12);
}

TEST(Equilibrium, PricePathIsAffine) {
    const auto p = designated_p0();
    const auto c = equilibrium(p);
    const WorldRealization<double> at_mean{p.d_bar, p.d_bar, 0.0, 0.0};
    const auto path = price_path(c, at_mean);
    EXPECT_DOUBLE_EQ(path.s0, c.s0);
    EXPECT_DOUBLE_EQ(path.s1, c.a1);
    EXPECT_DOUBLE_EQ(path.s2, c.a2);
    EXPECT_DOUBLE_EQ(path.s3, p.d_bar);

    const WorldRealization<double> supply_up{p.d_bar, p.d_bar, 1.0, 1.0};
    const auto shocked = price_path(c, supply_up);
    EXPECT_LT(shocked.s1, path.s1);
    EXPECT_LT(shocked.s2, path.s2);
}

TEST(Equilibrium, ScaledPayoffShiftsConstantsOnly) {
    auto p = designated_p0();
    const auto c = equilibrium(p);
    p.d_bar += 10;
    const auto shifted = equilibrium(p);
    EXPECT_DOUBLE_EQ(shifted.b1, c.b1);
    EXPECT_DOUBLE_EQ(shifted.b2, c.b2);
    EXPECT_NEAR(shifted.a2 - c.a2, 10.0, 1e-12);
    EXPECT_NEAR(shifted.s0 - c.s0, 10.0, 1e-12);
    EXPECT_DOUBLE_EQ(measures(shifted, p).gamma_m, measures(c, p).gamma_m);
}

TEST(Equilibrium, RevealingPriceIsDegenerate) {
    // c2 underflows to zero and the price reveals s exactly.
    auto p = designated_p0();
    p.alpha = 1e-300;
    p.sigma_s2 = 1e-10;
    EXPECT_THROW(solve_t2(p), Degenerate);
}

TEST(ComparativeStatic, ConvergesAtSecondOrder) {
    const auto p = designated_p0();
    const double ref = comparative_static(p, MeasureTarget::gamma_r, StaticParam::sigma_s2, 1e-4);
    const double e1 = std::abs(comparative_static(p, MeasureTarget::gamma_r, StaticParam::sigma_s2, 0.02) - ref);
    const double e2 = std::abs(comparative_static(p, MeasureTarget::gamma_r, StaticParam::sigma_s2, 0.01) - ref);
    ASSERT_GT(e2, 0.0);
    const double order = std::log2(e1 / e2);
    EXPECT_NEAR(order, 2.0, 0.1);
}

TEST(ComparativeStatic, PerturbationLeavingDomainThrows) {
    auto p = designated_p0();
    p.pi = 0.01;
    EXPECT_THROW(comparative_static(p, MeasureTarget::gamma_m, StaticParam::pi, 0.001), InvalidPerturbation);
    // Shrinking the heterogeneity below zero.
    EXPECT_THROW(comparative_static(designated_p0(), MeasureTarget::gamma_m, StaticParam::delta_sigma_theta2, 5.0),
                 InvalidPerturbation);
}

TEST(ComparativeStatic, SigmaThetaShiftKeepsHeterogeneity) {
    const auto p = designated_p0();
    const auto up = detail::shift_static(p, StaticParam::sigma_theta2, 0.5);
    EXPECT_DOUBLE_EQ(up.sigma_theta2_informed - up.sigma_theta2_true, p.sigma_theta2_informed - p.sigma_theta2_true);
}

TEST(Parsing, MeasureTargetsAndParams) {
    EXPECT_EQ(parse_measure_target("gamma_m"), MeasureTarget::gamma_m);
    EXPECT_EQ(parse_measure_target("gamma_x"), std::nullopt);
    EXPECT_EQ(parse_static_param("delta_sigma_theta2"), StaticParam::delta_sigma_theta2);
    EXPECT_EQ(parse_static_param("beta"), std::nullopt);
}
