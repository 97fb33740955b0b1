#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>

#include "hbeq/battery.hpp"
#include "hbeq/multi_asset.hpp"
#include "hbeq/serialize.hpp"
#include "hbeq/single_asset.hpp"

using namespace hbeq;
using nlohmann::json;

namespace {

json oracle_values() {
    std::ifstream f(HBEQ_ORACLE_VALUES);
    return json::parse(f);
}

Matrixd mat(const json& j) { return matrix_from_json(j); }

MultiParamsd two_asset(const json& params) {
    MultiParamsd p;
    p.d_bar = vector_from_json(params.at("d_bar"));
    p.sigma_d = mat(params.at("sigma_d"));
    p.sigma_s = mat(params.at("sigma_s"));
    p.sigma_theta_true = mat(params.at("sigma_theta"));
    p.sigma_theta_informed = mat(params.at("sigma_theta1"));
    p.alpha = params.at("alpha");
    p.pi = params.at("pi");
    return p;
}

void expect_close(const Matrixd& actual, const Matrixd& expected, const std::string& what, double tol = 1e-9) {
    ASSERT_EQ(actual.rows(), expected.rows()) << what;
    ASSERT_EQ(actual.cols(), expected.cols()) << what;
    const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
    EXPECT_LE((actual - expected).cwiseAbs().maxCoeff(), tol * scale) << what << "\n" << actual << "\nvs\n" << expected;
}

MultiParamsd correlated_pair(double rho) {
    MultiParamsd p;
    p.d_bar = Vectord::Zero(2);
    p.sigma_d.resize(2, 2);
    p.sigma_d << 1, rho, rho, 1;
    p.sigma_s = Matrixd::Identity(2, 2);
    p.sigma_theta_true = Matrixd::Identity(2, 2);
    p.sigma_theta_informed = 3 * Matrixd::Identity(2, 2);
    p.alpha = 0.5;
    p.pi = 0.5;
    return p;
}

}  // namespace

TEST(OracleTwoAsset, Coefficients) {
    const auto v = oracle_values().at("two_asset");
    const auto p = validate_multi(two_asset(v.at("params")));
    const auto c = equilibrium_multi(p);
    const auto& r = v.at("values");
    expect_close(c.A2, vector_from_json(r.at("A2")), "A2");
    expect_close(c.B2, mat(r.at("B2")), "B2");
    expect_close(c.C2, mat(r.at("C2")), "C2");
    expect_close(c.A2_star, vector_from_json(r.at("A2_star")), "A2*");
    expect_close(c.B2_star, mat(r.at("B2_star")), "B2*");
    expect_close(c.A1, vector_from_json(r.at("A1")), "A1");
    expect_close(c.B1, mat(r.at("B1")), "B1");
    expect_close(c.C1, mat(r.at("C1")), "C1");
    expect_close(c.A1_star, vector_from_json(r.at("A1_star")), "A1*");
    expect_close(c.S0, vector_from_json(r.at("S0")), "S0");
}

TEST(OracleTwoAsset, CrossMeasures) {
    const auto v = oracle_values().at("two_asset");
    const auto p = two_asset(v.at("params"));
    const auto m = cross_measures(equilibrium_multi(p), p);
    const auto& r = v.at("values");
    expect_close(m.Gamma_m, mat(r.at("Gamma_m")), "Gamma_m");
    expect_close(m.Gamma_r, mat(r.at("Gamma_r")), "Gamma_r");
    for (int t = 0; t < 3; ++t) expect_close(m.Gamma_c[t], mat(r.at("Gamma_c")[t]), "Gamma_c");
    expect_close(symmetric_eigenvalues(m.Gamma_r), vector_from_json(r.at("Gamma_r_eigenvalues")), "eig sym(Gamma_r)");
}

TEST(Embedding, OneAssetMatchesScalar) {
    const auto s = designated_p0();
    const auto c = equilibrium(s);
    const auto cm = equilibrium_multi(embed(s));
    EXPECT_NEAR(cm.B1(0, 0), c.b1, 1e-12);
    EXPECT_NEAR(cm.B2_star(0, 0), c.b2_star, 1e-12);
    EXPECT_NEAR(cm.S0(0), c.s0, 1e-12 * c.s0);
    const auto m = measures(c, s);
    const auto mm = cross_measures(cm, embed(s));
    EXPECT_NEAR(mm.Gamma_m(0, 0), m.gamma_m, 1e-12);
    EXPECT_NEAR(mm.Gamma_r(0, 0), m.gamma_r, 1e-12);
}

TEST(Embedding, ReduceRoundTrips) {
    const auto s = designated_p_mom();
    EXPECT_EQ(reduce_to_single(embed(s)), s);
    MultiParamsd two = correlated_pair(0.3);
    EXPECT_THROW(reduce_to_single(two), WrongDimension);
}

TEST(ValidateMulti, RejectsShapeAndDefiniteness) {
    auto p = correlated_pair(0.3);
    p.sigma_s = Matrixd::Identity(3, 3);
    EXPECT_THROW(validate_multi(p), InvalidParam);

    p = correlated_pair(1.5);  // not positive definite
    EXPECT_THROW(validate_multi(p), InvalidParam);

    p = correlated_pair(0.3);
    p.sigma_d(0, 1) = 0.4;  // asymmetric
    EXPECT_THROW(validate_multi(p), InvalidParam);

    p = correlated_pair(0.3);
    p.sigma_theta_informed = p.sigma_theta_true;
    EXPECT_THROW(validate_multi(p), InvalidParam);
    ValidationOptions opts;
    opts.allow_homogeneous = true;
    EXPECT_NO_THROW(validate_multi(p, opts));
}

TEST(Definiteness, Examples) {
    EXPECT_EQ(definiteness(Matrixd::Identity(3, 3), 1e-12), Definiteness::positive_definite);
    EXPECT_EQ(definiteness(Matrixd::Zero(2, 2), 1e-12), Definiteness::semi);
    Matrixd d(2, 2);
    d << 1, 0, 0, -1;
    EXPECT_EQ(definiteness(d, 1e-12), Definiteness::indefinite);
    d << 1, 0, 0, 0;
    EXPECT_EQ(definiteness(d, 1e-12), Definiteness::positive_semi);
    EXPECT_EQ(definiteness(Matrixd(-d), 1e-12), Definiteness::negative_semi);
    EXPECT_EQ(definiteness(Matrixd(-Matrixd::Identity(2, 2)), 1e-12), Definiteness::negative_definite);
    EXPECT_TRUE(is_positive_semi(Definiteness::semi));
    EXPECT_TRUE(is_negative_semi(Definiteness::semi));
}

TEST(Definiteness, AsymmetricThrows) {
    Matrixd m(2, 2);
    m << 1, 2, 0, 1;
    EXPECT_THROW(definiteness(m, 1e-12), NotSymmetric);
}

TEST(Linalg, CheckedInverseGuardsConditioning) {
    Matrixd m(2, 2);
    m << 1, 1, 1, 1 + 1e-14;
    EXPECT_THROW(checked_inverse(m, "m"), SingularMatrix);
    try {
        checked_inverse(Matrixd::Zero(2, 2), "zero");
    } catch (const SingularMatrix& e) {
        EXPECT_EQ(e.which(), "zero");
    }
    const Matrixd two = 2 * Matrixd::Identity(2, 2);
    expect_close(checked_inverse(two, "two"), 0.5 * Matrixd::Identity(2, 2), "inverse");
}

TEST(BlockDiagonal, Decouples) {
    auto p = correlated_pair(0.0);
    p.sigma_s(1, 1) = 2.0;
    p.sigma_theta_informed(1, 1) = 5.0;
    const auto c = equilibrium_multi(p);
    for (const Matrixd* m : {&c.B1, &c.B2, &c.C1, &c.C2, &c.B2_star}) {
        EXPECT_EQ((*m)(0, 1), 0.0);
        EXPECT_EQ((*m)(1, 0), 0.0);
    }
    // Each block equals its own scalar economy.
    auto second = reduce_to_single(embed(SingleParamsd{0.0, 1.0, 2.0, 1.0, 5.0, 0.5, 0.5, 0.0}));
    const auto cs = equilibrium(second);
    EXPECT_NEAR(c.B1(1, 1), cs.b1, 1e-12);
    EXPECT_NEAR(c.S0(1), cs.s0, 1e-12);
}

TEST(LeadLag, DiagonalPayoffIsExactlyZero) {
    const auto p = correlated_pair(0.0);
    Vectord s(2);
    s << 1.5, -3.0;
    const auto r = leadlag_experiment(p, {1}, s);
    EXPECT_EQ(r.response.drift_t1(1), 0.0);
    EXPECT_EQ(r.response.drift_t2(1), 0.0);
    EXPECT_EQ(r.signal(1), p.d_bar(1));
    EXPECT_TRUE(r.muted[1]);
    EXPECT_FALSE(r.muted[0]);
}

TEST(LeadLag, MutedAssetFollowsCovarianceSign) {
    Vectord s(2);
    s << 1.0, 0.0;
    for (double rho : {0.3, -0.3}) {
        const auto r = leadlag_experiment(correlated_pair(rho), {1}, s);
        EXPECT_NE(r.response.drift_t1(1), 0.0);
        EXPECT_EQ(std::signbit(r.response.drift_t1(1)), std::signbit(rho)) << "rho " << rho;
    }
}

TEST(LeadLag, OracleSearchInstance) {
    const auto v = oracle_values().at("leadlag_search");
    const double rho = v.at("rho");
    MultiParamsd p = correlated_pair(rho);
    p.sigma_s = Matrixd::Zero(2, 2);
    p.sigma_s(0, 0) = 0.1;
    p.sigma_s(1, 1) = 5.0;
    const Vectord s = vector_from_json(v.at("signal"));
    const auto c = equilibrium_multi(p);
    const auto r = expected_drift(c, s);
    expect_close(r.drift_t1, vector_from_json(v.at("drift_t1")), "drift_t1");
    expect_close(r.drift_t2, vector_from_json(v.at("drift_t2")), "drift_t2");
    // A bad own signal, yet the price is expected to rise.
    EXPECT_LT(s(1), 0.0);
    EXPECT_GT(r.drift_t1(1), 0.0);
}

TEST(LeadLag, InvalidMuteSets) {
    const auto p = correlated_pair(0.3);
    const Vectord s = Vectord::Ones(2);
    EXPECT_THROW(leadlag_experiment(p, {}, s), InvalidMute);
    EXPECT_THROW(leadlag_experiment(p, {0, 1}, s), InvalidMute);
    EXPECT_THROW(leadlag_experiment(p, {2}, s), InvalidMute);
    EXPECT_THROW(leadlag_experiment(p, {1}, Vectord(Vectord::Ones(3))), WrongDimension);
}

TEST(LeadLag, PrecisionRatio) {
    auto p = correlated_pair(0.2);
    p.sigma_s(1, 1) = 3.0;
    const auto r = leadlag_experiment(p, {1}, Vectord(Vectord::Ones(2)));
    EXPECT_DOUBLE_EQ(r.precision_ratio(0), 0.5);
    EXPECT_DOUBLE_EQ(r.precision_ratio(1), 0.75);
}
