#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "hbeq/errors.hpp"
#include "hbeq/linalg.hpp"
#include "hbeq/model.hpp"

namespace hbeq {

// N risky assets. Prices are affine with matrix loadings:
//
//   S_t = A_t + B_t (s - D̄ - C_t Θ_t),   t = 1, 2,   S_3 = D.
//
// Every coefficient comes from collecting terms in the vector market-clearing
// condition  π x_{t,1} + (1-π) x_{t,2} = 1 + Θ_t  with CARA demands
// x = (α Var)⁻¹ (E - S). The closed forms below are written in precision-weighted
// form (sums of inverse conditional variances), which is what clearing gives
// when the belief matrices do not commute.

template <typename Scalar = double>
struct MultiParams {
    Vector<Scalar> d_bar;
    Matrix<Scalar> sigma_d;
    Matrix<Scalar> sigma_s;
    Matrix<Scalar> sigma_theta_true;
    Matrix<Scalar> sigma_theta_informed;
    Scalar alpha{};
    Scalar pi{};
    Scalar riskless_supply{};

    Eigen::Index n() const { return d_bar.size(); }
};

using MultiParamsd = MultiParams<double>;

template <typename Scalar = double>
struct MultiCoefficients {
    Vector<Scalar> d_bar;
    Vector<Scalar> A2, A1, A2_star, A1_star, S0;
    Matrix<Scalar> B2, B1, C2, C1, B2_star, B1_star, C1_star;
    Matrix<Scalar> var1_s2, var2_s2;  // Var_i(S_2 | F_1,i)
    Matrix<Scalar> var1_s1, var2_s1;  // Var_i(S_1 | F_0)
    Matrix<Scalar> beta_s, beta_xi;
};

using MultiCoefficientsd = MultiCoefficients<double>;

/// Covariance matrices of price changes ΔS_1 = S_1 - S_0, ΔS_2 = S_2 - S_1, ΔS_3 = D - S_2.
template <typename Scalar = double>
struct CrossMeasures {
    Matrix<Scalar> Gamma_m;  // (i,j) = Cov(ΔS_2,i, ΔS_1,j | D)
    Matrix<Scalar> Gamma_r;  // (i,j) = Cov(ΔS_2,i, ΔS_3,j | D)
    std::array<Matrix<Scalar>, 3> Gamma_c;  // Var(ΔS_t), t = 1..3, unconditional
    Matrix<Scalar> Gamma_m_unconditional;
    Matrix<Scalar> Gamma_r_unconditional;
};

namespace detail {

template <typename Scalar>
void check_square(const Matrix<Scalar>& m, Eigen::Index n, const char* name) {
    if (m.rows() != n || m.cols() != n)
        throw InvalidParam(name, "expected " + std::to_string(n) + "x" + std::to_string(n) + " matrix, got " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!m.allFinite()) throw InvalidParam(name, "entries must be finite");
}

template <typename Scalar>
void check_spd(const Matrix<Scalar>& m, const char* name) {
    using std::max;
    const Scalar scale = max(Scalar(1), m.cwiseAbs().maxCoeff());
    if (asymmetry(m) > Scalar(1e-10) * scale) throw InvalidParam(name, "must be symmetric");
    if (!(symmetric_eigenvalues(m).minCoeff() > Scalar(0))) throw InvalidParam(name, "must be positive definite");
}

}  // namespace detail

template <typename Scalar>
MultiParams<Scalar> validate_multi(const MultiParams<Scalar>& p, const ValidationOptions& opts = {}) {
    using std::isfinite;
    const Eigen::Index n = p.n();
    if (n < 1) throw InvalidParam("n", "need at least one risky asset");
    if (!p.d_bar.allFinite()) throw InvalidParam("d_bar", "entries must be finite");
    detail::check_square(p.sigma_d, n, "sigma_d");
    detail::check_square(p.sigma_s, n, "sigma_s");
    detail::check_square(p.sigma_theta_true, n, "sigma_theta_true");
    detail::check_square(p.sigma_theta_informed, n, "sigma_theta_informed");
    detail::check_spd(p.sigma_d, "sigma_d");
    detail::check_spd(p.sigma_s, "sigma_s");
    detail::check_spd(p.sigma_theta_true, "sigma_theta_true");
    detail::check_spd(p.sigma_theta_informed, "sigma_theta_informed");
    detail::require_positive(p.alpha, "alpha");
    if (!isfinite(p.pi) || p.pi < Scalar(opts.pi_min) || p.pi > Scalar(opts.pi_max))
        throw InvalidParam("pi", "must lie in [" + std::to_string(opts.pi_min) + ", " + std::to_string(opts.pi_max) + "]");
    if (!isfinite(p.riskless_supply) || p.riskless_supply < Scalar(0))
        throw InvalidParam("riskless_supply", "must be finite and non-negative");

    const Matrix<Scalar> delta = p.sigma_theta_informed - p.sigma_theta_true;
    const Scalar min_ev = symmetric_eigenvalues(delta).minCoeff();
    if (opts.allow_homogeneous) {
        const Scalar scale = std::max(Scalar(1), p.sigma_theta_true.cwiseAbs().maxCoeff());
        if (min_ev < -Scalar(1e-10) * scale)
            throw InvalidParam("sigma_theta_informed", "sigma_theta_informed - sigma_theta_true must be positive semi-definite");
    } else if (!(min_ev > Scalar(0))) {
        throw InvalidParam("sigma_theta_informed", "sigma_theta_informed - sigma_theta_true must be positive definite");
    }
    return p;
}

template <typename Scalar>
MultiParams<Scalar> informed_view(MultiParams<Scalar> p) {
    p.sigma_theta_true = p.sigma_theta_informed;
    return p;
}

template <typename Scalar>
MultiParams<Scalar> embed(const SingleParams<Scalar>& s) {
    MultiParams<Scalar> p;
    p.d_bar = Vector<Scalar>::Constant(1, s.d_bar);
    p.sigma_d = Matrix<Scalar>::Constant(1, 1, s.sigma_d2);
    p.sigma_s = Matrix<Scalar>::Constant(1, 1, s.sigma_s2);
    p.sigma_theta_true = Matrix<Scalar>::Constant(1, 1, s.sigma_theta2_true);
    p.sigma_theta_informed = Matrix<Scalar>::Constant(1, 1, s.sigma_theta2_informed);
    p.alpha = s.alpha;
    p.pi = s.pi;
    p.riskless_supply = s.riskless_supply;
    return p;
}

template <typename Scalar>
SingleParams<Scalar> reduce_to_single(const MultiParams<Scalar>& p) {
    if (p.n() != 1) throw WrongDimension("reduce_to_single needs n = 1, got n = " + std::to_string(p.n()));
    return {p.d_bar(0), p.sigma_d(0, 0), p.sigma_s(0, 0), p.sigma_theta_true(0, 0), p.sigma_theta_informed(0, 0),
            p.alpha, p.pi, p.riskless_supply};
}

namespace detail {

template <typename Scalar>
struct MultiPeriodTwo {
    Vector<Scalar> A2;
    Matrix<Scalar> B2, C2, beta_s, beta_xi, var1_d, var2_d;
};

template <typename Scalar>
struct MultiPeriodOne {
    Vector<Scalar> A1;
    Matrix<Scalar> B1, C1, var1_s2, var2_s2;
};

// Precision-weighted mix  (π P1 + (1-π) P2)⁻¹ (π P1 X1 + (1-π) P2 X2)  with P_i = V_i⁻¹.
template <typename Scalar>
struct PrecisionMix {
    Matrix<Scalar> p1, p2, total_inv;
    Scalar pi;

    PrecisionMix(const Matrix<Scalar>& v1, const Matrix<Scalar>& v2, Scalar pi_, const std::string& tag) : pi(pi_) {
        p1 = checked_inverse(v1, "Var_1(" + tag + ")");
        p2 = checked_inverse(v2, "Var_2(" + tag + ")");
        total_inv = checked_inverse(Matrix<Scalar>(pi * p1 + (1 - pi) * p2), "precision sum (" + tag + ")");
    }

    template <typename X1, typename X2>
    auto mix(const X1& x1, const X2& x2) const {
        return (total_inv * (pi * p1 * x1 + (1 - pi) * p2 * x2)).eval();
    }
};

template <typename Scalar>
MultiPeriodTwo<Scalar> solve_t2_multi(const MultiParams<Scalar>& p) {
    const Eigen::Index n = p.n();
    MultiPeriodTwo<Scalar> r;
    r.C2 = (p.alpha / p.pi) * p.sigma_s;
    const Matrix<Scalar> sigma_xi = p.sigma_s + r.C2 * p.sigma_theta_true * r.C2.transpose();

    // β = Σ_D (Σ_D + Σ_noise)⁻¹, the projection of D on the observed composite.
    r.beta_s = (p.sigma_d * checked_inverse(Matrix<Scalar>(p.sigma_d + p.sigma_s), "sigma_d + sigma_s")).eval();
    r.beta_xi = (p.sigma_d * checked_inverse(Matrix<Scalar>(p.sigma_d + sigma_xi), "sigma_d + sigma_xi")).eval();
    r.var1_d = r.beta_s * p.sigma_s;
    r.var2_d = r.beta_xi * sigma_xi;

    const PrecisionMix<Scalar> mix(r.var1_d, r.var2_d, p.pi, "D");
    r.B2 = mix.mix(r.beta_s, r.beta_xi);
    r.A2 = p.d_bar - p.alpha * (mix.total_inv * Vector<Scalar>::Ones(n));
    return r;
}

template <typename Scalar>
MultiPeriodOne<Scalar> solve_t1_multi(const MultiParams<Scalar>& p, const MultiPeriodTwo<Scalar>& t2,
                                      const MultiPeriodTwo<Scalar>& t2s) {
    const Eigen::Index n = p.n();
    MultiPeriodOne<Scalar> r;
    const Matrix<Scalar> loading_s = t2s.B2 * t2.C2;  // informed's view of S_2's Θ_2 loading
    const Matrix<Scalar> loading = t2.B2 * t2.C2;
    r.var1_s2 = loading_s * p.sigma_theta_informed * loading_s.transpose();
    r.var2_s2 = loading * p.sigma_theta_true * loading.transpose();

    const PrecisionMix<Scalar> mix(r.var1_s2, r.var2_s2, p.pi, "S_2");
    r.B1 = mix.mix(t2s.B2, t2.B2);
    r.C1 = (p.alpha / p.pi) * t2.C2 * p.sigma_theta_informed * t2.C2.transpose() * t2s.B2.transpose();
    r.A1 = mix.mix(t2s.A2, t2.A2) - p.alpha * (mix.total_inv * Vector<Scalar>::Ones(n));
    return r;
}

template <typename Scalar>
Matrix<Scalar> period_one_variance_multi(const MultiParams<Scalar>& p, const Matrix<Scalar>& B1, const Matrix<Scalar>& C1,
                                         const Matrix<Scalar>& sigma_theta) {
    return B1 * (p.sigma_d + p.sigma_s + C1 * sigma_theta * C1.transpose()) * B1.transpose();
}

}  // namespace detail

/// Matrix equilibrium. Throws SingularMatrix when an inverse is ill-conditioned (cond > 1e12).
template <typename Scalar>
MultiCoefficients<Scalar> equilibrium_multi(const MultiParams<Scalar>& p) {
    const Eigen::Index n = p.n();
    const MultiParams<Scalar> iv = informed_view(p);
    const auto t2 = detail::solve_t2_multi(p);
    const auto t2s = detail::solve_t2_multi(iv);
    const auto t1 = detail::solve_t1_multi(p, t2, t2s);
    const auto t1s = detail::solve_t1_multi(iv, t2s, t2s);

    MultiCoefficients<Scalar> c;
    c.d_bar = p.d_bar;
    c.A2 = t2.A2;
    c.B2 = t2.B2;
    c.C2 = t2.C2;
    c.A2_star = t2s.A2;
    c.B2_star = t2s.B2;
    c.A1 = t1.A1;
    c.B1 = t1.B1;
    c.C1 = t1.C1;
    c.A1_star = t1s.A1;
    c.B1_star = t1s.B1;
    c.C1_star = t1s.C1;
    c.var1_s2 = t1.var1_s2;
    c.var2_s2 = t1.var2_s2;
    c.var1_s1 = detail::period_one_variance_multi(p, t1s.B1, t1s.C1, p.sigma_theta_informed);
    c.var2_s1 = detail::period_one_variance_multi(p, t1.B1, t1.C1, p.sigma_theta_true);
    c.beta_s = t2.beta_s;
    c.beta_xi = t2.beta_xi;

    const detail::PrecisionMix<Scalar> mix(c.var1_s1, c.var2_s1, p.pi, "S_1");
    c.S0 = mix.mix(c.A1_star, c.A1) - p.alpha * (mix.total_inv * Vector<Scalar>::Ones(n));
    return c;
}

template <typename Scalar>
CrossMeasures<Scalar> cross_measures(const MultiCoefficients<Scalar>& c, const MultiParams<Scalar>& p) {
    const Matrix<Scalar>& B1 = c.B1;
    const Matrix<Scalar>& B2 = c.B2;
    const Matrix<Scalar> dB = B2 - B1;
    const Matrix<Scalar> var_s = p.sigma_d + p.sigma_s;
    const Matrix<Scalar> noise1 = B1 * c.C1 * p.sigma_theta_true * c.C1.transpose() * B1.transpose();
    const Matrix<Scalar> noise2 = B2 * c.C2 * p.sigma_theta_true * (B2 * c.C2).transpose();

    CrossMeasures<Scalar> m;
    m.Gamma_m = dB * p.sigma_s * B1.transpose() - noise1;
    m.Gamma_r = -dB * p.sigma_s * B2.transpose() - noise2;
    m.Gamma_m_unconditional = dB * var_s * B1.transpose() - noise1;
    m.Gamma_r_unconditional = dB * (p.sigma_d - var_s * B2.transpose()) - noise2;
    m.Gamma_c[0] = B1 * var_s * B1.transpose() + noise1;
    m.Gamma_c[1] = dB * var_s * dB.transpose() + noise2 + noise1;
    m.Gamma_c[2] = p.sigma_d - p.sigma_d * B2.transpose() - B2 * p.sigma_d + B2 * var_s * B2.transpose() + noise2;
    return m;
}

/// Expected price changes given a signal vector, split into the signal-driven
/// part (B_t - B_{t-1})(s - D̄) and the constant risk-premium drift.
template <typename Scalar = double>
struct SignalResponse {
    Vector<Scalar> drift_t1, drift_t2;
    Vector<Scalar> premium_t1, premium_t2;  // A_1 - S_0, A_2 - A_1
};

template <typename Scalar>
SignalResponse<Scalar> expected_drift(const MultiCoefficients<Scalar>& c, const Vector<Scalar>& s) {
    if (s.size() != c.d_bar.size())
        throw WrongDimension("signal has " + std::to_string(s.size()) + " entries for " + std::to_string(c.d_bar.size()) +
                             " assets");
    const Vector<Scalar> news = s - c.d_bar;
    SignalResponse<Scalar> r;
    r.drift_t1 = c.B1 * news;
    r.drift_t2 = (c.B2 - c.B1) * news;
    r.premium_t1 = c.A1 - c.S0;
    r.premium_t2 = c.A2 - c.A1;
    return r;
}

template <typename Scalar = double>
struct LeadLagReport {
    Vector<Scalar> signal;  // signal actually used (muted entries set to D̄)
    std::vector<bool> muted;
    SignalResponse<Scalar> response;
    Vector<Scalar> precision_ratio;  // σ²_s,m / (σ²_D,m + σ²_s,m); smaller is more informative
};

template <typename Scalar>
LeadLagReport<Scalar> leadlag_experiment(const MultiParams<Scalar>& p, const MultiCoefficients<Scalar>& c,
                                         const std::set<Eigen::Index>& muted, const Vector<Scalar>& s_active) {
    const Eigen::Index n = p.n();
    if (muted.empty()) throw InvalidMute("no asset muted");
    if (static_cast<Eigen::Index>(muted.size()) >= n) throw InvalidMute("every asset muted");
    for (auto i : muted)
        if (i < 0 || i >= n) throw InvalidMute("asset index " + std::to_string(i) + " out of range");
    if (s_active.size() != n) throw WrongDimension("s_active must have " + std::to_string(n) + " entries");

    LeadLagReport<Scalar> r;
    r.signal = s_active;
    r.muted.assign(static_cast<std::size_t>(n), false);
    for (auto i : muted) {
        r.signal(i) = p.d_bar(i);
        r.muted[static_cast<std::size_t>(i)] = true;
    }
    r.response = expected_drift(c, r.signal);
    r.precision_ratio = p.sigma_s.diagonal().cwiseQuotient(p.sigma_d.diagonal() + p.sigma_s.diagonal());
    return r;
}

template <typename Scalar>
LeadLagReport<Scalar> leadlag_experiment(const MultiParams<Scalar>& p, const std::set<Eigen::Index>& muted,
                                         const Vector<Scalar>& s_active) {
    return leadlag_experiment(p, equilibrium_multi(p), muted, s_active);
}

}  // namespace hbeq
