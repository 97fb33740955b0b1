#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "hbeq/errors.hpp"
#include "hbeq/model.hpp"

namespace hbeq {

// Prices are affine in the signal and the period's supply shock:
//
//   S_t = a_t + b_t (s - D̄ - c_t θ_t),   t = 1, 2,   S_3 = D,
//
// with c_t > 0, so a positive supply shock (supply 1 + θ_t) lowers the price.

template <typename Scalar = double>
struct PeriodTwo {
    Scalar a2{}, b2{}, c2{};
};

template <typename Scalar = double>
struct PeriodOne {
    Scalar a1{}, b1{}, c1{};
};

/// Solved price constants for both belief systems plus the ex-ante price.
template <typename Scalar = double>
struct EquilibriumCoefficients {
    Scalar d_bar{};
    Scalar a2{}, b2{}, c2{};
    Scalar a2_star{}, b2_star{};  // c2* == c2: c2 carries no supply variance
    Scalar a1{}, b1{}, c1{};
    Scalar a1_star{}, b1_star{}, c1_star{};
    Scalar s0{};
    Scalar var1_s2{}, var2_s2{};  // Var_i(S_2 | F_1,i)
    Scalar var1_s1{}, var2_s1{};  // Var_i(S_1 | F_0)
    Scalar beta_s{}, beta_xi{};

    friend bool operator==(const EquilibriumCoefficients&, const EquilibriumCoefficients&) = default;
};

using EquilibriumCoefficientsd = EquilibriumCoefficients<double>;

template <typename Scalar = double>
struct PricePath {
    Scalar s0{}, s1{}, s2{}, s3{};
};

template <typename Scalar = double>
struct PredictabilityMeasures {
    Scalar gamma_m{};          // Cov(S_2 - S_1, S_1 - S_0 | D)
    Scalar gamma_r{};          // Cov(D - S_2, S_2 - S_1 | D)
    bool momentum_holds{};     // gamma_m > 0
    Scalar condition_value{};  // π b2² σs² (b2 - b2*) - b1 c1², diagnostics only
    // The same covariances without conditioning on the payoff (Var(s) = σD² + σs²).
    Scalar gamma_m_unconditional{};
    Scalar gamma_r_unconditional{};
};

/// Period-2 constants. Throws Degenerate if the price carries no supply noise
/// (beta_s == beta_xi).
template <typename Scalar>
PeriodTwo<Scalar> solve_t2(const SingleParams<Scalar>& p) {
    const Scalar c2 = p.alpha * p.sigma_s2 / p.pi;
    const auto w = posterior_weights(p, c2);
    if (!(w.beta_s > w.beta_xi)) throw Degenerate("beta_s == beta_xi: price reveals the signal");

    // Conditional payoff variances of the informed and the uninformed.
    const Scalar var1_d = w.beta_s * p.sigma_s2;
    const Scalar var2_d = w.beta_xi * w.sigma_xi2;

    const Scalar num = p.pi * w.beta_xi * w.sigma_xi2 * w.beta_s + (1 - p.pi) * w.beta_s * p.sigma_s2 * w.beta_xi;
    const Scalar den = p.pi * w.beta_xi * w.sigma_xi2 + (1 - p.pi) * w.beta_s * p.sigma_s2;
    const Scalar b2 = num / den;

    // Constant term of the clearing condition: (D̄ - a2)(π/V1 + (1-π)/V2) = α.
    const Scalar a2 = p.d_bar - p.alpha * var1_d * var2_d / (p.pi * var2_d + (1 - p.pi) * var1_d);
    return {a2, b2, c2};
}

/// Period-1 constants from the true and informed-view period-2 solutions.
template <typename Scalar>
PeriodOne<Scalar> solve_t1(const SingleParams<Scalar>& p, const PeriodTwo<Scalar>& t2, const PeriodTwo<Scalar>& t2_star) {
    const Scalar c2 = t2.c2;
    const Scalar th = p.sigma_theta2_true;
    const Scalar th1 = p.sigma_theta2_informed;
    const Scalar b2 = t2.b2;
    const Scalar b2s = t2_star.b2;

    const Scalar b1 = (p.pi * b2 * b2 * th * b2s + (1 - p.pi) * b2s * b2s * th1 * b2) /
                      (p.pi * b2 * b2 * th + (1 - p.pi) * b2s * b2s * th1);
    const Scalar c1 = p.alpha * b2s * c2 * c2 * th1 / p.pi;

    const Scalar w1 = b2s * b2s * c2 * c2 * th1;  // Var_1(S_2)
    const Scalar w2 = b2 * b2 * c2 * c2 * th;     // Var_2(S_2)
    const Scalar den = p.pi * w2 + (1 - p.pi) * w1;
    using std::isfinite;
    if (!(den > Scalar(0)) || !isfinite(den)) throw Degenerate("period-1 precision weights vanish");
    const Scalar a1 = (p.pi * w2 * t2_star.a2 + (1 - p.pi) * w1 * t2.a2 - p.alpha * w1 * w2) / den;
    return {a1, b1, c1};
}

/// Unconditional variance of S_1 at t = 0 under a belief with supply variance `theta2`.
template <typename Scalar>
Scalar period_one_variance(const SingleParams<Scalar>& p, const PeriodOne<Scalar>& t1, Scalar theta2) {
    return t1.b1 * t1.b1 * (p.sigma_d2 + p.sigma_s2 + t1.c1 * t1.c1 * theta2);
}

/// Ex-ante price: variance-weighted mix of the two beliefs' expected S_1 less a risk premium.
template <typename Scalar>
Scalar solve_t0(const SingleParams<Scalar>& p, const PeriodOne<Scalar>& t1, const PeriodOne<Scalar>& t1_star) {
    const Scalar v1 = period_one_variance(p, t1_star, p.sigma_theta2_informed);
    const Scalar v2 = period_one_variance(p, t1, p.sigma_theta2_true);
    return (p.pi * v2 * t1_star.a1 + (1 - p.pi) * v1 * t1.a1 - p.alpha * v1 * v2) / (p.pi * v2 + (1 - p.pi) * v1);
}

/// Full equilibrium. `p` is assumed valid (see validate_single).
template <typename Scalar>
EquilibriumCoefficients<Scalar> equilibrium(const SingleParams<Scalar>& p) {
    const SingleParams<Scalar> iv = informed_view(p);
    const PeriodTwo<Scalar> t2 = solve_t2(p);
    const PeriodTwo<Scalar> t2s = solve_t2(iv);
    const PeriodOne<Scalar> t1 = solve_t1(p, t2, t2s);
    const PeriodOne<Scalar> t1s = solve_t1(iv, t2s, t2s);

    EquilibriumCoefficients<Scalar> c;
    c.d_bar = p.d_bar;
    c.a2 = t2.a2;
    c.b2 = t2.b2;
    c.c2 = t2.c2;
    c.a2_star = t2s.a2;
    c.b2_star = t2s.b2;
    c.a1 = t1.a1;
    c.b1 = t1.b1;
    c.c1 = t1.c1;
    c.a1_star = t1s.a1;
    c.b1_star = t1s.b1;
    c.c1_star = t1s.c1;
    c.s0 = solve_t0(p, t1, t1s);
    c.var1_s2 = t2s.b2 * t2s.b2 * t2.c2 * t2.c2 * p.sigma_theta2_informed;
    c.var2_s2 = t2.b2 * t2.b2 * t2.c2 * t2.c2 * p.sigma_theta2_true;
    c.var1_s1 = period_one_variance(p, t1s, p.sigma_theta2_informed);
    c.var2_s1 = period_one_variance(p, t1, p.sigma_theta2_true);
    const auto w = posterior_weights(p, t2.c2);
    c.beta_s = w.beta_s;
    c.beta_xi = w.beta_xi;
    return c;
}

template <typename Scalar>
PricePath<Scalar> price_path(const EquilibriumCoefficients<Scalar>& c, const WorldRealization<Scalar>& w) {
    PricePath<Scalar> path;
    path.s0 = c.s0;
    path.s1 = c.a1 + c.b1 * (w.s - c.d_bar - c.c1 * w.theta1);
    path.s2 = c.a2 + c.b2 * (w.s - c.d_bar - c.c2 * w.theta2);
    path.s3 = w.d;
    return path;
}

template <typename Scalar>
PredictabilityMeasures<Scalar> measures(const EquilibriumCoefficients<Scalar>& c, const SingleParams<Scalar>& p) {
    const Scalar ss = p.sigma_s2;
    const Scalar th = p.sigma_theta2_true;
    const Scalar db = c.b2 - c.b1;
    const Scalar var_s = p.sigma_d2 + p.sigma_s2;

    PredictabilityMeasures<Scalar> m;
    m.gamma_m = db * c.b1 * ss - c.b1 * c.b1 * c.c1 * c.c1 * th;
    m.gamma_r = -c.b2 * db * ss - c.b2 * c.b2 * c.c2 * c.c2 * th;
    m.momentum_holds = m.gamma_m > Scalar(0);
    m.condition_value = p.pi * c.b2 * c.b2 * ss * (c.b2 - c.b2_star) - c.b1 * c.c1 * c.c1;
    m.gamma_m_unconditional = db * c.b1 * var_s - c.b1 * c.b1 * c.c1 * c.c1 * th;
    m.gamma_r_unconditional = db * (p.sigma_d2 - c.b2 * var_s) - c.b2 * c.b2 * c.c2 * c.c2 * th;
    return m;
}

enum class MeasureTarget { gamma_m, gamma_r };
enum class StaticParam { pi, delta_sigma_theta2, sigma_theta2, sigma_s2, alpha };

inline std::optional<MeasureTarget> parse_measure_target(std::string_view s) {
    if (s == "gamma_m") return MeasureTarget::gamma_m;
    if (s == "gamma_r") return MeasureTarget::gamma_r;
    return std::nullopt;
}

inline std::optional<StaticParam> parse_static_param(std::string_view s) {
    if (s == "pi") return StaticParam::pi;
    if (s == "delta_sigma_theta2") return StaticParam::delta_sigma_theta2;
    if (s == "sigma_theta2") return StaticParam::sigma_theta2;
    if (s == "sigma_s2") return StaticParam::sigma_s2;
    if (s == "alpha") return StaticParam::alpha;
    return std::nullopt;
}

namespace detail {

template <typename Scalar>
Scalar static_coordinate(const SingleParams<Scalar>& p, StaticParam wrt) {
    switch (wrt) {
        case StaticParam::pi: return p.pi;
        case StaticParam::delta_sigma_theta2: return p.sigma_theta2_informed - p.sigma_theta2_true;
        case StaticParam::sigma_theta2: return p.sigma_theta2_true;
        case StaticParam::sigma_s2: return p.sigma_s2;
        case StaticParam::alpha: return p.alpha;
    }
    return Scalar(0);
}

// sigma_theta2 shifts both beliefs so that the heterogeneity Δσθ² stays fixed;
// delta_sigma_theta2 moves only the informed belief.
template <typename Scalar>
SingleParams<Scalar> shift_static(SingleParams<Scalar> p, StaticParam wrt, Scalar dx) {
    switch (wrt) {
        case StaticParam::pi: p.pi += dx; break;
        case StaticParam::delta_sigma_theta2: p.sigma_theta2_informed += dx; break;
        case StaticParam::sigma_theta2:
            p.sigma_theta2_true += dx;
            p.sigma_theta2_informed += dx;
            break;
        case StaticParam::sigma_s2: p.sigma_s2 += dx; break;
        case StaticParam::alpha: p.alpha += dx; break;
    }
    return p;
}

template <typename Scalar>
Scalar target_value(const SingleParams<Scalar>& p, MeasureTarget target) {
    const auto m = measures(equilibrium(p), p);
    return target == MeasureTarget::gamma_m ? m.gamma_m : m.gamma_r;
}

}  // namespace detail

/// Central difference (f(x+h) - f(x-h)) / 2h of a predictability measure.
/// A non-positive `h` selects the default 1e-5 * max(1, |x|).
template <typename Scalar>
Scalar comparative_static(const SingleParams<Scalar>& p, MeasureTarget target, StaticParam wrt, Scalar h = Scalar(0),
                          const ValidationOptions& opts = {}) {
    using std::abs;
    using std::max;
    if (!(h > Scalar(0))) h = Scalar(1e-5) * max(Scalar(1), abs(detail::static_coordinate(p, wrt)));

    const auto up = detail::shift_static(p, wrt, h);
    const auto dn = detail::shift_static(p, wrt, -h);
    try {
        validate_single(up, opts);
        validate_single(dn, opts);
    } catch (const InvalidParam& e) {
        throw InvalidPerturbation(e.what());
    }
    return (detail::target_value(up, target) - detail::target_value(dn, target)) / (2 * h);
}

}  // namespace hbeq
