#pragma once

#include <cmath>
#include <string>

#include "hbeq/errors.hpp"

namespace hbeq {

/// Scalar primitives of the one-risky-asset economy.
///
/// Two agent types: a mass `pi` of informed agents who see the signal s and
/// believe the supply shock variance is `sigma_theta2_informed`, and a mass
/// 1 - pi of uninformed agents who learn only from prices and hold the true
/// belief `sigma_theta2_true`.
template <typename Scalar = double>
struct SingleParams {
    Scalar d_bar{};                  // ex-ante mean payoff
    Scalar sigma_d2{};               // payoff variance
    Scalar sigma_s2{};               // signal noise variance
    Scalar sigma_theta2_true{};      // true supply-shock variance (the uninformed's belief)
    Scalar sigma_theta2_informed{};  // the informed's (overstated) supply-shock variance
    Scalar alpha{};                  // CARA risk aversion
    Scalar pi{};                     // informed mass
    Scalar riskless_supply{};        // B; stored, never priced

    template <typename Other>
    SingleParams<Other> cast() const {
        return {Other(d_bar),          Other(sigma_d2), Other(sigma_s2), Other(sigma_theta2_true),
                Other(sigma_theta2_informed), Other(alpha), Other(pi), Other(riskless_supply)};
    }

    friend bool operator==(const SingleParams&, const SingleParams&) = default;
};

using SingleParamsd = SingleParams<double>;

struct ValidationOptions {
    bool allow_homogeneous = false;  // permit sigma_theta2_informed == sigma_theta2_true
    double pi_min = 0.01;
    double pi_max = 0.99;
};

/// Normal-projection weights of the payoff on the signal (beta_s) and on the
/// price-inferred composite xi = s - D̄ - c2 θ2 (beta_xi).
template <typename Scalar = double>
struct PosteriorWeights {
    Scalar beta_s{};
    Scalar beta_xi{};
    Scalar sigma_xi2{};  // sigma_s2 + c2^2 sigma_theta2
};

/// One draw of the exogenous state.
template <typename Scalar = double>
struct WorldRealization {
    Scalar d{};
    Scalar s{};
    Scalar theta1{};
    Scalar theta2{};
};

namespace detail {

template <typename Scalar>
void require_positive(Scalar v, const char* name) {
    using std::isfinite;
    if (!isfinite(v)) throw InvalidParam(name, "must be finite");
    if (!(v > Scalar(0))) throw InvalidParam(name, "must be strictly positive");
}

}  // namespace detail

/// Returns `raw` unchanged when every invariant holds, throws InvalidParam otherwise.
template <typename Scalar>
SingleParams<Scalar> validate_single(const SingleParams<Scalar>& raw, const ValidationOptions& opts = {}) {
    using std::isfinite;
    if (!isfinite(raw.d_bar)) throw InvalidParam("d_bar", "must be finite");
    detail::require_positive(raw.sigma_d2, "sigma_d2");
    detail::require_positive(raw.sigma_s2, "sigma_s2");
    detail::require_positive(raw.sigma_theta2_true, "sigma_theta2_true");
    detail::require_positive(raw.sigma_theta2_informed, "sigma_theta2_informed");
    detail::require_positive(raw.alpha, "alpha");
    if (!isfinite(raw.pi) || raw.pi < Scalar(opts.pi_min) || raw.pi > Scalar(opts.pi_max))
        throw InvalidParam("pi", "must lie in [" + std::to_string(opts.pi_min) + ", " + std::to_string(opts.pi_max) + "]");
    if (!isfinite(raw.riskless_supply) || raw.riskless_supply < Scalar(0))
        throw InvalidParam("riskless_supply", "must be finite and non-negative");

    if (raw.sigma_theta2_informed < raw.sigma_theta2_true)
        throw InvalidParam("sigma_theta2_informed", "must exceed sigma_theta2_true");
    if (raw.sigma_theta2_informed == raw.sigma_theta2_true && !opts.allow_homogeneous)
        throw InvalidParam("sigma_theta2_informed",
                           "equals sigma_theta2_true (homogeneous beliefs need --allow-homogeneous)");
    return raw;
}

/// The economy as the informed agents see it: every occurrence of the true
/// supply variance replaced by their belief. Starred coefficients are the
/// ordinary formulas evaluated on this parameter set.
template <typename Scalar>
SingleParams<Scalar> informed_view(SingleParams<Scalar> p) {
    p.sigma_theta2_true = p.sigma_theta2_informed;
    return p;
}

template <typename Scalar>
PosteriorWeights<Scalar> posterior_weights(const SingleParams<Scalar>& p, Scalar c2) {
    PosteriorWeights<Scalar> w;
    w.beta_s = p.sigma_d2 / (p.sigma_d2 + p.sigma_s2);
    w.sigma_xi2 = p.sigma_s2 + c2 * c2 * p.sigma_theta2_true;
    w.beta_xi = p.sigma_d2 / (p.sigma_d2 + w.sigma_xi2);
    return w;
}

}  // namespace hbeq
