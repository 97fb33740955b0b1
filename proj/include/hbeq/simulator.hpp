#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hbeq/linalg.hpp"
#include "hbeq/model.hpp"
#include "hbeq/multi_asset.hpp"
#include "hbeq/random.hpp"
#include "hbeq/single_asset.hpp"

namespace hbeq {

// Monte Carlo check of the closed forms. Worlds are drawn from the true
// distribution (supply shocks use the true variance); agents' demands come
// from their own first-order conditions using only their information sets.
// Prices are the analytic ones: the simulator verifies, it does not search.

struct SimConfig {
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    std::uint64_t batch_size = 0;
    unsigned threads = 1;  // batches may run in parallel; results do not depend on this
};

/// Throws InvalidParam unless n_paths >= 1 and 1 <= batch_size <= n_paths.
void validate_sim(const SimConfig& cfg);

enum class AgentType { informed, uninformed };

struct Estimate {
    double value = std::nan("");
    double se = std::nan("");
};

struct WealthStats {
    double mean = 0;
    double variance = 0;
};

/// Sampled counterparts of the predictability measures.
///
/// `gamma_m`/`gamma_r` are conditional on the payoff, estimated from paired
/// worlds that share D and differ in (s, θ1, θ2): ½(X - X')(Y - Y') per path.
/// The `_unconditional` estimates are plain sample covariances of the first
/// world of each pair. Standard errors come from the per-path products.
struct SampleMoments {
    std::uint64_t n_paths = 0;
    Estimate gamma_m, gamma_r;
    Estimate gamma_m_unconditional, gamma_r_unconditional;
    double clearing_residual_max = 0;  // max |π x1 + (1-π) x2 - supply| over paths, t = 0, 1, 2
    double budget_residual_max = 0;    // aggregate wealth vs. supply-weighted price changes
    double mean_payoff = 0;
    // Terminal wealth W_3 per type; W_0 = S_0 + B per capita (reporting convention).
    WealthStats wealth_informed, wealth_uninformed;
};

struct MatrixEstimate {
    Matrixd value, se;
};

struct MultiSampleMoments {
    std::uint64_t n_paths = 0;
    MatrixEstimate gamma_m, gamma_r;
    MatrixEstimate gamma_m_unconditional, gamma_r_unconditional;
    double clearing_residual_max = 0;  // max-norm
    double budget_residual_max = 0;
    Vectord mean_payoff;
    // W_0 = 1'S_0 + B per capita.
    WealthStats wealth_informed, wealth_uninformed;
};

/// One simulated path, for dumps and per-path identity checks.
struct PathRecord {
    std::uint64_t index = 0;
    WorldRealization<double> world;
    PricePath<double> prices;
    double x_informed[3] = {0, 0, 0};
    double x_uninformed[3] = {0, 0, 0};
    double w_informed[4] = {0, 0, 0, 0};
    double w_uninformed[4] = {0, 0, 0, 0};
};

template <typename Rng>
double standard_normal(Rng& rng) {
    std::normal_distribution<double> n01;
    return n01(rng);
}

/// Payoff-conditional draw: s ~ N(d, σs²), θ_t ~ N(0, σθ²) with the true variance.
template <typename Rng>
WorldRealization<double> draw_world_given_payoff(const SingleParamsd& p, double d, Rng& rng) {
    WorldRealization<double> w;
    w.d = d;
    w.s = d + std::sqrt(p.sigma_s2) * standard_normal(rng);
    w.theta1 = std::sqrt(p.sigma_theta2_true) * standard_normal(rng);
    w.theta2 = std::sqrt(p.sigma_theta2_true) * standard_normal(rng);
    return w;
}

template <typename Rng>
WorldRealization<double> draw_world(const SingleParamsd& p, Rng& rng) {
    const double d = p.d_bar + std::sqrt(p.sigma_d2) * standard_normal(rng);
    return draw_world_given_payoff(p, d, rng);
}

/// Informed CARA demand at t ∈ {0, 1, 2}; sees the signal and past prices.
double informed_demand(int t, double signal, const PricePath<double>& prices, const EquilibriumCoefficientsd& c,
                       const SingleParamsd& p);

/// Uninformed CARA demand at t ∈ {0, 1, 2}; sees prices only.
double uninformed_demand(int t, const PricePath<double>& prices, const EquilibriumCoefficientsd& c, const SingleParamsd& p);

/// x_t = (E_t(S_{t+1}) - S_t) / (α Var_t(S_{t+1})) for the given type. Throws
/// ZeroVariance if the conditional variance underflows, InvalidParam for t ∉ {0,1,2}.
double agent_demand(AgentType type, int t, const WorldRealization<double>& world, const PricePath<double>& prices,
                    const EquilibriumCoefficientsd& c, const SingleParamsd& p);

inline double supply(int t, const WorldRealization<double>& w) {
    return t == 1 ? 1 + w.theta1 : t == 2 ? 1 + w.theta2 : 1.0;
}

PathRecord simulate_path(const SingleParamsd& p, const EquilibriumCoefficientsd& c, std::uint64_t seed, std::uint64_t index);

SampleMoments simulate(const SingleParamsd& p, const EquilibriumCoefficientsd& c, const SimConfig& cfg);

std::vector<PathRecord> simulate_paths(const SingleParamsd& p, const EquilibriumCoefficientsd& c, std::uint64_t seed,
                                       std::uint64_t count);

// Multi-asset counterparts.

struct MultiWorld {
    Vectord d, s, theta1, theta2;
};

struct MultiPricePath {
    Vectord s0, s1, s2, s3;
};

MultiPricePath price_path(const MultiCoefficientsd& c, const MultiWorld& w);

/// Demand vectors for both types; inverses of the conditional variances are
/// computed once. Construction throws SingularMatrix/ZeroVariance.
class MultiAgents {
public:
    MultiAgents(const MultiParamsd& p, const MultiCoefficientsd& c);

    Vectord demand(AgentType type, int t, const MultiWorld& world, const MultiPricePath& prices) const;

private:
    MultiParamsd p_;
    MultiCoefficientsd c_;
    Matrixd b1_inv_;
    Matrixd prec_informed_[3], prec_uninformed_[3];  // (α Var_t)⁻¹
    Matrixd beta_s_, beta_xi_;
    Matrixd b2_inv_;
};

Vectord agent_demand(AgentType type, int t, const MultiWorld& world, const MultiPricePath& prices,
                     const MultiCoefficientsd& c, const MultiParamsd& p);

/// Cholesky factors used to draw correlated normals.
struct MultiSampler {
    explicit MultiSampler(const MultiParamsd& p);

    template <typename Rng>
    Vectord normal(const Matrixd& chol, Rng& rng) const {
        Vectord z(chol.rows());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
        return chol * z;
    }

    template <typename Rng>
    MultiWorld draw_given_payoff(const Vectord& d, Rng& rng) const {
        MultiWorld w;
        w.d = d;
        w.s = d + normal(l_s, rng);
        w.theta1 = normal(l_theta, rng);
        w.theta2 = normal(l_theta, rng);
        return w;
    }

    template <typename Rng>
    MultiWorld draw(Rng& rng) const {
        return draw_given_payoff(Vectord(d_bar + normal(l_d, rng)), rng);
    }

    Vectord d_bar;
    Matrixd l_d, l_s, l_theta;
};

MultiSampleMoments simulate_multi(const MultiParamsd& p, const MultiCoefficientsd& c, const SimConfig& cfg);

}  // namespace hbeq
