#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hbeq/model.hpp"
#include "hbeq/multi_asset.hpp"

namespace hbeq {

// Randomized invariant suites. Each check returns a CheckOutcome; checks marked
// `asserted = false` are findings that are reported but never fail the run.

/// P0 from the test plan: D̄=100, σD²=4, σs²=1, σθ²=1, σθ1²=4, α=0.5, π=0.5.
SingleParamsd designated_p0();
/// P0 with α=0.1, where momentum appears.
SingleParamsd designated_p_mom();

struct BatteryOptions {
    std::uint64_t seed = 20240611;
    int single_sets = 1000;
    int worlds = 100;  // per single-asset set, for the clearing identity
    int multi_sets = 200;
    int decoupled_sets = 50;
    double clearing_tol = 1e-8;  // relative residual allowed by the clearing identities
};

struct CheckOutcome {
    std::string name;
    bool asserted = true;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    double worst = 0;  // worst residual or smallest margin seen; see `note`
    std::string note;

    bool passed() const { return !asserted || failures == 0; }
};

struct BatteryReport {
    std::vector<CheckOutcome> checks;
    bool passed() const;
};

/// Log-uniform variances on [0.1, 10], α ∈ [0.05, 2], π ∈ [0.1, 0.9],
/// σθ1²/σθ² ∈ (1, 10], D̄ ∈ [-100, 100].
SingleParamsd random_single(std::mt19937_64& rng);
/// n assets, each covariance A Aᵀ/n + 0.1 I with standard normal A; the
/// informed belief adds another such matrix to Σθ. D̄ entries in [-1, 1].
MultiParamsd random_multi(std::mt19937_64& rng, Eigen::Index n);

std::vector<SingleParamsd> single_suite(std::uint64_t seed, int count);
/// n cycles through 2, 3, 4.
std::vector<MultiParamsd> multi_suite(std::uint64_t seed, int count);

CheckOutcome check_reversal(const std::vector<SingleParamsd>& sets);
CheckOutcome check_ordering(const std::vector<SingleParamsd>& sets);
CheckOutcome check_clearing(const std::vector<SingleParamsd>& sets, int worlds, std::uint64_t seed, double tol = 1e-8);
CheckOutcome check_collapse(std::uint64_t seed, int count);
CheckOutcome check_regimes(const std::vector<SingleParamsd>& sets);
CheckOutcome check_embedding(const std::vector<SingleParamsd>& sets);
CheckOutcome check_decoupling(std::uint64_t seed, int count);
CheckOutcome check_reversal_multi(const std::vector<MultiParamsd>& sets);
CheckOutcome check_clearing_multi(const std::vector<MultiParamsd>& sets, int worlds, std::uint64_t seed,
                                  double tol = 1e-8);

// Findings.
CheckOutcome finding_sign_agreement(const std::vector<SingleParamsd>& sets);
std::vector<CheckOutcome> finding_static_signs(const std::vector<SingleParamsd>& sets);
std::vector<CheckOutcome> finding_designated_statics();
CheckOutcome finding_comovement_pd(const std::vector<MultiParamsd>& sets);
std::vector<CheckOutcome> finding_multi_ordering(const std::vector<MultiParamsd>& sets);
CheckOutcome finding_gamma_m_psd(const std::vector<MultiParamsd>& sets);

BatteryReport run_battery(const BatteryOptions& opts = {});

}  // namespace hbeq
