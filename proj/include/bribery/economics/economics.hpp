// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bribery::economics {

/// Monetary amounts carry their unit in the type.
template <class Tag>
struct Amount {
  double value = 0;

  constexpr Amount operator+(Amount o) const { return {value + o.value}; }
  constexpr Amount operator-(Amount o) const { return {value - o.value}; }
  constexpr Amount operator*(double s) const { return {value * s}; }
  constexpr Amount operator/(double s) const { return {value / s}; }
  constexpr double operator/(Amount o) const { return value / o.value; }
  Amount& operator+=(Amount o) {
    value += o.value;
    return *this;
  }
  constexpr auto operator<=>(const Amount&) const = default;
};
template <class Tag>
constexpr Amount<Tag> operator*(double s, Amount<Tag> a) {
  return a * s;
}

struct EthTag {};
struct UsdTag {};
using Eth = Amount<EthTag>;
using Usd = Amount<UsdTag>;

struct EconConfig {
  double discount_rate = 0.08;
  double horizon_years = 9;
  double eth_usd = 4478.1;
  double protocol_constant = 2940.21;
  double mev_constant = 1078543.3;
  double stake_per_validator = 32;
  std::uint64_t churn_per_epoch = 8;
  double epochs_per_day = 225;
  double p_boost = 0.4;

  void validate() const;
};

inline Usd to_usd(Eth e, const EconConfig& c) { return {e.value * c.eth_usd}; }

/// Annual reward index per validator with n active validators.
Eth annual_reward(std::uint64_t n, const EconConfig& c = {});
/// Finite annuity factor with the percent-to-fraction /100.
double pv_multiplier(double r, double years);
double perpetuity_multiplier(double r);
double half_life(double r);
double pv_multiplier(const EconConfig& c);

/// Exits needed so a fixed briber stake of alpha * N reaches alpha_star.
std::uint64_t required_exits(std::uint64_t n, double alpha, double alpha_star);

struct BribeBounds {
  Eth lower;
  Eth upper;
};
BribeBounds bribe_bounds(std::uint64_t n, std::uint64_t k, const EconConfig& c = {});

struct LeaderUtility {
  Eth gain;        // g(k)
  Eth cost;        // k * b
  Eth break_even;  // exogenous profit needed for a non-negative utility
  std::optional<Eth> utility;
};
LeaderUtility leader_utility(std::uint64_t n, double alpha, std::uint64_t k, Eth bribe,
                             std::optional<Eth> exogenous = std::nullopt, const EconConfig& c = {});

enum class Action { Exit, Stay };
/// Value to one rational validator when k - 1 others exit.
Eth follower_utility(std::uint64_t n, std::uint64_t k, Eth bribe, Action a, const EconConfig& c = {});
/// True when exactly k of the `rational` followers exiting is stable under
/// unilateral deviations at bribe b.
bool exits_stable(std::uint64_t n, std::uint64_t rational, std::uint64_t k, Eth bribe, const EconConfig& c = {});

double exit_duration_days(std::uint64_t k, std::uint64_t churn_per_epoch = 8, double epochs_per_day = 225);

struct GameParams {
  std::uint64_t n = 0;
  double alpha = 0;
  double alpha_star = 0;
  double beta = 1;
  std::uint64_t rational() const;
};

struct EquilibriumResult {
  std::uint64_t k = 0;
  BribeBounds bounds;
  Eth bribe;  // chosen at the upper bound
  Usd bribe_usd;
  LeaderUtility leader;
  double duration_days = 0;
  bool sufficient_rational = true;
};
EquilibriumResult solve_equilibrium(const GameParams& g, const EconConfig& c = {});

/// Area under the marginal-bribe curve for k exits.
Eth dynamic_bribe_total(std::uint64_t n, std::uint64_t k, const EconConfig& c = {});

/// Per-attestation head reward at stake s_eth, in ETH.
Eth head_reward(double s_eth);
/// Bribe for one committee in the H A A ex-post reorg, or nothing when the
/// reorg is infeasible at (alpha, beta).
std::optional<Eth> paytoattest_cost(std::uint64_t n, double s_eth, double alpha, double beta, const EconConfig& c = {});
/// Smallest beta for the H A A reorg, clamped to [0, 1].
double feasibility_boundary(double alpha, double p_boost = 0.4);

struct HeatCell {
  double alpha = 0;
  double y = 0;  // beta or alpha*
  double value = 0;
  bool feasible = false;
};

/// value(i) = lo + i (hi - lo) / (n - 1).
std::vector<double> axis(double lo, double hi, std::size_t n);

std::vector<HeatCell> expost_cost_grid(std::uint64_t n, double s_eth, const std::vector<double>& alphas,
                                       const std::vector<double>& betas, const EconConfig& c = {},
                                       unsigned threads = 0);
/// Total upper-bound bribe k* b* in USD per cell.
std::vector<HeatCell> exit_bribe_grid(std::uint64_t n, const std::vector<double>& alphas,
                                      const std::vector<double>& alpha_stars, const EconConfig& c = {},
                                      unsigned threads = 0);
std::vector<HeatCell> exit_duration_grid(std::uint64_t n, const std::vector<double>& alphas,
                                         const std::vector<double>& alpha_stars, const EconConfig& c = {},
                                         unsigned threads = 0);

std::string to_csv(const std::vector<HeatCell>& cells);

}  // namespace bribery::economics
