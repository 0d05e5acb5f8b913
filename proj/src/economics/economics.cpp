// SPDX-License-Identifier: Apache-2.0
#include "bribery/economics/economics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bribery/util/parallel.hpp"

namespace bribery::economics {

void EconConfig::validate() const {
  if (!(discount_rate > 0)) throw std::invalid_argument("discount rate must be positive");
  if (!(horizon_years >= 1)) throw std::invalid_argument("horizon must be at least one year");
  if (churn_per_epoch < 1) throw std::invalid_argument("churn must be at least 1");
  if (!(epochs_per_day > 0)) throw std::invalid_argument("epochs per day must be positive");
  if (!(eth_usd > 0)) throw std::invalid_argument("ETH/USD rate must be positive");
}

Eth annual_reward(std::uint64_t n, const EconConfig& c) {
  if (n == 0) throw std::invalid_argument("annual_reward: no validators");
  const double x = static_cast<double>(n);
  return {c.stake_per_validator * (c.protocol_constant / std::sqrt(x) + c.mev_constant / x)};
}

double pv_multiplier(double r, double years) {
  if (!(r > 0)) throw std::invalid_argument("discount rate must be positive");
  return (1 - std::pow(1 + r, -years)) / (100 * r);
}

double perpetuity_multiplier(double r) {
  if (!(r > 0)) throw std::invalid_argument("discount rate must be positive");
  return 1 / (100 * r);
}

double half_life(double r) {
  if (!(r > 0)) throw std::invalid_argument("discount rate must be positive");
  return std::log(2.0) / std::log1p(r);
}

double pv_multiplier(const EconConfig& c) { return pv_multiplier(c.discount_rate, c.horizon_years); }

std::uint64_t required_exits(std::uint64_t n, double alpha, double alpha_star) {
  if (!(alpha_star > 0)) throw std::invalid_argument("alpha* must be positive");
  if (alpha > alpha_star) throw std::invalid_argument("alpha must not exceed alpha*");
  const double k = static_cast<double>(n) * (1 - alpha / alpha_star);
  // Guard against 317982.0000001 style noise before the ceiling.
  const double r = std::round(k);
  return static_cast<std::uint64_t>(std::abs(k - r) < 1e-6 ? r : std::ceil(k));
}

BribeBounds bribe_bounds(std::uint64_t n, std::uint64_t k, const EconConfig& c) {
  if (k >= n) throw std::invalid_argument("bribe_bounds: k must be below N");
  const double pv = pv_multiplier(c);
  return {annual_reward(n - k + 1, c) * pv, annual_reward(n - k, c) * pv};
}

LeaderUtility leader_utility(std::uint64_t n, double alpha, std::uint64_t k, Eth bribe, std::optional<Eth> exogenous,
                             const EconConfig& c) {
  LeaderUtility u;
  const double pv = pv_multiplier(c);
  u.gain = (annual_reward(n - k, c) - annual_reward(n, c)) * (alpha * static_cast<double>(n) * pv);
  u.cost = bribe * static_cast<double>(k);
  u.break_even = u.cost - u.gain;
  if (exogenous) u.utility = u.gain + *exogenous - u.cost;
  return u;
}

Eth follower_utility(std::uint64_t n, std::uint64_t k, Eth bribe, Action a, const EconConfig& c) {
  if (a == Action::Exit) return bribe;
  if (k == 0) throw std::invalid_argument("follower_utility: k must be at least 1");
  return annual_reward(n - k + 1, c) * pv_multiplier(c);
}

bool exits_stable(std::uint64_t n, std::uint64_t rational, std::uint64_t k, Eth bribe, const EconConfig& c) {
  if (k > rational) return false;
  // An exiter who stays leaves k - 1 exits; a stayer who exits makes k + 1.
  if (k > 0 && follower_utility(n, k, bribe, Action::Stay, c) > bribe) return false;
  if (k < rational && annual_reward(n - k, c) * pv_multiplier(c) < bribe) return false;
  return true;
}

double exit_duration_days(std::uint64_t k, std::uint64_t churn_per_epoch, double epochs_per_day) {
  if (churn_per_epoch < 1) throw std::invalid_argument("churn must be at least 1");
  return static_cast<double>(k) / (static_cast<double>(churn_per_epoch) * epochs_per_day);
}

std::uint64_t GameParams::rational() const {
  return static_cast<std::uint64_t>(std::floor((1 - alpha) * beta * static_cast<double>(n)));
}

EquilibriumResult solve_equilibrium(const GameParams& g, const EconConfig& c) {
  c.validate();
  EquilibriumResult r;
  r.k = required_exits(g.n, g.alpha, g.alpha_star);
  r.sufficient_rational = r.k <= g.rational();
  r.bounds = bribe_bounds(g.n, r.k, c);
  r.bribe = r.bounds.upper;
  r.bribe_usd = to_usd(r.bribe, c);
  r.leader = leader_utility(g.n, g.alpha, r.k, r.bribe, std::nullopt, c);
  r.duration_days = exit_duration_days(r.k, c.churn_per_epoch, c.epochs_per_day);
  return r;
}

Eth dynamic_bribe_total(std::uint64_t n, std::uint64_t k, const EconConfig& c) {
  if (k >= n) throw std::invalid_argument("dynamic_bribe_total: k must be below N");
  Eth total{0};
  for (std::uint64_t j = 1; j <= k; ++j) total += annual_reward(n - j, c);
  return total * pv_multiplier(c);
}

Eth head_reward(double s_eth) {
  // Head weight 14/64 of the base reward 32 ETH * 64 / sqrt(S), in gwei.
  const double gwei = (14.0 / 64.0) * 32e9 * 64 / std::sqrt(s_eth * 1e9);
  return {gwei / 1e9};
}

double feasibility_boundary(double alpha, double p_boost) {
  if (!(alpha < 1)) throw std::invalid_argument("alpha must be below 1");
  return std::clamp((2 - 3 * alpha - p_boost) / (3 * (1 - alpha)), 0.0, 1.0);
}

std::optional<Eth> paytoattest_cost(std::uint64_t n, double s_eth, double alpha, double beta, const EconConfig& c) {
  const double g = alpha + (1 - alpha) * beta;
  if (!(c.p_boost + g > 2 * (1 - g))) return std::nullopt;
  return head_reward(s_eth) * ((1 - alpha) * beta * static_cast<double>(n) / 32);
}

std::vector<double> axis(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  return out;
}

namespace {

template <class Fn>
std::vector<HeatCell> grid(const std::vector<double>& xs, const std::vector<double>& ys, unsigned threads, Fn&& fn) {
  std::vector<HeatCell> cells(xs.size() * ys.size());
  util::parallel_for(
      cells.size(),
      [&](std::size_t idx) {
        auto& cell = cells[idx];
        cell.alpha = xs[idx / ys.size()];
        cell.y = ys[idx % ys.size()];
        fn(cell);
      },
      threads);
  return cells;
}

}  // namespace

std::vector<HeatCell> expost_cost_grid(std::uint64_t n, double s_eth, const std::vector<double>& alphas,
                                       const std::vector<double>& betas, const EconConfig& c, unsigned threads) {
  return grid(alphas, betas, threads, [&](HeatCell& cell) {
    auto cost = paytoattest_cost(n, s_eth, cell.alpha, cell.y, c);
    cell.feasible = cost.has_value();
    cell.value = cost ? cost->value : 0;
  });
}

std::vector<HeatCell> exit_bribe_grid(std::uint64_t n, const std::vector<double>& alphas,
                                      const std::vector<double>& alpha_stars, const EconConfig& c, unsigned threads) {
  return grid(alphas, alpha_stars, threads, [&](HeatCell& cell) {
    cell.feasible = cell.alpha < cell.y;
    if (!cell.feasible) return;
    const auto r = solve_equilibrium({n, cell.alpha, cell.y, 1}, c);
    cell.value = to_usd(r.bribe * static_cast<double>(r.k), c).value;
  });
}

std::vector<HeatCell> exit_duration_grid(std::uint64_t n, const std::vector<double>& alphas,
                                         const std::vector<double>& alpha_stars, const EconConfig& c,
                                         unsigned threads) {
  return grid(alphas, alpha_stars, threads, [&](HeatCell& cell) {
    cell.feasible = cell.alpha < cell.y;
    if (!cell.feasible) return;
    cell.value = exit_duration_days(required_exits(n, cell.alpha, cell.y), c.churn_per_epoch, c.epochs_per_day);
  });
}

std::string to_csv(const std::vector<HeatCell>& cells) {
  std::string out = "alpha,beta_or_alpha_star,value,feasible\n";
  char buf[128];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.10g,%d\n", c.alpha, c.y, c.value, c.feasible ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace bribery::economics
