// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>

#include "bribery/economics/economics.hpp"

namespace bribery::economics {
namespace {

constexpr std::uint64_t kSeptN = 1'123'611;  // validators, Sept 2025 snapshot
constexpr std::uint64_t kJulyN = 805'629;    // remaining after k* exits
constexpr double kAprilN = 1.06e6;

nlohmann::json load(const std::string& name) {
  std::ifstream in(std::string(BRIBERY_TEST_DATA) + "/" + name);
  if (!in) throw std::runtime_error("missing test data " + name);
  return nlohmann::json::parse(in);
}

// Straight transcription of the reward formula for an independent check.
double reward_oracle(double n) { return 32 * (2940.21 / std::sqrt(n) + 1078543.3 / n); }

TEST(Rewards, AnnualReward) {
  EXPECT_NEAR(annual_reward(kSeptN).value, 119.48, 0.01);
  EXPECT_NEAR(annual_reward(kJulyN).value, 147.66, 0.01);
  for (std::uint64_t n : {1u, 10u, 1000u, 100000u, 1000000u}) {
    EXPECT_LT(annual_reward(4 * n).value / annual_reward(n).value, 1.0);
    EXPECT_NEAR(annual_reward(n).value, reward_oracle(static_cast<double>(n)), 1e-9 * reward_oracle(static_cast<double>(n)));
  }
  EXPECT_THROW(annual_reward(0), std::invalid_argument);
}

TEST(PresentValue, Multiplier) {
  EXPECT_NEAR(pv_multiplier(0.08, 9), 0.0625, 0.0002);
  // The printed expression 1.08^-9 / (0.08 * 100) agrees to the same precision.
  EXPECT_NEAR(std::pow(1.08, -9) / 8, 0.0625, 0.0002);
  EXPECT_NEAR(pv_multiplier(0.08, 1e4), perpetuity_multiplier(0.08), 1e-12);
  EXPECT_NEAR(annual_reward(kJulyN).value * pv_multiplier(0.08, 9), 9.23, 0.02);
}

TEST(PresentValue, HalfLife) {
  EXPECT_NEAR(half_life(0.08), 9.006, 0.001);
  EXPECT_NEAR(half_life(1.0), 1.0, 1e-12);
  for (double r : {0.01, 0.03, 0.08, 0.2, 0.5}) {
    EXPECT_NEAR(pv_multiplier(r, half_life(r)), perpetuity_multiplier(r) / 2, 1e-6) << r;
  }
  EXPECT_THROW(half_life(0), std::invalid_argument);
}

TEST(Stackelberg, RequiredExits) {
  EXPECT_NEAR(static_cast<double>(required_exits(kSeptN, 0.239, 1.0 / 3)), 317'982, 30);
  EXPECT_EQ(required_exits(kSeptN, 0.3, 0.3), 0u);
  EXPECT_EQ(required_exits(1000, 0.1, 0.2), 500u);
  EXPECT_THROW(required_exits(1000, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(required_exits(1000, 0.3, 0.2), std::invalid_argument);
}

TEST(Stackelberg, BoundsAndChain) {
  const auto k = required_exits(kSeptN, 0.239, 1.0 / 3);
  const auto b = bribe_bounds(kSeptN, k);
  EXPECT_NEAR(b.upper.value, 9.23, 0.02);
  EXPECT_NEAR(to_usd(b.upper, {}).value, 41'333, 100);
  EXPECT_LE(b.lower, b.upper);
  const auto one = bribe_bounds(kSeptN, 1);
  EXPECT_NEAR(one.upper.value - one.lower.value, 0, 1e-4);
  EXPECT_GT(one.upper.value, one.lower.value);
  for (std::uint64_t kk = 1; kk < 1000; kk += 37) EXPECT_LT(bribe_bounds(kSeptN, kk).upper, bribe_bounds(kSeptN, kk + 1).upper);

  const auto eq = solve_equilibrium({kSeptN, 0.239, 1.0 / 3, 1.0});
  EXPECT_EQ(eq.k, k);
  EXPECT_TRUE(eq.sufficient_rational);
  EXPECT_NEAR(eq.bribe.value, 9.23, 0.02);
  EXPECT_NEAR(eq.duration_days, 176.7, 0.5);
}

TEST(Stackelberg, LeaderUtility) {
  const auto eq = solve_equilibrium({kSeptN, 0.239, 1.0 / 3, 1.0});
  EXPECT_NEAR(eq.leader.gain.value, 4.7e5, 0.1e5);
  EXPECT_NEAR(eq.leader.cost.value, 2.94e6, 0.01e6);
  EXPECT_NEAR(eq.leader.break_even.value, 2.46e6, 0.02e6);
  const auto zero = leader_utility(kSeptN, 0.239, 0, Eth{9.23}, Eth{123});
  EXPECT_DOUBLE_EQ(zero.utility->value, 123);
  for (std::uint64_t kk = 0; kk < 500000; kk += 25000)
    EXPECT_GE(leader_utility(kSeptN, 0.2, kk, Eth{1}).gain.value, 0);
}

TEST(Stackelberg, FollowerBestResponse) {
  const auto b = bribe_bounds(kSeptN, 1000);
  EXPECT_EQ(follower_utility(kSeptN, 1000, b.upper * 1.01, Action::Exit), b.upper * 1.01);
  EXPECT_GT(b.upper * 1.01, follower_utility(kSeptN, 1000, b.upper, Action::Stay));
  EXPECT_LT(b.lower * 0.99, follower_utility(kSeptN, 1000, b.upper, Action::Stay));
}

// Every bribe strictly inside the bounds for k makes exactly k exits the
// only stable profile, checked by trying every unilateral deviation.
TEST(Stackelberg, BruteForceEquilibrium) {
  std::mt19937_64 rng(5);
  const EconConfig cfg;
  const double pv = pv_multiplier(cfg);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint64_t n = 50 + rng() % 9950;
    const std::uint64_t rational = 1 + rng() % std::min<std::uint64_t>(n - 1, 300);
    const std::uint64_t k = 1 + rng() % rational;
    const auto bounds = bribe_bounds(n, k);
    const Eth b = bounds.lower + (bounds.upper - bounds.lower) * 0.5;
    for (std::uint64_t profile = 0; profile <= rational; ++profile) {
      // followers 0..profile-1 exit
      bool stable = true;
      for (std::uint64_t f = 0; f < rational && stable; ++f) {
        const bool exits = f < profile;
        const std::uint64_t others = exits ? profile - 1 : profile;
        const double stay = reward_oracle(static_cast<double>(n - others)) * pv;
        const double mine = exits ? b.value : stay;
        const double dev = exits ? stay : b.value;
        if (dev > mine) stable = false;
      }
      ASSERT_EQ(stable, profile == k) << "n=" << n << " k=" << k << " profile=" << profile;
      ASSERT_EQ(exits_stable(n, rational, profile, b), stable);
    }
  }
}

TEST(ExitDuration, Days) {
  EXPECT_NEAR(exit_duration_days(317'982), 176.7, 0.05);
  EXPECT_EQ(exit_duration_days(0), 0);
  EXPECT_NEAR(exit_duration_days(required_exits(kSeptN, 0.43, 0.48)), 65.0, 0.1);
  EXPECT_DOUBLE_EQ(exit_duration_days(3600), 2 * exit_duration_days(1800));
}

TEST(ExitDuration, PublishedHeatmapCells) {
  const auto data = load("exit_duration_cells.json");
  const auto ax = axis(data["grid"]["lo"], data["grid"]["hi"], data["grid"]["n"]);
  const std::uint64_t n = data["n_validators"];
  ASSERT_EQ(data["cells"].size(), 45u);
  for (const auto& c : data["cells"]) {
    const double a = ax[c["col"].get<std::size_t>()], s = ax[c["row"].get<std::size_t>()];
    const double label = std::stod(c["label"].get<std::string>());
    const double got = exit_duration_days(required_exits(n, a, s));
    EXPECT_NEAR(got, label, 0.05 * label) << "alpha=" << a << " alpha*=" << s;
  }
  const auto cells = exit_duration_grid(n, ax, ax);
  double lo = 1e9, hi = 0;
  for (const auto& c : cells)
    if (c.feasible) lo = std::min(lo, c.value), hi = std::max(hi, c.value);
  EXPECT_NEAR(hi, 611.74, 0.05);
  EXPECT_NEAR(lo, 6.18, 0.01);
}

TEST(ExpostCost, FeasibleMaximum) {
  const auto alphas = axis(0.01, 0.5, 100), betas = axis(0.0, 1.0, 100);
  const auto cells = expost_cost_grid(static_cast<std::uint64_t>(kAprilN), 32 * kAprilN, alphas, betas);
  double hi = 0;
  for (const auto& c : cells) {
    const bool boundary = c.y > feasibility_boundary(c.alpha);
    ASSERT_EQ(c.feasible, boundary) << c.alpha << "," << c.y;
    if (!c.feasible) continue;
    EXPECT_LT(c.value, 0.09);
    hi = std::max(hi, c.value);
  }
  EXPECT_NEAR(hi, 0.080, 0.005);
  ASSERT_TRUE(paytoattest_cost(static_cast<std::uint64_t>(kAprilN), 32 * kAprilN, 0.01, 1.0));
  EXPECT_NEAR(paytoattest_cost(static_cast<std::uint64_t>(kAprilN), 32 * kAprilN, 0.01, 1.0)->value, 0.080, 0.005);
  EXPECT_FALSE(paytoattest_cost(static_cast<std::uint64_t>(kAprilN), 32 * kAprilN, 0.2, 0.0));
}

TEST(ExpostCost, PublishedLabels) {
  // Labels are printed to two decimals; allow one label step.
  const auto data = load("expost_cost_cells.json");
  const auto alphas = axis(0.01, 0.5, 100), betas = axis(0.0, 1.0, 100);
  for (const auto& c : data["cells"]) {
    const double a = alphas[c["col"].get<std::size_t>()], b = betas[c["row"].get<std::size_t>()];
    const auto cost = paytoattest_cost(static_cast<std::uint64_t>(kAprilN), 32 * kAprilN, a, b);
    ASSERT_TRUE(cost) << a << "," << b;
    EXPECT_NEAR(cost->value, std::stod(c["label"].get<std::string>()), 0.01) << a << "," << b;
  }
}

TEST(ExpostCost, Boundary) {
  EXPECT_NEAR(feasibility_boundary(0), 0.5333, 1e-4);
  EXPECT_NEAR(feasibility_boundary(0.36), 0.2708, 1e-4);
  EXPECT_NEAR(feasibility_boundary(1.6 / 3), 0, 1e-12);
  for (double a = 0.01; a < 0.5; a += 0.01) {
    const double b = feasibility_boundary(a);
    EXPECT_NEAR(2 * (1 - a) * (1 - b), 0.4 + a + (1 - a) * b, 1e-12);
  }
  EXPECT_EQ(paytoattest_cost(1000000, 32e6, 0.6, 0.0)->value, 0.0);
}

TEST(ExpostCost, DecreasingInAlpha) {
  for (double b = 0.6; b <= 1.0; b += 0.1) {
    double prev = 1e9;
    for (double a = 0.0; a <= 0.5; a += 0.05) {
      const auto c = paytoattest_cost(1000000, 32e6, a, b);
      ASSERT_TRUE(c);
      EXPECT_LT(c->value, prev);
      prev = c->value;
    }
  }
}

TEST(DynamicBribe, BelowRectangle) {
  EXPECT_DOUBLE_EQ(dynamic_bribe_total(kSeptN, 1).value, (annual_reward(kSeptN - 1) * pv_multiplier({})).value);
  const auto k = required_exits(kSeptN, 0.239, 1.0 / 3);
  EXPECT_LT(dynamic_bribe_total(kSeptN, k).value, 2.94e6);
  for (std::uint64_t n = 1000; n <= 1000000; n *= 10)
    for (std::uint64_t k2 : {std::uint64_t{1}, n / 100, n / 10, n / 3, n / 2, n - 1}) {
      if (k2 == 0) continue;
      const auto rect = bribe_bounds(n, k2).upper * static_cast<double>(k2);
      EXPECT_LE(dynamic_bribe_total(n, k2).value, rect.value * (1 + 1e-12)) << n << " " << k2;
    }
}

TEST(ExitBribe, MonotoneHeatmap) {
  const auto ax = axis(0.01, 0.5, 25);
  const auto cells = exit_bribe_grid(kSeptN, ax, ax);
  auto at = [&](std::size_t i, std::size_t j) { return cells[i * ax.size() + j]; };
  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ax.size(); ++j) {
      if (!at(i, j).feasible) continue;
      if (j + 1 < ax.size()) EXPECT_LT(at(i, j).value, at(i, j + 1).value);  // higher target costs more
      if (i > 0 && at(i - 1, j).feasible) EXPECT_GT(at(i - 1, j).value, at(i, j).value);  // stronger briber pays less
    }
}

TEST(Csv, Format) {
  const auto csv = to_csv({{0.1, 0.2, 3.5, true}, {0.3, 0.1, 0, false}});
  EXPECT_EQ(csv, "alpha,beta_or_alpha_star,value,feasible\n0.100000,0.200000,3.5,1\n0.300000,0.100000,0,0\n");
}

}  // namespace
}  // namespace bribery::economics
