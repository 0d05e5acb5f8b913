// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "bribery/chain/types.hpp"
#include "bribery/economics/economics.hpp"

namespace bribery::cli {

struct Axis {
  double lo = 0;
  double hi = 1;
  std::size_t n = 101;
};

/// Everything an experiment reads. Defaults apply to any key a config file
/// leaves out; see configs/*.ini for the shipped snapshots.
struct RunConfig {
  std::string name = "default";

  // [snapshot]
  std::uint64_t validators = 1'060'000;
  double total_stake_eth = 0;  // 0 means 32 ETH per validator

  // [economics]
  economics::EconConfig econ;
  double alpha = 0.239;
  chain::Fraction alpha_star{1, 3};
  double reference_threshold_eth = 0;  // compared against, never asserted

  // [grid]
  Axis alpha_axis{0.01, 0.5, 101};
  Axis beta_axis{0, 1, 101};
  Axis alpha_star_axis{0.01, 0.5, 101};

  // [attack]
  chain::Fraction p_boost{2, 5};
  std::size_t committee_size = 1000;
  std::uint64_t bribe_per_vote_gwei = 10'000;
  std::string backend = "mock";

  // [reorg_sweep]
  std::size_t reorg_points = 21;
  chain::Fraction reorg_alpha_hi{1, 2};
  unsigned reorg_max_h = 3;
  unsigned reorg_max_a = 3;
  std::size_t reorg_committee_size = 20;

  // [bias]
  unsigned bias_validators = 64;

  // [run]
  std::uint64_t seed = 0;
  unsigned threads = 0;

  double stake_eth() const { return total_stake_eth > 0 ? total_stake_eth : 32.0 * static_cast<double>(validators); }
  void validate() const;
};

/// Parses an INI file. Unknown sections or keys are errors so that typos do
/// not silently fall back to defaults.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace bribery::cli
