// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "bribery/chain/types.hpp"

namespace bribery::chain {

/// Shares of the maximum attestation reward earned by each timely vote
/// component. 14/64, 26/64, 14/64 of the per-epoch base reward.
struct RewardWeights {
  Fraction source{14, 64};
  Fraction target{26, 64};
  Fraction head{14, 64};
};

struct VoteCorrectness {
  bool source = false;
  bool target = false;
  bool head = false;
};

enum class RewardCell { Zero, Source, SourceTarget, Target, Full };

/// Timeliness column of an inclusion delay: 0 and 1 share the first column.
int timeliness_column(std::uint64_t inclusion_delay);

/// Matrix lookup. Correctness is nested: a wrong source zeroes everything,
/// a wrong target keeps only the source component.
RewardCell reward_cell(VoteCorrectness c, std::uint64_t inclusion_delay);
Fraction reward_value(RewardCell cell, const RewardWeights& w = {});
inline Fraction attestation_reward(VoteCorrectness c, std::uint64_t inclusion_delay, const RewardWeights& w = {}) {
  return reward_value(reward_cell(c, inclusion_delay), w);
}

}  // namespace bribery::chain
