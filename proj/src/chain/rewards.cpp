// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/rewards.hpp"

namespace bribery::chain {

int timeliness_column(std::uint64_t d) {
  if (d <= 1) return 0;
  if (d <= 5) return 1;
  if (d <= 32) return 2;
  return 3;
}

RewardCell reward_cell(VoteCorrectness c, std::uint64_t inclusion_delay) {
  // Rows: wrong source, correct source, +target, +head.
  int row = !c.source ? 0 : !c.target ? 1 : !c.head ? 2 : 3;
  static constexpr RewardCell kTable[4][4] = {
      {RewardCell::Zero, RewardCell::Zero, RewardCell::Zero, RewardCell::Zero},
      {RewardCell::Source, RewardCell::Source, RewardCell::Zero, RewardCell::Zero},
      {RewardCell::SourceTarget, RewardCell::SourceTarget, RewardCell::Target, RewardCell::Zero},
      {RewardCell::Full, RewardCell::SourceTarget, RewardCell::Target, RewardCell::Zero},
  };
  return kTable[row][timeliness_column(inclusion_delay)];
}

Fraction reward_value(RewardCell cell, const RewardWeights& w) {
  switch (cell) {
    case RewardCell::Zero:
      return 0;
    case RewardCell::Source:
      return w.source;
    case RewardCell::SourceTarget:
      return w.source + w.target;
    case RewardCell::Target:
      return w.target;
    case RewardCell::Full:
      return w.source + w.target + w.head;
  }
  return 0;
}

}  // namespace bribery::chain
