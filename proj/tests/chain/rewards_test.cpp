// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "bribery/chain/rewards.hpp"

namespace bribery::chain {
namespace {

TEST(Rewards, PublishedCells) {
  VoteCorrectness all{true, true, true};
  VoteCorrectness wrong_head{true, true, false};
  EXPECT_NEAR(to_double(attestation_reward(all, 1)), 0.844, 5e-4);
  EXPECT_NEAR(to_double(attestation_reward(wrong_head, 3)), 0.625, 5e-4);
  EXPECT_NEAR(to_double(attestation_reward(wrong_head, 3) / attestation_reward(all, 1)), 0.74, 5e-3);
  EXPECT_EQ(attestation_reward(all, 40), Fraction{0});
  EXPECT_EQ(attestation_reward(all, 20), Fraction(26, 64));
  EXPECT_EQ(attestation_reward({false, true, true}, 1), Fraction{0});
}

TEST(Rewards, MatrixIsTotal) {
  // Independent transcription of the matrix, by row then timeliness column.
  const Fraction ws{14, 64}, wt{26, 64}, wh{14, 64};
  const Fraction table[4][4] = {
      {0, 0, 0, 0},
      {ws, ws, 0, 0},
      {ws + wt, ws + wt, wt, 0},
      {ws + wt + wh, ws + wt, wt, 0},
  };
  for (int bits = 0; bits < 8; ++bits) {
    VoteCorrectness c{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
    const int row = !c.source ? 0 : !c.target ? 1 : !c.head ? 2 : 3;
    for (std::uint64_t d = 0; d <= 80; ++d) {
      const int col = d <= 1 ? 0 : d <= 5 ? 1 : d <= 32 ? 2 : 3;
      ASSERT_EQ(attestation_reward(c, d), table[row][col]) << bits << " " << d;
    }
  }
}

}  // namespace
}  // namespace bribery::chain
