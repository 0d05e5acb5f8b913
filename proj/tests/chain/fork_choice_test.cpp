// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "bribery/chain/fork_choice.hpp"

namespace bribery::chain {
namespace {

Root R(int i) {
  Root r{};
  // Root order runs opposite to index order.
  r[0] = static_cast<std::uint8_t>(255 - i);
  r[31] = 0xaa;
  return r;
}

TEST(ForkChoice, SingleChainHeadIsTip) {
  ForkChoice fc(R(0));
  fc.add_block(R(1), R(0), 1);
  fc.add_block(R(2), R(1), 2);
  fc.add_block(R(3), R(2), 4);
  EXPECT_EQ(fc.head(), R(3));
  EXPECT_FALSE(fc.head_was_tied());
}

TEST(ForkChoice, RejectsUnknownParentAndNonIncreasingSlot) {
  ForkChoice fc(R(0));
  EXPECT_THROW(fc.add_block(R(1), R(9), 1), std::invalid_argument);
  fc.add_block(R(1), R(0), 3);
  EXPECT_THROW(fc.add_block(R(2), R(1), 3), std::invalid_argument);
}

TEST(ForkChoice, BoostedAdversaryBranchOutweighsTwoHonestCommittees) {
  // alpha = 0.3, beta = 0.5: the honest branch holds two committees of
  // altruistic votes, the adversary branch one committee of adversary and
  // bribed votes plus the boost of the current slot.
  const Fraction alpha{3, 10}, beta{1, 2};
  ForkChoice fc(R(0));
  fc.add_block(R(1), R(0), 1);  // block n
  fc.add_block(R(2), R(1), 2);  // honest n+1
  fc.add_block(R(3), R(1), 3);  // adversary n+3, parent n
  fc.add_vote(1, 1, R(2), (1 - alpha) * (1 - beta));
  fc.add_vote(2, 2, R(2), (1 - alpha) * (1 - beta));
  fc.add_vote(3, 2, R(3), alpha + (1 - alpha) * beta);
  fc.set_boost(R(3), Fraction{2, 5});
  EXPECT_EQ(fc.weight(R(3)), Fraction(105, 100));
  EXPECT_EQ(fc.weight(R(2)), Fraction(70, 100));
  EXPECT_EQ(fc.head(), R(3));
  fc.clear_boost();
  EXPECT_EQ(fc.head(), R(2));
}

TEST(ForkChoice, LatestMessageReplacesOlderVote) {
  ForkChoice fc(R(0));
  fc.add_block(R(1), R(0), 1);
  fc.add_block(R(2), R(0), 2);
  fc.add_vote(7, 1, R(1), Fraction{1});
  EXPECT_EQ(fc.head(), R(1));
  fc.add_vote(7, 2, R(2), Fraction{1});
  EXPECT_EQ(fc.head(), R(2));
  fc.add_vote(7, 1, R(1), Fraction{1});  // stale, ignored
  EXPECT_EQ(fc.head(), R(2));
  EXPECT_EQ(fc.weight(R(1)), Fraction{0});
}

TEST(ForkChoice, TiePolicies) {
  for (auto policy : {TieBreak::LexicographicRoot, TieBreak::FirstSeen}) {
    ForkChoice fc(R(0), policy);
    fc.add_block(R(4), R(0), 1);
    fc.add_block(R(5), R(0), 2);
    fc.add_vote(1, 1, R(5), Fraction{1});
    fc.add_vote(2, 1, R(4), Fraction{1});
    EXPECT_TRUE(fc.head_was_tied());
    EXPECT_EQ(fc.head(), policy == TieBreak::FirstSeen ? R(4) : R(5));
  }
}

// Exhaustive oracle. Subtree weights come from an explicit ancestry test per
// (block, vote) pair; the head is the maximum over every root-to-leaf path
// under the order "at the first block where two paths diverge, the heavier
// block wins, ties go to the tie rule".
struct Instance {
  std::vector<int> parent;  // parent[0] = -1
  std::vector<std::pair<int, Fraction>> votes;
  int boosted = -1;
  Fraction boost{0};
};

Root oracle_head(const Instance& in, TieBreak policy) {
  const int n = static_cast<int>(in.parent.size());
  auto is_ancestor = [&](int a, int b) {
    for (int x = b; x >= 0; x = in.parent[x])
      if (x == a) return true;
    return false;
  };
  std::vector<Fraction> w(n, Fraction{0});
  for (int b = 0; b < n; ++b) {
    for (const auto& [target, weight] : in.votes)
      if (is_ancestor(b, target)) w[b] += weight;
    if (in.boosted >= 0 && is_ancestor(b, in.boosted)) w[b] += in.boost;
  }
  std::vector<std::vector<int>> paths;
  std::function<void(std::vector<int>)> extend = [&](std::vector<int> p) {
    bool leaf = true;
    for (int c = 1; c < n; ++c) {
      if (in.parent[c] == p.back()) {
        leaf = false;
        auto q = p;
        q.push_back(c);
        extend(q);
      }
    }
    if (leaf) paths.push_back(p);
  };
  extend({0});
  auto better = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    if (i == a.size() || i == b.size()) return false;
    if (w[a[i]] != w[b[i]]) return w[a[i]] > w[b[i]];
    return policy == TieBreak::FirstSeen ? a[i] < b[i] : R(a[i]) < R(b[i]);
  };
  auto best = paths.front();
  for (const auto& p : paths)
    if (better(p, best)) best = p;
  return R(best.back());
}

TEST(ForkChoice, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    Instance in;
    const int n = 2 + static_cast<int>(rng() % 9);
    in.parent.push_back(-1);
    for (int i = 1; i < n; ++i) in.parent.push_back(static_cast<int>(rng() % i));
    const int votes = static_cast<int>(rng() % 21);
    // Small weights so that ties are frequent.
    for (int v = 0; v < votes; ++v) in.votes.emplace_back(static_cast<int>(rng() % n), Fraction(1 + rng() % 3, 1 + rng() % 2));
    if (rng() % 2) {
      in.boosted = static_cast<int>(rng() % n);
      in.boost = Fraction(2, 5);
    }
    for (auto policy : {TieBreak::LexicographicRoot, TieBreak::FirstSeen}) {
      ForkChoice fc(R(0), policy);
      // Block i sits at slot i, so arrival order is index order.
      for (int i = 1; i < n; ++i) fc.add_block(R(i), R(in.parent[i]), static_cast<Slot>(i));
      for (std::size_t v = 0; v < in.votes.size(); ++v) fc.add_vote(v, 1, R(in.votes[v].first), in.votes[v].second);
      if (in.boosted >= 0) fc.set_boost(R(in.boosted), in.boost);
      ASSERT_EQ(fc.head(), oracle_head(in, policy)) << "trial " << trial;
    }
  }
}

}  // namespace
}  // namespace bribery::chain
