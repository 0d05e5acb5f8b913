// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "bribery/attacks/randao_bias.hpp"
#include "bribery/attacks/reorg.hpp"

namespace bribery::attacks {
namespace {

using chain::parse_fraction;
using Runs = std::vector<bribery::attacks::Run>;

TEST(ChainString, Parses) {
  EXPECT_EQ(parse_chain_string("H A^2"), (Runs{{Party::Honest, 1}, {Party::Adversary, 2}}));
  EXPECT_EQ(parse_chain_string("H^3A"), (Runs{{Party::Honest, 3}, {Party::Adversary, 1}}));
  EXPECT_EQ(parse_chain_string("HHA A"), (Runs{{Party::Honest, 2}, {Party::Adversary, 2}}));
  EXPECT_EQ(parse_chain_string(" h ^ 2 a "), (Runs{{Party::Honest, 2}, {Party::Adversary, 1}}));
  EXPECT_EQ(format_chain_string(parse_chain_string("HHA A")), "H^2 A^2");
}

TEST(ChainString, Rejects) {
  for (const char* bad : {"", "   ", "H^0", "H X", "H^", "A^b", "H^99999"})
    EXPECT_THROW(parse_chain_string(bad), std::invalid_argument) << bad;
}

TEST(ChainString, Classifies) {
  const Fraction a{3, 10}, b{1, 2};
  auto s = make_scenario(parse_chain_string("H A^2"), a, b);
  EXPECT_EQ(s.kind, ReorgKind::ExPost);
  EXPECT_EQ(s.h, 1u);
  EXPECT_EQ(s.a, 2u);
  s = make_scenario(parse_chain_string("A^2 H^3 A"), a, b);
  EXPECT_EQ(s.kind, ReorgKind::ExAnte);
  EXPECT_EQ(s.h, 3u);
  EXPECT_EQ(s.a, 2u);
  EXPECT_EQ(s.chain_string(), "A^2 H^3 A");
  EXPECT_THROW(make_scenario(parse_chain_string("A H"), a, b), std::invalid_argument);
  EXPECT_THROW(make_scenario(parse_chain_string("A H A^2"), a, b), std::invalid_argument);
  EXPECT_THROW(make_scenario(parse_chain_string("H A"), Fraction{3, 5}, b), std::invalid_argument);
}

TEST(Predicates, ExPostExamples) {
  const Fraction p{2, 5};
  EXPECT_TRUE(expost_feasible(1, 2, parse_fraction("0.3"), parse_fraction("0.5"), p));
  EXPECT_FALSE(expost_feasible(1, 2, parse_fraction("0.2"), parse_fraction("0.3"), p));
  for (int i = 0; i <= 50; ++i) EXPECT_TRUE(expost_feasible(1, 2, Fraction{i, 100}, Fraction{1}, p));
}

TEST(Predicates, ExAnteExamples) {
  EXPECT_TRUE(exante_feasible(1, 1, Fraction{1, 4}, Fraction{0}, Fraction{2, 5}));
  EXPECT_FALSE(exante_feasible(1, 1, Fraction{1, 10}, Fraction{0}, Fraction{2, 5}));
  // Full boost against a full honest committee is a tie; the inequality is
  // strict and the simulated tie-break keeps the first-seen honest block.
  EXPECT_FALSE(exante_feasible(1, 1, Fraction{0}, Fraction{0}, Fraction{1}));
  EXPECT_TRUE(exante_feasible(1, 1, Fraction{1, 100}, Fraction{0}, Fraction{1}));
  auto tie = make_scenario(parse_chain_string("A H A"), Fraction{0}, Fraction{0}, Fraction{1});
  AttackParams small;
  small.committee_size = 10;
  const auto rep = run_exante(tie, small);
  EXPECT_EQ(rep.adversary_weight, rep.honest_weight);
  EXPECT_FALSE(rep.success);
  // h = a = 1 reduces to gamma > 0.2.
  for (int g = 0; g <= 100; ++g) {
    const Fraction gamma{g, 200};
    EXPECT_EQ(exante_feasible(1, 1, gamma, Fraction{0}, Fraction(2, 5)), gamma > Fraction(1, 5));
  }
}

TEST(Predicates, BetaMinIsTheHAABoundary) {
  // Independent form: 2(1-a)(1-b) = 0.4 + a + (1-a)b solved by hand.
  for (int i = 0; i <= 50; ++i) {
    const Fraction a{i, 100};
    const Fraction want = std::clamp((Fraction{8, 5} - 3 * a) / (3 * (1 - a)), Fraction{0}, Fraction{1});
    EXPECT_EQ(expost_beta_min(a), want);
    if (want > 0 && want < 1) {
      EXPECT_FALSE(expost_feasible(1, 2, a, want, Fraction{2, 5}));
      EXPECT_TRUE(expost_feasible(1, 2, a, want + Fraction{1, 1000000}, Fraction{2, 5}));
    }
  }
}

ScenarioSpec spec(const char* chain, const char* alpha, const char* beta) {
  return make_scenario(parse_chain_string(chain), parse_fraction(alpha), parse_fraction(beta));
}

TEST(Reorg, ExPostMatchesClosedForms) {
  AttackParams params;
  params.record_transcript = true;
  const auto rep = run_expost(spec("H A^2", "0.3", "0.5"), params);
  EXPECT_TRUE(rep.predicted);
  EXPECT_TRUE(rep.success);
  EXPECT_EQ(rep.final_head, rep.adversary_tip);
  // 0.4 + a + (1-a)b and 2(1-a)(1-b).
  EXPECT_EQ(rep.adversary_weight, Fraction(21, 20));
  EXPECT_EQ(rep.honest_weight, Fraction(7, 10));
  EXPECT_EQ(rep.slashable, 0u);
  ASSERT_EQ(rep.slots.size(), 4u);
  // The honest block's slot: coalition on the base, honest on the new block.
  EXPECT_EQ(rep.slots[1].base_votes, Fraction(13, 20));
  EXPECT_EQ(rep.slots[1].honest_votes, Fraction(7, 20));
  // The first adversary slot: its private block collects the coalition.
  EXPECT_EQ(rep.slots[2].adversary_votes, Fraction(13, 20));
  EXPECT_EQ(rep.slots[2].honest_votes, Fraction(7, 20));
  // Everyone follows the new head in the last slot.
  EXPECT_EQ(rep.slots[3].adversary_votes, Fraction{1});
  // Two bribed slots, 350 bribees each at 1000 attesters.
  ASSERT_EQ(rep.payouts.size(), 2u);
  for (const auto& p : rep.payouts) {
    EXPECT_EQ(p.bribees, 350u);
    EXPECT_EQ(p.amount, 350 * params.bribe_per_vote);
  }
  EXPECT_GT(rep.transcript->size(), 0u);
}

TEST(Reorg, ExPostWithoutBribesFails) {
  const auto rep = run_expost(spec("H A^2", "0.3", "0"));
  EXPECT_FALSE(rep.predicted);
  EXPECT_FALSE(rep.success);
  EXPECT_EQ(rep.final_head, rep.honest_tip);
  EXPECT_EQ(rep.adversary_weight, Fraction(7, 10));  // 0.4 + 0.3
  EXPECT_EQ(rep.honest_weight, Fraction(7, 5));      // 2 * 0.7
  EXPECT_TRUE(rep.payouts.empty());
}

TEST(Reorg, ExAnteSucceeds) {
  const auto rep = run_exante(spec("A H A", "0.25", "0.2"));
  EXPECT_TRUE(rep.predicted);
  EXPECT_TRUE(rep.success);
  // 2 * 0.4 + 0.4 against 0.6.
  EXPECT_EQ(rep.adversary_weight, Fraction(6, 5));
  EXPECT_EQ(rep.honest_weight, Fraction(3, 5));
  EXPECT_EQ(rep.slashable, 0u);
}

TEST(Reorg, NoValidatorSignsTwiceInASlot) {
  AttackParams params;
  params.record_transcript = true;
  params.committee_size = 50;
  const auto rep = run_exante(spec("A^2 H^2 A", "0.2", "0.4"), params);
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  std::set<std::uint64_t> block_slots;
  for (const auto& e : rep.transcript->events()) {
    if (e["event"] == "attest")
      EXPECT_TRUE(seen.emplace(e["slot"].get<std::uint64_t>(), e["validator"].get<std::uint64_t>()).second);
    if (e["event"] == "propose") EXPECT_TRUE(block_slots.insert(e["slot"].get<std::uint64_t>()).second);
  }
  EXPECT_FALSE(seen.empty());
  EXPECT_EQ(rep.slashable, 0u);
}

TEST(Reorg, ReportJson) {
  const auto j = run_expost(spec("H A^2", "0.3", "0.5")).to_json();
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["spec"]["chain"], "H A^2");
  EXPECT_EQ(j["decision"]["adversary_weight"]["exact"], "21/20");
  EXPECT_EQ(j["success"], true);
  EXPECT_EQ(j["slots"].size(), 4u);
}

TEST(Reorg, CommitteeSizeDoesNotChangeWeights) {
  for (std::size_t n : {3u, 7u, 40u, 1000u}) {
    AttackParams params;
    params.committee_size = n;
    const auto rep = run_expost(spec("H^2 A^3", "0.15", "0.55"), params);
    const Fraction g = Fraction(15, 100) + Fraction(85, 100) * Fraction(55, 100);
    EXPECT_EQ(rep.adversary_weight, 2 * g + Fraction(2, 5)) << n;
    EXPECT_EQ(rep.honest_weight, 4 * (1 - g)) << n;
  }
}

// Simulated success must equal the predicate, and branch weights must equal
// the closed forms, over every cell of the grid.
TEST(Reorg, GridAgreesWithPredicates) {
  AttackParams params;
  params.committee_size = 20;
  const auto start = std::chrono::steady_clock::now();
  const auto cells = reorg_grid({1, 2, 3}, {1, 2, 3}, linspace(Fraction{0}, Fraction{1, 2}, 21),
                                linspace(Fraction{0}, Fraction{1}, 21), params);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(cells.size(), 2u * 9 * 21 * 21);
  std::size_t successes = 0;
  for (const auto& c : cells) {
    const Fraction g = c.alpha + (1 - c.alpha) * c.beta;
    const Fraction p{2, 5};
    Fraction adv, hon;
    if (c.kind == ReorgKind::ExPost) {
      adv = Fraction(c.a - 1) * g + p;
      hon = Fraction(c.h + c.a - 1) * (1 - g);
    } else {
      adv = Fraction(c.a + c.h) * g + p;
      hon = Fraction(c.h) * (1 - g);
    }
    ASSERT_EQ(c.simulated, c.predicted) << to_string(c.kind) << " h=" << c.h << " a=" << c.a;
    ASSERT_EQ(c.predicted, adv > hon);
    ASSERT_EQ(c.adversary_weight, adv);
    ASSERT_EQ(c.honest_weight, hon);
    successes += c.simulated;
  }
  EXPECT_GT(successes, 0u);
  EXPECT_LT(successes, cells.size());
  EXPECT_LT(secs, 60.0);
}

// --- RANDAO ---------------------------------------------------------------

TEST(Randao, EnumerateSmallCases) {
  auto bc = build_bias_chain(1);
  const auto base = bc.chain->block(bc.pre_tail).mix;
  const auto zero = randao_enumerate(base, {});
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].mix, base);

  const auto one = randao_enumerate(base, bc.reveals);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[1].mix, base);  // withheld
  const auto h = crypto::sha256(bc.reveals[0].bytes);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(one[0].mix[i], base[i] ^ h[i]);

  EXPECT_THROW(randao_enumerate(base, std::vector<crypto::Signature>(21, bc.reveals[0])), std::invalid_argument);
}

TEST(Randao, EnumerationMatchesReplay) {
  for (unsigned k : {2u, 3u, 5u}) {
    const auto ref = build_bias_chain(k);
    const auto table = randao_enumerate(ref.chain->block(ref.pre_tail).mix, ref.reveals);
    ASSERT_EQ(table.size(), std::size_t{1} << k);
    std::set<chain::Root> distinct;
    for (const auto& o : table) {
      auto bc = build_bias_chain(k);
      execute_tail(bc, o.config);
      EXPECT_EQ(bc.chain->randao_mix(0), o.mix) << "k=" << k << " config=" << o.config;
      distinct.insert(o.mix);
    }
    EXPECT_EQ(distinct.size(), table.size());
  }
}

TEST(BiasAuction, HighestBidWins) {
  const auto rep = run_bias_auction(1, {{"alice", 1, 5}, {"bob", 0, 3}});
  EXPECT_EQ(rep.winner, 1u);
  EXPECT_TRUE(rep.accepted) << rep.rejection;
  EXPECT_EQ(rep.payout, 5);
  EXPECT_EQ(rep.received.at("manipulator"), 5);
  EXPECT_EQ(rep.received.at("bob"), 3);
  EXPECT_EQ(rep.realized_mix, rep.predicted_mix);
}

TEST(BiasAuction, TieGoesToPublishAll) {
  const auto rep = run_bias_auction(1, {{"alice", 1, 4}, {"bob", 0, 4}});
  EXPECT_EQ(rep.winner, 0u);
  EXPECT_TRUE(rep.accepted);
  EXPECT_EQ(rep.payout, 4);
}

TEST(BiasAuction, TwoSlotPlan) {
  const auto rep = run_bias_auction(2, {{"alice", contracts::parse_config("10"), 7}, {"bob", 1, 2}, {"carol", 2, 1}});
  EXPECT_EQ(contracts::config_string(rep.winner, 2), "10");
  EXPECT_TRUE(rep.accepted) << rep.rejection;
  EXPECT_EQ(rep.payout, 8);
  EXPECT_EQ(rep.realized_mix, rep.predicted_mix);
  EXPECT_EQ(rep.to_json()["outcomes"].size(), 4u);
}

TEST(BiasAuction, RequiresBids) { EXPECT_THROW(run_bias_auction(1, {}), std::invalid_argument); }

}  // namespace
}  // namespace bribery::attacks
