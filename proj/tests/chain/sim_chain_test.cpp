// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "bribery/chain/sim_chain.hpp"
#include "support/fixtures.hpp"

namespace bribery::chain {
namespace {

using testing::make_validators;
using testing::mock_scheme;

SimChain make_chain(std::size_t n = 64, std::shared_ptr<Transcript> t = nullptr) {
  auto scheme = mock_scheme();
  return SimChain(ChainConfig{}, scheme, make_validators(*scheme, n), TieBreak::LexicographicRoot, std::move(t));
}

TEST(ChainConfig, Validation) {
  ChainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.p_boost = Fraction(6, 5);
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.blockhash_window = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ChainConfig, ParseFraction) {
  EXPECT_EQ(parse_fraction("0.4"), Fraction(2, 5));
  EXPECT_EQ(parse_fraction("2/5"), Fraction(2, 5));
  EXPECT_EQ(parse_fraction(" 1 "), Fraction(1));
  EXPECT_EQ(parse_fraction("0.239"), Fraction(239, 1000));
  EXPECT_THROW(parse_fraction("x"), std::invalid_argument);
  EXPECT_THROW(parse_fraction("1/0"), std::invalid_argument);
}

TEST(Types, HeaderRoundTrip) {
  auto chain = make_chain();
  auto h = chain.propose_block(1, chain.scheduled_proposer(1), chain.genesis_root());
  ASSERT_TRUE(h);
  auto bytes = h->serialize();
  EXPECT_EQ(BlockHeader::deserialize(bytes), *h);
  bytes.pop_back();
  EXPECT_THROW(BlockHeader::deserialize(bytes), crypto::DecodeError);
}

TEST(Types, AttestationDataRoundTrip) {
  AttestationData d;
  d.slot = 77;
  d.beacon_block_root = crypto::sha256("b");
  d.source = {1, crypto::sha256("s")};
  d.target = {2, crypto::sha256("t")};
  EXPECT_EQ(AttestationData::deserialize(d.serialize()), d);
}

TEST(ValidatorSet, CommitteeSizesForMainnetCount) {
  const std::size_t n = 1'123'611;
  std::size_t total = 0, big = 0;
  for (std::size_t pos = 0; pos < 32; ++pos) {
    auto s = ValidatorSet::committee_size(n, pos, 32);
    EXPECT_TRUE(s == 35'112 || s == 35'113) << s;
    big += s == 35'113;
    total += s;
  }
  EXPECT_EQ(total, n);
  EXPECT_EQ(big, n - 32 * (n / 32));
}

TEST(ValidatorSet, RoundRobinMembership) {
  auto chain = make_chain(100);
  for (Slot s = 0; s < 32; ++s) {
    auto c = chain.validators().committee(s, chain.config());
    EXPECT_EQ(c.size(), ValidatorSet::committee_size(100, s, 32));
    for (auto i : c) EXPECT_EQ(i % 32, s);
  }
}

TEST(ValidatorSet, SharesSumToOne) {
  auto scheme = mock_scheme();
  ValidatorSet set;
  set.add(scheme->keygen(crypto::to_bytes("a")), Fraction(3, 10), Behavior::Adversary);
  set.add(scheme->keygen(crypto::to_bytes("b")), Fraction(35, 100), Behavior::Rational);
  set.add(scheme->keygen(crypto::to_bytes("c")), Fraction(35, 100), Behavior::Altruistic);
  auto s = set.shares();
  EXPECT_EQ(s.adversary + s.rational + s.altruistic, Fraction{1});
  EXPECT_EQ(s.adversary, Fraction(3, 10));
}

TEST(ValidatorSet, DepositProofsVerify) {
  auto scheme = mock_scheme();
  auto set = make_validators(*scheme, 10);
  for (ValidatorIndex i = 0; i < 10; ++i)
    EXPECT_TRUE(crypto::merkle_verify(set.deposit_root(), set.at(i).keys.pk.bytes, i, set.deposit_proof(i)));
  auto root = set.deposit_root();
  set.add(scheme->keygen(crypto::to_bytes("late")), Fraction{32}, Behavior::Rational);
  EXPECT_NE(set.deposit_root(), root);
}

TEST(SimChain, GenesisChild) {
  auto chain = make_chain();
  auto h = chain.propose_block(1, chain.scheduled_proposer(1), chain.genesis_root());
  ASSERT_TRUE(h);
  EXPECT_EQ(h->height, 1u);
  EXPECT_EQ(h->timestamp, 12);
  EXPECT_EQ(h->parent_hash, chain.genesis_root());
  EXPECT_TRUE(chain.scheme().verify(chain.validators().at(h->proposer_index).keys.pk, randao_message(0),
                                    h->randao_reveal).valid);
}

TEST(SimChain, ProposalErrors) {
  auto chain = make_chain();
  EXPECT_THROW(chain.propose_block(1, chain.scheduled_proposer(1) + 1, chain.genesis_root()), std::invalid_argument);
  EXPECT_THROW(chain.propose_block(1, chain.scheduled_proposer(1), crypto::sha256("nope")), std::invalid_argument);
}

TEST(SimChain, TwoChildrenOfOneParent) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g);
  auto b = chain.propose_block(2, chain.scheduled_proposer(2), g);
  EXPECT_TRUE(chain.has_block(a->root()));
  EXPECT_TRUE(chain.has_block(b->root()));
  chain.advance_to_slot(3);
  // No votes, no boost: equal weight, smaller root wins.
  EXPECT_EQ(chain.head(), std::min(a->root(), b->root()));
}

TEST(SimChain, SameHeadAttestersSignIdenticalBytes) {
  auto chain = make_chain();
  auto h = chain.propose_block(1, chain.scheduled_proposer(1), chain.genesis_root());
  chain.advance_to_deadline(1);
  auto committee = chain.validators().committee(1, chain.config());
  ASSERT_GE(committee.size(), 2u);
  auto a1 = chain.attest(1, committee[0], h->root());
  auto a2 = chain.attest(1, committee[1], h->root());
  EXPECT_EQ(a1.data.serialize(), a2.data.serialize());
  EXPECT_NE(a1.signature, a2.signature);
  EXPECT_THROW(chain.attest(1, committee[0] + 1, h->root()), std::invalid_argument);
}

TEST(SimChain, BoostOnlyWhileSlotIsCurrent) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g);
  chain.advance_to_slot(2);
  auto b = chain.propose_block(2, chain.scheduled_proposer(2), g);
  chain.advance_to_deadline(2);
  auto fc = chain.fork_choice_at(chain.now());
  EXPECT_EQ(fc.weight(b->root()), chain.config().p_boost * chain.validators().committee_stake(2, chain.config()));
  EXPECT_EQ(chain.head(), b->root());
  chain.advance_to_slot(3);
  EXPECT_EQ(chain.fork_choice_at(chain.now()).weight(b->root()), Fraction{0});
  EXPECT_EQ(chain.head(), std::min(a->root(), b->root()));
}

TEST(SimChain, LateBlockGetsNoBoost) {
  auto chain = make_chain();
  chain.advance_to(chain.config().slot_start(1) + 5);
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), chain.genesis_root());
  EXPECT_EQ(chain.fork_choice_at(chain.now()).weight(a->root()), Fraction{0});
}

TEST(SimChain, PrivateBlocksAreInvisibleUntilPublished) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g, true, Visibility::Private);
  chain.advance_to_deadline(1);
  EXPECT_EQ(chain.head(), g);
  chain.publish_all_private();
  EXPECT_EQ(chain.head(), a->root());
}

TEST(SimChain, WithheldSlotIsExcludedFromRandao) {
  auto chain = make_chain();
  Root parent = chain.genesis_root();
  Root expected = chain.genesis_mix();
  for (Slot s = 1; s < 31; ++s) {
    auto h = chain.propose_block(s, chain.scheduled_proposer(s), parent);
    expected = crypto::xor_hash(expected, crypto::sha256(h->randao_reveal.bytes));
    parent = h->root();
  }
  EXPECT_FALSE(chain.propose_block(31, chain.scheduled_proposer(31), parent, false).has_value());
  chain.advance_to_slot(32);
  EXPECT_EQ(chain.randao_mix(0), expected);
  EXPECT_TRUE(chain.missed_slots().count(31));
}

TEST(SimChain, RandaoReconstructionForRandomPatterns) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto chain = make_chain(40);
    Root parent = chain.genesis_root();
    for (Slot s = 1; s < 96; ++s) {
      auto h = chain.propose_block(s, chain.scheduled_proposer(s), parent, rng() % 3 != 0);
      if (h) parent = h->root();
    }
    chain.advance_to_slot(96);
    // R^e = R^{e-1} xor contributions of canonical blocks inside epoch e.
    Root prev = chain.genesis_mix();
    for (Epoch e = 0; e < 3; ++e) {
      Root acc = prev;
      for (const auto& r : chain.canonical_chain()) {
        const auto& b = chain.block(r);
        if (r == chain.genesis_root() || chain.config().epoch_of(b.header.slot) != e) continue;
        acc = crypto::xor_hash(acc, crypto::sha256(b.header.randao_reveal.bytes));
      }
      ASSERT_EQ(chain.randao_mix(e), acc) << "epoch " << e;
      prev = acc;
    }
  }
}

TEST(SimChain, TimestampGapsMatchSkippedSlots) {
  std::mt19937_64 rng(8);
  auto chain = make_chain();
  Root parent = chain.genesis_root();
  for (Slot s = 1; s < 200; ++s) {
    auto h = chain.propose_block(s, chain.scheduled_proposer(s), parent, rng() % 4 != 0);
    if (h) parent = h->root();
  }
  chain.advance_to_slot(200);
  const auto& c = chain.canonical_chain();
  for (std::size_t i = 1; i < c.size(); ++i) {
    const auto& b1 = chain.block(c[i - 1]).header;
    const auto& b2 = chain.block(c[i]).header;
    std::int64_t skipped = 0;
    for (Slot s = b1.slot + 1; s < b2.slot; ++s) skipped += chain.missed_slots().count(s);
    EXPECT_EQ(b2.timestamp - b1.timestamp, 12 * (skipped + 1));
  }
}

TEST(SimChain, BlockhashWindow) {
  auto chain = make_chain(8);
  Root parent = chain.genesis_root();
  const Slot last = 8200;
  for (Slot s = 1; s <= last; ++s) parent = chain.propose_block(s, chain.scheduled_proposer(s), parent)->root();
  chain.advance_to_slot(last);
  const Height tip = chain.current_height();
  ASSERT_EQ(tip, last);
  EXPECT_EQ(chain.blockhash(tip), parent);
  EXPECT_TRUE(chain.blockhash(tip - 8191).has_value());
  EXPECT_FALSE(chain.blockhash(tip - 8192).has_value());
  EXPECT_FALSE(chain.blockhash(tip + 1).has_value());
}

TEST(SimChain, NonCanonicalBlockIsUnavailable) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g);
  auto b = chain.propose_block(2, chain.scheduled_proposer(2), a->root());
  chain.advance_to_slot(3);
  auto fork = chain.propose_block(3, chain.scheduled_proposer(3), a->root(), true, Visibility::Private);
  chain.advance_to_slot(4);
  auto c = chain.propose_block(4, chain.scheduled_proposer(4), b->root());
  chain.publish_block(fork->root());
  EXPECT_EQ(chain.head(), c->root());
  EXPECT_EQ(chain.blockhash(2), b->root());
  EXPECT_NE(chain.blockhash(2), fork->root());
  EXPECT_EQ(chain.beacon_root(2), b->root());
  EXPECT_FALSE(chain.beacon_root(3).has_value());
  EXPECT_FALSE(chain.is_canonical(fork->root()));
}

TEST(SimChain, RewardsFollowCanonicalChain) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g);
  chain.advance_to_deadline(1);
  auto v = chain.validators().committee(1, chain.config()).front();
  auto att = chain.attest(1, v, a->root());
  EXPECT_EQ(chain.attestation_reward(att, 1), Fraction(54, 64));
  // Orphan block a: the vote keeps source and target but loses head.
  chain.advance_to_slot(2);
  auto b = chain.propose_block(2, chain.scheduled_proposer(2), g);
  for (auto w : chain.validators().committee(2, chain.config())) chain.attest(2, w, b->root());
  chain.advance_to_slot(3);
  ASSERT_EQ(chain.head(), b->root());
  EXPECT_EQ(chain.attestation_reward(att, 2), Fraction(40, 64));
}

TEST(SimChain, ExitsRespectChurn) {
  ChainConfig cfg;
  cfg.exit_churn_per_epoch = 2;
  auto scheme = mock_scheme();
  SimChain chain(cfg, scheme, make_validators(*scheme, 10));
  for (ValidatorIndex i = 0; i < 5; ++i) {
    VoluntaryExit e{0, i};
    chain.request_exit(e, scheme->sign(chain.validators().at(i).keys.sk, e.serialize()));
  }
  VoluntaryExit bad{0, 6};
  EXPECT_THROW(chain.request_exit(bad, scheme->sign(chain.validators().at(7).keys.sk, bad.serialize())),
               std::invalid_argument);
  VoluntaryExit future{3, 6};
  EXPECT_THROW(chain.request_exit(future, scheme->sign(chain.validators().at(6).keys.sk, future.serialize())),
               std::invalid_argument);
  chain.advance_to_slot(32);
  EXPECT_EQ(chain.pending_exits(), 3u);
  chain.advance_to_slot(96);
  EXPECT_EQ(chain.pending_exits(), 0u);
  for (ValidatorIndex i = 0; i < 5; ++i) EXPECT_FALSE(chain.validators().at(i).active);
}

TEST(SimChain, DoubleVoteIsSlashable) {
  auto chain = make_chain();
  auto g = chain.genesis_root();
  auto a = chain.propose_block(1, chain.scheduled_proposer(1), g);
  auto b = chain.propose_block(2, chain.scheduled_proposer(2), g);
  auto v = chain.validators().committee(1, chain.config()).front();
  chain.attest(1, v, a->root());
  EXPECT_TRUE(chain.slashable_validators().empty());
  chain.attest(1, v, b->root());
  EXPECT_EQ(chain.slashable_validators(), std::set<ValidatorIndex>{v});
}

TEST(SimChain, TranscriptIsDeterministic) {
  auto run = [] {
    auto t = std::make_shared<Transcript>();
    auto chain = make_chain(64, t);
    Root parent = chain.genesis_root();
    for (Slot s = 1; s < 10; ++s) {
      chain.advance_to_slot(s);
      auto h = chain.propose_block(s, chain.scheduled_proposer(s), parent, s % 4 != 0);
      if (h) parent = h->root();
      chain.advance_to_deadline(s);
      for (auto v : chain.validators().committee(s, chain.config())) chain.attest(s, v, chain.head());
    }
    return t->to_jsonl();
  };
  auto a = run();
  EXPECT_EQ(a, run());
  EXPECT_NE(a.find("\"event\":\"skip\""), std::string::npos);
  EXPECT_EQ(a.rfind("{\"seq\":0,\"event\":\"genesis\"", 0), 0u);
}

}  // namespace
}  // namespace bribery::chain
