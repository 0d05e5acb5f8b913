// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "bribery/contracts/pay_to_attest.hpp"
#include "bribery/contracts/pay_to_bias.hpp"
#include "bribery/contracts/pay_to_exit.hpp"
#include "support/fixtures.hpp"

namespace bribery::contracts {
namespace {

using chain::AttestationData;
using chain::SimChain;
using testing::make_validators;
using testing::mock_scheme;

#define EXPECT_REVERT(stmt, err)                                   \
  do {                                                             \
    try {                                                          \
      stmt;                                                        \
      ADD_FAILURE() << "expected revert " << to_string(err);       \
    } catch (const ContractRevert& e) {                            \
      EXPECT_EQ(e.code(), err) << e.what();                        \
    }                                                              \
  } while (0)

// Expects a revert with `err` and an untouched contract state.
#define EXPECT_CLEAN_REVERT(contract, stmt, err)          \
  do {                                                    \
    const auto before__ = (contract).state_digest();      \
    EXPECT_REVERT(stmt, err);                             \
    EXPECT_EQ((contract).state_digest(), before__);       \
  } while (0)

class ContractTest : public ::testing::Test {
 protected:
  ContractTest() : chain(chain::ChainConfig{}, mock_scheme(), make_validators(*mock_scheme(), 256)) {
    block = *chain.propose_block(1, chain.scheduled_proposer(1), chain.genesis_root());
    chain.advance_to_deadline(1);
    committee = chain.validators().committee(1, chain.config());
    m = chain.attestation_data(1, block.root());
  }

  std::vector<crypto::PublicKey> keys(std::size_t n) const {
    std::vector<crypto::PublicKey> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(chain.validators().at(committee[i]).keys.pk);
    return out;
  }
  crypto::Signature aggregate(std::size_t n, const AttestationData& data) const {
    std::vector<crypto::Signature> sigs;
    for (std::size_t i = 0; i < n; ++i)
      sigs.push_back(chain.scheme().sign(chain.validators().at(committee[i]).keys.sk, data.serialize()));
    return chain.scheme().aggregate_signatures(sigs);
  }

  SimChain chain;
  chain::BlockHeader block;
  std::vector<chain::ValidatorIndex> committee;
  AttestationData m;
};

TEST_F(ContractTest, EscrowAdmin) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  c.withdraw_funds("briber", 10);
  EXPECT_EQ(c.balance(), 0);
  c.deposit_funds("briber", 10);
  EXPECT_CLEAN_REVERT(c, c.withdraw_funds("briber", 11), ContractError::Overdraft);
  EXPECT_CLEAN_REVERT(c, c.withdraw_funds("mallory", 1), ContractError::NotOwner);
  EXPECT_CLEAN_REVERT(c, c.update_bribe_amnt("mallory", 1), ContractError::NotOwner);
  c.update_bribe_amnt("briber", 4);
  EXPECT_EQ(c.bribe_amnt(), 4);
}

TEST_F(ContractTest, PayoutEncumbersRemainingFunds) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  auto id = c.attest_offer("briber", keys(3), m, chain.now() + 100, 3);
  EXPECT_EQ(c.unencumbered(), 7);
  EXPECT_EQ(c.attest_take("bribee", id, aggregate(3, m)), 3);
  EXPECT_CLEAN_REVERT(c, c.withdraw_funds("briber", 8), ContractError::Overdraft);
  c.withdraw_funds("briber", 7);
  EXPECT_EQ(c.balance(), 0);
  EXPECT_EQ(c.received().at("bribee"), 3);
}

TEST_F(ContractTest, OffersBeyondEscrowAreRejected) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  c.attest_offer("briber", keys(3), m, chain.now() + 100, 6);
  EXPECT_CLEAN_REVERT(c, c.attest_offer("briber", keys(3), m, chain.now() + 100, 6),
                      ContractError::InsufficientEscrow);
}

TEST_F(ContractTest, AttestHappyPathReplayAndIndependentRecheck) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 5);
  auto id = c.attest_offer("briber", keys(3), m, chain.now() + 100, 5);
  auto sigma = aggregate(3, m);
  EXPECT_EQ(c.attest_take("bribee", id, sigma), 5);
  EXPECT_TRUE(c.offer(id).claimed);
  // Re-check with the plain single-key verifier on the aggregate key.
  EXPECT_TRUE(chain.scheme().verify(chain.scheme().aggregate_public_keys(keys(3)), m.serialize(), sigma).valid);
  EXPECT_CLEAN_REVERT(c, c.attest_take("bribee", id, sigma), ContractError::Replay);
}

TEST_F(ContractTest, AttestDeadlineBoundary) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  auto past = c.attest_offer("briber", keys(2), m, chain.now() - 1, 1);
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", past, aggregate(2, m)), ContractError::Expired);
  auto id = c.attest_offer("briber", keys(2), m, chain.now() + 1, 1);
  chain.advance_to(chain.now() + 1);  // timestamp == deadline
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", id, aggregate(2, m)), ContractError::Expired);
  c.release_expired("briber", id);
  c.release_expired("briber", past);
  EXPECT_EQ(c.unencumbered(), 10);
}

TEST_F(ContractTest, AttestRejectsBadSignatures) {
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  auto id = c.attest_offer("briber", keys(3), m, chain.now() + 100, 1);
  auto other = m;
  other.slot += 1;
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", id, aggregate(3, other)), ContractError::InvalidSignature);
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", id, aggregate(2, m)), ContractError::InvalidSignature);
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", id, crypto::Signature{{1, 2, 3}}), ContractError::InvalidSignature);
  EXPECT_CLEAN_REVERT(c, c.attest_take("x", 99, aggregate(3, m)), ContractError::UnknownOffer);
}

TEST_F(ContractTest, OpenOfferRequiresBriberBlock) {
  // Validator of slot 2 is the briber; its block is a sibling of `block`.
  chain.advance_to_slot(2);
  const auto briber = chain.scheduled_proposer(2);
  auto briber_block = *chain.propose_block(2, briber, chain.genesis_root());
  chain.advance_to_deadline(2);
  PayToAttest c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 10);
  auto id = c.attest_offer_open("briber", keys(3), chain.validators().at(briber).keys.pk, chain.now() + 100, 4);

  auto honest_m = m;
  EXPECT_CLEAN_REVERT(c, c.attest_take_open("x", id, honest_m, aggregate(3, honest_m), block),
                      ContractError::NotBriberBlock);

  // Header whose reveal was signed by someone else, presented with a vote
  // for exactly that header.
  auto forged = briber_block;
  forged.randao_reveal = chain.scheme().sign(chain.validators().at(briber + 1).keys.sk, chain::randao_message(0));
  auto forged_m = chain.attestation_data(1, block.root());
  forged_m.beacon_block_root = forged.root();
  EXPECT_CLEAN_REVERT(c, c.attest_take_open("x", id, forged_m, aggregate(3, forged_m), forged),
                      ContractError::NotBriberBlock);

  // Header that does not match the vote.
  auto good_m = chain.attestation_data(1, briber_block.root());
  EXPECT_CLEAN_REVERT(c, c.attest_take_open("x", id, good_m, aggregate(3, good_m), block),
                      ContractError::NotBriberBlock);

  EXPECT_EQ(c.attest_take_open("x", id, good_m, aggregate(3, good_m), briber_block), 4);
  EXPECT_CLEAN_REVERT(c, c.attest_take_open("x", id, good_m, aggregate(3, good_m), briber_block),
                      ContractError::Replay);
}

class ExitTest : public ContractTest {
 protected:
  struct Claim {
    chain::ValidatorIndex i;
    crypto::PublicKey pk;
    chain::VoluntaryExit exit;
    crypto::Signature sigma;
    crypto::MerkleProof proof;
  };
  Claim claim(chain::ValidatorIndex i, chain::Epoch epoch = 0) const {
    const auto& v = chain.validators().at(i);
    chain::VoluntaryExit e{epoch, i};
    return {i, v.keys.pk, e, chain.scheme().sign(v.keys.sk, e.serialize()), chain.validators().deposit_proof(i)};
  }
  Gwei take(PayToExit& c, const Claim& k) { return c.exit_take("anyone", k.i, k.pk, k.exit, k.sigma, k.proof); }
};

TEST_F(ExitTest, HappyPathDoubleClaimAndIndexTamper) {
  PayToExit c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 100);
  c.update_bribe_amnt("briber", 9);
  std::vector<chain::VoluntaryExit> queued;
  c.on_exit([&](const chain::VoluntaryExit& e, const crypto::Signature&) { queued.push_back(e); });

  auto k7 = claim(7);
  EXPECT_EQ(take(c, k7), 9);
  EXPECT_EQ(c.received().at(chain.withdraw_address(7)), 9);
  EXPECT_EQ(queued.size(), 1u);
  EXPECT_CLEAN_REVERT(c, take(c, k7), ContractError::DoubleClaim);

  // Valid signature from validator 8, but the proof of index 8 is presented
  // as index 9's slot.
  auto k8 = claim(8);
  auto tampered = k8;
  tampered.proof = chain.validators().deposit_proof(9);
  EXPECT_CLEAN_REVERT(c, take(c, tampered), ContractError::BadMerkleProof);
  auto wrong_index = k8;
  wrong_index.i = 9;
  EXPECT_CLEAN_REVERT(c, take(c, wrong_index), ContractError::BadMerkleProof);
  auto bad_sig = k8;
  bad_sig.sigma = claim(9).sigma;
  EXPECT_CLEAN_REVERT(c, take(c, bad_sig), ContractError::InvalidSignature);
  EXPECT_EQ(queued.size(), 1u);
}

TEST_F(ExitTest, ExitMustPostdateOffer) {
  chain.advance_to_slot(70);  // epoch 2
  PayToExit c("briber", mock_scheme(), chain);
  c.deposit_funds("briber", 100);
  c.update_bribe_amnt("briber", 9);
  EXPECT_CLEAN_REVERT(c, take(c, claim(3, 1)), ContractError::StaleExit);
  EXPECT_EQ(take(c, claim(3, 2)), 9);
}

TEST_F(ExitTest, UnfundedOfferRejects) {
  PayToExit c("briber", mock_scheme(), chain);
  c.update_bribe_amnt("briber", 9);
  EXPECT_CLEAN_REVERT(c, take(c, claim(3)), ContractError::InsufficientEscrow);
}

TEST(ContractErrors, RejectionCodesAreDistinct) {
  std::set<std::string_view> names;
  for (auto e : {ContractError::Replay, ContractError::Expired, ContractError::InvalidSignature,
                 ContractError::BadMerkleProof, ContractError::DoubleClaim, ContractError::HeaderHashMismatch,
                 ContractError::BrokenLinkage, ContractError::TimestampGap, ContractError::StaleBlockhash})
    names.insert(to_string(e));
  EXPECT_EQ(names.size(), 9u);
}

// --- PayToBias ----------------------------------------------------------

struct Auction {
  testing::TailChain t;
  std::unique_ptr<PayToBias> c;
};

Auction open_auction(unsigned k, std::uint64_t executed) {
  Auction a{testing::build_tail_chain(k, executed), nullptr};
  auto& ch = *a.t.chain;
  a.c = std::make_unique<PayToBias>("manipulator", mock_scheme(), ch);
  a.c->bias_offer("manipulator", 0, a.t.pks, a.t.reveals, ch.now() + 2, ch.now() + 100);
  return a;
}

TEST(PayToBias, SingleBitWithholdAndPublish) {
  for (std::uint64_t executed : {1u, 0u}) {
    auto a = open_auction(1, executed);
    a.c->bias_bid("alice", 0, 1, 5);
    a.c->bias_bid("bob", 0, 0, 3);
    if (executed == 0) a.c->bias_bid("carol", 0, 0, 4);
    a.t.chain->advance_to(a.t.chain->now() + 3);
    const auto& ev = a.t.evidence;
    ASSERT_EQ(ev.size(), executed ? 2u : 3u);
    EXPECT_EQ(ev.back().timestamp - ev[ev.size() - 2].timestamp, executed ? 24 : 12);
    const Gwei prize = a.c->bias_take("manipulator", 0, ev);
    EXPECT_EQ(prize, executed ? 5 : 7);
    EXPECT_EQ(a.c->received().at("manipulator"), prize);
    EXPECT_EQ(a.c->received().at(executed ? "bob" : "alice"), executed ? 3 : 5);
    EXPECT_EQ(a.c->balance(), 0);
  }
}

TEST(PayToBias, TieGoesToPublishAll) {
  auto a = open_auction(1, 0);
  a.c->bias_bid("alice", 0, 1, 5);
  a.c->bias_bid("bob", 0, 0, 5);
  EXPECT_EQ(a.c->winning_config(0), 0u);
}

TEST(PayToBias, OfferRejectsBadReveal) {
  auto t = testing::build_tail_chain(2, 0);
  PayToBias c("manipulator", mock_scheme(), *t.chain);
  auto reveals = t.reveals;
  std::swap(reveals[0], reveals[1]);
  EXPECT_CLEAN_REVERT(c, c.bias_offer("manipulator", 0, t.pks, reveals, t.chain->now() + 2, t.chain->now() + 9),
                      ContractError::BadReveal);
}

TEST(PayToBias, EvidenceErrors) {
  auto a = open_auction(2, 2);  // "10": first tail slot withheld
  auto& c = *a.c;
  auto& ch = *a.t.chain;
  c.bias_bid("alice", 0, 2, 5);
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, a.t.evidence), ContractError::AuctionOpen);
  ch.advance_to(ch.now() + 3);
  EXPECT_CLEAN_REVERT(c, c.bias_bid("late", 0, 0, 1), ContractError::AuctionClosed);

  auto ev = a.t.evidence;
  auto forged = ev;
  forged[1].body_hash = crypto::sha256("other");
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, forged), ContractError::HeaderHashMismatch);
  auto gap = ev;
  gap.erase(gap.begin() + 1);
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, gap), ContractError::BrokenLinkage);
  auto short_ev = std::vector<chain::BlockHeader>(ev.begin(), ev.end() - 1);
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, short_ev), ContractError::IncompleteEvidence);
  EXPECT_EQ(c.bias_take("manipulator", 0, ev), 5);
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, ev), ContractError::AlreadySettled);
}

TEST(PayToBias, StaleBlockhashIsRejected) {
  chain::ChainConfig cfg;
  cfg.blockhash_window = 4;
  auto scheme = mock_scheme();
  SimChain ch(cfg, scheme, make_validators(*scheme, 64));
  const auto v = ch.scheduled_proposer(31);
  PayToBias c("manipulator", scheme, ch);
  c.bias_offer("manipulator", 0, {ch.validators().at(v).keys.pk},
               {scheme->sign(ch.validators().at(v).keys.sk, chain::randao_message(0))}, 400, 10000);
  c.bias_bid("alice", 0, 0, 1);
  std::vector<chain::BlockHeader> ev;
  chain::Root parent = ch.genesis_root();
  for (chain::Slot s = 1; s <= 40; ++s) {
    ch.advance_to_slot(s);
    auto h = *ch.propose_block(s, ch.scheduled_proposer(s), parent);
    parent = h.root();
    if (s >= 30 && s <= 32) ev.push_back(h);
  }
  EXPECT_CLEAN_REVERT(c, c.bias_take("manipulator", 0, ev), ContractError::StaleBlockhash);
}

TEST(PayToBias, RefundAfterDeadline) {
  auto a = open_auction(1, 1);
  a.c->bias_bid("alice", 0, 0, 5);  // wants publish, manipulator withheld
  a.c->bias_bid("bob", 0, 1, 2);
  a.t.chain->advance_to(a.t.chain->now() + 3);
  EXPECT_CLEAN_REVERT(*a.c, a.c->bias_take("manipulator", 0, a.t.evidence), ContractError::TimestampGap);
  EXPECT_CLEAN_REVERT(*a.c, a.c->bias_refund("alice", 0), ContractError::NotExpired);
  a.t.chain->advance_to(a.t.chain->now() + 200);
  EXPECT_CLEAN_REVERT(*a.c, a.c->bias_take("manipulator", 0, a.t.evidence), ContractError::Expired);
  a.c->bias_refund("alice", 0);
  EXPECT_EQ(a.c->received().at("alice"), 5);
  EXPECT_EQ(a.c->received().at("bob"), 2);
  EXPECT_EQ(a.c->balance(), 0);
}

TEST(PayToBias, DiagonalProperty) {
  // For each executed pattern, every possible auction winner: settlement is
  // accepted iff the winner equals what was executed.
  for (unsigned k = 1; k <= 6; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t executed = 0; executed < n; ++executed) {
      auto t = testing::build_tail_chain(k, executed);
      auto& ch = *t.chain;
      const auto open = ch.now();
      std::vector<std::unique_ptr<PayToBias>> contracts;
      for (std::uint64_t claimed = 0; claimed < n; ++claimed) {
        contracts.push_back(std::make_unique<PayToBias>("manipulator", mock_scheme(), ch));
        contracts.back()->bias_offer("manipulator", 0, t.pks, t.reveals, open + 1, open + 1000);
        contracts.back()->bias_bid("bidder", 0, claimed, 1);
      }
      ch.advance_to(open + 1);
      for (std::uint64_t claimed = 0; claimed < n; ++claimed) {
        auto& c = *contracts[claimed];
        bool accepted = true;
        try {
          c.bias_take("manipulator", 0, t.evidence);
        } catch (const ContractRevert& e) {
          accepted = false;
          ASSERT_EQ(e.code(), ContractError::TimestampGap) << e.what();
        }
        ASSERT_EQ(accepted, claimed == executed) << "k=" << k << " executed=" << executed << " claimed=" << claimed;
      }
    }
  }
}

// --- Conservation fuzz --------------------------------------------------

TEST_F(ContractTest, ConservationFuzz) {
  std::mt19937_64 rng(77);
  const auto sigma_good = aggregate(3, m);
  const auto sigma_bad = aggregate(2, m);
  std::size_t accepted_takes = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    PayToAttest c("briber", mock_scheme(), chain);
    Gwei model_balance = 0, model_paid = 0, model_withdrawn = 0;
    std::vector<std::pair<OfferId, Gwei>> offers;
    const int ops = 2 + static_cast<int>(rng() % 10);
    for (int op = 0; op < ops; ++op) {
      const auto before = c.state_digest();
      const Gwei amt = static_cast<Gwei>(rng() % 12);
      try {
        switch (rng() % 6) {
          case 0:
            c.deposit_funds(rng() % 5 ? "briber" : "mallory", amt);
            model_balance += amt;
            break;
          case 1:
            c.withdraw_funds("briber", amt);
            model_balance -= amt;
            model_withdrawn += amt;
            break;
          case 2:
            offers.emplace_back(c.attest_offer("briber", keys(3), m, chain.now() + 1 + static_cast<int>(rng() % 2) - 1, amt), amt);
            break;
          case 3:
          case 4: {
            if (offers.empty()) break;
            auto [id, a] = offers[rng() % offers.size()];
            const auto paid = c.attest_take("bribee", id, rng() % 3 ? sigma_good : sigma_bad);
            EXPECT_EQ(paid, a);
            // Independent re-check of the accepted proof.
            EXPECT_TRUE(chain.scheme().verify_same_message_batch(keys(3), m.serialize(), sigma_good).valid);
            model_balance -= a;
            model_paid += a;
            ++accepted_takes;
            break;
          }
          default:
            if (offers.empty()) break;
            c.release_expired("briber", offers[rng() % offers.size()].first);
        }
      } catch (const ContractRevert&) {
        ASSERT_EQ(c.state_digest(), before);
      }
      ASSERT_GE(c.balance(), 0);
      ASSERT_LE(c.encumbered(), c.balance());
      ASSERT_EQ(c.balance(), model_balance);
      ASSERT_EQ(c.total_payouts(), model_paid);
      ASSERT_EQ(c.total_withdrawals(), model_withdrawn);
      ASSERT_EQ(c.total_deposits(), c.balance() + c.total_payouts() + c.total_refunds() + c.total_withdrawals());
      Gwei received = 0;
      for (const auto& [addr, v] : c.received()) received += v;
      ASSERT_EQ(received, c.total_payouts() + c.total_refunds() + c.total_withdrawals());
    }
  }
  EXPECT_GT(accepted_takes, 100u);
}

}  // namespace
}  // namespace bribery::contracts
