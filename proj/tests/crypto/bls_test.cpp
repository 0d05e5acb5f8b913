// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bribery/crypto/blst_backend.hpp"
#include "bribery/crypto/bls.hpp"
#include "bribery/crypto/mock_backend.hpp"

namespace bribery::crypto {
namespace {

// Outcome of a verification attempt on possibly-corrupted input: a decode
// failure is a rejection, never an acceptance.
template <class F>
bool accepts(F&& verify_call) {
  try {
    return verify_call().valid;
  } catch (const DecodeError&) {
    return false;
  }
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

template <class Scheme>
class BlsTest : public ::testing::Test {
 protected:
  Scheme scheme;
  // blst is ~1000x slower than the mock group; scale trial counts.
  static constexpr int kTrials = std::is_same_v<Scheme, Bls<MockBackend>> ? 2000 : 20;
};

using Backends = ::testing::Types<Bls<MockBackend>, Bls<BlstBackend>>;
TYPED_TEST_SUITE(BlsTest, Backends);

TYPED_TEST(BlsTest, KeygenIsDeterministic) {
  auto a = this->scheme.keygen(to_bytes("v0"));
  auto b = this->scheme.keygen(to_bytes("v0"));
  EXPECT_EQ(a.sk, b.sk);
  EXPECT_EQ(a.pk, b.pk);
  EXPECT_EQ(this->scheme.public_key(a.sk), a.pk);
  EXPECT_NE(this->scheme.keygen(to_bytes("a")).pk, this->scheme.keygen(to_bytes("b")).pk);
}

TYPED_TEST(BlsTest, EmptyInputsAreErrors) {
  auto kp = this->scheme.keygen(to_bytes("v0"));
  EXPECT_THROW(this->scheme.keygen(Bytes{}), std::invalid_argument);
  EXPECT_THROW(this->scheme.sign(kp.sk, Bytes{}), std::invalid_argument);
  EXPECT_THROW(this->scheme.verify_same_message_batch({}, to_bytes("m"), Signature{}),
               std::invalid_argument);
  EXPECT_THROW(this->scheme.verify_distinct_message_batch({}, Signature{}), std::invalid_argument);
}

TYPED_TEST(BlsTest, SignVerifyRoundTrip) {
  auto kp = this->scheme.keygen(to_bytes("signer"));
  auto sig = this->scheme.sign(kp.sk, to_bytes("hello"));
  EXPECT_TRUE(this->scheme.verify(kp.pk, to_bytes("hello"), sig).valid);
  EXPECT_FALSE(this->scheme.verify(kp.pk, to_bytes("hello"), this->scheme.sign(kp.sk, to_bytes("bye"))).valid);
  // Unique signatures.
  EXPECT_EQ(sig, this->scheme.sign(kp.sk, to_bytes("hello")));
}

TYPED_TEST(BlsTest, RandomRoundTripAndWrongKey) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < this->kTrials; ++t) {
    auto kp = this->scheme.keygen(random_bytes(rng, 16));
    auto other = this->scheme.keygen(random_bytes(rng, 16));
    auto msg = random_bytes(rng, 1 + rng() % 64);
    auto sig = this->scheme.sign(kp.sk, msg);
    ASSERT_TRUE(this->scheme.verify(kp.pk, msg, sig).valid);
    ASSERT_FALSE(this->scheme.verify(other.pk, msg, sig).valid);
  }
}

TYPED_TEST(BlsTest, MalformedElementsRaiseDecodeError) {
  auto kp = this->scheme.keygen(to_bytes("v0"));
  auto sig = this->scheme.sign(kp.sk, to_bytes("m"));
  Signature truncated{Bytes(sig.bytes.begin(), sig.bytes.end() - 1)};
  PublicKey garbage{Bytes(kp.pk.bytes.size(), 0xff)};
  EXPECT_THROW(this->scheme.verify(kp.pk, to_bytes("m"), truncated), DecodeError);
  EXPECT_THROW(this->scheme.verify(garbage, to_bytes("m"), sig), DecodeError);
}

TYPED_TEST(BlsTest, SameMessageBatch) {
  const auto m = to_bytes("attestation");
  std::vector<KeyPair> kps;
  for (int i = 0; i < 3; ++i) kps.push_back(this->scheme.keygen(to_bytes("signer-" + std::to_string(i))));
  std::vector<PublicKey> pks;
  std::vector<Signature> sigs;
  for (const auto& kp : kps) {
    pks.push_back(kp.pk);
    sigs.push_back(this->scheme.sign(kp.sk, m));
  }

  // n = 1 degenerates to plain verification.
  EXPECT_EQ(this->scheme.verify_same_message_batch(std::span(pks).first(1), m, sigs[0]).valid,
            this->scheme.verify(pks[0], m, sigs[0]).valid);

  auto agg = this->scheme.aggregate_signatures(sigs);
  EXPECT_TRUE(this->scheme.verify_same_message_batch(pks, m, agg).valid);

  sigs[1] = this->scheme.sign(kps[1].sk, to_bytes("other message"));
  EXPECT_FALSE(this->scheme.verify_same_message_batch(pks, m, this->scheme.aggregate_signatures(sigs)).valid);
}

TYPED_TEST(BlsTest, AggregationIsOrderIndependent) {
  std::vector<PublicKey> pks;
  std::vector<Signature> sigs;
  for (int i = 0; i < 6; ++i) {
    auto kp = this->scheme.keygen(to_bytes("o" + std::to_string(i)));
    pks.push_back(kp.pk);
    sigs.push_back(this->scheme.sign(kp.sk, to_bytes("m")));
  }
  auto agg_pk = this->scheme.aggregate_public_keys(pks);
  auto agg_sig = this->scheme.aggregate_signatures(sigs);
  std::reverse(pks.begin(), pks.end());
  std::rotate(sigs.begin(), sigs.begin() + 2, sigs.end());
  EXPECT_EQ(this->scheme.aggregate_public_keys(pks), agg_pk);
  EXPECT_EQ(this->scheme.aggregate_signatures(sigs), agg_sig);
}

TYPED_TEST(BlsTest, DistinctMessageBatch) {
  std::vector<KeyPair> kps;
  std::vector<KeyMessage> pairs;
  std::vector<Signature> sigs;
  for (int i = 0; i < 4; ++i) {
    kps.push_back(this->scheme.keygen(to_bytes("d" + std::to_string(i))));
    auto msg = to_bytes("exit-" + std::to_string(i));
    pairs.push_back({kps.back().pk, msg});
    sigs.push_back(this->scheme.sign(kps.back().sk, msg));
  }
  EXPECT_EQ(this->scheme.verify_distinct_message_batch(std::span(pairs).first(1), sigs[0]).valid,
            this->scheme.verify(pairs[0].pk, pairs[0].message, sigs[0]).valid);

  auto agg = this->scheme.aggregate_signatures(sigs);
  EXPECT_TRUE(this->scheme.verify_distinct_message_batch(pairs, agg).valid);

  std::swap(pairs[0].message, pairs[2].message);
  EXPECT_FALSE(this->scheme.verify_distinct_message_batch(pairs, agg).valid);
}

TYPED_TEST(BlsTest, PairingCounts) {
  const auto m = to_bytes("m");
  for (std::size_t n : {1u, 5u, 25u}) {
    std::vector<PublicKey> pks;
    std::vector<KeyMessage> pairs;
    std::vector<Signature> same, distinct;
    for (std::size_t i = 0; i < n; ++i) {
      auto kp = this->scheme.keygen(to_bytes("p" + std::to_string(i)));
      pks.push_back(kp.pk);
      same.push_back(this->scheme.sign(kp.sk, m));
      auto mi = to_bytes("m" + std::to_string(i));
      pairs.push_back({kp.pk, mi});
      distinct.push_back(this->scheme.sign(kp.sk, mi));
    }
    const auto before = this->scheme.pairings_evaluated();
    auto r1 = this->scheme.verify_same_message_batch(pks, m, this->scheme.aggregate_signatures(same));
    auto r2 = this->scheme.verify_distinct_message_batch(pairs, this->scheme.aggregate_signatures(distinct));
    EXPECT_TRUE(r1.valid);
    EXPECT_TRUE(r2.valid);
    EXPECT_EQ(r1.pairings, 2u) << "n=" << n;
    EXPECT_EQ(r2.pairings, n + 1) << "n=" << n;
    EXPECT_EQ(this->scheme.pairings_evaluated() - before, 2 + n + 1);
  }
}

TYPED_TEST(BlsTest, SingleBitCorruptionOfAggregateIsRejected) {
  std::mt19937_64 rng(11);
  const int rounds = std::is_same_v<TypeParam, Bls<MockBackend>> ? 50 : 3;
  for (int r = 0; r < rounds; ++r) {
    const std::size_t n = 1 + rng() % 64;
    const auto m = random_bytes(rng, 32);
    std::vector<PublicKey> pks;
    std::vector<Signature> sigs;
    for (std::size_t i = 0; i < n; ++i) {
      auto kp = this->scheme.keygen(random_bytes(rng, 16));
      pks.push_back(kp.pk);
      sigs.push_back(this->scheme.sign(kp.sk, m));
    }
    auto agg = this->scheme.aggregate_signatures(sigs);
    ASSERT_TRUE(this->scheme.verify_same_message_batch(pks, m, agg).valid);
    for (int flips = 0; flips < 8; ++flips) {
      auto bad = agg;
      const auto bit = rng() % (bad.bytes.size() * 8);
      bad.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      ASSERT_FALSE(accepts([&] { return this->scheme.verify_same_message_batch(pks, m, bad); }))
          << "bit " << bit;
    }
  }
}

TEST(MockBls, DistinctSeedsGiveDistinctKeys) {
  Bls<MockBackend> scheme;
  std::set<Bytes> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(scheme.keygen(to_bytes("seed-" + std::to_string(i))).pk.bytes);
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(BlstBls, EncodingSizes) {
  Bls<BlstBackend> scheme;
  auto kp = scheme.keygen(to_bytes("v0"));
  EXPECT_EQ(kp.pk.bytes.size(), 48u);
  EXPECT_EQ(scheme.sign(kp.sk, to_bytes("m")).bytes.size(), 96u);
  EXPECT_EQ(kp.pk.hex().size(), 2u + 96u);
}

}  // namespace
}  // namespace bribery::crypto
