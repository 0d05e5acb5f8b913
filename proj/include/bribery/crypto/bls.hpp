// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "bribery/crypto/backend.hpp"
#include "bribery/crypto/signature_scheme.hpp"

namespace bribery::crypto {

/// BLS signatures (keys in G1, signatures in G2) over any PairingBackend.
template <PairingBackend B>
class Bls final : public SignatureScheme {
 public:
  std::string_view name() const override { return B::kName; }

  KeyPair keygen(ByteView seed) const override {
    if (seed.empty()) throw std::invalid_argument("keygen: empty seed");
    auto sk = B::scalar_from_seed(seed);
    return KeyPair{SecretKey{B::encode_scalar(sk)}, PublicKey{B::encode_g1(B::g1_mul_generator(sk))}};
  }

  PublicKey public_key(const SecretKey& sk) const override {
    return PublicKey{B::encode_g1(B::g1_mul_generator(B::decode_scalar(sk.bytes)))};
  }

  Signature sign(const SecretKey& sk, ByteView message) const override {
    require_message(message);
    auto s = B::decode_scalar(sk.bytes);
    return Signature{B::encode_g2(B::g2_mul(B::hash_to_g2(message), s))};
  }

  VerifyResult verify(const PublicKey& pk, ByteView message, const Signature& sig) const override {
    require_message(message);
    auto key = B::decode_g1(pk.bytes);
    auto sigma = B::decode_g2(sig.bytes);
    return check(key, B::hash_to_g2(message), sigma);
  }

  PublicKey aggregate_public_keys(std::span<const PublicKey> pks) const override {
    if (pks.empty()) throw std::invalid_argument("aggregate_public_keys: empty key list");
    return PublicKey{B::encode_g1(sum_keys(pks))};
  }

  Signature aggregate_signatures(std::span<const Signature> sigs) const override {
    if (sigs.empty()) throw std::invalid_argument("aggregate_signatures: empty signature list");
    auto acc = B::g2_identity();
    for (const auto& s : sigs) acc = B::g2_add(acc, B::decode_g2(s.bytes));
    return Signature{B::encode_g2(acc)};
  }

  VerifyResult verify_same_message_batch(std::span<const PublicKey> pks, ByteView message,
                                         const Signature& aggregate) const override {
    if (pks.empty()) throw std::invalid_argument("verify_same_message_batch: empty key list");
    require_message(message);
    auto key = sum_keys(pks);
    auto sigma = B::decode_g2(aggregate.bytes);
    return check(key, B::hash_to_g2(message), sigma);
  }

  VerifyResult verify_distinct_message_batch(std::span<const KeyMessage> pairs,
                                             const Signature& aggregate) const override {
    if (pairs.empty()) throw std::invalid_argument("verify_distinct_message_batch: empty list");
    std::vector<typename B::G1> keys;
    keys.reserve(pairs.size());
    for (const auto& km : pairs) {
      require_message(km.message);
      keys.push_back(B::decode_g1(km.pk.bytes));
    }
    auto sigma = B::decode_g2(aggregate.bytes);

    auto lhs = B::pairing(B::g1_generator(), sigma);
    auto rhs = B::pairing(keys[0], B::hash_to_g2(pairs[0].message));
    for (std::size_t i = 1; i < pairs.size(); ++i)
      rhs = B::gt_mul(rhs, B::pairing(keys[i], B::hash_to_g2(pairs[i].message)));

    const std::size_t used = pairs.size() + 1;
    count_pairings(used);
    return VerifyResult{B::gt_equal(lhs, rhs), used};
  }

 private:
  static void require_message(ByteView message) {
    if (message.empty()) throw std::invalid_argument("empty message");
  }

  static typename B::G1 sum_keys(std::span<const PublicKey> pks) {
    auto acc = B::g1_identity();
    for (const auto& pk : pks) acc = B::g1_add(acc, B::decode_g1(pk.bytes));
    return acc;
  }

  VerifyResult check(const typename B::G1& key, const typename B::G2& hashed,
                     const typename B::G2& sigma) const {
    auto lhs = B::pairing(B::g1_generator(), sigma);
    auto rhs = B::pairing(key, hashed);
    count_pairings(2);
    return VerifyResult{B::gt_equal(lhs, rhs), 2};
  }
};

}  // namespace bribery::crypto
