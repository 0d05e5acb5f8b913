// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "bribery/crypto/bytes.hpp"

namespace bribery::crypto {

struct SecretKey {
  Bytes bytes;
  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

/// Canonical (compressed) encoding of a G1 element.
struct PublicKey {
  Bytes bytes;
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
  std::string hex() const { return to_hex(bytes); }
};

/// Canonical (compressed) encoding of a G2 element.
struct Signature {
  Bytes bytes;
  friend bool operator==(const Signature&, const Signature&) = default;
  std::string hex() const { return to_hex(bytes); }
};

struct KeyPair {
  SecretKey sk;
  PublicKey pk;
};

struct KeyMessage {
  PublicKey pk;
  Bytes message;
};

/// Outcome of a verification together with the number of pairing
/// evaluations it performed.
struct VerifyResult {
  bool valid = false;
  std::size_t pairings = 0;
  explicit operator bool() const { return valid; }
};

/// Type-erased BLS signature scheme working on canonical encodings, the way
/// a contract sees keys and signatures in calldata.
///
/// Malformed encodings raise DecodeError; empty key lists, empty seeds and
/// empty messages raise std::invalid_argument.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual std::string_view name() const = 0;

  virtual KeyPair keygen(ByteView seed) const = 0;
  virtual PublicKey public_key(const SecretKey& sk) const = 0;
  virtual Signature sign(const SecretKey& sk, ByteView message) const = 0;
  virtual VerifyResult verify(const PublicKey& pk, ByteView message, const Signature& sig) const = 0;

  virtual PublicKey aggregate_public_keys(std::span<const PublicKey> pks) const = 0;
  virtual Signature aggregate_signatures(std::span<const Signature> sigs) const = 0;

  /// e(g1, sigma_agg) == e(prod pk_i, H(m)): two pairings for any n.
  virtual VerifyResult verify_same_message_batch(std::span<const PublicKey> pks, ByteView message,
                                                 const Signature& aggregate) const = 0;

  /// e(g1, sigma_agg) == prod e(pk_i, H(m_i)): n + 1 pairings.
  virtual VerifyResult verify_distinct_message_batch(std::span<const KeyMessage> pairs,
                                                     const Signature& aggregate) const = 0;

  /// Cumulative pairing evaluations performed through this instance.
  std::uint64_t pairings_evaluated() const { return pairings_.load(std::memory_order_relaxed); }

 protected:
  void count_pairings(std::size_t n) const { pairings_.fetch_add(n, std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> pairings_{0};
};

using SchemePtr = std::shared_ptr<const SignatureScheme>;

/// "mock" or "bls12-381".
SchemePtr make_scheme(std::string_view backend);

}  // namespace bribery::crypto
