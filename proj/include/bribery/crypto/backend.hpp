// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <cstddef>

#include "bribery/crypto/bytes.hpp"

namespace bribery::crypto {

/// A pairing-friendly group triple (G1, G2, GT) with a hash into G2.
///
/// Public keys live in G1 and signatures in G2. `pairing` may return an
/// unreduced target-group value as long as `gt_equal` compares the reduced
/// values and `gt_mul` is compatible with the reduction.
template <class B>
concept PairingBackend = requires(const typename B::Scalar& s, const typename B::G1& p,
                                  const typename B::G2& q, const typename B::GT& t, ByteView bytes) {
  typename B::Scalar;
  typename B::G1;
  typename B::G2;
  typename B::GT;
  { B::kName } -> std::convertible_to<const char*>;
  { B::scalar_from_seed(bytes) } -> std::same_as<typename B::Scalar>;
  { B::g1_generator() } -> std::same_as<typename B::G1>;
  { B::g1_mul_generator(s) } -> std::same_as<typename B::G1>;
  { B::g1_identity() } -> std::same_as<typename B::G1>;
  { B::g1_add(p, p) } -> std::same_as<typename B::G1>;
  { B::g2_identity() } -> std::same_as<typename B::G2>;
  { B::g2_add(q, q) } -> std::same_as<typename B::G2>;
  { B::g2_mul(q, s) } -> std::same_as<typename B::G2>;
  { B::hash_to_g2(bytes) } -> std::same_as<typename B::G2>;
  { B::pairing(p, q) } -> std::same_as<typename B::GT>;
  { B::gt_mul(t, t) } -> std::same_as<typename B::GT>;
  { B::gt_equal(t, t) } -> std::same_as<bool>;
  { B::encode_scalar(s) } -> std::same_as<Bytes>;
  { B::decode_scalar(bytes) } -> std::same_as<typename B::Scalar>;
  { B::encode_g1(p) } -> std::same_as<Bytes>;
  { B::decode_g1(bytes) } -> std::same_as<typename B::G1>;
  { B::encode_g2(q) } -> std::same_as<Bytes>;
  { B::decode_g2(bytes) } -> std::same_as<typename B::G2>;
};

}  // namespace bribery::crypto
