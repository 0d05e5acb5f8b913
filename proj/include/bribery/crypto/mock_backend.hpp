// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "bribery/crypto/bytes.hpp"

namespace bribery::crypto {

/// Insecure stand-in group for fast property tests and large sweeps.
///
/// Every element of G1, G2 and GT is represented by its discrete logarithm
/// modulo the Mersenne prime q = 2^61 - 1, so the group law is addition and
/// the pairing is multiplication of exponents. Bilinearity holds exactly,
/// which is all the signature algebra needs. Encodings are 8 bytes
/// big-endian; values >= q are rejected.
struct MockBackend {
  static constexpr const char* kName = "mock";
  static constexpr std::uint64_t kOrder = (std::uint64_t{1} << 61) - 1;

  struct Scalar {
    std::uint64_t v = 0;
    friend bool operator==(Scalar, Scalar) = default;
  };
  struct G1 {
    std::uint64_t v = 0;
    friend bool operator==(G1, G1) = default;
  };
  struct G2 {
    std::uint64_t v = 0;
    friend bool operator==(G2, G2) = default;
  };
  struct GT {
    std::uint64_t v = 0;
  };

  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kOrder ? s - kOrder : s;
  }
  __extension__ using Wide = unsigned __int128;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    auto p = static_cast<Wide>(a) * b;
    return static_cast<std::uint64_t>(p % kOrder);
  }
  static std::uint64_t reduce_digest(const Hash256& h) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | h[i];
    return v % kOrder;
  }

  static Scalar scalar_from_seed(ByteView seed) {
    Bytes tagged = to_bytes("MOCK-KEYGEN");
    put_bytes(tagged, seed);
    // sk in [1, q-1]
    return Scalar{1 + reduce_digest(sha256(tagged)) % (kOrder - 1)};
  }

  static G1 g1_generator() { return G1{1}; }
  static G1 g1_mul_generator(const Scalar& s) { return G1{s.v}; }
  static G1 g1_identity() { return G1{0}; }
  static G1 g1_add(const G1& a, const G1& b) { return G1{add(a.v, b.v)}; }

  static G2 g2_identity() { return G2{0}; }
  static G2 g2_add(const G2& a, const G2& b) { return G2{add(a.v, b.v)}; }
  static G2 g2_mul(const G2& a, const Scalar& s) { return G2{mul(a.v, s.v)}; }
  static G2 hash_to_g2(ByteView msg) {
    Bytes tagged = to_bytes("MOCK-H2G2");
    put_bytes(tagged, msg);
    return G2{reduce_digest(sha256(tagged))};
  }

  static GT pairing(const G1& p, const G2& q) { return GT{mul(p.v, q.v)}; }
  static GT gt_mul(const GT& a, const GT& b) { return GT{add(a.v, b.v)}; }
  static bool gt_equal(const GT& a, const GT& b) { return a.v == b.v; }

  static Bytes encode_u64(std::uint64_t v) {
    Bytes out(8);
    for (int i = 7; i >= 0; --i) {
      out[i] = static_cast<std::uint8_t>(v & 0xff);
      v >>= 8;
    }
    return out;
  }
  static std::uint64_t decode_u64(ByteView in, const char* what) {
    if (in.size() != 8) throw DecodeError(std::string("mock ") + what + ": expected 8 bytes");
    std::uint64_t v = 0;
    for (auto b : in) v = (v << 8) | b;
    if (v >= kOrder) throw DecodeError(std::string("mock ") + what + ": value out of range");
    return v;
  }

  static Bytes encode_scalar(const Scalar& s) { return encode_u64(s.v); }
  static Scalar decode_scalar(ByteView in) { return Scalar{decode_u64(in, "scalar")}; }
  static Bytes encode_g1(const G1& p) { return encode_u64(p.v); }
  static G1 decode_g1(ByteView in) {
    auto v = decode_u64(in, "G1 element");
    if (v == 0) throw DecodeError("mock G1 element: identity is not a valid key");
    return G1{v};
  }
  static Bytes encode_g2(const G2& q) { return encode_u64(q.v); }
  static G2 decode_g2(ByteView in) { return G2{decode_u64(in, "G2 element")}; }
};

}  // namespace bribery::crypto
