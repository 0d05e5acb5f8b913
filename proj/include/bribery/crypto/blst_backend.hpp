// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <blst.h>

#include "bribery/crypto/bytes.hpp"

namespace bribery::crypto {

/// BLS12-381 through blst, in the minimal-public-key layout used by the
/// beacon chain: 48-byte compressed G1 keys, 96-byte compressed G2
/// signatures, hash-to-curve per the IETF suite with Ethereum's DST.
///
/// GT values are Miller-loop outputs; the final exponentiation happens once
/// inside `gt_equal`.
struct BlstBackend {
  static constexpr const char* kName = "bls12-381";
  static constexpr std::string_view kDst = "BLS_SIG_BLS12381G2_XMD:SHA-256_SSWU_RO_POP_";

  struct Scalar {
    blst_scalar s;
  };
  struct G1 {
    blst_p1 p;
  };
  struct G2 {
    blst_p2 p;
  };
  struct GT {
    blst_fp12 f;
  };

  static Scalar scalar_from_seed(ByteView seed) {
    // blst_keygen wants >= 32 bytes of input keying material.
    Hash256 ikm = sha256(seed);
    Scalar out{};
    blst_keygen(&out.s, ikm.data(), ikm.size(), nullptr, 0);
    return out;
  }

  static G1 g1_generator() { return G1{*blst_p1_generator()}; }
  static G1 g1_mul_generator(const Scalar& s) {
    G1 out{};
    blst_sk_to_pk_in_g1(&out.p, &s.s);
    return out;
  }
  static G1 g1_identity() { return G1{}; }
  static G1 g1_add(const G1& a, const G1& b) {
    G1 out{};
    blst_p1_add_or_double(&out.p, &a.p, &b.p);
    return out;
  }

  static G2 g2_identity() { return G2{}; }
  static G2 g2_add(const G2& a, const G2& b) {
    G2 out{};
    blst_p2_add_or_double(&out.p, &a.p, &b.p);
    return out;
  }
  static G2 g2_mul(const G2& a, const Scalar& s) {
    G2 out{};
    blst_sign_pk_in_g1(&out.p, &a.p, &s.s);
    return out;
  }
  static G2 hash_to_g2(ByteView msg) {
    G2 out{};
    blst_hash_to_g2(&out.p, msg.data(), msg.size(), reinterpret_cast<const byte*>(kDst.data()),
                    kDst.size(), nullptr, 0);
    return out;
  }

  static GT pairing(const G1& p, const G2& q) {
    blst_p1_affine pa;
    blst_p2_affine qa;
    blst_p1_to_affine(&pa, &p.p);
    blst_p2_to_affine(&qa, &q.p);
    GT out{};
    blst_miller_loop(&out.f, &qa, &pa);
    return out;
  }
  static GT gt_mul(const GT& a, const GT& b) {
    GT out{};
    blst_fp12_mul(&out.f, &a.f, &b.f);
    return out;
  }
  static bool gt_equal(const GT& a, const GT& b) { return blst_fp12_finalverify(&a.f, &b.f); }

  static Bytes encode_scalar(const Scalar& s) {
    Bytes out(32);
    blst_bendian_from_scalar(out.data(), &s.s);
    return out;
  }
  static Scalar decode_scalar(ByteView in) {
    if (in.size() != 32) throw DecodeError("bls12-381 scalar: expected 32 bytes");
    Scalar out{};
    blst_scalar_from_bendian(&out.s, in.data());
    if (!blst_sk_check(&out.s)) throw DecodeError("bls12-381 scalar: not in [1, r-1]");
    return out;
  }

  static Bytes encode_g1(const G1& p) {
    Bytes out(48);
    blst_p1_compress(out.data(), &p.p);
    return out;
  }
  static G1 decode_g1(ByteView in) {
    if (in.size() != 48) throw DecodeError("bls12-381 G1: expected 48 compressed bytes");
    blst_p1_affine a;
    if (blst_p1_uncompress(&a, in.data()) != BLST_SUCCESS)
      throw DecodeError("bls12-381 G1: not a valid point encoding");
    if (blst_p1_affine_is_inf(&a)) throw DecodeError("bls12-381 G1: identity is not a valid key");
    if (!blst_p1_affine_in_g1(&a)) throw DecodeError("bls12-381 G1: point not in subgroup");
    G1 out{};
    blst_p1_from_affine(&out.p, &a);
    return out;
  }

  static Bytes encode_g2(const G2& q) {
    Bytes out(96);
    blst_p2_compress(out.data(), &q.p);
    return out;
  }
  static G2 decode_g2(ByteView in) {
    if (in.size() != 96) throw DecodeError("bls12-381 G2: expected 96 compressed bytes");
    blst_p2_affine a;
    if (blst_p2_uncompress(&a, in.data()) != BLST_SUCCESS)
      throw DecodeError("bls12-381 G2: not a valid point encoding");
    if (!blst_p2_affine_in_g2(&a)) throw DecodeError("bls12-381 G2: point not in subgroup");
    G2 out{};
    blst_p2_from_affine(&out.p, &a);
    return out;
  }
};

}  // namespace bribery::crypto
