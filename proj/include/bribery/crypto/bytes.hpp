// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bribery::crypto {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit digest (block roots, Merkle nodes, RANDAO mixes).
using Hash256 = std::array<std::uint8_t, 32>;

class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when bytes do not decode to a valid group element or scalar.
/// Verification never turns a malformed input into a silent `false`.
class DecodeError : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

Hash256 sha256(ByteView data);
Hash256 sha256(std::string_view text);

std::string to_hex(ByteView data);
inline std::string to_hex(const Hash256& h) { return to_hex(ByteView{h}); }

/// Accepts an optional "0x" prefix; throws DecodeError on odd length or
/// non-hex characters.
Bytes from_hex(std::string_view hex);
Hash256 hash_from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

inline ByteView view(const Hash256& h) { return ByteView{h.data(), h.size()}; }

Hash256 xor_hash(const Hash256& a, const Hash256& b);

// Little-endian fixed-width encoders used by every canonical serialization.
void put_u64(Bytes& out, std::uint64_t v);
void put_bytes(Bytes& out, ByteView v);
std::uint64_t get_u64(ByteView in, std::size_t offset);

}  // namespace bribery::crypto
