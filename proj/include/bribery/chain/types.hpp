// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "bribery/crypto/bytes.hpp"
#include "bribery/crypto/signature_scheme.hpp"

namespace bribery::chain {

using Slot = std::uint64_t;
using Epoch = std::uint64_t;
using Height = std::uint64_t;
using ValidatorIndex = std::uint64_t;
using Seconds = std::int64_t;
using Root = crypto::Hash256;

/// Exact fractions. Stake and fork-choice weights are kept in this type so
/// that comparisons between branches never round.
using Fraction = boost::rational<std::int64_t>;

double to_double(const Fraction& f);
/// Parses "0.4", "2/5" or "1" into an exact fraction.
Fraction parse_fraction(std::string_view text);

struct ChainConfig {
  std::uint64_t slots_per_epoch = 32;
  Seconds slot_seconds = 12;
  Seconds proposal_window_seconds = 4;
  Fraction p_boost{2, 5};
  std::uint64_t blockhash_window = 8191;
  // One committee per slot, each holding 1/committees_per_epoch of the set.
  std::uint64_t committees_per_epoch = 32;
  Seconds genesis_time = 0;
  std::uint64_t exit_churn_per_epoch = 8;

  void validate() const;

  Epoch epoch_of(Slot s) const { return s / slots_per_epoch; }
  Slot epoch_start(Epoch e) const { return e * slots_per_epoch; }
  Slot epoch_end(Epoch e) const { return epoch_start(e) + slots_per_epoch - 1; }
  Seconds slot_start(Slot s) const { return genesis_time + static_cast<Seconds>(s) * slot_seconds; }
  Seconds attestation_deadline(Slot s) const { return slot_start(s) + proposal_window_seconds; }
  Slot slot_at(Seconds t) const;
};

struct BlockHeader {
  Slot slot = 0;
  Height height = 0;
  Root parent_hash{};
  ValidatorIndex proposer_index = 0;
  Seconds timestamp = 0;
  crypto::Signature randao_reveal;
  Root body_hash{};

  crypto::Bytes serialize() const;
  static BlockHeader deserialize(crypto::ByteView bytes);
  Root root() const;
  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Checkpoint {
  Epoch epoch = 0;
  Root root{};
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Signed vote content. There is no committee index, so every attester of
/// the same head in the same slot signs identical bytes.
struct AttestationData {
  Slot slot = 0;
  Root beacon_block_root{};
  Checkpoint source;
  Checkpoint target;

  crypto::Bytes serialize() const;
  static AttestationData deserialize(crypto::ByteView bytes);
  Root root() const { return crypto::sha256(serialize()); }
  friend bool operator==(const AttestationData&, const AttestationData&) = default;
};

struct Attestation {
  AttestationData data;
  ValidatorIndex validator = 0;
  crypto::Signature signature;
};

struct VoluntaryExit {
  Epoch epoch = 0;
  ValidatorIndex validator_index = 0;

  crypto::Bytes serialize() const;
  friend bool operator==(const VoluntaryExit&, const VoluntaryExit&) = default;
};

/// Message signed for a RANDAO reveal: the epoch as 8 little-endian bytes.
crypto::Bytes randao_message(Epoch e);
/// Contribution of a reveal to the mix.
inline Root randao_contribution(const crypto::Signature& reveal) { return crypto::sha256(reveal.bytes); }

}  // namespace bribery::chain
