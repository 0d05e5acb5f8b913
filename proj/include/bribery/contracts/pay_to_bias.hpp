// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "bribery/contracts/escrow.hpp"

namespace bribery::contracts {

/// A tail configuration over k slots, as a k-bit integer. The most
/// significant bit is the first tail slot; a set bit means "withhold".
/// Integer order equals lexicographic order of the bit string.
using TailConfig = std::uint64_t;

std::string config_string(TailConfig c, unsigned k);
TailConfig parse_config(std::string_view bits);

struct Bid {
  Address bidder;
  TailConfig config = 0;
  Gwei amount = 0;
};

struct BiasAuction {
  chain::Epoch epoch = 0;
  unsigned k = 0;
  std::vector<crypto::PublicKey> pks;      // one per tail slot
  std::vector<crypto::Signature> reveals;  // premature RANDAO reveals
  chain::Seconds bid_close = 0;
  chain::Seconds deadline = 0;
  std::map<TailConfig, Gwei> totals;
  std::vector<Bid> bids;
  bool settled = false;

  chain::Slot first_tail_slot(const chain::ChainConfig& c) const { return c.epoch_end(epoch) + 1 - k; }
};

/// Auctions the right to choose which of the manipulator's k tail slots of
/// an epoch are published.
class PayToBias : public Escrow {
 public:
  static constexpr unsigned kMaxTail = 20;

  PayToBias(Address manipulator, crypto::SchemePtr scheme, const chain::ChainView& view,
            std::shared_ptr<chain::Transcript> transcript = nullptr);

  /// Reveals are checked as signatures on e under the matching keys.
  void bias_offer(const Address& caller, chain::Epoch e, std::vector<crypto::PublicKey> pks,
                  std::vector<crypto::Signature> reveals, chain::Seconds bid_close, chain::Seconds deadline);
  /// Bids are additive; the bid amount is held by the contract.
  void bias_bid(const Address& caller, chain::Epoch e, TailConfig c, Gwei amount);
  /// Argmax of total bids; ties go to the smallest config.
  TailConfig winning_config(chain::Epoch e) const;
  /// `headers` is a run of consecutive canonical headers from before the
  /// tail to after it. On success pays the manipulator the winning total and
  /// refunds losing bids.
  Gwei bias_take(const Address& caller, chain::Epoch e, const std::vector<chain::BlockHeader>& headers);
  /// After the deadline without a valid proof every bid is refunded.
  void bias_refund(const Address& caller, chain::Epoch e);

  const BiasAuction& auction(chain::Epoch e) const;
  chain::OrderedJson state() const override;

 private:
  crypto::SchemePtr scheme_;
  std::map<chain::Epoch, BiasAuction> auctions_;
};

}  // namespace bribery::contracts
