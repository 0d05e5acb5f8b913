// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "bribery/contracts/escrow.hpp"

namespace bribery::contracts {

using OfferId = std::uint64_t;

struct AttestOffer {
  std::vector<crypto::PublicKey> pks;  // bribed keys, or one aggregate key
  crypto::PublicKey pk_agg;
  // Fixed target. Empty for open offers, which name the briber instead.
  std::optional<chain::AttestationData> message;
  std::optional<crypto::PublicKey> briber_pk;
  chain::Seconds deadline = 0;
  Gwei amount = 0;
  bool claimed = false;
  bool released = false;
};

/// Pays for an aggregate signature on an attestation, before a deadline.
class PayToAttest : public Escrow {
 public:
  PayToAttest(Address owner, crypto::SchemePtr scheme, const chain::ChainView& view,
              std::shared_ptr<chain::Transcript> transcript = nullptr);

  OfferId attest_offer(const Address& caller, std::vector<crypto::PublicKey> pks, const chain::AttestationData& m,
                       chain::Seconds deadline, Gwei amount);
  Gwei attest_take(const Address& caller, OfferId id, const crypto::Signature& sigma_agg);

  /// The target block is chosen after the offer; the take must show that
  /// the attested block carries a RANDAO reveal signed by the briber.
  OfferId attest_offer_open(const Address& caller, std::vector<crypto::PublicKey> pks,
                            const crypto::PublicKey& briber_pk, chain::Seconds deadline, Gwei amount);
  Gwei attest_take_open(const Address& caller, OfferId id, const chain::AttestationData& m,
                        const crypto::Signature& sigma_agg, const chain::BlockHeader& block);

  /// Owner reclaims the escrow of an offer whose deadline passed unclaimed.
  void release_expired(const Address& caller, OfferId id);

  const AttestOffer& offer(OfferId id) const;
  std::size_t offer_count() const { return offers_.size(); }
  chain::OrderedJson state() const override;

 private:
  OfferId store(const Address& caller, AttestOffer o);
  AttestOffer& checked(OfferId id, const crypto::Signature& sigma, const chain::AttestationData& m);

  crypto::SchemePtr scheme_;
  std::vector<AttestOffer> offers_;
};

}  // namespace bribery::contracts
