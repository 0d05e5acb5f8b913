// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <set>

#include "bribery/contracts/escrow.hpp"
#include "bribery/crypto/merkle.hpp"

namespace bribery::contracts {

/// Pays bribe_amnt to the withdraw address of every validator that proves a
/// signed voluntary exit, once per validator index.
class PayToExit : public Escrow {
 public:
  using ExitHook = std::function<void(const chain::VoluntaryExit&, const crypto::Signature&)>;

  /// The offer epoch is the current epoch at creation; exits for earlier
  /// epochs are refused.
  PayToExit(Address owner, crypto::SchemePtr scheme, const chain::ChainView& view,
            std::shared_ptr<chain::Transcript> transcript = nullptr);

  /// Called after each successful take so a simulator can queue the exit.
  void on_exit(ExitHook hook) { hook_ = std::move(hook); }

  Gwei exit_take(const Address& caller, chain::ValidatorIndex i, const crypto::PublicKey& pk,
                 const chain::VoluntaryExit& exit, const crypto::Signature& sigma, const crypto::MerkleProof& proof);

  chain::Epoch offer_epoch() const { return offer_epoch_; }
  bool claimed(chain::ValidatorIndex i) const { return claimed_.count(i) != 0; }
  chain::OrderedJson state() const override;

 private:
  crypto::SchemePtr scheme_;
  chain::Epoch offer_epoch_;
  std::set<chain::ValidatorIndex> claimed_;
  ExitHook hook_;
};

}  // namespace bribery::contracts
