// SPDX-License-Identifier: Apache-2.0
#include "bribery/contracts/pay_to_exit.hpp"

namespace bribery::contracts {

PayToExit::PayToExit(Address owner, crypto::SchemePtr scheme, const chain::ChainView& view,
                     std::shared_ptr<chain::Transcript> transcript)
    : Escrow("PayToExit", std::move(owner), view, std::move(transcript)),
      scheme_(std::move(scheme)),
      offer_epoch_(view.current_epoch()) {
  if (!scheme_) throw std::invalid_argument("PayToExit: null scheme");
}

Gwei PayToExit::exit_take(const Address& caller, chain::ValidatorIndex i, const crypto::PublicKey& pk,
                          const chain::VoluntaryExit& exit, const crypto::Signature& sigma,
                          const crypto::MerkleProof& proof) {
  chain::OrderedJson args{{"i", i}, {"pk", pk.hex()}, {"epoch", exit.epoch}, {"sigma", sigma.hex()}};
  return logged(caller, "exit_take", args, [&] {
    if (claimed_.count(i)) revert(ContractError::DoubleClaim, "validator " + std::to_string(i) + " already paid");
    if (!crypto::merkle_verify(view().deposit_root(), pk.bytes, i, proof))
      revert(ContractError::BadMerkleProof, "key is not deposited at index " + std::to_string(i));
    if (exit.validator_index != i) revert(ContractError::InvalidSignature, "exit names another validator");
    bool ok = false;
    try {
      ok = scheme_->verify(pk, exit.serialize(), sigma).valid;
    } catch (const crypto::DecodeError&) {
      ok = false;
    }
    if (!ok) revert(ContractError::InvalidSignature, "exit signature does not verify");
    if (exit.epoch < offer_epoch_) revert(ContractError::StaleExit, "exit predates the offer");
    const Gwei amount = bribe_amnt();
    if (amount <= 0) revert(ContractError::InvalidAmount, "bribe amount not set");
    if (amount > unencumbered()) revert(ContractError::InsufficientEscrow, "escrow cannot cover the bribe");
    const auto to = view().withdraw_address(i);
    if (hook_) hook_(exit, sigma);
    claimed_.insert(i);
    pay(to, amount, false);
    return amount;
  });
}

chain::OrderedJson PayToExit::state() const {
  auto s = Escrow::state();
  s["offer_epoch"] = offer_epoch_;
  s["claimed"] = chain::OrderedJson(claimed_);
  return s;
}

}  // namespace bribery::contracts
