// SPDX-License-Identifier: Apache-2.0
#include "bribery/contracts/escrow.hpp"

namespace bribery::contracts {

std::string_view to_string(ContractError e) {
  switch (e) {
    case ContractError::Overdraft: return "overdraft";
    case ContractError::NotOwner: return "not_owner";
    case ContractError::InvalidAmount: return "invalid_amount";
    case ContractError::InsufficientEscrow: return "insufficient_escrow";
    case ContractError::UnknownOffer: return "unknown_offer";
    case ContractError::Replay: return "replay";
    case ContractError::Expired: return "expired";
    case ContractError::NotExpired: return "not_expired";
    case ContractError::InvalidSignature: return "invalid_signature";
    case ContractError::NotBriberBlock: return "not_briber_block";
    case ContractError::BadMerkleProof: return "bad_merkle_proof";
    case ContractError::DoubleClaim: return "double_claim";
    case ContractError::StaleExit: return "stale_exit";
    case ContractError::BadReveal: return "bad_reveal";
    case ContractError::AuctionClosed: return "auction_closed";
    case ContractError::AuctionOpen: return "auction_open";
    case ContractError::InvalidConfig: return "invalid_config";
    case ContractError::NoBids: return "no_bids";
    case ContractError::AlreadySettled: return "already_settled";
    case ContractError::HeaderHashMismatch: return "header_hash_mismatch";
    case ContractError::BrokenLinkage: return "broken_linkage";
    case ContractError::TimestampGap: return "timestamp_gap";
    case ContractError::StaleBlockhash: return "stale_blockhash";
    case ContractError::IncompleteEvidence: return "incomplete_evidence";
  }
  return "unknown";
}

ContractRevert::ContractRevert(ContractError code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Escrow::Escrow(std::string name, Address owner, const chain::ChainView& view,
               std::shared_ptr<chain::Transcript> transcript)
    : name_(std::move(name)), owner_(std::move(owner)), view_(view), transcript_(std::move(transcript)) {}

void Escrow::revert(ContractError code, const std::string& what) { throw ContractRevert(code, what); }

void Escrow::require_owner(const Address& caller) const {
  if (caller != owner_) revert(ContractError::NotOwner, "caller " + caller + " is not the owner");
}

void Escrow::require_positive(Gwei amount) {
  if (amount <= 0) revert(ContractError::InvalidAmount, "amount must be positive");
}

void Escrow::deposit_funds(const Address& caller, Gwei amount) {
  logged(caller, "deposit_funds", {{"amount", amount}}, [&] {
    require_owner(caller);
    require_positive(amount);
    deposits_ += amount;
  });
}

void Escrow::update_bribe_amnt(const Address& caller, Gwei amount) {
  logged(caller, "update_bribe_amnt", {{"amount", amount}}, [&] {
    require_owner(caller);
    if (amount < 0) revert(ContractError::InvalidAmount, "negative bribe amount");
    bribe_amnt_ = amount;
  });
}

void Escrow::withdraw_funds(const Address& caller, Gwei amount) {
  logged(caller, "withdraw_funds", {{"amount", amount}}, [&] {
    require_owner(caller);
    require_positive(amount);
    if (amount > unencumbered())
      revert(ContractError::Overdraft, "withdraw " + std::to_string(amount) + " exceeds unencumbered " +
                                           std::to_string(unencumbered()));
    withdrawals_ += amount;
    received_[caller] += amount;
  });
}

void Escrow::encumber(Gwei amount) {
  if (amount > unencumbered())
    revert(ContractError::InsufficientEscrow,
           "need " + std::to_string(amount) + ", unencumbered " + std::to_string(unencumbered()));
  encumbered_ += amount;
}

void Escrow::pay(const Address& to, Gwei amount, bool from_encumbered) {
  if (from_encumbered) encumbered_ -= amount;
  payouts_ += amount;
  received_[to] += amount;
}

void Escrow::refund(const Address& to, Gwei amount, bool from_encumbered) {
  if (from_encumbered) encumbered_ -= amount;
  refunds_ += amount;
  received_[to] += amount;
}

chain::OrderedJson Escrow::state() const {
  chain::OrderedJson s;
  s["name"] = name_;
  s["owner"] = owner_;
  s["bribe_amnt"] = bribe_amnt_;
  s["deposits"] = deposits_;
  s["withdrawals"] = withdrawals_;
  s["payouts"] = payouts_;
  s["refunds"] = refunds_;
  s["encumbered"] = encumbered_;
  s["received"] = chain::OrderedJson(received_);
  return s;
}

crypto::Hash256 Escrow::state_digest() const { return crypto::sha256(state().dump()); }

void Escrow::log_call(const Address& caller, std::string_view fn, const chain::OrderedJson& args,
                      std::string_view result, Gwei delta) const {
  if (!transcript_) return;
  chain::OrderedJson e;
  e["t"] = view_.now();
  e["contract"] = name_;
  e["caller"] = caller;
  e["fn"] = fn;
  e["args_hash"] = crypto::to_hex(crypto::sha256(args.dump()));
  e["result"] = result;
  e["balance_delta"] = delta;
  transcript_->record("contract_call", std::move(e));
}

}  // namespace bribery::contracts
