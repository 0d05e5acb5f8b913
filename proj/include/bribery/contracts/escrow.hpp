// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bribery/chain/sim_chain.hpp"
#include "bribery/chain/transcript.hpp"

namespace bribery::contracts {

using Gwei = std::int64_t;
using Address = std::string;

enum class ContractError {
  Overdraft,
  NotOwner,
  InvalidAmount,
  InsufficientEscrow,
  UnknownOffer,
  Replay,
  Expired,
  NotExpired,
  InvalidSignature,
  NotBriberBlock,
  BadMerkleProof,
  DoubleClaim,
  StaleExit,
  BadReveal,
  AuctionClosed,
  AuctionOpen,
  InvalidConfig,
  NoBids,
  AlreadySettled,
  HeaderHashMismatch,
  BrokenLinkage,
  TimestampGap,
  StaleBlockhash,
  IncompleteEvidence,
};

std::string_view to_string(ContractError e);

/// A reverted call. State is untouched when this is thrown.
class ContractRevert : public std::runtime_error {
 public:
  ContractRevert(ContractError code, const std::string& what);
  ContractError code() const { return code_; }

 private:
  ContractError code_;
};

/// Escrowed funds and the owner-facing admin interface shared by all
/// bribery contracts. Amounts are integer gwei.
///
/// balance = deposits - withdrawals - payouts - refunds, and encumbered funds
/// (promised to open offers or held for bidders) can't be withdrawn.
class Escrow {
 public:
  Escrow(std::string name, Address owner, const chain::ChainView& view,
         std::shared_ptr<chain::Transcript> transcript = nullptr);
  virtual ~Escrow() = default;

  void deposit_funds(const Address& caller, Gwei amount);
  void update_bribe_amnt(const Address& caller, Gwei amount);
  void withdraw_funds(const Address& caller, Gwei amount);
  Gwei bribe_amnt() const { return bribe_amnt_; }

  const std::string& name() const { return name_; }
  const Address& owner() const { return owner_; }
  Gwei balance() const { return deposits_ - withdrawals_ - payouts_ - refunds_; }
  Gwei encumbered() const { return encumbered_; }
  Gwei unencumbered() const { return balance() - encumbered_; }
  Gwei total_deposits() const { return deposits_; }
  Gwei total_withdrawals() const { return withdrawals_; }
  Gwei total_payouts() const { return payouts_; }
  Gwei total_refunds() const { return refunds_; }
  /// Net amount each address received from this contract.
  const std::map<Address, Gwei>& received() const { return received_; }

  /// Canonical dump of the full contract state.
  virtual chain::OrderedJson state() const;
  crypto::Hash256 state_digest() const;

 protected:
  const chain::ChainView& view() const { return view_; }
  void require_owner(const Address& caller) const;
  static void require_positive(Gwei amount);
  [[noreturn]] static void revert(ContractError code, const std::string& what);

  // Bookkeeping primitives. Callers have already checked everything, so
  // these never fail half-way.
  void credit(Gwei amount) { deposits_ += amount; }
  void encumber(Gwei amount);
  void release(Gwei amount) { encumbered_ -= amount; }
  void pay(const Address& to, Gwei amount, bool from_encumbered);
  void refund(const Address& to, Gwei amount, bool from_encumbered);

  /// Runs `body`, logging the call with its outcome and balance delta.
  template <class F>
  auto logged(const Address& caller, std::string_view fn, const chain::OrderedJson& args, F&& body)
      -> decltype(body());

 private:
  void log_call(const Address& caller, std::string_view fn, const chain::OrderedJson& args,
                std::string_view result, Gwei delta) const;

  std::string name_;
  Address owner_;
  const chain::ChainView& view_;
  std::shared_ptr<chain::Transcript> transcript_;
  Gwei bribe_amnt_ = 0;
  Gwei deposits_ = 0;
  Gwei withdrawals_ = 0;
  Gwei payouts_ = 0;
  Gwei refunds_ = 0;
  Gwei encumbered_ = 0;
  std::map<Address, Gwei> received_;
};

template <class F>
auto Escrow::logged(const Address& caller, std::string_view fn, const chain::OrderedJson& args, F&& body)
    -> decltype(body()) {
  const Gwei before = balance();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      log_call(caller, fn, args, "ok", balance() - before);
    } else {
      auto out = body();
      log_call(caller, fn, args, "ok", balance() - before);
      return out;
    }
  } catch (const ContractRevert& e) {
    log_call(caller, fn, args, to_string(e.code()), 0);
    throw;
  }
}

}  // namespace bribery::contracts
