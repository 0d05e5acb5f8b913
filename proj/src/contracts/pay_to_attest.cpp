// SPDX-License-Identifier: Apache-2.0
#include "bribery/contracts/pay_to_attest.hpp"

namespace bribery::contracts {

using chain::OrderedJson;
using crypto::to_hex;

PayToAttest::PayToAttest(Address owner, crypto::SchemePtr scheme, const chain::ChainView& view,
                         std::shared_ptr<chain::Transcript> transcript)
    : Escrow("PayToAttest", std::move(owner), view, std::move(transcript)), scheme_(std::move(scheme)) {
  if (!scheme_) throw std::invalid_argument("PayToAttest: null scheme");
}

OfferId PayToAttest::store(const Address& caller, AttestOffer o) {
  require_owner(caller);
  require_positive(o.amount);
  if (o.pks.empty()) revert(ContractError::InvalidSignature, "empty key set");
  try {
    o.pk_agg = scheme_->aggregate_public_keys(o.pks);
  } catch (const crypto::DecodeError& e) {
    revert(ContractError::InvalidSignature, std::string("malformed public key: ") + e.what());
  }
  encumber(o.amount);
  offers_.push_back(std::move(o));
  return offers_.size() - 1;
}

OfferId PayToAttest::attest_offer(const Address& caller, std::vector<crypto::PublicKey> pks,
                                  const chain::AttestationData& m, chain::Seconds deadline, Gwei amount) {
  OrderedJson args{{"n_keys", pks.size()}, {"m", to_hex(m.root())}, {"deadline", deadline}, {"amount", amount}};
  return logged(caller, "attest_offer", args, [&] {
    AttestOffer o;
    o.pks = std::move(pks);
    o.message = m;
    o.deadline = deadline;
    o.amount = amount;
    return store(caller, std::move(o));
  });
}

OfferId PayToAttest::attest_offer_open(const Address& caller, std::vector<crypto::PublicKey> pks,
                                       const crypto::PublicKey& briber_pk, chain::Seconds deadline, Gwei amount) {
  OrderedJson args{{"n_keys", pks.size()}, {"briber", briber_pk.hex()}, {"deadline", deadline}, {"amount", amount}};
  return logged(caller, "attest_offer_open", args, [&] {
    AttestOffer o;
    o.pks = std::move(pks);
    o.briber_pk = briber_pk;
    o.deadline = deadline;
    o.amount = amount;
    return store(caller, std::move(o));
  });
}

const AttestOffer& PayToAttest::offer(OfferId id) const {
  if (id >= offers_.size()) revert(ContractError::UnknownOffer, "offer " + std::to_string(id));
  return offers_[id];
}

AttestOffer& PayToAttest::checked(OfferId id, const crypto::Signature& sigma, const chain::AttestationData& m) {
  if (id >= offers_.size()) revert(ContractError::UnknownOffer, "offer " + std::to_string(id));
  auto& o = offers_[id];
  if (o.claimed) revert(ContractError::Replay, "offer already claimed");
  if (o.released) revert(ContractError::Expired, "offer released");
  if (view().now() >= o.deadline) revert(ContractError::Expired, "deadline passed");
  bool ok = false;
  try {
    ok = scheme_->verify_same_message_batch(o.pks, m.serialize(), sigma).valid;
  } catch (const crypto::DecodeError&) {
    ok = false;
  }
  if (!ok) revert(ContractError::InvalidSignature, "aggregate signature does not verify");
  return o;
}

Gwei PayToAttest::attest_take(const Address& caller, OfferId id, const crypto::Signature& sigma_agg) {
  return logged(caller, "attest_take", {{"id", id}, {"sigma", sigma_agg.hex()}}, [&] {
    if (id < offers_.size() && !offers_[id].message)
      revert(ContractError::UnknownOffer, "offer is open; use attest_take_open");
    const auto& m = id < offers_.size() ? *offers_[id].message : chain::AttestationData{};
    auto& o = checked(id, sigma_agg, m);
    o.claimed = true;
    pay(caller, o.amount, true);
    return o.amount;
  });
}

Gwei PayToAttest::attest_take_open(const Address& caller, OfferId id, const chain::AttestationData& m,
                                   const crypto::Signature& sigma_agg, const chain::BlockHeader& block) {
  OrderedJson args{{"id", id}, {"m", to_hex(m.root())}, {"sigma", sigma_agg.hex()}, {"block", to_hex(block.root())}};
  return logged(caller, "attest_take_open", args, [&] {
    if (id >= offers_.size()) revert(ContractError::UnknownOffer, "offer " + std::to_string(id));
    if (!offers_[id].briber_pk) revert(ContractError::UnknownOffer, "offer has a fixed target");
    const auto& briber = *offers_[id].briber_pk;
    if (offers_[id].claimed) revert(ContractError::Replay, "offer already claimed");
    if (block.root() != m.beacon_block_root) revert(ContractError::NotBriberBlock, "header does not match the vote");
    bool by_briber = false;
    try {
      by_briber = scheme_->verify(briber, chain::randao_message(view().config().epoch_of(block.slot)),
                                  block.randao_reveal).valid;
    } catch (const crypto::DecodeError&) {
      by_briber = false;
    }
    if (!by_briber) revert(ContractError::NotBriberBlock, "randao reveal is not the briber's");
    auto& o = checked(id, sigma_agg, m);
    o.claimed = true;
    pay(caller, o.amount, true);
    return o.amount;
  });
}

void PayToAttest::release_expired(const Address& caller, OfferId id) {
  logged(caller, "release_expired", {{"id", id}}, [&] {
    require_owner(caller);
    if (id >= offers_.size()) revert(ContractError::UnknownOffer, "offer " + std::to_string(id));
    auto& o = offers_[id];
    if (o.claimed) revert(ContractError::Replay, "offer already claimed");
    if (o.released) revert(ContractError::Replay, "offer already released");
    if (view().now() < o.deadline) revert(ContractError::NotExpired, "deadline not reached");
    o.released = true;
    release(o.amount);
  });
}

OrderedJson PayToAttest::state() const {
  auto s = Escrow::state();
  auto& arr = s["offers"] = OrderedJson::array();
  for (const auto& o : offers_) {
    arr.push_back({{"pk_agg", o.pk_agg.hex()},
                   {"m", o.message ? to_hex(o.message->root()) : ""},
                   {"briber", o.briber_pk ? o.briber_pk->hex() : ""},
                   {"deadline", o.deadline},
                   {"amount", o.amount},
                   {"claimed", o.claimed},
                   {"released", o.released}});
  }
  return s;
}

}  // namespace bribery::contracts
