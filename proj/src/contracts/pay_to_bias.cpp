// SPDX-License-Identifier: Apache-2.0
#include "bribery/contracts/pay_to_bias.hpp"

#include <algorithm>
#include <set>

namespace bribery::contracts {

using chain::OrderedJson;

std::string config_string(TailConfig c, unsigned k) {
  std::string s(k, '0');
  for (unsigned j = 0; j < k; ++j)
    if ((c >> (k - 1 - j)) & 1) s[j] = '1';
  return s;
}

TailConfig parse_config(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw std::invalid_argument("config must have 1..63 bits");
  TailConfig c = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("config must be a bit string");
    c = (c << 1) | static_cast<TailConfig>(ch == '1');
  }
  return c;
}

PayToBias::PayToBias(Address manipulator, crypto::SchemePtr scheme, const chain::ChainView& view,
                     std::shared_ptr<chain::Transcript> transcript)
    : Escrow("PayToBias", std::move(manipulator), view, std::move(transcript)), scheme_(std::move(scheme)) {
  if (!scheme_) throw std::invalid_argument("PayToBias: null scheme");
}

const BiasAuction& PayToBias::auction(chain::Epoch e) const {
  auto it = auctions_.find(e);
  if (it == auctions_.end()) revert(ContractError::UnknownOffer, "no auction for epoch " + std::to_string(e));
  return it->second;
}

void PayToBias::bias_offer(const Address& caller, chain::Epoch e, std::vector<crypto::PublicKey> pks,
                           std::vector<crypto::Signature> reveals, chain::Seconds bid_close,
                           chain::Seconds deadline) {
  OrderedJson args{{"e", e}, {"k", pks.size()}, {"bid_close", bid_close}, {"deadline", deadline}};
  logged(caller, "bias_offer", args, [&] {
    require_owner(caller);
    if (auctions_.count(e)) revert(ContractError::Replay, "auction for this epoch exists");
    if (pks.empty() || pks.size() > kMaxTail || pks.size() != reveals.size())
      revert(ContractError::InvalidConfig, "need 1..20 tail slots with one reveal each");
    if (deadline <= bid_close) revert(ContractError::InvalidConfig, "deadline must follow bid close");
    const auto msg = chain::randao_message(e);
    for (std::size_t j = 0; j < pks.size(); ++j) {
      bool ok = false;
      try {
        ok = scheme_->verify(pks[j], msg, reveals[j]).valid;
      } catch (const crypto::DecodeError&) {
        ok = false;
      }
      if (!ok) revert(ContractError::BadReveal, "reveal " + std::to_string(j) + " does not verify");
    }
    BiasAuction a;
    a.epoch = e;
    a.k = static_cast<unsigned>(pks.size());
    a.pks = std::move(pks);
    a.reveals = std::move(reveals);
    a.bid_close = bid_close;
    a.deadline = deadline;
    auctions_.emplace(e, std::move(a));
  });
}

void PayToBias::bias_bid(const Address& caller, chain::Epoch e, TailConfig c, Gwei amount) {
  logged(caller, "bias_bid", {{"e", e}, {"config", c}, {"amount", amount}}, [&] {
    auto it = auctions_.find(e);
    if (it == auctions_.end()) revert(ContractError::UnknownOffer, "no auction for epoch " + std::to_string(e));
    auto& a = it->second;
    require_positive(amount);
    if (a.settled || view().now() >= a.bid_close) revert(ContractError::AuctionClosed, "bidding closed");
    if (c >> a.k) revert(ContractError::InvalidConfig, "config has more than k bits");
    credit(amount);
    encumber(amount);
    a.totals[c] += amount;
    a.bids.push_back({caller, c, amount});
  });
}

TailConfig PayToBias::winning_config(chain::Epoch e) const {
  const auto& a = auction(e);
  if (a.totals.empty()) revert(ContractError::NoBids, "no bids");
  // Map iteration is ascending, so strict > keeps the smallest on ties.
  auto best = a.totals.begin();
  for (auto it = a.totals.begin(); it != a.totals.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

Gwei PayToBias::bias_take(const Address& caller, chain::Epoch e, const std::vector<chain::BlockHeader>& headers) {
  OrderedJson args{{"e", e}, {"headers", OrderedJson::array()}};
  for (const auto& h : headers) args["headers"].push_back(crypto::to_hex(h.root()));
  return logged(caller, "bias_take", args, [&] {
    auto it = auctions_.find(e);
    if (it == auctions_.end()) revert(ContractError::UnknownOffer, "no auction for epoch " + std::to_string(e));
    auto& a = it->second;
    if (a.settled) revert(ContractError::AlreadySettled, "auction settled");
    if (view().now() >= a.deadline) revert(ContractError::Expired, "deadline passed");
    if (view().now() < a.bid_close) revert(ContractError::AuctionOpen, "bidding still open");
    const TailConfig winner = winning_config(e);
    if (headers.size() < 2) revert(ContractError::IncompleteEvidence, "need at least two headers");

    const auto& cfg = view().config();
    std::vector<chain::Slot> slots;
    for (std::size_t j = 0; j < headers.size(); ++j) {
      const auto& h = headers[j];
      auto hash = view().blockhash(h.height);
      if (!hash) revert(ContractError::StaleBlockhash, "height " + std::to_string(h.height) + " outside the window");
      if (*hash != h.root()) revert(ContractError::HeaderHashMismatch, "header at height " + std::to_string(h.height));
      if (j > 0 && (h.parent_hash != headers[j - 1].root() || h.height != headers[j - 1].height + 1))
        revert(ContractError::BrokenLinkage, "header " + std::to_string(j) + " does not extend its predecessor");
      const auto offset = h.timestamp - cfg.genesis_time;
      if (offset < 0 || offset % cfg.slot_seconds != 0)
        revert(ContractError::TimestampGap, "timestamp off the slot grid");
      slots.push_back(static_cast<chain::Slot>(offset / cfg.slot_seconds));
    }
    const chain::Slot first = a.first_tail_slot(cfg), last = cfg.epoch_end(e);
    if (slots.front() >= first || slots.back() <= last)
      revert(ContractError::IncompleteEvidence, "headers do not span the tail slots");

    TailConfig executed = 0;
    for (unsigned j = 0; j < a.k; ++j) {
      const chain::Slot s = first + j;
      auto pos = std::find(slots.begin(), slots.end(), s);
      const bool published = pos != slots.end();
      executed = (executed << 1) | static_cast<TailConfig>(!published);
      if (published && headers[pos - slots.begin()].randao_reveal != a.reveals[j])
        revert(ContractError::BadReveal, "published tail block carries another reveal");
    }
    if (executed != winner)
      revert(ContractError::TimestampGap, "timestamps show " + config_string(executed, a.k) + ", auction chose " +
                                              config_string(winner, a.k));

    const Gwei prize = a.totals.at(winner);
    a.settled = true;
    pay(owner(), prize, true);
    for (const auto& b : a.bids)
      if (b.config != winner) refund(b.bidder, b.amount, true);
    return prize;
  });
}

void PayToBias::bias_refund(const Address& caller, chain::Epoch e) {
  logged(caller, "bias_refund", {{"e", e}}, [&] {
    auto it = auctions_.find(e);
    if (it == auctions_.end()) revert(ContractError::UnknownOffer, "no auction for epoch " + std::to_string(e));
    auto& a = it->second;
    if (a.settled) revert(ContractError::AlreadySettled, "auction settled");
    if (view().now() < a.deadline) revert(ContractError::NotExpired, "deadline not reached");
    a.settled = true;
    for (const auto& b : a.bids) refund(b.bidder, b.amount, true);
  });
}

OrderedJson PayToBias::state() const {
  auto s = Escrow::state();
  auto& arr = s["auctions"] = OrderedJson::array();
  for (const auto& [e, a] : auctions_) {
    OrderedJson j{{"epoch", e}, {"k", a.k}, {"bid_close", a.bid_close}, {"deadline", a.deadline},
                  {"settled", a.settled}};
    j["reveals"] = OrderedJson::array();
    for (const auto& r : a.reveals) j["reveals"].push_back(r.hex());
    j["bids"] = OrderedJson::array();
    for (const auto& b : a.bids) j["bids"].push_back({{"bidder", b.bidder}, {"config", b.config}, {"amount", b.amount}});
    arr.push_back(std::move(j));
  }
  return s;
}

}  // namespace bribery::contracts
