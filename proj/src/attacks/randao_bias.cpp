// SPDX-License-Identifier: Apache-2.0
#include "bribery/attacks/randao_bias.hpp"

#include <stdexcept>

namespace bribery::attacks {

using chain::OrderedJson;
using chain::Root;
using chain::Slot;

std::vector<BiasOutcome> randao_enumerate(const Root& base_mix, const std::vector<crypto::Signature>& tail_reveals,
                                          unsigned cap) {
  const auto k = static_cast<unsigned>(tail_reveals.size());
  if (k > cap) throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the cap of " + std::to_string(cap));
  std::vector<Root> contrib;
  for (const auto& r : tail_reveals) contrib.push_back(chain::randao_contribution(r));
  std::vector<BiasOutcome> out;
  out.reserve(std::size_t{1} << k);
  for (TailConfig c = 0; c < (TailConfig{1} << k); ++c) {
    Root mix = base_mix;
    for (unsigned j = 0; j < k; ++j)
      if (((c >> (k - 1 - j)) & 1) == 0) mix = crypto::xor_hash(mix, contrib[j]);
    out.push_back({c, mix});
  }
  return out;
}

BiasChain build_bias_chain(unsigned k, const BiasSetup& setup) {
  if (k > contracts::PayToBias::kMaxTail)
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the cap of " +
                                std::to_string(contracts::PayToBias::kMaxTail));
  auto scheme = crypto::make_scheme(setup.backend);
  chain::ValidatorSet set;
  const std::string prefix = setup.key_seed == 0 ? "validator-" : "validator-" + std::to_string(setup.key_seed) + "-";
  for (unsigned i = 0; i < setup.validators; ++i)
    set.add(scheme->keygen(crypto::to_bytes(prefix + std::to_string(i))), chain::Fraction{32},
            chain::Behavior::Altruistic);
  std::shared_ptr<chain::Transcript> transcript;
  if (setup.record_transcript) transcript = std::make_shared<chain::Transcript>();

  BiasChain bc;
  bc.chain = std::make_unique<chain::SimChain>(chain::ChainConfig{}, scheme, std::move(set),
                                               chain::TieBreak::LexicographicRoot, transcript);
  bc.k = k;
  auto& ch = *bc.chain;
  const auto& cfg = ch.config();
  bc.first_tail_slot = cfg.epoch_end(0) + 1 - k;
  if (bc.first_tail_slot < 2) throw std::invalid_argument("tail leaves no pre-tail slot");
  for (unsigned j = 0; j < k; ++j) {
    const auto& v = ch.validators().at(ch.scheduled_proposer(bc.first_tail_slot + j));
    bc.pks.push_back(v.keys.pk);
    bc.reveals.push_back(ch.scheme().sign(v.keys.sk, chain::randao_message(0)));
  }
  Root parent = ch.genesis_root();
  for (Slot s = 1; s < bc.first_tail_slot; ++s) {
    ch.advance_to_slot(s);
    parent = ch.propose_block(s, ch.scheduled_proposer(s), parent)->root();
  }
  bc.pre_tail = parent;
  return bc;
}

std::vector<chain::BlockHeader> execute_tail(BiasChain& bc, TailConfig config) {
  auto& ch = *bc.chain;
  std::vector<chain::BlockHeader> evidence{ch.block(bc.pre_tail).header};
  Root parent = bc.pre_tail;
  const Slot next = ch.config().epoch_start(1);
  for (Slot s = bc.first_tail_slot; s <= next; ++s) {
    ch.advance_to_slot(s);
    bool publish = true;
    if (s < next) publish = ((config >> (bc.k - 1 - (s - bc.first_tail_slot))) & 1) == 0;
    auto h = ch.propose_block(s, ch.scheduled_proposer(s), parent, publish);
    if (h) {
      parent = h->root();
      evidence.push_back(*h);
    }
  }
  return evidence;
}

AuctionReport run_bias_auction(unsigned k, const std::vector<contracts::Bid>& bids, const BiasSetup& setup) {
  if (bids.empty()) throw std::invalid_argument("run_bias_auction: no bids");
  auto bc = build_bias_chain(k, setup);
  auto& ch = *bc.chain;
  const auto& cfg = ch.config();

  AuctionReport rep;
  rep.k = k;
  rep.transcript = ch.transcript();
  rep.outcomes = randao_enumerate(ch.block(bc.pre_tail).mix, bc.reveals);

  contracts::PayToBias contract("manipulator", ch.scheme_ptr(), ch, ch.transcript());
  contract.bias_offer("manipulator", 0, bc.pks, bc.reveals, cfg.slot_start(bc.first_tail_slot),
                      cfg.slot_start(cfg.epoch_start(2)));
  for (const auto& b : bids) contract.bias_bid(b.bidder, 0, b.config, b.amount);
  rep.totals = contract.auction(0).totals;
  rep.winner = contract.winning_config(0);
  rep.predicted_mix = rep.outcomes.at(rep.winner).mix;

  const auto evidence = execute_tail(bc, rep.winner);
  rep.realized_mix = ch.randao_mix(0);
  try {
    rep.payout = contract.bias_take("manipulator", 0, evidence);
    rep.accepted = true;
  } catch (const contracts::ContractRevert& e) {
    rep.rejection = e.what();
  }
  rep.received = contract.received();
  return rep;
}

OrderedJson AuctionReport::to_json() const {
  OrderedJson j;
  j["schema_version"] = 1;
  j["k"] = k;
  auto& outs = j["outcomes"] = OrderedJson::array();
  for (const auto& o : outcomes) outs.push_back({{"config", contracts::config_string(o.config, k)}, {"mix", crypto::to_hex(o.mix)}});
  auto& tot = j["bid_totals"] = OrderedJson::object();
  for (const auto& [c, v] : totals) tot[contracts::config_string(c, k)] = v;
  j["winner"] = contracts::config_string(winner, k);
  j["predicted_mix"] = crypto::to_hex(predicted_mix);
  j["realized_mix"] = crypto::to_hex(realized_mix);
  j["settlement_accepted"] = accepted;
  if (!accepted) j["rejection"] = rejection;
  j["payout_gwei"] = payout;
  auto& rec = j["received_gwei"] = OrderedJson::object();
  for (const auto& [a, v] : received) rec[a] = v;
  return j;
}

}  // namespace bribery::attacks
