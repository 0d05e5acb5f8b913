// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bribery/chain/sim_chain.hpp"
#include "bribery/contracts/pay_to_bias.hpp"

namespace bribery::attacks {

using contracts::TailConfig;

struct BiasOutcome {
  TailConfig config = 0;
  chain::Root mix{};
};

/// All 2^k tail configurations in counter order with the epoch mix each
/// would produce, starting from the mix left by the last pre-tail block.
std::vector<BiasOutcome> randao_enumerate(const chain::Root& base_mix, const std::vector<crypto::Signature>& tail_reveals,
                                          unsigned cap = contracts::PayToBias::kMaxTail);

struct BiasSetup {
  unsigned validators = 64;
  std::string backend = "mock";
  bool record_transcript = false;
  /// Salts validator key derivation, and with it every RANDAO reveal.
  std::uint64_t key_seed = 0;
};

/// Epoch 0 played up to the slot before the manipulator's k tail slots.
struct BiasChain {
  std::unique_ptr<chain::SimChain> chain;
  unsigned k = 0;
  chain::Slot first_tail_slot = 0;
  chain::Root pre_tail{};
  std::vector<crypto::PublicKey> pks;
  std::vector<crypto::Signature> reveals;
};

BiasChain build_bias_chain(unsigned k, const BiasSetup& setup = {});
/// Plays the tail per `config`, then the first slot of epoch 1. Returns the
/// headers from the pre-tail block through that slot.
std::vector<chain::BlockHeader> execute_tail(BiasChain& bc, TailConfig config);

struct AuctionReport {
  unsigned k = 0;
  std::vector<BiasOutcome> outcomes;
  std::map<TailConfig, contracts::Gwei> totals;
  TailConfig winner = 0;
  chain::Root predicted_mix{};
  chain::Root realized_mix{};
  bool accepted = false;
  std::string rejection;
  contracts::Gwei payout = 0;
  std::map<contracts::Address, contracts::Gwei> received;
  std::shared_ptr<chain::Transcript> transcript;

  chain::OrderedJson to_json() const;
};

/// Runs a full auction: offer, bids, execution of the winning config, and
/// settlement with real header evidence. Throws std::invalid_argument when
/// there are no bids or k exceeds the cap.
AuctionReport run_bias_auction(unsigned k, const std::vector<contracts::Bid>& bids, const BiasSetup& setup = {});

}  // namespace bribery::attacks
