// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bribery/attacks/scenario.hpp"
#include "bribery/chain/sim_chain.hpp"
#include "bribery/contracts/escrow.hpp"

namespace bribery::attacks {

struct AttackParams {
  /// Virtual attesters per slot. Each class gets at least one member when
  /// its share is positive; per-member stake is share / count, so branch
  /// weights stay exact for any size.
  std::size_t committee_size = 1000;
  /// Paid per bribed attestation.
  contracts::Gwei bribe_per_vote = 10'000;
  std::string backend = "mock";
  /// Record a full transcript (slower; off for sweeps).
  bool record_transcript = false;
  /// Salts the deterministic attester key derivation. Outcomes and weights
  /// do not depend on it; signatures and roots in the transcript do.
  std::uint64_t key_seed = 0;
};

struct SlotRecord {
  chain::Slot slot = 0;
  Party proposer = Party::Honest;
  std::optional<chain::Root> block;
  bool block_private = false;
  /// Stake cast this slot for the adversary branch, the honest branch and
  /// the common ancestor.
  Fraction adversary_votes{0};
  Fraction honest_votes{0};
  Fraction base_votes{0};
  chain::Root public_head{};
};

struct Payout {
  chain::Slot slot = 0;
  contracts::Gwei amount = 0;
  std::size_t bribees = 0;
};

struct AttackReport {
  ScenarioSpec spec;
  std::size_t committee_size = 0;
  bool predicted = false;
  bool success = false;
  chain::Slot decision_slot = 0;
  /// Branch weights under full view once the last adversary block is out.
  Fraction adversary_weight{0};
  Fraction honest_weight{0};
  chain::Root base{};
  chain::Root adversary_tip{};
  chain::Root honest_tip{};
  chain::Root final_head{};
  std::vector<SlotRecord> slots;
  std::vector<std::pair<chain::Seconds, chain::Root>> head_history;
  std::vector<Payout> payouts;
  contracts::Gwei total_bribes = 0;
  std::size_t slashable = 0;
  std::shared_ptr<chain::Transcript> transcript;

  chain::OrderedJson to_json() const;
};

AttackReport run_expost(const ScenarioSpec& spec, const AttackParams& params = {});
AttackReport run_exante(const ScenarioSpec& spec, const AttackParams& params = {});
AttackReport run_scenario(const ScenarioSpec& spec, const AttackParams& params = {});

struct GridCell {
  unsigned h = 1;
  unsigned a = 1;
  ReorgKind kind = ReorgKind::ExPost;
  Fraction alpha{0};
  Fraction beta{0};
  bool predicted = false;
  bool simulated = false;
  Fraction adversary_weight{0};
  Fraction honest_weight{0};
};

/// Runs every (h, a, kind, alpha, beta) combination on a worker pool.
/// Output order is deterministic.
std::vector<GridCell> reorg_grid(const std::vector<unsigned>& hs, const std::vector<unsigned>& as,
                                 const std::vector<Fraction>& alphas, const std::vector<Fraction>& betas,
                                 const AttackParams& params, Fraction p_boost = Fraction{2, 5},
                                 unsigned threads = 0);

/// n evenly spaced values from lo to hi inclusive.
std::vector<Fraction> linspace(Fraction lo, Fraction hi, std::size_t n);

}  // namespace bribery::attacks
