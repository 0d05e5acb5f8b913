// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bribery/chain/fork_choice.hpp"
#include "bribery/chain/rewards.hpp"
#include "bribery/chain/transcript.hpp"
#include "bribery/chain/types.hpp"
#include "bribery/chain/validator_set.hpp"

namespace bribery::chain {

/// What a contract can read from the chain it runs on.
class ChainView {
 public:
  virtual ~ChainView() = default;
  virtual const ChainConfig& config() const = 0;
  virtual Seconds now() const = 0;
  Slot current_slot() const { return config().slot_at(now()); }
  Epoch current_epoch() const { return config().epoch_of(current_slot()); }
  virtual Height current_height() const = 0;
  /// Canonical hash at a height, inside the lookback window only.
  virtual std::optional<Root> blockhash(Height h) const = 0;
  /// Canonical beacon block root proposed at exactly this slot.
  virtual std::optional<Root> beacon_root(Slot s) const = 0;
  virtual Root deposit_root() const = 0;
  virtual std::string withdraw_address(ValidatorIndex i) const = 0;
};

enum class Visibility { Public, Private };

struct StoredBlock {
  BlockHeader header;
  Root root{};
  Root mix{};  // cumulative RANDAO mix after this block
  std::optional<Seconds> released;
  std::uint64_t seq = 0;
};

struct StoredAttestation {
  Attestation attestation;
  std::optional<Seconds> released;
  std::uint64_t seq = 0;
};

class SimChain : public ChainView {
 public:
  SimChain(ChainConfig config, crypto::SchemePtr scheme, ValidatorSet validators,
           TieBreak tie_break = TieBreak::LexicographicRoot, std::shared_ptr<Transcript> transcript = nullptr,
           Root genesis_mix = {});

  const ChainConfig& config() const override { return config_; }
  const crypto::SignatureScheme& scheme() const { return *scheme_; }
  const crypto::SchemePtr& scheme_ptr() const { return scheme_; }
  const ValidatorSet& validators() const { return validators_; }
  const std::shared_ptr<Transcript>& transcript() const { return transcript_; }
  TieBreak tie_break() const { return tie_break_; }

  Seconds now() const override { return now_; }
  /// Moves the clock forward, processing queued exits at epoch boundaries.
  void advance_to(Seconds t);
  void advance_to_slot(Slot s) { advance_to(config_.slot_start(s)); }
  void advance_to_deadline(Slot s) { advance_to(config_.attestation_deadline(s)); }

  void set_proposer(Slot s, ValidatorIndex v);
  ValidatorIndex scheduled_proposer(Slot s) const;

  Root genesis_root() const { return genesis_; }
  bool has_block(const Root& r) const { return blocks_.count(r) != 0; }
  const StoredBlock& block(const Root& r) const;
  std::vector<Root> block_roots() const;

  /// Returns the new header, or nothing when the proposer withholds. A
  /// public block is released at max(now, slot start); a private one only
  /// on publish_block.
  std::optional<BlockHeader> propose_block(Slot slot, ValidatorIndex proposer, const Root& parent, bool reveal = true,
                                           Visibility visibility = Visibility::Public);
  void publish_block(const Root& root);
  const std::set<Slot>& missed_slots() const { return missed_; }

  Attestation attest(Slot slot, ValidatorIndex validator, const Root& head,
                     Visibility visibility = Visibility::Public);
  AttestationData attestation_data(Slot slot, const Root& head) const;
  /// Releases every private block and attestation at the current time,
  /// blocks first.
  void publish_all_private();
  const std::vector<StoredAttestation>& attestations() const { return attestations_; }

  /// Fork choice over everything released by time t, with the proposer
  /// boost of the slot current at t.
  ForkChoice fork_choice_at(Seconds t) const;
  Root head_at(Seconds t) const { return fork_choice_at(t).head(); }
  Root head() const { return head_at(now_); }

  /// genesis .. head at the current time.
  const std::vector<Root>& canonical_chain() const;
  bool is_canonical(const Root& r) const;
  Height current_height() const override;
  std::optional<Root> blockhash(Height h) const override;
  std::optional<Root> beacon_root(Slot s) const override;
  Root deposit_root() const override { return validators_.deposit_root(); }
  std::string withdraw_address(ValidatorIndex i) const override { return validators_.at(i).withdraw_address; }

  /// Last block on `from`'s ancestry with slot <= s.
  Root ancestor_at_slot(const Root& from, Slot s) const;
  Root genesis_mix() const { return genesis_mix_; }
  /// Mix of the last canonical block at or before the end of epoch e.
  Root randao_mix(Epoch e) const;

  VoteCorrectness assess(const AttestationData& data) const;
  Fraction attestation_reward(const Attestation& att, std::uint64_t inclusion_delay,
                              const RewardWeights& w = {}) const;

  /// Verifies the signed exit and queues it. Queued exits leave the active
  /// set at epoch boundaries, at most exit_churn_per_epoch per epoch.
  void request_exit(const VoluntaryExit& exit, const crypto::Signature& sig);
  std::size_t pending_exits() const { return exit_queue_.size(); }

  /// Validators that signed two different votes for one target epoch or two
  /// blocks in one slot.
  std::set<ValidatorIndex> slashable_validators() const;

 private:
  void log(std::string_view event, OrderedJson fields) const;
  void invalidate() { canonical_valid_ = false; }

  ChainConfig config_;
  crypto::SchemePtr scheme_;
  ValidatorSet validators_;
  TieBreak tie_break_;
  std::shared_ptr<Transcript> transcript_;
  Root genesis_mix_;
  Root genesis_;
  Seconds now_;
  std::uint64_t seq_ = 0;

  std::map<Root, StoredBlock> blocks_;
  std::vector<Root> arrival_;  // insertion order
  std::map<Slot, ValidatorIndex> proposers_;
  std::set<Slot> missed_;
  std::vector<StoredAttestation> attestations_;
  std::deque<ValidatorIndex> exit_queue_;

  mutable bool canonical_valid_ = false;
  mutable std::vector<Root> canonical_;
  mutable std::set<Root> canonical_set_;
};

}  // namespace bribery::chain
