// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/sim_chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace bribery::chain {

using crypto::to_hex;

SimChain::SimChain(ChainConfig config, crypto::SchemePtr scheme, ValidatorSet validators, TieBreak tie_break,
                   std::shared_ptr<Transcript> transcript, Root genesis_mix)
    : config_(config),
      scheme_(std::move(scheme)),
      validators_(std::move(validators)),
      tie_break_(tie_break),
      transcript_(std::move(transcript)),
      genesis_mix_(genesis_mix),
      now_(config.genesis_time) {
  config_.validate();
  if (!scheme_) throw std::invalid_argument("SimChain: null signature scheme");
  StoredBlock g;
  g.header.timestamp = config_.genesis_time;
  g.header.body_hash = crypto::sha256(crypto::view(genesis_mix_));
  g.root = g.header.root();
  g.mix = genesis_mix_;
  g.released = config_.genesis_time;
  g.seq = seq_++;
  genesis_ = g.root;
  arrival_.push_back(g.root);
  blocks_.emplace(g.root, std::move(g));
  log("genesis", {{"root", to_hex(genesis_)}, {"validators", validators_.size()}});
}

void SimChain::log(std::string_view event, OrderedJson fields) const {
  if (!transcript_) return;
  OrderedJson e;
  e["t"] = now_;
  for (auto& [k, v] : fields.items()) e[k] = std::move(v);
  transcript_->record(event, std::move(e));
}

void SimChain::advance_to(Seconds t) {
  if (t < now_) throw std::invalid_argument("SimChain: time cannot move backwards");
  const Epoch from = config_.epoch_of(config_.slot_at(now_));
  const Epoch to = config_.epoch_of(config_.slot_at(t));
  now_ = t;
  for (Epoch e = from + 1; e <= to && !exit_queue_.empty(); ++e) {
    for (std::uint64_t n = 0; n < config_.exit_churn_per_epoch && !exit_queue_.empty(); ++n) {
      auto v = exit_queue_.front();
      exit_queue_.pop_front();
      validators_.set_active(v, false);
      log("exit", {{"epoch", e}, {"validator", v}});
    }
  }
  invalidate();
}

void SimChain::set_proposer(Slot s, ValidatorIndex v) {
  validators_.at(v);
  proposers_[s] = v;
}

ValidatorIndex SimChain::scheduled_proposer(Slot s) const {
  if (auto it = proposers_.find(s); it != proposers_.end()) return it->second;
  if (validators_.size() == 0) throw std::logic_error("SimChain: empty validator set");
  return s % validators_.size();
}

const StoredBlock& SimChain::block(const Root& r) const {
  auto it = blocks_.find(r);
  if (it == blocks_.end()) throw std::invalid_argument("unknown block " + to_hex(r));
  return it->second;
}

std::vector<Root> SimChain::block_roots() const { return arrival_; }

std::optional<BlockHeader> SimChain::propose_block(Slot slot, ValidatorIndex proposer, const Root& parent, bool reveal,
                                                   Visibility visibility) {
  if (proposer != scheduled_proposer(slot))
    throw std::invalid_argument("propose_block: validator " + std::to_string(proposer) + " is not the proposer of slot " +
                                std::to_string(slot));
  auto pit = blocks_.find(parent);
  if (pit == blocks_.end()) throw std::invalid_argument("propose_block: unknown parent");
  if (slot <= pit->second.header.slot) throw std::invalid_argument("propose_block: slot must follow the parent");
  if (!reveal) {
    missed_.insert(slot);
    log("skip", {{"slot", slot}, {"proposer", proposer}});
    return std::nullopt;
  }
  const auto& v = validators_.at(proposer);
  StoredBlock b;
  b.header.slot = slot;
  b.header.height = pit->second.header.height + 1;
  b.header.parent_hash = parent;
  b.header.proposer_index = proposer;
  b.header.timestamp = config_.slot_start(slot);
  b.header.randao_reveal = scheme_->sign(v.keys.sk, randao_message(config_.epoch_of(slot)));
  b.header.body_hash = crypto::sha256("body:" + std::to_string(slot) + ":" + std::to_string(proposer));
  b.root = b.header.root();
  if (blocks_.count(b.root)) throw std::invalid_argument("propose_block: duplicate block");
  b.mix = crypto::xor_hash(pit->second.mix, randao_contribution(b.header.randao_reveal));
  if (visibility == Visibility::Public) b.released = std::max(now_, config_.slot_start(slot));
  b.seq = seq_++;
  log("propose", {{"slot", slot},
                  {"height", b.header.height},
                  {"root", to_hex(b.root)},
                  {"parent", to_hex(parent)},
                  {"proposer", proposer},
                  {"visibility", visibility == Visibility::Public ? "public" : "private"}});
  auto header = b.header;
  arrival_.push_back(b.root);
  blocks_.emplace(b.root, std::move(b));
  invalidate();
  return header;
}

void SimChain::publish_block(const Root& root) {
  auto it = blocks_.find(root);
  if (it == blocks_.end()) throw std::invalid_argument("publish_block: unknown block");
  if (it->second.released) return;
  it->second.released = now_;
  it->second.seq = seq_++;
  log("publish", {{"root", to_hex(root)}});
  invalidate();
}

AttestationData SimChain::attestation_data(Slot slot, const Root& head) const {
  AttestationData d;
  d.slot = slot;
  d.beacon_block_root = head;
  const Epoch e = config_.epoch_of(slot);
  d.target = {e, ancestor_at_slot(head, config_.epoch_start(e))};
  const Epoch se = e == 0 ? 0 : e - 1;
  d.source = {se, ancestor_at_slot(head, config_.epoch_start(se))};
  return d;
}

Attestation SimChain::attest(Slot slot, ValidatorIndex validator, const Root& head, Visibility visibility) {
  if (!validators_.in_committee(validator, slot, config_))
    throw std::invalid_argument("attest: validator " + std::to_string(validator) + " is not in the committee of slot " +
                                std::to_string(slot));
  if (!blocks_.count(head)) throw std::invalid_argument("attest: unknown head");
  Attestation a;
  a.data = attestation_data(slot, head);
  a.validator = validator;
  a.signature = scheme_->sign(validators_.at(validator).keys.sk, a.data.serialize());
  StoredAttestation s{a, std::nullopt, seq_++};
  if (visibility == Visibility::Public) s.released = std::max(now_, config_.slot_start(slot));
  attestations_.push_back(std::move(s));
  log("attest", {{"slot", slot},
                 {"validator", validator},
                 {"head", to_hex(head)},
                 {"data_root", to_hex(a.data.root())},
                 {"visibility", visibility == Visibility::Public ? "public" : "private"}});
  invalidate();
  return a;
}

void SimChain::publish_all_private() {
  std::size_t nb = 0, na = 0;
  for (const auto& r : arrival_) {
    auto& b = blocks_.at(r);
    if (!b.released) {
      b.released = now_;
      b.seq = seq_++;
      ++nb;
    }
  }
  for (auto& a : attestations_) {
    if (!a.released) {
      a.released = now_;
      a.seq = seq_++;
      ++na;
    }
  }
  log("publish_private", {{"blocks", nb}, {"attestations", na}});
  invalidate();
}

ForkChoice SimChain::fork_choice_at(Seconds t) const {
  ForkChoice fc(genesis_, tie_break_);
  std::vector<const StoredBlock*> visible;
  for (const auto& [root, b] : blocks_)
    if (root != genesis_ && b.released && *b.released <= t) visible.push_back(&b);
  std::sort(visible.begin(), visible.end(), [](auto a, auto b) {
    return std::pair(*a->released, a->seq) < std::pair(*b->released, b->seq);
  });
  // A block whose parent is still unseen becomes visible with the parent.
  std::multimap<Root, const StoredBlock*> waiting;
  std::vector<const StoredBlock*> ready;
  for (auto b : visible) {
    if (!fc.contains(b->header.parent_hash)) {
      waiting.emplace(b->header.parent_hash, b);
      continue;
    }
    ready.push_back(b);
    while (!ready.empty()) {
      auto cur = ready.back();
      ready.pop_back();
      fc.add_block(cur->root, cur->header.parent_hash, cur->header.slot);
      auto [lo, hi] = waiting.equal_range(cur->root);
      for (auto it = lo; it != hi; ++it) ready.push_back(it->second);
      waiting.erase(lo, hi);
    }
  }

  std::vector<const StoredAttestation*> votes;
  for (const auto& a : attestations_)
    if (a.released && *a.released <= t) votes.push_back(&a);
  std::sort(votes.begin(), votes.end(), [](auto a, auto b) { return a->seq < b->seq; });
  for (auto a : votes) {
    const auto& v = validators_.at(a->attestation.validator);
    if (!v.active) continue;
    fc.add_vote(v.index, a->attestation.data.slot, a->attestation.data.beacon_block_root, v.stake);
  }

  const Slot cs = config_.slot_at(t);
  const Seconds timely = config_.slot_start(cs) + config_.proposal_window_seconds;
  for (auto b : visible) {
    if (b->header.slot == cs && *b->released <= timely && fc.contains(b->root)) {
      fc.set_boost(b->root, config_.p_boost * validators_.committee_stake(cs, config_));
      break;
    }
  }
  return fc;
}

const std::vector<Root>& SimChain::canonical_chain() const {
  if (!canonical_valid_) {
    canonical_.clear();
    for (Root r = head(); ; r = blocks_.at(r).header.parent_hash) {
      canonical_.push_back(r);
      if (r == genesis_) break;
    }
    std::reverse(canonical_.begin(), canonical_.end());
    canonical_set_ = {canonical_.begin(), canonical_.end()};
    canonical_valid_ = true;
  }
  return canonical_;
}

bool SimChain::is_canonical(const Root& r) const {
  canonical_chain();
  return canonical_set_.count(r) != 0;
}

Height SimChain::current_height() const { return canonical_chain().size() - 1; }

std::optional<Root> SimChain::blockhash(Height h) const {
  const auto& c = canonical_chain();
  const Height tip = c.size() - 1;
  if (h > tip || tip - h > config_.blockhash_window) return std::nullopt;
  return c[h];
}

std::optional<Root> SimChain::beacon_root(Slot s) const {
  for (const auto& r : canonical_chain()) {
    const auto slot = blocks_.at(r).header.slot;
    if (slot == s) return r;
    if (slot > s) break;
  }
  return std::nullopt;
}

Root SimChain::ancestor_at_slot(const Root& from, Slot s) const {
  Root r = from;
  while (true) {
    const auto& b = block(r);
    if (b.header.slot <= s || r == genesis_) return r;
    r = b.header.parent_hash;
  }
}

Root SimChain::randao_mix(Epoch e) const {
  Root last = genesis_;
  for (const auto& r : canonical_chain()) {
    if (blocks_.at(r).header.slot > config_.epoch_end(e)) break;
    last = r;
  }
  return blocks_.at(last).mix;
}

VoteCorrectness SimChain::assess(const AttestationData& d) const {
  const Root tip = canonical_chain().back();
  auto matches = [&](const Checkpoint& cp) {
    return cp.root == ancestor_at_slot(tip, config_.epoch_start(cp.epoch));
  };
  VoteCorrectness c;
  c.source = matches(d.source);
  c.target = matches(d.target);
  c.head = d.beacon_block_root == ancestor_at_slot(tip, d.slot);
  return c;
}

Fraction SimChain::attestation_reward(const Attestation& att, std::uint64_t inclusion_delay,
                                      const RewardWeights& w) const {
  return chain::attestation_reward(assess(att.data), inclusion_delay, w);
}

void SimChain::request_exit(const VoluntaryExit& exit, const crypto::Signature& sig) {
  const auto& v = validators_.at(exit.validator_index);
  if (!v.active) throw std::invalid_argument("request_exit: validator already exited");
  if (exit.epoch > current_epoch()) throw std::invalid_argument("request_exit: exit epoch is in the future");
  if (std::find(exit_queue_.begin(), exit_queue_.end(), exit.validator_index) != exit_queue_.end())
    throw std::invalid_argument("request_exit: exit already queued");
  if (!scheme_->verify(v.keys.pk, exit.serialize(), sig).valid)
    throw std::invalid_argument("request_exit: bad exit signature");
  exit_queue_.push_back(exit.validator_index);
  log("exit_request", {{"epoch", exit.epoch}, {"validator", exit.validator_index}});
}

std::set<ValidatorIndex> SimChain::slashable_validators() const {
  std::set<ValidatorIndex> out;
  std::map<std::pair<ValidatorIndex, Epoch>, AttestationData> seen_votes;
  for (const auto& a : attestations_) {
    auto key = std::pair(a.attestation.validator, a.attestation.data.target.epoch);
    auto [it, fresh] = seen_votes.emplace(key, a.attestation.data);
    if (!fresh && !(it->second == a.attestation.data)) out.insert(a.attestation.validator);
  }
  std::map<std::pair<ValidatorIndex, Slot>, Root> seen_blocks;
  for (const auto& [root, b] : blocks_) {
    if (root == genesis_) continue;
    auto [it, fresh] = seen_blocks.emplace(std::pair(b.header.proposer_index, b.header.slot), root);
    if (!fresh && it->second != root) out.insert(b.header.proposer_index);
  }
  return out;
}

}  // namespace bribery::chain
