// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/validator_set.hpp"

#include <stdexcept>

namespace bribery::chain {

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::Adversary:
      return "adversary";
    case Behavior::Rational:
      return "rational";
    case Behavior::Altruistic:
      return "altruistic";
  }
  return "?";
}

Behavior behavior_from_string(std::string_view s) {
  if (s == "adversary") return Behavior::Adversary;
  if (s == "rational") return Behavior::Rational;
  if (s == "altruistic") return Behavior::Altruistic;
  throw std::invalid_argument("unknown behavior: " + std::string(s));
}

ValidatorIndex ValidatorSet::add(crypto::KeyPair keys, Fraction stake, Behavior behavior,
                                 std::string withdraw_address) {
  if (stake < 0) throw std::invalid_argument("negative stake");
  Validator v;
  v.index = validators_.size();
  v.keys = std::move(keys);
  v.stake = stake;
  v.behavior = behavior;
  v.withdraw_address = withdraw_address.empty() ? "0xwithdraw" + std::to_string(v.index) : std::move(withdraw_address);
  if (deposits_) deposits_->append(v.keys.pk.bytes);
  validators_.push_back(std::move(v));
  return validators_.back().index;
}

const Validator& ValidatorSet::at(ValidatorIndex i) const {
  if (i >= validators_.size()) throw std::out_of_range("unknown validator " + std::to_string(i));
  return validators_[i];
}

void ValidatorSet::set_active(ValidatorIndex i, bool active) {
  if (i >= validators_.size()) throw std::out_of_range("unknown validator " + std::to_string(i));
  validators_[i].active = active;
}

std::vector<ValidatorIndex> ValidatorSet::committee(Slot slot, const ChainConfig& config) const {
  std::vector<ValidatorIndex> out;
  const auto c = config.committees_per_epoch;
  for (ValidatorIndex i = slot % c; i < validators_.size(); i += c)
    if (validators_[i].active) out.push_back(i);
  return out;
}

bool ValidatorSet::in_committee(ValidatorIndex i, Slot slot, const ChainConfig& config) const {
  return i < validators_.size() && validators_[i].active &&
         i % config.committees_per_epoch == slot % config.committees_per_epoch;
}

Fraction ValidatorSet::committee_stake(Slot slot, const ChainConfig& config) const {
  Fraction sum{0};
  for (auto i : committee(slot, config)) sum += validators_[i].stake;
  return sum;
}

std::size_t ValidatorSet::committee_size(std::size_t n, std::size_t position, std::size_t committees) {
  if (committees == 0) throw std::invalid_argument("committees must be positive");
  if (position >= committees) throw std::out_of_range("committee position out of range");
  return n / committees + (position < n % committees ? 1 : 0);
}

Fraction ValidatorSet::total_active_stake() const {
  Fraction sum{0};
  for (const auto& v : validators_)
    if (v.active) sum += v.stake;
  return sum;
}

StakeShares ValidatorSet::shares() const {
  StakeShares s{Fraction{0}, Fraction{0}, Fraction{0}};
  for (const auto& v : validators_) {
    if (!v.active) continue;
    switch (v.behavior) {
      case Behavior::Adversary:
        s.adversary += v.stake;
        break;
      case Behavior::Rational:
        s.rational += v.stake;
        break;
      case Behavior::Altruistic:
        s.altruistic += v.stake;
        break;
    }
  }
  auto total = s.adversary + s.rational + s.altruistic;
  if (total == Fraction{0}) return s;
  return {s.adversary / total, s.rational / total, s.altruistic / total};
}

const crypto::MerkleTree& ValidatorSet::deposits() const {
  if (!deposits_) {
    deposits_.emplace(kDepositDepth);
    for (const auto& v : validators_) deposits_->append(v.keys.pk.bytes);
  }
  return *deposits_;
}

Root ValidatorSet::deposit_root() const { return deposits().root(); }

crypto::MerkleProof ValidatorSet::deposit_proof(ValidatorIndex i) const {
  return deposits().prove(at(i).keys.pk.bytes, i);
}

}  // namespace bribery::chain
