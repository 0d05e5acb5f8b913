// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bribery/chain/types.hpp"
#include "bribery/crypto/merkle.hpp"

namespace bribery::chain {

enum class Behavior { Adversary, Rational, Altruistic };

std::string_view to_string(Behavior b);
Behavior behavior_from_string(std::string_view s);

struct Validator {
  ValidatorIndex index = 0;
  crypto::KeyPair keys;
  Fraction stake{32};
  Behavior behavior = Behavior::Altruistic;
  bool active = true;
  std::string withdraw_address;
};

struct StakeShares {
  Fraction adversary;
  Fraction rational;
  Fraction altruistic;
};

class ValidatorSet {
 public:
  ValidatorIndex add(crypto::KeyPair keys, Fraction stake, Behavior behavior, std::string withdraw_address = {});

  std::size_t size() const { return validators_.size(); }
  const Validator& at(ValidatorIndex i) const;
  const std::vector<Validator>& all() const { return validators_; }

  void set_active(ValidatorIndex i, bool active);

  /// Round-robin committee: validators whose index is congruent to the slot
  /// modulo the committee count. Inactive validators are skipped.
  std::vector<ValidatorIndex> committee(Slot slot, const ChainConfig& config) const;
  bool in_committee(ValidatorIndex i, Slot slot, const ChainConfig& config) const;
  Fraction committee_stake(Slot slot, const ChainConfig& config) const;

  /// Size of committee `position` when n validators are spread over
  /// `committees` round-robin.
  static std::size_t committee_size(std::size_t n, std::size_t position, std::size_t committees);

  Fraction total_active_stake() const;
  /// Active stake per behavior class, normalized to sum to one.
  StakeShares shares() const;

  /// Deposit tree leaves are the validators' public keys, in index order.
  Root deposit_root() const;
  crypto::MerkleProof deposit_proof(ValidatorIndex i) const;
  static constexpr std::size_t kDepositDepth = 32;

 private:
  const crypto::MerkleTree& deposits() const;

  std::vector<Validator> validators_;
  mutable std::optional<crypto::MerkleTree> deposits_;
};

}  // namespace bribery::chain
