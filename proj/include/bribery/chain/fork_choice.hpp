// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bribery/chain/types.hpp"

namespace bribery::chain {

enum class TieBreak {
  LexicographicRoot,  // smallest root wins
  FirstSeen,          // earliest-arrived child wins
};

/// LMD-GHOST over a block tree with proposer boost. Weights are exact.
class ForkChoice {
 public:
  explicit ForkChoice(Root genesis, TieBreak tie_break = TieBreak::LexicographicRoot);

  /// Blocks must be added parent first; insertion order is arrival order.
  void add_block(const Root& root, const Root& parent, Slot slot);
  bool contains(const Root& root) const { return nodes_.count(root) != 0; }

  /// Latest-message rule: a newer slot replaces the validator's old vote,
  /// an older or equal one is ignored. Votes for unknown blocks carry no
  /// weight.
  void add_vote(ValidatorIndex validator, Slot slot, const Root& root, Fraction weight);
  void set_boost(const Root& root, Fraction amount);
  void clear_boost() { boost_.reset(); }

  Root genesis() const { return genesis_; }
  Root head() const;
  /// Subtree weight of every known block, boost included.
  std::map<Root, Fraction> weights() const;
  Fraction weight(const Root& root) const;
  std::vector<Root> children(const Root& root) const;
  /// True when the head walk had to fall back on the tie-break rule.
  bool head_was_tied() const;

 private:
  struct Node {
    Root parent;
    Slot slot;
    std::uint64_t arrival;
    std::vector<Root> children;
  };
  struct Vote {
    Slot slot;
    Root root;
    Fraction weight;
  };

  Root walk(const std::map<Root, Fraction>& w, bool* tied) const;
  bool prefer(const Root& a, const Root& b) const;

  Root genesis_;
  TieBreak tie_break_;
  std::map<Root, Node> nodes_;
  std::map<ValidatorIndex, Vote> votes_;
  std::optional<std::pair<Root, Fraction>> boost_;
};

}  // namespace bribery::chain
