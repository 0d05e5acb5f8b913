// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/fork_choice.hpp"

#include <algorithm>
#include <stdexcept>

namespace bribery::chain {

ForkChoice::ForkChoice(Root genesis, TieBreak tie_break) : genesis_(genesis), tie_break_(tie_break) {
  nodes_.emplace(genesis, Node{Root{}, 0, 0, {}});
}

void ForkChoice::add_block(const Root& root, const Root& parent, Slot slot) {
  if (nodes_.count(root)) return;
  auto it = nodes_.find(parent);
  if (it == nodes_.end()) throw std::invalid_argument("fork choice: unknown parent");
  if (slot <= it->second.slot) throw std::invalid_argument("fork choice: child slot not after parent");
  it->second.children.push_back(root);
  nodes_.emplace(root, Node{parent, slot, nodes_.size(), {}});
}

void ForkChoice::add_vote(ValidatorIndex validator, Slot slot, const Root& root, Fraction weight) {
  auto it = votes_.find(validator);
  if (it != votes_.end() && it->second.slot >= slot) return;
  votes_[validator] = Vote{slot, root, weight};
}

void ForkChoice::set_boost(const Root& root, Fraction amount) { boost_ = {root, amount}; }

std::map<Root, Fraction> ForkChoice::weights() const {
  std::map<Root, Fraction> w;
  for (const auto& [root, node] : nodes_) w[root] = 0;
  for (const auto& [v, vote] : votes_)
    if (auto it = w.find(vote.root); it != w.end()) it->second += vote.weight;
  if (boost_)
    if (auto it = w.find(boost_->first); it != w.end()) it->second += boost_->second;
  // Children always arrive after their parent, so reverse arrival order
  // visits every subtree before its root.
  std::vector<const std::pair<const Root, Node>*> order;
  for (const auto& entry : nodes_) order.push_back(&entry);
  std::sort(order.begin(), order.end(), [](auto a, auto b) { return a->second.arrival > b->second.arrival; });
  for (auto entry : order)
    if (entry->first != genesis_) w[entry->second.parent] += w[entry->first];
  return w;
}

Fraction ForkChoice::weight(const Root& root) const {
  auto w = weights();
  auto it = w.find(root);
  if (it == w.end()) throw std::invalid_argument("fork choice: unknown block");
  return it->second;
}

std::vector<Root> ForkChoice::children(const Root& root) const {
  auto it = nodes_.find(root);
  if (it == nodes_.end()) throw std::invalid_argument("fork choice: unknown block");
  return it->second.children;
}

bool ForkChoice::prefer(const Root& a, const Root& b) const {
  if (tie_break_ == TieBreak::FirstSeen) return nodes_.at(a).arrival < nodes_.at(b).arrival;
  return a < b;
}

Root ForkChoice::walk(const std::map<Root, Fraction>& w, bool* tied) const {
  Root cur = genesis_;
  for (;;) {
    const auto& kids = nodes_.at(cur).children;
    if (kids.empty()) return cur;
    Root best = kids.front();
    for (std::size_t i = 1; i < kids.size(); ++i) {
      const auto& c = kids[i];
      if (w.at(c) > w.at(best) || (w.at(c) == w.at(best) && prefer(c, best))) best = c;
    }
    // Only a tie at the top of the sibling set decides anything.
    if (tied)
      for (const auto& c : kids)
        if (c != best && w.at(c) == w.at(best)) *tied = true;
    cur = best;
  }
}

Root ForkChoice::head() const { return walk(weights(), nullptr); }

bool ForkChoice::head_was_tied() const {
  bool tied = false;
  walk(weights(), &tied);
  return tied;
}

}  // namespace bribery::chain
