// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bribery/chain/sim_chain.hpp"
#include "bribery/crypto/signature_scheme.hpp"

namespace bribery::testing {

inline crypto::SchemePtr mock_scheme() {
  static const auto s = crypto::make_scheme("mock");
  return s;
}

inline chain::ValidatorSet make_validators(const crypto::SignatureScheme& scheme, std::size_t n,
                                           chain::Behavior b = chain::Behavior::Altruistic) {
  chain::ValidatorSet set;
  for (std::size_t i = 0; i < n; ++i)
    set.add(scheme.keygen(crypto::to_bytes("validator-" + std::to_string(i))), chain::Fraction{32}, b);
  return set;
}

}  // namespace bribery::testing

namespace bribery::testing {

/// A chain where the proposers of the last k slots of epoch 0 belong to
/// one manipulator, who publishes or withholds each per `executed`
/// (MSB = first tail slot, 1 = withhold). Slot 32 carries the next block.
struct TailChain {
  std::unique_ptr<chain::SimChain> chain;
  std::vector<crypto::PublicKey> pks;
  std::vector<crypto::Signature> reveals;
  std::vector<chain::BlockHeader> evidence;  // last pre-tail block .. slot 32
};

inline TailChain build_tail_chain(unsigned k, std::uint64_t executed, std::size_t validators = 64) {
  auto scheme = mock_scheme();
  TailChain t;
  t.chain = std::make_unique<chain::SimChain>(chain::ChainConfig{}, scheme, make_validators(*scheme, validators));
  auto& c = *t.chain;
  const chain::Slot first = 32 - k;
  for (unsigned j = 0; j < k; ++j) {
    const auto v = c.scheduled_proposer(first + j);
    t.pks.push_back(c.validators().at(v).keys.pk);
    t.reveals.push_back(scheme->sign(c.validators().at(v).keys.sk, chain::randao_message(0)));
  }
  chain::Root parent = c.genesis_root();
  for (chain::Slot s = 1; s <= 32; ++s) {
    c.advance_to_slot(s);
    bool reveal = true;
    if (s >= first && s < 32) reveal = ((executed >> (k - 1 - (s - first))) & 1) == 0;
    auto h = c.propose_block(s, c.scheduled_proposer(s), parent, reveal);
    if (h) {
      parent = h->root();
      if (s + 1 >= first) t.evidence.push_back(*h);
    }
  }
  return t;
}

}  // namespace bribery::testing
