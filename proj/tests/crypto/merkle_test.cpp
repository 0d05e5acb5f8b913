// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "bribery/crypto/merkle.hpp"

namespace bribery::crypto {
namespace {

TEST(Merkle, SingleLeafWithZeroPaddedPath) {
  MerkleTree tree(8);
  tree.append(to_bytes("x"));
  auto proof = tree.prove(to_bytes("x"), 0);
  ASSERT_EQ(proof.siblings.size(), 8u);
  EXPECT_EQ(proof.siblings[0], Hash256{});
  EXPECT_TRUE(merkle_verify(tree.root(), to_bytes("x"), 0, proof));
}

TEST(Merkle, EveryLeafOfEightVerifies) {
  MerkleTree tree(3);
  for (int i = 0; i < 8; ++i) tree.append(to_bytes("leaf-" + std::to_string(i)));
  for (std::size_t i = 0; i < 8; ++i) {
    auto leaf = to_bytes("leaf-" + std::to_string(i));
    EXPECT_TRUE(merkle_verify(tree.root(), leaf, i, tree.prove(leaf, i))) << i;
  }
  EXPECT_THROW(tree.append(to_bytes("overflow")), std::length_error);
}

TEST(Merkle, IndexTamperIsRejected) {
  MerkleTree tree;
  for (int i = 0; i < 8; ++i) tree.append(to_bytes("leaf-" + std::to_string(i)));
  auto leaf = to_bytes("leaf-3");
  auto proof = tree.prove(leaf, 3);
  EXPECT_TRUE(merkle_verify(tree.root(), leaf, 3, proof));
  EXPECT_FALSE(merkle_verify(tree.root(), leaf, 4, proof));
}

TEST(Merkle, OutOfRangeAndMismatchedProveAreErrors) {
  MerkleTree tree;
  tree.append(to_bytes("a"));
  EXPECT_THROW(tree.prove(to_bytes("a"), 1), std::out_of_range);
  EXPECT_THROW(tree.prove(to_bytes("b"), 0), std::invalid_argument);
}

TEST(Merkle, RootChangesOnEveryInsert) {
  MerkleTree tree;
  auto prev = tree.root();
  for (int i = 0; i < 64; ++i) {
    tree = merkle_insert(std::move(tree), to_bytes("same"));
    EXPECT_NE(tree.root(), prev);
    prev = tree.root();
  }
}

TEST(Merkle, RoundTripMatchesRecomputedRoot) {
  // Oracle: rebuild the full padded tree level by level from scratch.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t depth = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % (std::size_t{1} << depth);
    MerkleTree tree(depth);
    std::vector<Hash256> level;
    for (std::size_t i = 0; i < n; ++i) {
      auto leaf = to_bytes(std::to_string(rng()));
      tree.append(leaf);
      level.push_back(MerkleTree::hash_leaf(leaf));
    }
    level.resize(std::size_t{1} << depth, Hash256{});
    for (std::size_t d = 0; d < depth; ++d) {
      std::vector<Hash256> next;
      for (std::size_t i = 0; i < level.size(); i += 2)
        next.push_back(MerkleTree::hash_node(level[i], level[i + 1]));
      level = std::move(next);
    }
    EXPECT_EQ(level[0], tree.root());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& leaf = tree.leaf(i);
      EXPECT_TRUE(merkle_verify(tree.root(), leaf, i, tree.prove(leaf, i)));
    }
  }
}

TEST(Merkle, TamperFuzzHasNoFalseAccepts) {
  std::mt19937_64 rng(99);
  int false_accepts = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    MerkleTree tree(6);
    const std::size_t n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) tree.append(to_bytes("v" + std::to_string(i) + "-" + std::to_string(rng())));
    const std::size_t idx = rng() % n;
    Bytes leaf = tree.leaf(idx);
    auto proof = tree.prove(leaf, idx);
    std::uint64_t index = idx;
    switch (rng() % 3) {
      case 0:
        leaf[rng() % leaf.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        break;
      case 1:
        index ^= std::uint64_t{1} << (rng() % 6);
        break;
      default: {
        auto& s = proof.siblings[rng() % proof.siblings.size()];
        s[rng() % 32] ^= static_cast<std::uint8_t>(1 + rng() % 255);
      }
    }
    if (merkle_verify(tree.root(), leaf, index, proof)) ++false_accepts;
  }
  EXPECT_EQ(false_accepts, 0);
}

}  // namespace
}  // namespace bribery::crypto
