// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "bribery/crypto/bytes.hpp"

namespace bribery::crypto {

/// Authentication path: one sibling hash per level, leaf level first.
struct MerkleProof {
  std::vector<Hash256> siblings;

  std::vector<std::string> hex() const;
  friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

/// Append-only Merkle tree of fixed depth with zero-hash padding, shaped like
/// the deposit contract's incremental tree.
///
/// Leaves hash as SHA-256(0x00 || x) and interior nodes as
/// SHA-256(0x01 || left || right), so a leaf can never be passed off as a
/// node.
class MerkleTree {
 public:
  static constexpr std::size_t kDefaultDepth = 32;

  explicit MerkleTree(std::size_t depth = kDefaultDepth);

  void append(ByteView leaf);

  Hash256 root() const;
  std::size_t depth() const { return depth_; }
  std::size_t size() const { return leaves_.size(); }
  const Bytes& leaf(std::size_t index) const { return leaves_.at(index); }

  /// Throws std::out_of_range for index >= size() and std::invalid_argument
  /// when the stored leaf at `index` differs from `leaf`.
  MerkleProof prove(ByteView leaf, std::size_t index) const;

  static Hash256 hash_leaf(ByteView leaf);
  static Hash256 hash_node(const Hash256& left, const Hash256& right);

 private:
  const Hash256& node_or_zero(std::size_t level, std::size_t index) const;

  std::size_t depth_;
  std::vector<Bytes> leaves_;
  // levels_[0] holds leaf hashes, levels_[depth_] the root once non-empty.
  std::vector<std::vector<Hash256>> levels_;
  std::vector<Hash256> zero_;
};

/// Returns a copy of `tree` with `leaf` appended.
MerkleTree merkle_insert(MerkleTree tree, ByteView leaf);
MerkleProof merkle_prove(const MerkleTree& tree, ByteView leaf, std::size_t index);
bool merkle_verify(const Hash256& root, ByteView leaf, std::uint64_t index, const MerkleProof& proof);

}  // namespace bribery::crypto
