// SPDX-License-Identifier: Apache-2.0
#include "bribery/crypto/merkle.hpp"

#include <algorithm>
#include <stdexcept>

namespace bribery::crypto {

std::vector<std::string> MerkleProof::hex() const {
  std::vector<std::string> out;
  out.reserve(siblings.size());
  for (const auto& s : siblings) out.push_back(to_hex(s));
  return out;
}

MerkleTree::MerkleTree(std::size_t depth) : depth_(depth), levels_(depth + 1), zero_(depth + 1) {
  if (depth == 0 || depth > 63) throw std::invalid_argument("MerkleTree: depth must be in [1, 63]");
  zero_[0] = Hash256{};
  for (std::size_t d = 0; d < depth_; ++d) zero_[d + 1] = hash_node(zero_[d], zero_[d]);
}

Hash256 MerkleTree::hash_leaf(ByteView leaf) {
  Bytes buf;
  buf.reserve(leaf.size() + 1);
  buf.push_back(0x00);
  put_bytes(buf, leaf);
  return sha256(buf);
}

Hash256 MerkleTree::hash_node(const Hash256& left, const Hash256& right) {
  Bytes buf;
  buf.reserve(65);
  buf.push_back(0x01);
  put_bytes(buf, view(left));
  put_bytes(buf, view(right));
  return sha256(buf);
}

const Hash256& MerkleTree::node_or_zero(std::size_t level, std::size_t index) const {
  const auto& row = levels_[level];
  return index < row.size() ? row[index] : zero_[level];
}

void MerkleTree::append(ByteView leaf) {
  if (depth_ < 63 && leaves_.size() >= (std::size_t{1} << depth_))
    throw std::length_error("MerkleTree: tree is full");
  leaves_.emplace_back(leaf.begin(), leaf.end());
  std::size_t index = leaves_.size() - 1;
  levels_[0].push_back(hash_leaf(leaf));
  for (std::size_t d = 0; d < depth_; ++d) {
    std::size_t left = index & ~std::size_t{1};
    auto parent = hash_node(node_or_zero(d, left), node_or_zero(d, left + 1));
    index >>= 1;
    auto& row = levels_[d + 1];
    if (index < row.size())
      row[index] = parent;
    else
      row.push_back(parent);
  }
}

Hash256 MerkleTree::root() const { return node_or_zero(depth_, 0); }

MerkleProof MerkleTree::prove(ByteView leaf, std::size_t index) const {
  if (index >= leaves_.size()) throw std::out_of_range("MerkleTree::prove: index out of range");
  const auto& stored = leaves_[index];
  if (!std::equal(stored.begin(), stored.end(), leaf.begin(), leaf.end()))
    throw std::invalid_argument("MerkleTree::prove: leaf does not match index");
  MerkleProof proof;
  proof.siblings.reserve(depth_);
  for (std::size_t d = 0; d < depth_; ++d) proof.siblings.push_back(node_or_zero(d, (index >> d) ^ 1));
  return proof;
}

MerkleTree merkle_insert(MerkleTree tree, ByteView leaf) {
  tree.append(leaf);
  return tree;
}

MerkleProof merkle_prove(const MerkleTree& tree, ByteView leaf, std::size_t index) {
  return tree.prove(leaf, index);
}

bool merkle_verify(const Hash256& root, ByteView leaf, std::uint64_t index, const MerkleProof& proof) {
  const auto depth = proof.siblings.size();
  if (depth == 0 || depth > 63) return false;
  if (index >= (std::uint64_t{1} << depth)) return false;
  auto node = MerkleTree::hash_leaf(leaf);
  for (std::size_t d = 0; d < depth; ++d) {
    const auto& sibling = proof.siblings[d];
    node = ((index >> d) & 1) ? MerkleTree::hash_node(sibling, node) : MerkleTree::hash_node(node, sibling);
  }
  return node == root;
}

}  // namespace bribery::crypto
