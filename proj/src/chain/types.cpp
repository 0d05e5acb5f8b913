// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/types.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace bribery::chain {

using crypto::Bytes;
using crypto::ByteView;
using crypto::DecodeError;
using crypto::get_u64;
using crypto::put_bytes;
using crypto::put_u64;

double to_double(const Fraction& f) {
  return static_cast<double>(f.numerator()) / static_cast<double>(f.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}

}  // namespace

Fraction parse_fraction(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty fraction");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Fraction(parse_int(text.substr(0, slash)), den);
  }
  bool neg = text.front() == '-';
  if (neg) text.remove_prefix(1);
  auto dot = text.find('.');
  std::string digits(text.substr(0, dot));
  std::int64_t den = 1;
  if (dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) frac = frac.substr(0, 15);
    digits += frac;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  }
  if (digits.empty()) throw std::invalid_argument("bad fraction: " + std::string(text));
  Fraction f(parse_int(digits), den);
  return neg ? -f : f;
}

void ChainConfig::validate() const {
  if (slots_per_epoch == 0) throw std::invalid_argument("slots_per_epoch must be positive");
  if (slot_seconds <= 0) throw std::invalid_argument("slot_seconds must be positive");
  if (proposal_window_seconds < 0 || proposal_window_seconds >= slot_seconds)
    throw std::invalid_argument("proposal_window_seconds must lie inside a slot");
  if (p_boost < 0 || p_boost > 1) throw std::invalid_argument("p_boost must lie in [0, 1]");
  if (blockhash_window < 1) throw std::invalid_argument("blockhash_window must be at least 1");
  if (committees_per_epoch == 0) throw std::invalid_argument("committees_per_epoch must be positive");
  if (exit_churn_per_epoch == 0) throw std::invalid_argument("exit_churn_per_epoch must be positive");
}

Slot ChainConfig::slot_at(Seconds t) const {
  if (t < genesis_time) return 0;
  return static_cast<Slot>((t - genesis_time) / slot_seconds);
}

Bytes BlockHeader::serialize() const {
  Bytes out;
  put_u64(out, slot);
  put_u64(out, height);
  put_bytes(out, crypto::view(parent_hash));
  put_u64(out, proposer_index);
  put_u64(out, static_cast<std::uint64_t>(timestamp));
  put_u64(out, randao_reveal.bytes.size());
  put_bytes(out, randao_reveal.bytes);
  put_bytes(out, crypto::view(body_hash));
  return out;
}

namespace {

Root read_root(ByteView in, std::size_t offset) {
  if (offset + 32 > in.size()) throw DecodeError("truncated root");
  Root r{};
  std::copy(in.begin() + offset, in.begin() + offset + 32, r.begin());
  return r;
}

}  // namespace

BlockHeader BlockHeader::deserialize(ByteView in) {
  BlockHeader h;
  std::size_t off = 0;
  h.slot = get_u64(in, off);
  off += 8;
  h.height = get_u64(in, off);
  off += 8;
  h.parent_hash = read_root(in, off);
  off += 32;
  h.proposer_index = get_u64(in, off);
  off += 8;
  h.timestamp = static_cast<Seconds>(get_u64(in, off));
  off += 8;
  auto len = get_u64(in, off);
  off += 8;
  if (len > in.size() - off) throw DecodeError("truncated randao reveal");
  h.randao_reveal.bytes.assign(in.begin() + off, in.begin() + off + len);
  off += len;
  h.body_hash = read_root(in, off);
  off += 32;
  if (off != in.size()) throw DecodeError("trailing bytes after header");
  return h;
}

Root BlockHeader::root() const { return crypto::sha256(serialize()); }

Bytes AttestationData::serialize() const {
  Bytes out;
  put_u64(out, slot);
  put_bytes(out, crypto::view(beacon_block_root));
  put_u64(out, source.epoch);
  put_bytes(out, crypto::view(source.root));
  put_u64(out, target.epoch);
  put_bytes(out, crypto::view(target.root));
  return out;
}

AttestationData AttestationData::deserialize(ByteView in) {
  if (in.size() != 8 + 32 + 2 * (8 + 32)) throw DecodeError("attestation data has wrong length");
  AttestationData d;
  d.slot = get_u64(in, 0);
  d.beacon_block_root = read_root(in, 8);
  d.source.epoch = get_u64(in, 40);
  d.source.root = read_root(in, 48);
  d.target.epoch = get_u64(in, 80);
  d.target.root = read_root(in, 88);
  return d;
}

Bytes VoluntaryExit::serialize() const {
  Bytes out;
  put_u64(out, epoch);
  put_u64(out, validator_index);
  return out;
}

Bytes randao_message(Epoch e) {
  Bytes out;
  put_u64(out, e);
  return out;
}

}  // namespace bribery::chain
