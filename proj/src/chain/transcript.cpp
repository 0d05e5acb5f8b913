// SPDX-License-Identifier: Apache-2.0
#include "bribery/chain/transcript.hpp"

#include <fstream>
#include <stdexcept>

namespace bribery::chain {

void Transcript::record(std::string_view event, OrderedJson fields) {
  std::lock_guard lock(mu_);
  OrderedJson e;
  e["seq"] = events_.size();
  e["event"] = event;
  for (auto& [k, v] : fields.items()) e[k] = std::move(v);
  events_.push_back(std::move(e));
}

std::vector<OrderedJson> Transcript::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::string Transcript::to_jsonl() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& e : events_) {
    out += e.dump();
    out += '\n';
  }
  return out;
}

void Transcript::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << to_jsonl();
}

}  // namespace bribery::chain
