// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <mutex>
#include <string>
#include <vector>

namespace bribery::chain {

using OrderedJson = nlohmann::ordered_json;

/// Append-only event log, exported as JSON lines. Each record gets a
/// sequence number first so field order is stable.
class Transcript {
 public:
  void record(std::string_view event, OrderedJson fields);
  std::vector<OrderedJson> events() const;
  std::size_t size() const;
  std::string to_jsonl() const;
  void write(const std::string& path) const;

 private:
  mutable std::mutex mu_;
  std::vector<OrderedJson> events_;
};

}  // namespace bribery::chain
