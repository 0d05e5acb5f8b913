// SPDX-License-Identifier: Apache-2.0
#include "bribery/cli/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bribery::cli {

namespace pt = boost::property_tree;

namespace {

double to_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw std::invalid_argument(key + ": not an unsigned integer: '" + v + "'");
  return x;
}

chain::Fraction to_frac(const std::string& key, const std::string& v) {
  try {
    return chain::parse_fraction(v);
  } catch (const std::exception& e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T>
Setter real(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_real(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"snapshot.name", [](RunConfig& c, const std::string&, const std::string& v) { c.name = v; }},
      {"snapshot.validators", [](RunConfig& c, const std::string& k, const std::string& v) { c.validators = to_uint(k, v); }},
      {"snapshot.total_stake_eth", real(&RunConfig::total_stake_eth)},
      {"snapshot.eth_usd", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.eth_usd = to_real(k, v); }},

      {"economics.discount_rate", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.discount_rate = to_real(k, v); }},
      {"economics.horizon_years", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.horizon_years = to_real(k, v); }},
      {"economics.protocol_constant",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.protocol_constant = to_real(k, v); }},
      {"economics.mev_constant", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.mev_constant = to_real(k, v); }},
      {"economics.stake_per_validator",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.stake_per_validator = to_real(k, v); }},
      {"economics.churn_per_epoch", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.churn_per_epoch = to_uint(k, v); }},
      {"economics.epochs_per_day", [](RunConfig& c, const std::string& k, const std::string& v) { c.econ.epochs_per_day = to_real(k, v); }},
      {"economics.alpha", real(&RunConfig::alpha)},
      {"economics.alpha_star", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_star = to_frac(k, v); }},
      {"economics.reference_threshold_eth", real(&RunConfig::reference_threshold_eth)},

      {"grid.alpha_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_axis.lo = to_real(k, v); }},
      {"grid.alpha_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_axis.hi = to_real(k, v); }},
      {"grid.alpha_n", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_axis.n = to_uint(k, v); }},
      {"grid.beta_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta_axis.lo = to_real(k, v); }},
      {"grid.beta_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta_axis.hi = to_real(k, v); }},
      {"grid.beta_n", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta_axis.n = to_uint(k, v); }},
      {"grid.alpha_star_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_star_axis.lo = to_real(k, v); }},
      {"grid.alpha_star_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_star_axis.hi = to_real(k, v); }},
      {"grid.alpha_star_n", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_star_axis.n = to_uint(k, v); }},

      {"attack.p_boost", [](RunConfig& c, const std::string& k, const std::string& v) { c.p_boost = to_frac(k, v); }},
      {"attack.committee_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.committee_size = to_uint(k, v); }},
      {"attack.bribe_per_vote_gwei",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.bribe_per_vote_gwei = to_uint(k, v); }},
      {"attack.backend", [](RunConfig& c, const std::string&, const std::string& v) { c.backend = v; }},

      {"reorg_sweep.points", [](RunConfig& c, const std::string& k, const std::string& v) { c.reorg_points = to_uint(k, v); }},
      {"reorg_sweep.alpha_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.reorg_alpha_hi = to_frac(k, v); }},
      {"reorg_sweep.max_h",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.reorg_max_h = static_cast<unsigned>(to_uint(k, v)); }},
      {"reorg_sweep.max_a",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.reorg_max_a = static_cast<unsigned>(to_uint(k, v)); }},
      {"reorg_sweep.committee_size",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.reorg_committee_size = to_uint(k, v); }},

      {"bias.validators",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.bias_validators = static_cast<unsigned>(to_uint(k, v)); }},

      {"run.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
      {"run.threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = static_cast<unsigned>(to_uint(k, v)); }},
  };
  return table;
}

void check_axis(const char* what, const Axis& a) {
  if (a.n == 0) throw std::invalid_argument(std::string(what) + ": n must be positive");
  if (!(a.lo <= a.hi)) throw std::invalid_argument(std::string(what) + ": lo must not exceed hi");
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig c;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw std::invalid_argument("key outside a section: " + section);
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      auto it = table.find(full);
      if (it == table.end()) throw std::invalid_argument("unknown config key: " + full);
      it->second(c, full, value.get_value<std::string>());
    }
  }
  c.econ.p_boost = chain::to_double(c.p_boost);
  c.validate();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  econ.validate();
  if (validators < 2) throw std::invalid_argument("snapshot.validators must be at least 2");
  if (total_stake_eth < 0) throw std::invalid_argument("snapshot.total_stake_eth must not be negative");
  if (!(alpha >= 0 && alpha < 1)) throw std::invalid_argument("economics.alpha must lie in [0, 1)");
  if (alpha_star <= chain::Fraction{0} || alpha_star >= chain::Fraction{1})
    throw std::invalid_argument("economics.alpha_star must lie in (0, 1)");
  check_axis("grid.alpha", alpha_axis);
  check_axis("grid.beta", beta_axis);
  check_axis("grid.alpha_star", alpha_star_axis);
  if (p_boost < chain::Fraction{0} || p_boost > chain::Fraction{1}) throw std::invalid_argument("attack.p_boost must lie in [0, 1]");
  if (committee_size < 3 || reorg_committee_size < 3) throw std::invalid_argument("committee sizes must be at least 3");
  if (reorg_points < 2) throw std::invalid_argument("reorg_sweep.points must be at least 2");
  if (reorg_alpha_hi <= chain::Fraction{0} || reorg_alpha_hi >= chain::Fraction{1})
    throw std::invalid_argument("reorg_sweep.alpha_hi must lie in (0, 1)");
  if (reorg_max_h < 1 || reorg_max_a < 1) throw std::invalid_argument("reorg_sweep.max_h and max_a must be at least 1");
  if (bias_validators < 32) throw std::invalid_argument("bias.validators must be at least 32");
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return from_tree(tree);
}

RunConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return from_tree(tree);
}

}  // namespace bribery::cli
