// SPDX-License-Identifier: Apache-2.0
#include "bribery/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "bribery/attacks/randao_bias.hpp"
#include "bribery/attacks/reorg.hpp"
#include "bribery/attacks/scenario.hpp"
#include "bribery/economics/economics.hpp"

namespace bribery::cli {

namespace fs = std::filesystem;
using chain::Fraction;
using chain::OrderedJson;

namespace {

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
  if (!f) throw std::runtime_error("write failed: " + p.string());
  return p;
}

OrderedJson run_info(const RunConfig& cfg) { return {{"config", cfg.name}, {"seed", cfg.seed}}; }

Fraction parse_share(const char* what, const std::string& text) {
  Fraction f;
  try {
    f = chain::parse_fraction(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
  if (f < 0 || f > 1) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  return f;
}

std::string fixed(double x, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string frac_text(const Fraction& f) {
  return f.denominator() == 1 ? std::to_string(f.numerator())
                              : std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

std::vector<double> axis_values(const Axis& a) { return economics::axis(a.lo, a.hi, a.n); }

struct Extremes {
  std::size_t feasible = 0;
  double min = 0, max = 0;
};

Extremes extremes(const std::vector<economics::HeatCell>& cells) {
  Extremes e;
  for (const auto& c : cells) {
    if (!c.feasible) continue;
    if (e.feasible == 0 || c.value < e.min) e.min = c.value;
    if (e.feasible == 0 || c.value > e.max) e.max = c.value;
    ++e.feasible;
  }
  return e;
}

void log_extremes(std::ostream& log, const std::vector<economics::HeatCell>& cells, const char* unit) {
  const auto e = extremes(cells);
  log << "cells " << cells.size() << ", feasible " << e.feasible;
  if (e.feasible) log << ", min " << fixed(e.min, "%.6g") << ' ' << unit << ", max " << fixed(e.max, "%.6g") << ' ' << unit;
  log << '\n';
}

CommandResult sweep_reorg(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  std::vector<unsigned> hs, as;
  for (unsigned h = 1; h <= cfg.reorg_max_h; ++h) hs.push_back(h);
  for (unsigned a = 1; a <= cfg.reorg_max_a; ++a) as.push_back(a);
  attacks::AttackParams params;
  params.committee_size = cfg.reorg_committee_size;
  params.bribe_per_vote = static_cast<contracts::Gwei>(cfg.bribe_per_vote_gwei);
  params.backend = cfg.backend;
  params.key_seed = cfg.seed;
  const auto cells = attacks::reorg_grid(hs, as, attacks::linspace(Fraction{0}, cfg.reorg_alpha_hi, cfg.reorg_points),
                                         attacks::linspace(Fraction{0}, Fraction{1}, cfg.reorg_points), params,
                                         cfg.p_boost, cfg.threads);
  std::string csv = "kind,h,a,alpha,beta,predicted,simulated,adversary_weight,honest_weight\n";
  std::size_t agree = 0, success = 0;
  for (const auto& c : cells) {
    csv += std::string(to_string(c.kind)) + "," + std::to_string(c.h) + "," + std::to_string(c.a) + "," +
           fixed(chain::to_double(c.alpha)) + "," + fixed(chain::to_double(c.beta)) + "," +
           (c.predicted ? "1" : "0") + "," + (c.simulated ? "1" : "0") + "," + frac_text(c.adversary_weight) + "," +
           frac_text(c.honest_weight) + "\n";
    agree += c.predicted == c.simulated;
    success += c.simulated;
  }
  CommandResult r;
  r.files.push_back(write_file(out, "reorg.csv", csv));
  log << "cells " << cells.size() << ", reorg succeeded in " << success << ", predicate agreement " << agree << '/'
      << cells.size() << '\n';
  if (agree != cells.size()) r.exit_code = kMismatch;
  return r;
}

}  // namespace

const std::vector<std::string>& sweep_experiments() {
  static const std::vector<std::string> names = {"expost-cost", "exit-bribe", "exit-duration", "reorg"};
  return names;
}

CommandResult cmd_scenario(const RunConfig& cfg, const std::string& chain_text, const std::string& alpha,
                           const std::string& beta, const fs::path& out, std::ostream& log) {
  const auto runs = attacks::parse_chain_string(chain_text);
  const auto spec = attacks::make_scenario(runs, parse_share("alpha", alpha), parse_share("beta", beta), cfg.p_boost);
  attacks::AttackParams params;
  params.committee_size = cfg.committee_size;
  params.bribe_per_vote = static_cast<contracts::Gwei>(cfg.bribe_per_vote_gwei);
  params.backend = cfg.backend;
  params.record_transcript = true;
  params.key_seed = cfg.seed;
  const auto rep = attacks::run_scenario(spec, params);

  auto j = rep.to_json();
  j["run"] = run_info(cfg);
  CommandResult r;
  r.files.push_back(write_file(out, "scenario_report.json", j.dump(2) + "\n"));
  r.files.push_back(write_file(out, "scenario_transcript.jsonl", rep.transcript ? rep.transcript->to_jsonl() : ""));

  log << to_string(spec.kind) << ' ' << spec.chain_string() << ": adversary " << frac_text(rep.adversary_weight)
      << " vs honest " << frac_text(rep.honest_weight) << ", predicted " << (rep.predicted ? "success" : "failure")
      << ", simulated " << (rep.success ? "success" : "failure") << '\n';
  if (rep.predicted != rep.success) r.exit_code = kMismatch;
  else r.exit_code = rep.success ? kOk : kAttackFailed;
  return r;
}

CommandResult cmd_sweep(const RunConfig& cfg, const std::string& experiment, const fs::path& out, std::ostream& log) {
  if (experiment == "reorg") return sweep_reorg(cfg, out, log);
  std::vector<economics::HeatCell> cells;
  const char* unit = "";
  if (experiment == "expost-cost") {
    cells = economics::expost_cost_grid(cfg.validators, cfg.stake_eth(), axis_values(cfg.alpha_axis),
                                        axis_values(cfg.beta_axis), cfg.econ, cfg.threads);
    unit = "ETH";
  } else if (experiment == "exit-bribe") {
    cells = economics::exit_bribe_grid(cfg.validators, axis_values(cfg.alpha_axis), axis_values(cfg.alpha_star_axis),
                                       cfg.econ, cfg.threads);
    unit = "USD";
  } else if (experiment == "exit-duration") {
    cells = economics::exit_duration_grid(cfg.validators, axis_values(cfg.alpha_axis),
                                          axis_values(cfg.alpha_star_axis), cfg.econ, cfg.threads);
    unit = "days";
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  std::string name = experiment;
  for (auto& ch : name)
    if (ch == '-') ch = '_';
  CommandResult r;
  r.files.push_back(write_file(out, name + ".csv", economics::to_csv(cells)));
  log << experiment << ": ";
  log_extremes(log, cells, unit);
  return r;
}

CommandResult cmd_exit_game(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const double alpha_star = chain::to_double(cfg.alpha_star);
  const auto eq = economics::solve_equilibrium({cfg.validators, cfg.alpha, alpha_star, 1}, cfg.econ);
  const auto total = eq.bribe * static_cast<double>(eq.k);

  OrderedJson j;
  j["schema_version"] = 1;
  j["inputs"] = {{"validators", cfg.validators}, {"alpha", cfg.alpha}, {"alpha_star", frac_text(cfg.alpha_star)}};
  j["exits"] = eq.k;
  j["bribe_lower_eth"] = eq.bounds.lower.value;
  j["bribe_upper_eth"] = eq.bounds.upper.value;
  j["bribe_usd"] = eq.bribe_usd.value;
  j["total_bribe_eth"] = total.value;
  j["total_bribe_usd"] = economics::to_usd(total, cfg.econ).value;
  j["dynamic_total_eth"] = economics::dynamic_bribe_total(cfg.validators, eq.k, cfg.econ).value;
  j["duration_days"] = eq.duration_days;
  j["leader"] = {{"gain_eth", eq.leader.gain.value},
                 {"cost_eth", eq.leader.cost.value},
                 {"break_even_eth", eq.leader.break_even.value}};
  if (cfg.reference_threshold_eth > 0) j["reference_threshold_eth"] = cfg.reference_threshold_eth;
  j["run"] = run_info(cfg);

  CommandResult r;
  r.files.push_back(write_file(out, "exit_game.json", j.dump(2) + "\n"));
  log << "k* " << eq.k << ", b* " << fixed(eq.bribe.value, "%.4f") << " ETH (" << fixed(eq.bribe_usd.value, "%.2f")
      << " USD), duration " << fixed(eq.duration_days, "%.1f") << " days, break-even exogenous profit "
      << fixed(eq.leader.break_even.value, "%.1f") << " ETH";
  if (cfg.reference_threshold_eth > 0) log << " (reference " << fixed(cfg.reference_threshold_eth, "%.1f") << ")";
  log << '\n';
  return r;
}

std::vector<contracts::Bid> load_bids(const fs::path& path, unsigned k) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open bids file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bids file: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw std::invalid_argument("bids file: expected a JSON array");
  if (doc.empty()) throw std::invalid_argument("bids file: no bids");
  std::vector<contracts::Bid> bids;
  for (const auto& b : doc) {
    try {
      const auto bits = b.at("config").get<std::string>();
      if (bits.size() != k)
        throw std::invalid_argument("config '" + bits + "' does not have " + std::to_string(k) + " bits");
      const auto amount = b.at("amount_gwei").get<std::int64_t>();
      if (amount <= 0) throw std::invalid_argument("amount_gwei must be positive");
      bids.push_back({b.at("bidder").get<std::string>(), contracts::parse_config(bits), amount});
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("bids file: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("bids file: " + std::string(e.what()));
    }
  }
  return bids;
}

CommandResult cmd_bias(const RunConfig& cfg, unsigned k, const fs::path& bids_path, const fs::path& out,
                       std::ostream& log) {
  if (k == 0 || k > contracts::PayToBias::kMaxTail)
    throw std::invalid_argument("k must lie in [1, " + std::to_string(contracts::PayToBias::kMaxTail) + "]");
  const auto bids = load_bids(bids_path, k);
  attacks::BiasSetup setup;
  setup.validators = cfg.bias_validators;
  setup.backend = cfg.backend;
  setup.record_transcript = true;
  setup.key_seed = cfg.seed;
  const auto rep = attacks::run_bias_auction(k, bids, setup);

  auto j = rep.to_json();
  j["run"] = run_info(cfg);
  CommandResult r;
  r.files.push_back(write_file(out, "bias_report.json", j.dump(2) + "\n"));
  r.files.push_back(write_file(out, "bias_transcript.jsonl", rep.transcript ? rep.transcript->to_jsonl() : ""));
  log << "k " << k << ", " << rep.outcomes.size() << " outcomes, winner " << contracts::config_string(rep.winner, k)
      << ", settlement " << (rep.accepted ? "accepted" : "rejected: " + rep.rejection) << ", payout " << rep.payout
      << " gwei\n";
  if (!rep.accepted) r.exit_code = kError;
  return r;
}

}  // namespace bribery::cli
