// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bribery/cli/run_config.hpp"
#include "bribery/contracts/pay_to_bias.hpp"

namespace bribery::cli {

enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kUsage = 2,         // bad input: chain string, config, bids file
  kAttackFailed = 3,  // predicted and simulated failure
  kMismatch = 4,      // simulation disagrees with the predicate
};

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::filesystem::path> files;
};

/// Runs one reorg scenario with a transcript. Writes scenario_report.json
/// and scenario_transcript.jsonl.
CommandResult cmd_scenario(const RunConfig& cfg, const std::string& chain, const std::string& alpha,
                           const std::string& beta, const std::filesystem::path& out, std::ostream& log);

/// Experiments: expost-cost, exit-bribe, exit-duration, reorg. Writes
/// <experiment>.csv with '-' replaced by '_'.
CommandResult cmd_sweep(const RunConfig& cfg, const std::string& experiment, const std::filesystem::path& out,
                        std::ostream& log);
const std::vector<std::string>& sweep_experiments();

/// Exit game at (cfg.alpha, cfg.alpha_star). Writes exit_game.json.
CommandResult cmd_exit_game(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Bias auction over k tail slots. Writes bias_report.json and
/// bias_transcript.jsonl.
CommandResult cmd_bias(const RunConfig& cfg, unsigned k, const std::filesystem::path& bids,
                       const std::filesystem::path& out, std::ostream& log);

/// Bids file: a JSON array of {"bidder": str, "config": bit string of
/// length k, "amount_gwei": uint}.
std::vector<contracts::Bid> load_bids(const std::filesystem::path& path, unsigned k);

}  // namespace bribery::cli
