// SPDX-License-Identifier: Apache-2.0
// Command-line driver: loads a snapshot config and runs one experiment.
#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "bribery/cli/commands.hpp"

namespace cli = bribery::cli;

int main(int argc, char** argv) {
  CLI::App app{"bribery: reorg, exit and RANDAO bribery experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "INI snapshot config (defaults apply when omitted)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "key derivation seed (overrides [run] seed)");

  auto* scenario = app.add_subcommand("scenario", "run one reorg scenario, e.g. --chain \"H A^2\"");
  std::string chain, alpha, beta;
  scenario->add_option("--chain", chain, "chain string: H^h A^a or A^a H^h A")->required();
  scenario->add_option("--alpha", alpha, "adversary stake share (decimal or n/d)")->required();
  scenario->add_option("--beta", beta, "bribed share of the rest (decimal or n/d)")->required();

  auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
  std::string experiment;
  sweep->add_option("experiment", experiment, "expost-cost | exit-bribe | exit-duration | reorg")
      ->required()
      ->check(CLI::IsMember(cli::sweep_experiments()));

  auto* game = app.add_subcommand("exit-game", "Stackelberg exit game at one point");
  std::optional<double> game_alpha;
  std::optional<std::string> game_alpha_star;
  game->add_option("--alpha", game_alpha, "leader stake share");
  game->add_option("--alpha-star", game_alpha_star, "target share (decimal or n/d)");

  auto* bias = app.add_subcommand("bias", "RANDAO tail-slot auction");
  unsigned k = 0;
  std::string bids;
  bias->add_option("--k", k, "tail slots controlled")->required();
  bias->add_option("--bids", bids, "JSON bids file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  try {
    cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (game_alpha) cfg.alpha = *game_alpha;
    if (game_alpha_star) cfg.alpha_star = bribery::chain::parse_fraction(*game_alpha_star);
    cfg.validate();

    cli::CommandResult r;
    if (*scenario) r = cli::cmd_scenario(cfg, chain, alpha, beta, out_dir, std::cout);
    else if (*sweep) r = cli::cmd_sweep(cfg, experiment, out_dir, std::cout);
    else if (*game) r = cli::cmd_exit_game(cfg, out_dir, std::cout);
    else r = cli::cmd_bias(cfg, k, bids, out_dir, std::cout);
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
    return r.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kError;
  }
}
