// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bribery/cli/commands.hpp"

namespace bribery::cli {
namespace {

namespace fs = std::filesystem;

const std::string kConfigs = BRIBERY_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("bribery_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_bids(const std::string& body) {
    const auto p = dir_ / "bids.json";
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
  std::ostringstream log_;
};

TEST(RunConfigTest, DefaultsAndPresets) {
  RunConfig d;
  EXPECT_NO_THROW(d.validate());
  EXPECT_DOUBLE_EQ(d.stake_eth(), 32.0 * 1'060'000);

  const auto april = load_config(kConfigs + "/april-2025.ini");
  EXPECT_EQ(april.name, "april-2025");
  EXPECT_EQ(april.validators, 1'060'000u);
  EXPECT_EQ(april.alpha_axis.n, 100u);
  EXPECT_EQ(april.p_boost, chain::Fraction(2, 5));
  EXPECT_DOUBLE_EQ(april.econ.p_boost, 0.4);

  const auto sept = load_config(kConfigs + "/sept-2025.ini");
  EXPECT_EQ(sept.validators, 1'123'611u);
  EXPECT_EQ(sept.alpha_star, chain::Fraction(1, 3));
  EXPECT_DOUBLE_EQ(sept.reference_threshold_eth, 250541.1);

  const auto july = load_config(kConfigs + "/july-2025.ini");
  EXPECT_DOUBLE_EQ(july.econ.eth_usd, 3708);
}

TEST(RunConfigTest, RejectsTyposAndBadValues) {
  EXPECT_THROW(parse_config_text("[snapshot]\nvalidatorz = 5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[nosuch]\nx = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[snapshot]\nvalidators = 12abc\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[snapshot]\nvalidators = -5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[economics]\ndiscount_rate = 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[economics]\nalpha_star = 3/2\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[grid]\nalpha_lo = 0.6\nalpha_hi = 0.5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[attack]\np_boost = 1/0\n"), std::invalid_argument);
  EXPECT_THROW(parse_config_text("[snapshot\n"), std::invalid_argument);
  EXPECT_THROW(load_config("/nonexistent/cfg.ini"), std::invalid_argument);
  const auto c = parse_config_text("[attack]\np_boost = 0.25\n[run]\nseed = 7\n");
  EXPECT_EQ(c.p_boost, chain::Fraction(1, 4));
  EXPECT_DOUBLE_EQ(c.econ.p_boost, 0.25);
  EXPECT_EQ(c.seed, 7u);
}

TEST_F(CliTest, ScenarioSuccessAndFailureCodes) {
  RunConfig cfg;
  cfg.committee_size = 40;
  auto ok = cmd_scenario(cfg, "H A^2", "0.3", "0.5", dir_, log_);
  EXPECT_EQ(ok.exit_code, kOk);
  const auto rep = nlohmann::json::parse(slurp(dir_ / "scenario_report.json"));
  EXPECT_EQ(rep["schema_version"], 1);
  EXPECT_TRUE(rep["success"].get<bool>());
  EXPECT_EQ(rep["decision"]["adversary_weight"]["exact"], "21/20");
  EXPECT_EQ(rep["decision"]["honest_weight"]["exact"], "7/10");
  EXPECT_GT(fs::file_size(dir_ / "scenario_transcript.jsonl"), 0u);

  auto fail = cmd_scenario(cfg, "H A^2", "0.0", "0.0", dir_, log_);
  EXPECT_EQ(fail.exit_code, kAttackFailed);
  EXPECT_FALSE(nlohmann::json::parse(slurp(dir_ / "scenario_report.json"))["success"].get<bool>());

  EXPECT_THROW(cmd_scenario(cfg, "H A^", "0.3", "0.5", dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_scenario(cfg, "H X", "0.3", "0.5", dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_scenario(cfg, "H A", "1.5", "0.5", dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_scenario(cfg, "H A", "abc", "0.5", dir_, log_), std::invalid_argument);
}

TEST_F(CliTest, ScenarioIsByteReproducibleAndSeedOnlyChangesKeys) {
  RunConfig cfg;
  cfg.committee_size = 12;
  cmd_scenario(cfg, "A^2 H A", "0.2", "0.3", dir_ / "a", log_);
  cmd_scenario(cfg, "A^2 H A", "0.2", "0.3", dir_ / "b", log_);
  for (const char* f : {"scenario_report.json", "scenario_transcript.jsonl"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;

  cfg.seed = 99;
  cmd_scenario(cfg, "A^2 H A", "0.2", "0.3", dir_ / "c", log_);
  EXPECT_NE(slurp(dir_ / "a" / "scenario_transcript.jsonl"), slurp(dir_ / "c" / "scenario_transcript.jsonl"));
  const auto a = nlohmann::json::parse(slurp(dir_ / "a" / "scenario_report.json"));
  const auto c = nlohmann::json::parse(slurp(dir_ / "c" / "scenario_report.json"));
  EXPECT_EQ(a["success"], c["success"]);
  EXPECT_EQ(a["decision"], c["decision"]);
}

// Reads a heat-map CSV into (alpha, y) -> (value, feasible).
struct Row {
  double alpha, y, value;
  int feasible;
};
std::vector<Row> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alpha,beta_or_alpha_star,value,feasible");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    Row r{};
    EXPECT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &r.alpha, &r.y, &r.value, &r.feasible), 4) << line;
    rows.push_back(r);
  }
  return rows;
}

TEST_F(CliTest, ExpostCostSweep) {
  const auto cfg = load_config(kConfigs + "/april-2025.ini");
  ASSERT_EQ(cmd_sweep(cfg, "expost-cost", dir_, log_).exit_code, kOk);
  const auto rows = read_csv(dir_ / "expost_cost.csv");
  ASSERT_EQ(rows.size(), 100u * 100u);
  double max = 0;
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const auto& r = rows[idx];
    // Axis values at full precision; the CSV keeps six decimals.
    const double a = 0.01 + static_cast<double>(idx / 100) * 0.49 / 99;
    const double b = static_cast<double>(idx % 100) / 99;
    ASSERT_NEAR(r.alpha, a, 1e-6);
    ASSERT_NEAR(r.y, b, 1e-6);
    const bool above = 0.4 + a + (1 - a) * b > 2 * (1 - a) * (1 - b);
    EXPECT_EQ(r.feasible, above ? 1 : 0) << a << ' ' << b;
    if (r.feasible) {
      EXPECT_LT(r.value, 0.09);
      max = std::max(max, r.value);
    }
  }
  EXPECT_NEAR(max, 0.080, 0.005);
}

TEST_F(CliTest, ExitDurationSweepCell) {
  auto cfg = load_config(kConfigs + "/sept-2025.ini");
  ASSERT_EQ(cmd_sweep(cfg, "exit-duration", dir_, log_).exit_code, kOk);
  const auto rows = read_csv(dir_ / "exit_duration.csv");
  ASSERT_EQ(rows.size(), 100u * 100u);
  // Cell nearest (0.43, 0.48).
  const Row* best = nullptr;
  for (const auto& r : rows)
    if (!best || std::hypot(r.alpha - 0.43, r.y - 0.48) < std::hypot(best->alpha - 0.43, best->y - 0.48)) best = &r;
  ASSERT_TRUE(best->feasible);
  EXPECT_NEAR(best->value, 65, 3);
  for (const auto& r : rows) EXPECT_EQ(r.feasible, r.alpha < r.y ? 1 : 0);
}

TEST_F(CliTest, ExitBribeSweepAndGame) {
  auto cfg = load_config(kConfigs + "/sept-2025.ini");
  cfg.alpha_axis = {0.2, 0.3, 11};
  cfg.alpha_star_axis = {0.3, 0.4, 11};
  ASSERT_EQ(cmd_sweep(cfg, "exit-bribe", dir_, log_).exit_code, kOk);
  EXPECT_EQ(read_csv(dir_ / "exit_bribe.csv").size(), 121u);

  ASSERT_EQ(cmd_exit_game(cfg, dir_, log_).exit_code, kOk);
  const auto j = nlohmann::json::parse(slurp(dir_ / "exit_game.json"));
  EXPECT_NEAR(j["exits"].get<double>(), 317'982, 30);
  EXPECT_NEAR(j["bribe_upper_eth"].get<double>(), 9.23, 0.02);
  EXPECT_NEAR(j["bribe_usd"].get<double>(), 41'333, 100);
  EXPECT_NEAR(j["duration_days"].get<double>(), 176.7, 0.5);
  EXPECT_DOUBLE_EQ(j["reference_threshold_eth"].get<double>(), 250541.1);
  EXPECT_GT(j["leader"]["break_even_eth"].get<double>(), 0);
}

TEST_F(CliTest, ReorgSweepAgrees) {
  RunConfig cfg;
  cfg.reorg_points = 5;
  cfg.reorg_max_h = 2;
  cfg.reorg_max_a = 2;
  cfg.reorg_committee_size = 6;
  ASSERT_EQ(cmd_sweep(cfg, "reorg", dir_, log_).exit_code, kOk);
  std::ifstream in(dir_ / "reorg.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,h,a,alpha,beta,predicted,simulated,adversary_weight,honest_weight");
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, 2u * 4 * 25);
  EXPECT_THROW(cmd_sweep(cfg, "nope", dir_, log_), std::invalid_argument);
}

TEST_F(CliTest, SweepsAreByteReproducible) {
  auto cfg = load_config(kConfigs + "/april-2025.ini");
  cmd_sweep(cfg, "expost-cost", dir_ / "a", log_);
  cfg.threads = 3;
  cmd_sweep(cfg, "expost-cost", dir_ / "b", log_);
  EXPECT_EQ(slurp(dir_ / "a" / "expost_cost.csv"), slurp(dir_ / "b" / "expost_cost.csv"));
}

TEST_F(CliTest, BiasAuction) {
  RunConfig cfg;
  auto bids = write_bids(R"([{"bidder": "alice", "config": "1", "amount_gwei": 700},
                             {"bidder": "bob", "config": "0", "amount_gwei": 300}])");
  ASSERT_EQ(cmd_bias(cfg, 1, bids, dir_, log_).exit_code, kOk);
  auto j = nlohmann::json::parse(slurp(dir_ / "bias_report.json"));
  EXPECT_EQ(j["winner"], "1");
  EXPECT_TRUE(j["settlement_accepted"].get<bool>());
  EXPECT_EQ(j["payout_gwei"], 700);

  bids = write_bids(R"([{"bidder": "a", "config": "010", "amount_gwei": 5},
                        {"bidder": "b", "config": "110", "amount_gwei": 3},
                        {"bidder": "c", "config": "110", "amount_gwei": 4}])");
  ASSERT_EQ(cmd_bias(cfg, 3, bids, dir_, log_).exit_code, kOk);
  j = nlohmann::json::parse(slurp(dir_ / "bias_report.json"));
  EXPECT_EQ(j["outcomes"].size(), 8u);
  EXPECT_EQ(j["winner"], "110");
  EXPECT_EQ(j["payout_gwei"], 7);
}

TEST_F(CliTest, BiasInputErrors) {
  RunConfig cfg;
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids("[]"), dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids("{}"), dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids("not json"), dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 2, write_bids(R"([{"bidder":"a","config":"1","amount_gwei":1}])"), dir_, log_),
               std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids(R"([{"bidder":"a","config":"2","amount_gwei":1}])"), dir_, log_),
               std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids(R"([{"bidder":"a","config":"1","amount_gwei":0}])"), dir_, log_),
               std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, write_bids(R"([{"config":"1","amount_gwei":1}])"), dir_, log_), std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 21, write_bids(R"([{"bidder":"a","config":"1","amount_gwei":1}])"), dir_, log_),
               std::invalid_argument);
  EXPECT_THROW(cmd_bias(cfg, 1, dir_ / "missing.json", dir_, log_), std::invalid_argument);
}

}  // namespace
}  // namespace bribery::cli
