#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "minfo/errors.hpp"
#include "minfo/harness/config.hpp"
#include "minfo/harness/experiments.hpp"
#include "minfo/harness/results.hpp"

namespace minfo::harness {
namespace {

using nlohmann::json;

std::string error_key(std::string_view doc, const json& flags = json::object()) {
  try {
    (void)parse_config(doc, flags);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(ParseConfig, FillsDefaults) {
  const auto cfg = parse_config(R"({"experiment":"estimate","rho":0.5,"k":2})");
  EXPECT_EQ(cfg.experiment, Experiment::Estimate);
  EXPECT_EQ(cfg.gaussian.rho, 0.5);
  EXPECT_EQ(cfg.gaussian.k, 2u);
  const EstimatorConfig defaults;
  EXPECT_EQ(cfg.estimator.steps, defaults.steps);
  EXPECT_EQ(cfg.estimator.batch_size, defaults.batch_size);
  EXPECT_EQ(cfg.estimator.hidden, (std::vector<std::size_t>{100, 100}));
  EXPECT_EQ(cfg.estimator.ema_rate, 0.01);
  EXPECT_TRUE(cfg.estimator.use_ema_correction);
  EXPECT_EQ(cfg.estimator.marginal_mode, MarginalMode::Shuffle);
  EXPECT_EQ(cfg.estimator.optimizer.lr, 1e-3);
  EXPECT_EQ(cfg.rho_grid.size(), 10u);
  EXPECT_EQ(cfg.sigma_grid.size(), 10u);
  EXPECT_EQ(cfg.format, OutputFormat::Csv);
  EXPECT_EQ(cfg.out, "-");
}

TEST(ParseConfig, InvalidRhoNamed) { EXPECT_EQ(error_key(R"({"rho":1.5})"), "rho"); }

TEST(ParseConfig, FlagsOverrideFile) {
  const auto cfg = parse_config(R"({"seed":3})", json{{"seed", 7}});
  EXPECT_EQ(cfg.base_seed, 7u);
}

TEST(ParseConfig, NestedEstimatorBlock) {
  const auto cfg = parse_config(R"({"estimator":{"steps":12,"hidden":[5,6],"objective":"f"}})");
  EXPECT_EQ(cfg.estimator.steps, 12u);
  EXPECT_EQ(cfg.estimator.hidden, (std::vector<std::size_t>{5, 6}));
  EXPECT_EQ(cfg.estimator.objective, Objective::FDivergence);
}

TEST(ParseConfig, RejectsUnknownAndMistyped) {
  EXPECT_EQ(error_key(R"({"rhoo":0.5})"), "rhoo");
  EXPECT_EQ(error_key(R"({"estimator":{"nope":1}})"), "estimator.nope");
  EXPECT_EQ(error_key(R"({"steps":"many"})"), "steps");
  EXPECT_EQ(error_key(R"({"objective":"kl"})"), "objective");
  EXPECT_EQ(error_key(R"({"rho_grid":[0.1, 1.0]})"), "rho_grid");
  EXPECT_EQ(error_key(R"({"batch_size":1})"), "batch_size");
  EXPECT_EQ(error_key(R"({"seed":-4})"), "seed");
  EXPECT_EQ(error_key(R"([1,2])"), "");
  EXPECT_EQ(error_key(R"({"rho": )"), "");
}

ResultRow gaussian_row() {
  ResultRow r;
  r.experiment = "estimate";
  r.method = "mine_dv";
  r.k = 1;
  r.rho = 0.5;
  r.estimate_nats = 0.1400004;
  r.truth_nats = 0.14384103622589045;
  r.abs_err = std::fabs(*r.estimate_nats - *r.truth_nats);
  r.seed = 18446744073709551615ULL;
  return r;
}

TEST(Emit, HeaderOnlyForNoRows) {
  EXPECT_EQ(render({}, OutputFormat::Csv), std::string(kCsvHeader) + "\n");
}

TEST(Emit, GaussianRowSchema) {
  EXPECT_EQ(render({gaussian_row()}, OutputFormat::Csv),
            std::string(kCsvHeader) +
                "\nestimate,mine_dv,1,0.500000,,,0.140000,0.143841,0.003841,18446744073709551615,\n");
}

TEST(Emit, JsonRoundTrip) {
  ResultRow nl;
  nl.experiment = "equitability";
  nl.method = "mine_dv";
  nl.k = 2;
  nl.f = "sin";
  nl.sigma = 0.3;
  nl.estimate_nats = 1.25;
  nl.seed = 9;
  nl.wall_ms = 12.5;
  const std::vector<ResultRow> rows{gaussian_row(), nl, ResultRow{}};
  EXPECT_EQ(parse_json_rows(render(rows, OutputFormat::Json)), rows);
}

TEST(Emit, UnwritablePathIsConfigError) {
  EXPECT_THROW(emit({}, OutputFormat::Csv, "/nonexistent-dir/x/out.csv"), ConfigError);
}

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.estimator.hidden = {8};
  cfg.estimator.batch_size = 16;
  cfg.estimator.steps = 30;
  cfg.estimator.eval_every = 10;
  cfg.estimator.smoothing_window = 2;
  cfg.samples = 200;
  cfg.rho_grid = {-0.5, 0.0, 0.5};
  cfg.sigma_grid = {0.5, 1.0};
  cfg.base_seed = 17;
  return cfg;
}

TEST(Sweep, RowsOrderedByMethodThenRhoWithTruth) {
  auto cfg = tiny_config();
  cfg.experiment = Experiment::Sweep;
  const auto report = run_sweep(cfg);
  ASSERT_FALSE(report.failed());
  ASSERT_EQ(report.rows.size(), 9u);
  const char* methods[] = {"mine_dv", "mine_f", "ksg"};
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& row = report.rows[m * 3 + i];
      EXPECT_EQ(row.method, methods[m]);
      EXPECT_EQ(*row.rho, cfg.rho_grid[i]);
      EXPECT_NEAR(*row.truth_nats, -0.5 * std::log(1 - cfg.rho_grid[i] * cfg.rho_grid[i]), 1e-15);
      EXPECT_TRUE(row.estimate_nats && std::isfinite(*row.estimate_nats));
      EXPECT_FALSE(row.f.has_value());
      EXPECT_FALSE(row.wall_ms.has_value());
    }
  }
}

TEST(Sweep, ParallelAndSequentialOutputsIdentical) {
  auto cfg = tiny_config();
  cfg.jobs = 1;
  const auto seq = render(run_sweep(cfg).rows, OutputFormat::Csv);
  cfg.jobs = 4;
  const auto par = render(run_sweep(cfg).rows, OutputFormat::Csv);
  EXPECT_EQ(seq, par);
}

TEST(Equitability, GridShapeAndSpreadRows) {
  auto cfg = tiny_config();
  const auto report = run_equitability(cfg);
  ASSERT_EQ(report.rows.size(), 3u * 2u + 2u);
  std::size_t cells = 0;
  for (const auto& r : report.rows) {
    if (r.method == "mine_dv") {
      ++cells;
      EXPECT_TRUE(r.f.has_value());
      EXPECT_FALSE(r.truth_nats.has_value());
    }
  }
  EXPECT_EQ(cells, 6u);
  for (std::size_t si = 0; si < 2; ++si) {
    const auto& spread = report.rows[6 + si];
    EXPECT_EQ(spread.method, "spread");
    double lo = 1e9, hi = -1e9;
    for (std::size_t fi = 0; fi < 3; ++fi) {
      lo = std::min(lo, *report.rows[fi * 2 + si].estimate_nats);
      hi = std::max(hi, *report.rows[fi * 2 + si].estimate_nats);
    }
    EXPECT_DOUBLE_EQ(*spread.estimate_nats, hi - lo);
  }
}

TEST(GradCheckExperiment, AllTrialsPass) {
  RunConfig cfg;
  cfg.gradcheck_trials = 6;
  const auto trials = run_gradcheck(cfg);
  ASSERT_EQ(trials.size(), 6u);
  for (const auto& t : trials) EXPECT_TRUE(t.pass) << t.trial << " " << t.max_rel_err;
  EXPECT_NE(render_gradcheck(trials, OutputFormat::Csv).find("max_rel_err"), std::string::npos);
}

// --- the installed command ------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MINFO_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("minfo-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

constexpr const char* kTiny = "--steps 20 --batch-size 16 --hidden 8 --eval-every 10 --samples 100";

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("complexity --d 1 --eps 0.1 --delta 0.05 --out " + path("c.csv")), 0);
  EXPECT_EQ(slurp(path("c.csv")),
            "d,M,L,K,eps,delta,n\n1.000000,1.000000,1.000000,1.000000,0.100000,0.050000,2153\n");
  EXPECT_EQ(run_cli("estimate --rho 1.5"), 2);
  EXPECT_EQ(run_cli("estimate --objective kl"), 2);
  EXPECT_EQ(run_cli("bogus"), 2);
  EXPECT_EQ(run_cli("estimate --config " + path("missing.json")), 2);
  EXPECT_EQ(run_cli(std::string("estimate ") + kTiny + " --out /nonexistent-dir/out.csv"), 2);
  // A learning rate this large overflows the network within a few steps.
  EXPECT_EQ(run_cli(std::string("estimate ") + kTiny + " --rho 0.99 --lr 1e12 --out " + path("x.csv")), 3);
  EXPECT_EQ(run_cli("gradcheck --trials 3 --out " + path("g.csv")), 0);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream f(path("cfg.json"));
    f << R"({"experiment":"ksg","rho":0.5,"k":1,"samples":300,"seed":3})";
  }
  ASSERT_EQ(run_cli("ksg --config " + path("cfg.json") + " --seed 7 --out " + path("a.csv")), 0);
  const auto text = slurp(path("a.csv"));
  EXPECT_NE(text.find("ksg,ksg,1,0.500000,,,"), std::string::npos) << text;
}

TEST_F(Cli, RepeatedSweepIsByteIdentical) {
  const std::string args = std::string("sweep ") + kTiny + " --rho-grid -0.5,0,0.5 --seed 4";
  ASSERT_EQ(run_cli(args + " --jobs 1 --out " + path("a.csv")), 0);
  ASSERT_EQ(run_cli(args + " --jobs 3 --out " + path("b.csv")), 0);
  ASSERT_EQ(run_cli(args + " --jobs 3 --format json --out " + path("c.json")), 0);
  ASSERT_EQ(run_cli(args + " --jobs 2 --format json --out " + path("d.json")), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("c.json")), slurp(path("d.json")));
  EXPECT_EQ(parse_json_rows(slurp(path("c.json"))).size(), 9u);
}

}  // namespace
}  // namespace minfo::harness
