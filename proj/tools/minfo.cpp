// minfo: command-line harness for the mutual-information estimators.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "minfo/errors.hpp"
#include "minfo/harness/config.hpp"
#include "minfo/harness/experiments.hpp"
#include "minfo/harness/results.hpp"
#include "minfo/kernels.hpp"
#include "minfo/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

using nlohmann::json;

std::vector<double> split_numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw minfo::ConfigError(key, "cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw minfo::ConfigError(key, "empty list");
  return out;
}

std::vector<std::size_t> split_counts(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const double v : split_numbers(key, text)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw minfo::ConfigError(key, "expected non-negative integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw minfo::ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural and k-NN mutual information estimation experiments", "minfo"};

  std::string experiment;
  app.add_option("experiment", experiment, "estimate|sweep|equitability|ksg|gradcheck|complexity")
      ->required()
      ->check(CLI::IsMember({"estimate", "sweep", "equitability", "ksg", "gradcheck", "complexity"}));

  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file (flags override it)");

  // Flag name -> config key. Values are collected into a JSON override object.
  json overrides = json::object();
  double rho = 0, ema_rate = 0, clip_cap = 0, sigma = 0, lr = 0, gc_tol = 0;
  double cd = 0, cm = 0, cl = 0, ck = 0, ceps = 0, cdelta = 0;
  std::size_t k = 0, samples = 0, steps = 0, jobs = 0, dim = 0, batch = 0, eval_size = 0,
              eval_every = 0, window = 0, ksg_k = 0, trials = 0;
  std::uint64_t seed = 0;
  std::string objective, marginal, out, format, rho_grid, sigma_grid, f, data, hidden, activation,
      kernel;
  bool no_ema = false, timing = false;

  struct Bound {
    CLI::Option* opt;
    std::function<void()> apply;
  };
  std::vector<Bound> bound;
  const auto num = [&](const char* flag, const char* key, auto& var, const char* help) {
    bound.push_back({app.add_option(flag, var, help), [&overrides, key, &var] { overrides[key] = var; }});
  };
  num("--rho", "rho", rho, "component-wise correlation");
  num("--k", "k", k, "Gaussian component count per variable");
  num("--samples", "samples", samples, "sample count for the k-NN estimator");
  num("--steps", "steps", steps, "training steps");
  num("--objective", "objective", objective, "dv|f");
  num("--marginal", "marginal", marginal, "shuffle|resample");
  num("--ema-rate", "ema_rate", ema_rate, "EMA rate for the gradient denominator");
  num("--clip-cap", "clip_cap", clip_cap, "adaptive clipping norm cap");
  num("--seed", "seed", seed, "base seed");
  num("--jobs", "jobs", jobs, "parallel tasks (default: hardware threads)");
  num("--out", "out", out, "output path, '-' for standard output");
  num("--format", "format", format, "csv|json");
  num("--f", "f", f, "x|x3|sin");
  num("--sigma", "sigma", sigma, "noise scale for nonlinear data");
  num("--dim", "dim", dim, "dimension for nonlinear data");
  num("--data", "data", data, "gaussian|nonlinear (estimate)");
  num("--batch-size", "batch_size", batch, "minibatch size");
  num("--activation", "activation", activation, "relu|elu");
  num("--lr", "lr", lr, "Adam learning rate");
  num("--eval-size", "eval_size", eval_size, "evaluation set size");
  num("--eval-every", "eval_every", eval_every, "steps between evaluations");
  num("--smoothing-window", "smoothing_window", window, "evaluations averaged for the estimate");
  num("--ksg-k", "ksg_k", ksg_k, "neighbor count for the k-NN estimator");
  num("--trials", "gradcheck_trials", trials, "gradcheck configurations");
  num("--tol", "gradcheck_tol", gc_tol, "gradcheck relative error tolerance");
  num("--d", "d", cd, "complexity: parameter dimension");
  num("--M", "M", cm, "complexity: bound on |T|");
  num("--L", "L", cl, "complexity: Lipschitz constant");
  num("--K", "K", ck, "complexity: parameter norm bound");
  num("--eps", "eps", ceps, "complexity: accuracy");
  num("--delta", "delta", cdelta, "complexity: confidence");
  auto* rho_grid_opt = app.add_option("--rho-grid", rho_grid, "comma-separated rho values");
  auto* sigma_grid_opt = app.add_option("--sigma-grid", sigma_grid, "comma-separated sigma values");
  auto* hidden_opt = app.add_option("--hidden", hidden, "comma-separated hidden widths");
  auto* no_ema_opt = app.add_flag("--no-ema", no_ema, "use the uncorrected minibatch gradient");
  auto* timing_opt = app.add_flag("--timing", timing, "fill the wall_ms column");
  app.add_option("--kernels", kernel, "scalar|avx2 (default: best available)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  minfo::harness::RunConfig cfg;
  try {
    if (!kernel.empty()) minfo::kernels::select(minfo::kernels::parse_backend(kernel));
    for (const auto& b : bound) {
      if (b.opt->count() > 0) b.apply();
    }
    if (rho_grid_opt->count() > 0) overrides["rho_grid"] = split_numbers("rho_grid", rho_grid);
    if (sigma_grid_opt->count() > 0) overrides["sigma_grid"] = split_numbers("sigma_grid", sigma_grid);
    if (hidden_opt->count() > 0) overrides["hidden"] = split_counts("hidden", hidden);
    if (no_ema_opt->count() > 0) overrides["no_ema"] = true;
    if (timing_opt->count() > 0) overrides["timing"] = true;
    overrides["experiment"] = experiment;

    std::optional<std::string> file_text;
    if (!config_path.empty()) file_text = read_file(config_path);
    cfg = minfo::harness::parse_config(file_text ? std::optional<std::string_view>(*file_text)
                                                 : std::nullopt,
                                       overrides);
  } catch (const minfo::Error& e) {
    std::cerr << "minfo: configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  using minfo::harness::Experiment;
  try {
    std::cerr << "[minfo] kernels: " << minfo::kernels::active().name << '\n';
    if (cfg.experiment == Experiment::Complexity) {
      const auto n = minfo::sample_complexity(cfg.complexity);
      minfo::harness::write_text(minfo::harness::render_complexity(cfg.complexity, n, cfg.format),
                                 cfg.out);
      return kExitOk;
    }
    if (cfg.experiment == Experiment::GradCheck) {
      const auto trials_out = minfo::harness::run_gradcheck(cfg);
      minfo::harness::write_text(minfo::harness::render_gradcheck(trials_out, cfg.format), cfg.out);
      for (const auto& t : trials_out) {
        if (!t.pass) {
          std::cerr << "minfo: gradient check failed on trial " << t.trial << '\n';
          return kExitNumeric;
        }
      }
      return kExitOk;
    }
    const auto report = minfo::harness::run_experiment(cfg);
    minfo::harness::emit(report.rows, cfg.format, cfg.out);
    for (const auto& msg : report.failures) std::cerr << "minfo: task failed: " << msg << '\n';
    return report.failed() ? kExitNumeric : kExitOk;
  } catch (const minfo::ConfigError& e) {
    std::cerr << "minfo: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const minfo::ArgumentError& e) {
    std::cerr << "minfo: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const minfo::Error& e) {
    std::cerr << "minfo: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}
