#include "minfo/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "minfo/baselines.hpp"
#include "minfo/errors.hpp"
#include "minfo/estimator.hpp"
#include "minfo/grad_utils.hpp"
#include "minfo/rng.hpp"

namespace minfo::harness {

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

using Clock = std::chrono::steady_clock;

// One estimation job; fills row.estimate_nats or records a failure message.
struct Task {
  ResultRow row;
  std::function<double()> run;
  std::string failure;
};

void finish(ResultRow& row) {
  if (row.estimate_nats && row.truth_nats) row.abs_err = std::fabs(*row.estimate_nats - *row.truth_nats);
}

RunReport execute(std::vector<Task>& tasks, const RunConfig& cfg) {
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    Task& t = tasks[i];
    const auto start = Clock::now();
    try {
      t.row.estimate_nats = t.run();
    } catch (const Error& e) {
      t.failure = t.row.method + " (seed " + std::to_string(t.row.seed) + "): " + e.what();
    }
    if (cfg.timing) {
      t.row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    finish(t.row);
    std::cerr << "[minfo] " << t.row.experiment << ' ' << t.row.method << " task " << i + 1 << '/'
              << tasks.size() << (t.failure.empty() ? " done" : " FAILED") << '\n';
  });
  RunReport report;
  for (auto& t : tasks) {
    report.rows.push_back(std::move(t.row));
    if (!t.failure.empty()) report.failures.push_back(std::move(t.failure));
  }
  return report;
}

EstimatorConfig estimator_for(const RunConfig& cfg, Objective objective, std::uint64_t seed) {
  EstimatorConfig e = cfg.estimator;
  e.objective = objective;
  e.seed = seed;
  return e;
}

Task mine_task(const RunConfig& cfg, const std::string& experiment, Objective objective,
               JointSampler sampler, std::uint64_t seed) {
  Task t;
  t.row.experiment = experiment;
  t.row.method = std::string(to_string(objective == Objective::DonskerVaradhan ? Method::MineDv
                                                                                : Method::MineF));
  t.row.seed = seed;
  const EstimatorConfig e = estimator_for(cfg, objective, seed);
  t.run = [e, sampler = std::move(sampler)] { return train_mine(e, sampler).nats; };
  return t;
}

Task ksg_task(const RunConfig& cfg, const std::string& experiment, GaussianSpec spec,
              std::uint64_t seed) {
  Task t;
  t.row.experiment = experiment;
  t.row.method = std::string(to_string(Method::Ksg));
  t.row.seed = seed;
  const std::size_t n = cfg.samples;
  const KsgConfig kc{cfg.ksg_k, seed};
  t.run = [spec, n, kc] {
    Rng rng(derive_seed(kc.seed, "ksg-data", 0));
    return ksg_estimate(gen_gaussian(spec, n, rng), kc).nats;
  };
  return t;
}

void tag_gaussian(ResultRow& row, const GaussianSpec& spec) {
  row.k = spec.k;
  row.rho = spec.rho;
  row.truth_nats = gaussian_mi_analytic(spec);
}

void tag_nonlinear(ResultRow& row, const NonlinearSpec& spec) {
  row.k = spec.dim;
  row.f = std::string(to_string(spec.f));
  row.sigma = spec.sigma;
}

}  // namespace

RunReport run_estimate(const RunConfig& cfg) {
  std::vector<Task> tasks;
  const auto objective = cfg.estimator.objective;
  const std::string tag(to_string(objective == Objective::DonskerVaradhan ? Method::MineDv : Method::MineF));
  const std::uint64_t seed = derive_seed(cfg.base_seed, tag, 0);
  if (cfg.data == DataKind::Gaussian) {
    tasks.push_back(mine_task(cfg, "estimate", objective, gaussian_sampler(cfg.gaussian), seed));
    tag_gaussian(tasks.back().row, cfg.gaussian);
  } else {
    tasks.push_back(mine_task(cfg, "estimate", objective, nonlinear_sampler(cfg.nonlinear), seed));
    tag_nonlinear(tasks.back().row, cfg.nonlinear);
  }
  return execute(tasks, cfg);
}

RunReport run_ksg(const RunConfig& cfg) {
  std::vector<Task> tasks;
  tasks.push_back(ksg_task(cfg, "ksg", cfg.gaussian, derive_seed(cfg.base_seed, "ksg", 0)));
  tag_gaussian(tasks.back().row, cfg.gaussian);
  return execute(tasks, cfg);
}

RunReport run_sweep(const RunConfig& cfg) {
  std::vector<Task> tasks;
  for (const Method method : {Method::MineDv, Method::MineF, Method::Ksg}) {
    const std::string tag(to_string(method));
    for (std::size_t i = 0; i < cfg.rho_grid.size(); ++i) {
      const GaussianSpec spec{cfg.gaussian.k, cfg.rho_grid[i]};
      const std::uint64_t seed = derive_seed(cfg.base_seed, tag, i);
      if (method == Method::Ksg) {
        tasks.push_back(ksg_task(cfg, "sweep", spec, seed));
      } else {
        const auto objective =
            method == Method::MineDv ? Objective::DonskerVaradhan : Objective::FDivergence;
        tasks.push_back(mine_task(cfg, "sweep", objective, gaussian_sampler(spec), seed));
      }
      tag_gaussian(tasks.back().row, spec);
    }
  }
  return execute(tasks, cfg);
}

RunReport run_equitability(const RunConfig& cfg) {
  const std::vector<Nonlinearity> fs{Nonlinearity::Identity, Nonlinearity::Cube, Nonlinearity::Sine};
  const std::size_t ns = cfg.sigma_grid.size();
  std::vector<Task> tasks;
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    for (std::size_t si = 0; si < ns; ++si) {
      const NonlinearSpec spec{fs[fi], cfg.sigma_grid[si], cfg.nonlinear.dim};
      const std::uint64_t seed = derive_seed(cfg.base_seed, "mine_dv", fi * ns + si);
      tasks.push_back(mine_task(cfg, "equitability", Objective::DonskerVaradhan,
                                nonlinear_sampler(spec), seed));
      tag_nonlinear(tasks.back().row, spec);
    }
  }
  RunReport report = execute(tasks, cfg);

  // Spread of the estimates across f at each noise level.
  for (std::size_t si = 0; si < ns; ++si) {
    ResultRow spread;
    spread.experiment = "equitability";
    spread.method = "spread";
    spread.k = cfg.nonlinear.dim;
    spread.sigma = cfg.sigma_grid[si];
    spread.seed = cfg.base_seed;
    double lo = 0.0;
    double hi = 0.0;
    bool complete = true;
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
      const auto& est = report.rows[fi * ns + si].estimate_nats;
      if (!est) {
        complete = false;
        break;
      }
      lo = fi == 0 ? *est : std::min(lo, *est);
      hi = fi == 0 ? *est : std::max(hi, *est);
    }
    if (complete) spread.estimate_nats = hi - lo;
    report.rows.push_back(std::move(spread));
  }
  return report;
}

RunReport run_experiment(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Estimate: return run_estimate(cfg);
    case Experiment::Sweep: return run_sweep(cfg);
    case Experiment::Equitability: return run_equitability(cfg);
    case Experiment::Ksg: return run_ksg(cfg);
    default: throw ConfigError("experiment", "not a row-producing experiment");
  }
}

std::vector<GradCheckTrial> run_gradcheck(const RunConfig& cfg) {
  std::vector<GradCheckTrial> trials(cfg.gradcheck_trials);
  parallel_for(trials.size(), cfg.jobs, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.base_seed, "gradcheck", t));
    GradCheckTrial& tr = trials[t];
    tr.trial = t;
    tr.input_dim = 1 + rng() % 6;
    const std::size_t depth = 1 + rng() % 2;
    for (std::size_t l = 0; l < depth; ++l) tr.hidden.push_back(2 + rng() % 15);
    tr.activation = t % 2 == 0 ? Activation::ReLU : Activation::ELU;
    tr.rows = 16;
    const MlpParams params = mlp_init(tr.input_dim, tr.hidden, tr.activation, rng());
    Matrix inputs(tr.rows, tr.input_dim);
    for (double& v : inputs.data()) v = rng.normal();
    const auto report = grad_check(params, inputs, cfg.gradcheck_tol);
    tr.max_rel_err = report.max_rel_err;
    tr.skipped = report.skipped;
    tr.pass = report.pass;
  });
  return trials;
}

std::string render_gradcheck(const std::vector<GradCheckTrial>& trials, OutputFormat format) {
  const auto hidden_str = [](const std::vector<std::size_t>& h) {
    std::string s;
    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "x" : "") + std::to_string(h[i]);
    return s;
  };
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    os << "trial,input_dim,hidden,activation,rows,max_rel_err,skipped,pass\n";
    for (const auto& t : trials) {
      char err[32];
      std::snprintf(err, sizeof err, "%.3e", t.max_rel_err);
      os << t.trial << ',' << t.input_dim << ',' << hidden_str(t.hidden) << ','
         << (t.activation == Activation::ReLU ? "relu" : "elu") << ',' << t.rows << ',' << err
         << ',' << t.skipped << ',' << (t.pass ? "true" : "false") << '\n';
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trials) {
      arr.push_back({{"trial", t.trial},
                     {"input_dim", t.input_dim},
                     {"hidden", t.hidden},
                     {"activation", t.activation == Activation::ReLU ? "relu" : "elu"},
                     {"rows", t.rows},
                     {"max_rel_err", t.max_rel_err},
                     {"skipped", t.skipped},
                     {"pass", t.pass}});
    }
    os << arr.dump(2) << '\n';
  }
  return os.str();
}

std::string render_complexity(const ComplexityInputs& in, std::uint64_t n, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,", in.d, in.M, in.L, in.K,
                  in.eps, in.delta);
    os << "d,M,L,K,eps,delta,n\n" << buf << n << '\n';
  } else {
    const nlohmann::json obj{{"d", in.d},   {"M", in.M},         {"L", in.L}, {"K", in.K},
                             {"eps", in.eps}, {"delta", in.delta}, {"n", n}};
    os << obj.dump(2) << '\n';
  }
  return os.str();
}

}  // namespace minfo::harness
