#pragma once

// Experiment drivers behind the minfo command. Every task derives its seed from
// (base_seed, method tag, grid index) alone, so the output does not depend on
// --jobs or on completion order.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "minfo/harness/config.hpp"
#include "minfo/harness/results.hpp"
#include "minfo/mlp.hpp"

namespace minfo::harness {

struct RunReport {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;  // one message per failed task

  bool failed() const noexcept { return !failures.empty(); }
};

// Calls task(i) for i in [0, n) on up to `jobs` threads (0: hardware threads).
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

RunReport run_estimate(const RunConfig& cfg);
RunReport run_sweep(const RunConfig& cfg);
RunReport run_equitability(const RunConfig& cfg);
RunReport run_ksg(const RunConfig& cfg);

// Dispatch for the row-producing experiments.
RunReport run_experiment(const RunConfig& cfg);

struct GradCheckTrial {
  std::size_t trial = 0;
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  Activation activation = Activation::ReLU;
  std::size_t rows = 0;
  double max_rel_err = 0.0;
  std::size_t skipped = 0;
  bool pass = false;
};

// Random network/batch configurations, each checked against central differences.
std::vector<GradCheckTrial> run_gradcheck(const RunConfig& cfg);
std::string render_gradcheck(const std::vector<GradCheckTrial>& trials, OutputFormat format);

std::string render_complexity(const ComplexityInputs& in, std::uint64_t n, OutputFormat format);

}  // namespace minfo::harness
