#pragma once

// Neural mutual-information estimation: gradients of the Donsker-Varadhan and
// f-divergence bounds, the EMA bias correction, and the training loop.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "minfo/adam.hpp"
#include "minfo/mlp.hpp"
#include "minfo/sampling.hpp"

namespace minfo {

enum class Objective { DonskerVaradhan, FDivergence };

std::string_view to_string(Objective objective) noexcept;
Objective parse_objective(std::string_view name);

enum class Method { MineDv, MineF, Ksg, Analytic };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct EstimatorConfig {
  Objective objective = Objective::DonskerVaradhan;
  std::vector<std::size_t> hidden{100, 100};
  Activation activation = Activation::ReLU;
  std::size_t batch_size = 256;
  std::size_t steps = 4000;
  MarginalMode marginal_mode = MarginalMode::Shuffle;
  double ema_rate = 0.01;
  bool use_ema_correction = true;
  AdamHyper optimizer{};
  // Unset means 10 * batch_size.
  std::optional<std::size_t> eval_size;
  std::size_t eval_every = 100;
  std::size_t smoothing_window = 10;
  std::optional<double> clip_cap;
  std::uint64_t seed = 0;

  std::size_t eval_points() const noexcept { return eval_size.value_or(10 * batch_size); }

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Running estimate of E_Q[exp(T)] used as the DV gradient denominator.
struct EmaState {
  double value = 0.0;
  bool initialized = false;
};

// First call adopts batch_mean_exp; later calls blend with weight alpha.
EmaState ema_update(EmaState state, double batch_mean_exp, double alpha);

struct TraceRecord {
  std::size_t step = 0;
  double objective = 0.0;  // minibatch bound, nats
  double ema = 0.0;        // 0 when no EMA is kept
  double grad_norm = 0.0;  // after clipping
  std::optional<double> eval;
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
};

struct MiEstimate {
  double nats = 0.0;
  Method method = Method::MineDv;
  std::size_t eval_points = 1;
  std::optional<TrainingTrace> trace;
};

struct GradientResult {
  GradBuffer grad;  // ascent direction of the bound
  double value = 0.0;
};

// Minibatch DV gradient with the within-batch denominator (biased).
GradientResult naive_gradient(const MlpParams& params, const SampleBatch& joint,
                              const MarginalBatch& marg);

// DV gradient with the denominator replaced by ema.value, held constant.
GradientResult corrected_gradient(const MlpParams& params, const SampleBatch& joint,
                                  const MarginalBatch& marg, const EmaState& ema);

// Exact gradient of f_value (unbiased in the minibatch).
GradientResult f_gradient(const MlpParams& params, const SampleBatch& joint,
                          const MarginalBatch& marg);

// Bound of the network on an evaluation batch. Shuffle pairs x with permuted z;
// resample pairs the first half's x with the second half's z.
double evaluate_bound(const MlpParams& params, const SampleBatch& eval_batch,
                      Objective objective, MarginalMode mode, Rng& rng);

struct TrainResult {
  MiEstimate estimate;
  MlpParams params;
};

// Fixed-budget training loop; throws NumericError carrying the failing step.
TrainResult train_mine_full(const EstimatorConfig& config, const JointSampler& sampler);

inline MiEstimate train_mine(const EstimatorConfig& config, const JointSampler& sampler) {
  return train_mine_full(config, sampler).estimate;
}

}  // namespace minfo
