#include "minfo/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "minfo/bounds.hpp"
#include "minfo/errors.hpp"
#include "minfo/grad_utils.hpp"

namespace minfo {

std::string_view to_string(Objective objective) noexcept {
  return objective == Objective::DonskerVaradhan ? "dv" : "f";
}

Objective parse_objective(std::string_view name) {
  if (name == "dv") return Objective::DonskerVaradhan;
  if (name == "f") return Objective::FDivergence;
  throw ArgumentError("unknown objective '" + std::string(name) + "'");
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::MineDv: return "mine_dv";
    case Method::MineF: return "mine_f";
    case Method::Ksg: return "ksg";
    case Method::Analytic: return "analytic";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "mine_dv") return Method::MineDv;
  if (name == "mine_f") return Method::MineF;
  if (name == "ksg") return Method::Ksg;
  if (name == "analytic") return Method::Analytic;
  throw ArgumentError("unknown method '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (hidden.empty()) throw ConfigError("hidden", "at least one hidden layer is required");
  if (std::ranges::find(hidden, std::size_t{0}) != hidden.end()) {
    throw ConfigError("hidden", "zero-width layer");
  }
  if (batch_size < 2) throw ConfigError("batch_size", "must be at least 2");
  if (steps < 1) throw ConfigError("steps", "must be at least 1");
  if (!(ema_rate > 0.0 && ema_rate <= 1.0)) throw ConfigError("ema_rate", "must lie in (0, 1]");
  if (eval_points() < batch_size) throw ConfigError("eval_size", "must be >= batch_size");
  if (eval_every < 1) throw ConfigError("eval_every", "must be at least 1");
  if (smoothing_window < 1) throw ConfigError("smoothing_window", "must be at least 1");
  if (!(optimizer.lr > 0.0) || !std::isfinite(optimizer.lr)) throw ConfigError("lr", "must be > 0");
  if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0)) throw ConfigError("beta1", "must lie in [0, 1)");
  if (!(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) throw ConfigError("beta2", "must lie in [0, 1)");
  if (!(optimizer.eps > 0.0)) throw ConfigError("adam_eps", "must be > 0");
  if (clip_cap && !(*clip_cap >= 0.0)) throw ConfigError("clip_cap", "must be >= 0");
}

EmaState ema_update(EmaState state, double batch_mean_exp, double alpha) {
  if (!(batch_mean_exp > 0.0) || !std::isfinite(batch_mean_exp)) {
    throw NumericError("ema_update: batch mean of exp(T) must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("ema_update: rate must lie in (0, 1]");
  if (!state.initialized) return {batch_mean_exp, true};
  return {(1.0 - alpha) * state.value + alpha * batch_mean_exp, true};
}

namespace {

// Joint rows followed by marginal rows, pushed through the network once.
struct StackedPass {
  Matrix inputs;
  ForwardPass pass;
  std::size_t b = 0;
  std::size_t m = 0;

  std::span<const double> t_joint() const { return {pass.outputs.data(), b}; }
  std::span<const double> t_marg() const { return {pass.outputs.data() + b, m}; }
};

StackedPass stacked_forward(const MlpParams& params, const SampleBatch& joint,
                            const MarginalBatch& marg) {
  if (joint.size() == 0 || marg.size() == 0) throw ArgumentError("empty joint or marginal batch");
  StackedPass s;
  s.b = joint.size();
  s.m = marg.size();
  s.inputs = vstack(joint.inputs(), marg.inputs());
  s.pass = mlp_forward_cached(params, s.inputs);
  return s;
}

// Joint cotangent 1/b followed by the caller's marginal weights (negated).
GradBuffer backward_with(const MlpParams& params, const StackedPass& s,
                         std::span<const double> marginal_weights) {
  std::vector<double> cot(s.b + s.m);
  std::fill_n(cot.begin(), s.b, 1.0 / static_cast<double>(s.b));
  for (std::size_t i = 0; i < s.m; ++i) cot[s.b + i] = -marginal_weights[i];
  return mlp_backward(params, s.inputs, s.pass, cot);
}

// exp(t_i - max) / sum_j exp(t_j - max)
std::vector<double> softmax(std::span<const double> t) {
  const double hi = *std::ranges::max_element(t);
  std::vector<double> w(t.size());
  double total = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    w[i] = std::exp(t[i] - hi);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

// exp(t_i) / (m * C), evaluated as exp(t_i - log(m) - log(C)).
std::vector<double> ema_weights(std::span<const double> t, double denominator) {
  const double shift = std::log(static_cast<double>(t.size())) + std::log(denominator);
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) w[i] = std::exp(t[i] - shift);
  return w;
}

GradientResult naive_from(const MlpParams& params, const StackedPass& s) {
  const double value = dv_value(s.t_joint(), s.t_marg());
  return {backward_with(params, s, softmax(s.t_marg())), value};
}

GradientResult corrected_from(const MlpParams& params, const StackedPass& s, const EmaState& ema) {
  if (!ema.initialized || !(ema.value > 0.0) || !std::isfinite(ema.value)) {
    throw NumericError("corrected_gradient: EMA denominator not initialized or not positive");
  }
  const double value = dv_value(s.t_joint(), s.t_marg());
  return {backward_with(params, s, ema_weights(s.t_marg(), ema.value)), value};
}

GradientResult f_from(const MlpParams& params, const StackedPass& s) {
  const double value = f_value(s.t_joint(), s.t_marg());
  const auto t = s.t_marg();
  std::vector<double> w(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) w[i] = std::exp(t[i] - 1.0) / static_cast<double>(s.m);
  return {backward_with(params, s, w), value};
}

}  // namespace

GradientResult naive_gradient(const MlpParams& params, const SampleBatch& joint,
                              const MarginalBatch& marg) {
  return naive_from(params, stacked_forward(params, joint, marg));
}

GradientResult corrected_gradient(const MlpParams& params, const SampleBatch& joint,
                                  const MarginalBatch& marg, const EmaState& ema) {
  return corrected_from(params, stacked_forward(params, joint, marg), ema);
}

GradientResult f_gradient(const MlpParams& params, const SampleBatch& joint,
                          const MarginalBatch& marg) {
  return f_from(params, stacked_forward(params, joint, marg));
}

double evaluate_bound(const MlpParams& params, const SampleBatch& eval_batch,
                      Objective objective, MarginalMode mode, Rng& rng) {
  const std::size_t n = eval_batch.size();
  if (n < 2) throw ArgumentError("evaluate_bound: evaluation batch needs at least 2 rows");

  std::vector<double> t_joint;
  std::vector<double> t_marg;
  if (mode == MarginalMode::Shuffle) {
    const MarginalBatch marg = marginal_shuffle(eval_batch, rng);
    t_joint = mlp_forward(params, eval_batch.inputs());
    t_marg = mlp_forward(params, marg.inputs());
  } else {
    const std::size_t half = n / 2;
    std::vector<std::size_t> first(half);
    std::vector<std::size_t> second(half);
    for (std::size_t i = 0; i < half; ++i) {
      first[i] = i;
      second[i] = half + i;
    }
    t_joint = mlp_forward(params, eval_batch.inputs());
    const Matrix x = gather_rows(eval_batch.x, first);
    const Matrix z_bar = gather_rows(eval_batch.z, second);
    t_marg = mlp_forward(params, hstack(x, z_bar));
  }
  return objective == Objective::DonskerVaradhan ? dv_value(t_joint, t_marg)
                                                 : f_value(t_joint, t_marg);
}

TrainResult train_mine_full(const EstimatorConfig& config, const JointSampler& sampler) {
  config.validate();
  Rng train_rng(derive_seed(config.seed, "train", 0));
  Rng eval_rng(derive_seed(config.seed, "eval", 0));

  const std::size_t b = config.batch_size;
  SampleBatch joint = sampler(b, train_rng);
  if (joint.size() != b || joint.z.rows() != b) {
    throw ShapeError("sampler returned " + std::to_string(joint.size()) + " rows, expected " +
                     std::to_string(b));
  }
  MlpParams params = mlp_init(joint.x.cols() + joint.z.cols(), config.hidden, config.activation,
                              derive_seed(config.seed, "init", 0));
  AdamState adam(params, config.optimizer);
  EmaState ema;

  const bool dv = config.objective == Objective::DonskerVaradhan;
  TrainingTrace trace;
  trace.records.reserve(config.steps);
  std::vector<double> evals;

  for (std::size_t step = 1; step <= config.steps; ++step) {
    if (step > 1) joint = sampler(b, train_rng);
    const MarginalBatch marg = config.marginal_mode == MarginalMode::Shuffle
                                   ? marginal_shuffle(joint, train_rng)
                                   : marginal_resample(sampler, b, train_rng);

    GradientResult g;
    try {
      const StackedPass s = stacked_forward(params, joint, marg);
      if (!dv) {
        g = f_from(params, s);
      } else if (config.use_ema_correction) {
        ema = ema_update(ema, std::exp(log_mean_exp(s.t_marg())), config.ema_rate);
        g = corrected_from(params, s, ema);
      } else {
        g = naive_from(params, s);
      }
      if (config.clip_cap) g.grad = adaptive_clip(g.grad, *config.clip_cap);
      if (!std::isfinite(g.value) || !all_finite(g.grad.values())) {
        throw NumericError("non-finite objective or gradient");
      }
      adam_step(adam, params, g.grad, /*ascent=*/true);
    } catch (const NumericError& e) {
      throw NumericError(std::string("training diverged: ") + e.what(), step);
    }

    TraceRecord rec{step, g.value, ema.initialized ? ema.value : 0.0, g.grad.norm(), std::nullopt};
    if (step % config.eval_every == 0 || step == config.steps) {
      try {
        const SampleBatch eval_batch = sampler(config.eval_points(), eval_rng);
        rec.eval = evaluate_bound(params, eval_batch, config.objective, MarginalMode::Shuffle,
                                  eval_rng);
      } catch (const NumericError& e) {
        throw NumericError(std::string("evaluation failed: ") + e.what(), step);
      }
      evals.push_back(*rec.eval);
    }
    trace.records.push_back(rec);
  }

  const std::size_t window = std::min(config.smoothing_window, evals.size());
  double sum = 0.0;
  for (std::size_t i = evals.size() - window; i < evals.size(); ++i) sum += evals[i];

  MiEstimate est;
  est.nats = sum / static_cast<double>(window);
  est.method = dv ? Method::MineDv : Method::MineF;
  est.eval_points = config.eval_points();
  est.trace = std::move(trace);
  return {std::move(est), std::move(params)};
}

}  // namespace minfo
