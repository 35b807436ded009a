#include "minfo/grad_utils.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "minfo/errors.hpp"

namespace minfo {

double relative_error(double a, double b, double floor) noexcept {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

namespace {

struct Probe {
  double mean = 0.0;
  std::vector<bool> active;  // ReLU units with positive output, row by row
};

Probe probe_at(const MlpParams& params, const Matrix& inputs) {
  const auto pass = mlp_forward_cached(params, inputs);
  Probe p;
  for (const double v : pass.outputs) p.mean += v;
  p.mean /= static_cast<double>(pass.outputs.size());
  if (params.activation() == Activation::ReLU) {
    for (const auto& h : pass.hidden) {
      for (const double v : h.data()) p.active.push_back(v > 0.0);
    }
  }
  return p;
}

}  // namespace

GradCheckReport grad_check(const MlpParams& params, const Matrix& inputs,
                           const GradBuffer& analytic, double tol, double step) {
  if (inputs.rows() == 0) throw ArgumentError("grad_check needs a non-empty batch");
  if (!analytic.congruent(params)) throw ShapeError("grad_check: gradient shape mismatch");

  GradCheckReport report;
  MlpParams probe = params;
  auto theta = probe.values();
  const auto g = analytic.values();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + step;
    const auto up = probe_at(probe, inputs);
    theta[i] = saved - step;
    const auto down = probe_at(probe, inputs);
    theta[i] = saved;
    if (up.active != down.active) {
      ++report.skipped;
      continue;
    }
    const double numeric = (up.mean - down.mean) / (2.0 * step);
    const double err = relative_error(g[i], numeric);
    if (err > report.max_rel_err) {
      report.max_rel_err = err;
      report.worst_index = i;
    }
  }
  report.pass = report.max_rel_err <= tol;
  return report;
}

GradCheckReport grad_check(const MlpParams& params, const Matrix& inputs, double tol,
                           double step) {
  if (inputs.rows() == 0) throw ArgumentError("grad_check needs a non-empty batch");
  const std::vector<double> cot(inputs.rows(), 1.0 / static_cast<double>(inputs.rows()));
  return grad_check(params, inputs, mlp_backward(params, inputs, cot), tol, step);
}

GradBuffer adaptive_clip(const GradBuffer& g_m, double cap) {
  if (!(cap >= 0.0)) throw ArgumentError("adaptive_clip: norm cap must be non-negative");
  const double norm = g_m.norm();
  GradBuffer out = g_m;
  if (norm == 0.0 || norm <= cap) return out;
  out.scale(cap / norm);
  return out;
}

}  // namespace minfo
