#pragma once

#include <cstddef>

#include "minfo/matrix.hpp"
#include "minfo/mlp.hpp"

namespace minfo {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;  // flat parameter index of max_rel_err
  std::size_t skipped = 0;      // probes that crossed a ReLU kink
  bool pass = true;
};

// Relative error |a - b| / max(|a|, |b|, floor). The floor keeps exact zeros
// (dead units, zero inputs) from dividing by zero.
double relative_error(double a, double b, double floor = 1e-7) noexcept;

// Compares `analytic` (a gradient of mean_i T(inputs[i])) against central
// differences on every parameter. A parameter whose +-step probes switch any
// ReLU unit on or off sits on a kink and is counted in `skipped` instead.
GradCheckReport grad_check(const MlpParams& params, const Matrix& inputs,
                           const GradBuffer& analytic, double tol, double step = 1e-5);

// Same, with the analytic gradient taken from mlp_backward.
GradCheckReport grad_check(const MlpParams& params, const Matrix& inputs, double tol,
                           double step = 1e-5);

// Rescales g_m to Frobenius norm min(||g_m||, cap). A zero gradient is returned
// unchanged.
GradBuffer adaptive_clip(const GradBuffer& g_m, double cap);

}  // namespace minfo
