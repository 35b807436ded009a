#include "minfo/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "minfo/errors.hpp"
#include "minfo/matrix.hpp"

namespace minfo {
namespace {

void require_finite_nonempty(std::span<const double> t, const char* what) {
  if (t.empty()) throw ArgumentError(std::string(what) + ": empty input");
  if (!all_finite(t)) throw NumericError(std::string(what) + ": non-finite input");
}

double mean(std::span<const double> t) {
  double s = 0.0;
  for (const double v : t) s += v;
  return s / static_cast<double>(t.size());
}

}  // namespace

double log_mean_exp(std::span<const double> t) {
  require_finite_nonempty(t, "log_mean_exp");
  const double hi = *std::ranges::max_element(t);
  double s = 0.0;
  for (const double v : t) s += std::exp(v - hi);
  return hi + std::log(s / static_cast<double>(t.size()));
}

double dv_value(std::span<const double> t_joint, std::span<const double> t_marg) {
  require_finite_nonempty(t_joint, "dv_value");
  require_finite_nonempty(t_marg, "dv_value");
  return mean(t_joint) - log_mean_exp(t_marg);
}

double f_value(std::span<const double> t_joint, std::span<const double> t_marg) {
  require_finite_nonempty(t_joint, "f_value");
  require_finite_nonempty(t_marg, "f_value");
  double s = 0.0;
  for (const double v : t_marg) s += std::exp(v - 1.0);
  const double result = mean(t_joint) - s / static_cast<double>(t_marg.size());
  if (!std::isfinite(result)) throw NumericError("f_value: overflow in exp(t - 1)");
  return result;
}

}  // namespace minfo
