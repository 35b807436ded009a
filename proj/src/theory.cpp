#include "minfo/theory.hpp"

#include <cmath>

#include "minfo/bounds.hpp"
#include "minfo/errors.hpp"

namespace minfo {

std::uint64_t sample_complexity(const ComplexityInputs& in) {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(in.d) || !positive(in.M) || !positive(in.L) || !positive(in.K) ||
      !positive(in.eps) || !positive(in.delta)) {
    throw ArgumentError("sample_complexity: all inputs must be positive and finite");
  }
  if (!(in.delta < 1.0)) throw ArgumentError("sample_complexity: delta must be < 1");
  const double cover = 16.0 * in.K * in.L * std::sqrt(in.d) / in.eps;
  if (!(cover > 1.0)) {
    throw ArgumentError("sample_complexity: 16 K L sqrt(d) / eps must exceed 1");
  }
  const double rhs = 2.0 * in.M * in.M *
                     (in.d * std::log(cover) + 2.0 * in.d * in.M + std::log(2.0 / in.delta)) /
                     (in.eps * in.eps);
  if (!std::isfinite(rhs) || rhs >= 0x1.0p63) {
    throw ArgumentError("sample_complexity: bound exceeds the representable range");
  }
  return static_cast<std::uint64_t>(std::ceil(rhs));
}

DominanceReport dv_dominates_f_check(std::span<const double> t_joint,
                                     std::span<const double> t_marg) {
  DominanceReport r;
  r.dv = dv_value(t_joint, t_marg);
  r.f = f_value(t_joint, t_marg);
  r.holds = r.dv >= r.f - 1e-12;
  return r;
}

}  // namespace minfo
