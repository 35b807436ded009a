#pragma once

#include <cstdint>
#include <span>

namespace minfo {

// Assumptions of the sample-complexity bound: |T| <= M, T is L-Lipschitz in
// its d parameters, ||theta|| <= K.
struct ComplexityInputs {
  double d = 1.0;
  double M = 1.0;
  double L = 1.0;
  double K = 1.0;
  double eps = 0.1;
  double delta = 0.05;
};

// Smallest integer n with
//   n >= 2 M^2 (d log(16 K L sqrt(d) / eps) + 2 d M + log(2 / delta)) / eps^2.
std::uint64_t sample_complexity(const ComplexityInputs& in);

struct DominanceReport {
  double dv = 0.0;
  double f = 0.0;
  bool holds = true;
};

// Evaluates both bounds on the same statistics and checks dv >= f - 1e-12.
DominanceReport dv_dominates_f_check(std::span<const double> t_joint,
                                     std::span<const double> t_marg);

}  // namespace minfo
