#include "minfo/adam.hpp"

#include <cmath>

#include "minfo/errors.hpp"

namespace minfo {

AdamState::AdamState(const ParamBlock& like, AdamHyper hyper)
    : hyper_(hyper), m_(like), v_(like) {
  if (!(hyper.lr > 0.0) || !(hyper.beta1 >= 0.0 && hyper.beta1 < 1.0) ||
      !(hyper.beta2 >= 0.0 && hyper.beta2 < 1.0) || !(hyper.eps > 0.0)) {
    throw ArgumentError("invalid Adam hyperparameters");
  }
}

void AdamState::update(ParamBlock& params, const GradBuffer& grads, bool ascent) {
  if (!params.congruent(grads) || !params.congruent(m_)) {
    throw ShapeError("Adam: parameters, gradients and moments are not shape-congruent");
  }
  const auto g = grads.values();
  if (!all_finite(g)) throw NumericError("Adam: non-finite gradient entry");

  ++step_;
  const double b1 = hyper_.beta1;
  const double b2 = hyper_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double dir = ascent ? 1.0 : -1.0;

  auto p = params.values();
  auto m = m_.values();
  auto v = v_.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    p[i] += dir * hyper_.lr * m_hat / (std::sqrt(v_hat) + hyper_.eps);
  }
}

}  // namespace minfo
