#pragma once

#include <cstddef>
#include <vector>

#include "minfo/mlp.hpp"

namespace minfo {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment estimates, shape-congruent with the parameters they track.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const ParamBlock& like, AdamHyper hyper);

  const AdamHyper& hyper() const noexcept { return hyper_; }
  std::size_t step() const noexcept { return step_; }
  const GradBuffer& first_moment() const noexcept { return m_; }
  const GradBuffer& second_moment() const noexcept { return v_; }

  // One bias-corrected Adam update of params in place. ascent=true climbs the
  // objective whose gradient is grads.
  void update(ParamBlock& params, const GradBuffer& grads, bool ascent);

 private:
  AdamHyper hyper_;
  std::size_t step_ = 0;
  GradBuffer m_;
  GradBuffer v_;
};

inline void adam_step(AdamState& state, ParamBlock& params, const GradBuffer& grads, bool ascent) {
  state.update(params, grads, ascent);
}

}  // namespace minfo
