#pragma once

// Ground truth and the k-nearest-neighbor comparison estimator.

#include <cstddef>
#include <cstdint>

#include "minfo/estimator.hpp"
#include "minfo/sampling.hpp"

namespace minfo {

// -(k/2) log(1 - rho^2) nats.
double gaussian_mi_analytic(const GaussianSpec& spec);

// psi(x) for x > 0; absolute error below 1e-10.
double digamma(double x);

struct KsgConfig {
  std::size_t k = 3;          // neighbor count
  std::uint64_t seed = 0;     // tie-breaking jitter stream
};

// Kraskov-Stoegbauer-Grassberger estimator, first variant, max-norm in every
// space. Exact O(n^2) neighbor search. The raw (possibly negative) value is
// returned.
MiEstimate ksg_estimate(const SampleBatch& batch, const KsgConfig& cfg);

}  // namespace minfo
