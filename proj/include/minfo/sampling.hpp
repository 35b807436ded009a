#pragma once

// Synthetic data with known dependence structure, and the two ways of turning a
// joint sample into a sample from the product of marginals.

#include <cstddef>
#include <functional>
#include <string_view>

#include "minfo/matrix.hpp"
#include "minfo/rng.hpp"

namespace minfo {

// k independent component pairs (x^i, z^i), each standard bivariate normal with
// correlation rho.
struct GaussianSpec {
  std::size_t k = 1;
  double rho = 0.0;

  void validate() const;
};

enum class Nonlinearity { Identity, Cube, Sine };

std::string_view to_string(Nonlinearity f) noexcept;
Nonlinearity parse_nonlinearity(std::string_view name);

// x ~ U(-1, 1)^dim, z = f(x) + sigma * eps, eps ~ N(0, I).
struct NonlinearSpec {
  Nonlinearity f = Nonlinearity::Identity;
  double sigma = 0.1;
  std::size_t dim = 2;

  void validate() const;
};

// Paired rows drawn from the joint distribution.
struct SampleBatch {
  Matrix x;
  Matrix z;

  std::size_t size() const noexcept { return x.rows(); }
  // Network input rows [x | z].
  Matrix inputs() const { return hstack(x, z); }
};

// Same shape as a SampleBatch, with z_bar decoupled from x.
struct MarginalBatch {
  Matrix x;
  Matrix z_bar;

  std::size_t size() const noexcept { return x.rows(); }
  Matrix inputs() const { return hstack(x, z_bar); }
};

enum class MarginalMode { Shuffle, Resample };

std::string_view to_string(MarginalMode mode) noexcept;
MarginalMode parse_marginal_mode(std::string_view name);

using JointSampler = std::function<SampleBatch(std::size_t n, Rng& rng)>;

SampleBatch gen_gaussian(const GaussianSpec& spec, std::size_t n, Rng& rng);
SampleBatch gen_nonlinear(const NonlinearSpec& spec, std::size_t n, Rng& rng);

JointSampler gaussian_sampler(GaussianSpec spec);
JointSampler nonlinear_sampler(NonlinearSpec spec);

// Pairs x with a uniformly random permutation of the batch's z rows.
MarginalBatch marginal_shuffle(const SampleBatch& batch, Rng& rng);

// x from one fresh joint draw, z_bar from a second, independent draw.
MarginalBatch marginal_resample(const JointSampler& sampler, std::size_t b, Rng& rng);

}  // namespace minfo
