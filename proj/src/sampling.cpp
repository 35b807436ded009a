#include "minfo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "minfo/errors.hpp"

namespace minfo {

void GaussianSpec::validate() const {
  if (k == 0) throw ArgumentError("gaussian: component count k must be at least 1");
  if (!(std::fabs(rho) < 1.0)) throw ArgumentError("gaussian: |rho| must be < 1");
}

void NonlinearSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("nonlinear: sigma must be >= 0");
  if (dim == 0) throw ArgumentError("nonlinear: dim must be at least 1");
}

std::string_view to_string(Nonlinearity f) noexcept {
  switch (f) {
    case Nonlinearity::Identity: return "x";
    case Nonlinearity::Cube: return "x3";
    case Nonlinearity::Sine: return "sin";
  }
  return "?";
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  if (name == "x" || name == "identity") return Nonlinearity::Identity;
  if (name == "x3" || name == "cube") return Nonlinearity::Cube;
  if (name == "sin" || name == "sine") return Nonlinearity::Sine;
  throw ArgumentError("unknown nonlinearity '" + std::string(name) + "'");
}

std::string_view to_string(MarginalMode mode) noexcept {
  return mode == MarginalMode::Shuffle ? "shuffle" : "resample";
}

MarginalMode parse_marginal_mode(std::string_view name) {
  if (name == "shuffle") return MarginalMode::Shuffle;
  if (name == "resample") return MarginalMode::Resample;
  throw ArgumentError("unknown marginal mode '" + std::string(name) + "'");
}

SampleBatch gen_gaussian(const GaussianSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n == 0) throw ArgumentError("gen_gaussian: n must be at least 1");
  const double tail = std::sqrt(1.0 - spec.rho * spec.rho);
  SampleBatch b{Matrix(n, spec.k), Matrix(n, spec.k)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < spec.k; ++i) {
      const double u = rng.normal();
      const double v = rng.normal();
      b.x(r, i) = u;
      b.z(r, i) = spec.rho * u + tail * v;
    }
  }
  return b;
}

SampleBatch gen_nonlinear(const NonlinearSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n == 0) throw ArgumentError("gen_nonlinear: n must be at least 1");
  SampleBatch b{Matrix(n, spec.dim), Matrix(n, spec.dim)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < spec.dim; ++i) {
      const double x = rng.uniform(-1.0, 1.0);
      double fx = x;
      if (spec.f == Nonlinearity::Cube) fx = x * x * x;
      if (spec.f == Nonlinearity::Sine) fx = std::sin(x);
      b.x(r, i) = x;
      b.z(r, i) = spec.sigma == 0.0 ? fx : fx + spec.sigma * rng.normal();
    }
  }
  return b;
}

JointSampler gaussian_sampler(GaussianSpec spec) {
  spec.validate();
  return [spec](std::size_t n, Rng& rng) { return gen_gaussian(spec, n, rng); };
}

JointSampler nonlinear_sampler(NonlinearSpec spec) {
  spec.validate();
  return [spec](std::size_t n, Rng& rng) { return gen_nonlinear(spec, n, rng); };
}

MarginalBatch marginal_shuffle(const SampleBatch& batch, Rng& rng) {
  if (batch.size() == 0) throw ArgumentError("marginal_shuffle: empty batch");
  std::vector<std::size_t> perm(batch.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return {batch.x, gather_rows(batch.z, perm)};
}

MarginalBatch marginal_resample(const JointSampler& sampler, std::size_t b, Rng& rng) {
  if (b == 0) throw ArgumentError("marginal_resample: b must be at least 1");
  SampleBatch first = sampler(b, rng);
  SampleBatch second = sampler(b, rng);
  return {std::move(first.x), std::move(second.z)};
}

}  // namespace minfo
