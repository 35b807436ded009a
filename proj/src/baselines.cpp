#include "minfo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "minfo/errors.hpp"
#include "minfo/kernels.hpp"
#include "minfo/rng.hpp"

namespace minfo {

double gaussian_mi_analytic(const GaussianSpec& spec) {
  spec.validate();
  return -0.5 * static_cast<double>(spec.k) * std::log1p(-spec.rho * spec.rho);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ArgumentError("digamma: argument must be > 0");
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic series in 1/x^2 (Bernoulli numbers); truncation < 1e-12 for x >= 6.
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 -
           r * (1.0 / 120 -
                r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return result + std::log(x) - 0.5 / x - series;
}

namespace {

bool has_duplicate_rows(const Matrix& m) {
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto less = [&](std::size_t a, std::size_t b) {
    return std::ranges::lexicographical_compare(m.row(a), m.row(b));
  };
  std::ranges::sort(order, less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (std::ranges::equal(m.row(order[i - 1]), m.row(order[i]))) return true;
  }
  return false;
}

std::vector<std::vector<double>> columns(const Matrix& m) {
  std::vector<std::vector<double>> cols;
  cols.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.column(c));
  return cols;
}

}  // namespace

MiEstimate ksg_estimate(const SampleBatch& batch, const KsgConfig& cfg) {
  const std::size_t n = batch.size();
  if (cfg.k < 1) throw ArgumentError("ksg: k must be at least 1");
  if (n <= cfg.k) {
    throw ArgumentError("ksg: need more than k=" + std::to_string(cfg.k) + " points, got " +
                        std::to_string(n));
  }
  if (batch.z.rows() != n) throw ShapeError("ksg: x and z row counts differ");

  Matrix x = batch.x;
  Matrix z = batch.z;
  // KSG is undefined under ties; break them with tiny deterministic jitter.
  if (has_duplicate_rows(x) || has_duplicate_rows(z)) {
    Rng rng(derive_seed(cfg.seed, "ksg-jitter", 0));
    for (double& v : x.data()) v += 1e-10 * rng.uniform(-1.0, 1.0);
    for (double& v : z.data()) v += 1e-10 * rng.uniform(-1.0, 1.0);
  }

  const auto xcols = columns(x);
  const auto zcols = columns(z);
  const auto& kern = kernels::active();

  std::vector<double> dx(n);
  std::vector<double> dz(n);
  std::vector<double> joint(n);
  double digamma_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::ranges::fill(dx, 0.0);
    std::ranges::fill(dz, 0.0);
    for (std::size_t c = 0; c < xcols.size(); ++c) {
      kern.chebyshev_accumulate(xcols[c].data(), xcols[c][i], dx.data(), n);
    }
    for (std::size_t c = 0; c < zcols.size(); ++c) {
      kern.chebyshev_accumulate(zcols[c].data(), zcols[c][i], dz.data(), n);
    }
    for (std::size_t j = 0; j < n; ++j) joint[j] = std::max(dx[j], dz[j]);
    joint[i] = std::numeric_limits<double>::infinity();

    auto kth = joint.begin() + static_cast<std::ptrdiff_t>(cfg.k - 1);
    std::nth_element(joint.begin(), kth, joint.end());
    const double eps = *kth;

    // Strict counts; the point itself (distance 0) is excluded.
    const std::size_t self = eps > 0.0 ? 1 : 0;
    const std::size_t nx = kern.count_below(dx.data(), eps, n) - self;
    const std::size_t nz = kern.count_below(dz.data(), eps, n) - self;
    digamma_sum += digamma(static_cast<double>(nx) + 1.0) + digamma(static_cast<double>(nz) + 1.0);
  }

  MiEstimate est;
  est.nats = digamma(static_cast<double>(cfg.k)) + digamma(static_cast<double>(n)) -
             digamma_sum / static_cast<double>(n);
  est.method = Method::Ksg;
  est.eval_points = n;
  return est;
}

}  // namespace minfo
