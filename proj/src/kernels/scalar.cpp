#include <cmath>

#include "kernels_internal.hpp"

namespace minfo::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

void affine_forward(const double* in, std::size_t rows, std::size_t in_dim, const double* weight,
                    const double* bias, std::size_t out_dim, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in + r * in_dim;
    double* y = out + r * out_dim;
    for (std::size_t j = 0; j < out_dim; ++j) y[j] = bias[j] + dot(x, weight + j * in_dim, in_dim);
  }
}

void affine_weight_grad(const double* delta, const double* in, std::size_t rows,
                        std::size_t in_dim, std::size_t out_dim, double* gw, double* gb) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in + r * in_dim;
    const double* d = delta + r * out_dim;
    for (std::size_t j = 0; j < out_dim; ++j) {
      if (d[j] == 0.0) continue;
      gb[j] += d[j];
      double* g = gw + j * in_dim;
      for (std::size_t k = 0; k < in_dim; ++k) g[k] += d[j] * x[k];
    }
  }
}

void affine_input_grad(const double* delta, const double* weight, std::size_t rows,
                       std::size_t in_dim, std::size_t out_dim, double* gin) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* d = delta + r * out_dim;
    double* g = gin + r * in_dim;
    for (std::size_t k = 0; k < in_dim; ++k) g[k] = 0.0;
    for (std::size_t j = 0; j < out_dim; ++j) {
      if (d[j] == 0.0) continue;
      const double* w = weight + j * in_dim;
      for (std::size_t k = 0; k < in_dim; ++k) g[k] += d[j] * w[k];
    }
  }
}

void chebyshev_accumulate(const double* column, double center, double* dist, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double d = std::fabs(column[j] - center);
    if (d > dist[j]) dist[j] = d;
  }
}

std::size_t count_below(const double* values, double threshold, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j) c += values[j] < threshold ? 1 : 0;
  return c;
}

}  // namespace

const KernelTable kScalarTable{
    Backend::Scalar,    "scalar",           dot,
    sum_squares,        affine_forward,     affine_weight_grad,
    affine_input_grad,  chebyshev_accumulate, count_below,
};

}  // namespace minfo::kernels::detail
