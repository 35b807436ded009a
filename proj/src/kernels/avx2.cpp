// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPU feature check.

#include <immintrin.h>

#include <bit>
#include <cmath>

#include "kernels_internal.hpp"

namespace minfo::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Lane i of the result is the horizontal sum of a_i.
inline __m256d hsum4(__m256d a0, __m256d a1, __m256d a2, __m256d a3) {
  const __m256d t0 = _mm256_hadd_pd(a0, a1);
  const __m256d t1 = _mm256_hadd_pd(a2, a3);
  const __m256d lo = _mm256_permute2f128_pd(t0, t1, 0x20);
  const __m256d hi = _mm256_permute2f128_pd(t0, t1, 0x31);
  return _mm256_add_pd(lo, hi);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLanes), _mm256_loadu_pd(b + i + kLanes), acc1);
  }
  for (; i + kLanes <= n; i += kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

void affine_forward(const double* in, std::size_t rows, std::size_t in_dim, const double* weight,
                    const double* bias, std::size_t out_dim, double* out) {
  const std::size_t k_vec = in_dim - in_dim % kLanes;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in + r * in_dim;
    double* y = out + r * out_dim;
    std::size_t j = 0;
    // Four outputs per pass share each load of the input row.
    for (; j + 4 <= out_dim; j += 4) {
      const double* w0 = weight + j * in_dim;
      const double* w1 = w0 + in_dim;
      const double* w2 = w1 + in_dim;
      const double* w3 = w2 + in_dim;
      __m256d a0 = _mm256_setzero_pd();
      __m256d a1 = _mm256_setzero_pd();
      __m256d a2 = _mm256_setzero_pd();
      __m256d a3 = _mm256_setzero_pd();
      for (std::size_t k = 0; k < k_vec; k += kLanes) {
        const __m256d xv = _mm256_loadu_pd(x + k);
        a0 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w0 + k), a0);
        a1 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w1 + k), a1);
        a2 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w2 + k), a2);
        a3 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(w3 + k), a3);
      }
      alignas(32) double s[4];
      _mm256_store_pd(s, _mm256_add_pd(hsum4(a0, a1, a2, a3), _mm256_loadu_pd(bias + j)));
      for (std::size_t k = k_vec; k < in_dim; ++k) {
        s[0] += x[k] * w0[k];
        s[1] += x[k] * w1[k];
        s[2] += x[k] * w2[k];
        s[3] += x[k] * w3[k];
      }
      y[j] = s[0];
      y[j + 1] = s[1];
      y[j + 2] = s[2];
      y[j + 3] = s[3];
    }
    for (; j < out_dim; ++j) y[j] = bias[j] + dot(x, weight + j * in_dim, in_dim);
  }
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void affine_weight_grad(const double* delta, const double* in, std::size_t rows,
                        std::size_t in_dim, std::size_t out_dim, double* gw, double* gb) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = in + r * in_dim;
    const double* d = delta + r * out_dim;
    for (std::size_t j = 0; j < out_dim; ++j) {
      if (d[j] == 0.0) continue;
      gb[j] += d[j];
      axpy(d[j], x, gw + j * in_dim, in_dim);
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
      axpy(d[j], weight + j * in_dim, g, in_dim);
    }
  }
}

void chebyshev_accumulate(const double* column, double center, double* dist, std::size_t n) {
  const __m256d c = _mm256_set1_pd(center);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(column + j), c));
    _mm256_storeu_pd(dist + j, _mm256_max_pd(_mm256_loadu_pd(dist + j), d));
  }
  for (; j < n; ++j) {
    const double d = std::fabs(column[j] - center);
    if (d > dist[j]) dist[j] = d;
  }
}

std::size_t count_below(const double* values, double threshold, std::size_t n) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(values + j), t, _CMP_LT_OQ);
    c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(lt))));
  }
  for (; j < n; ++j) c += values[j] < threshold ? 1 : 0;
  return c;
}

}  // namespace

const KernelTable kAvx2Table{
    Backend::Avx2,      "avx2",           dot,
    sum_squares,        affine_forward,   affine_weight_grad,
    affine_input_grad,  chebyshev_accumulate, count_below,
};

}  // namespace minfo::kernels::detail
