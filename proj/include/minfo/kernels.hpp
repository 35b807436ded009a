#pragma once

// Data-parallel inner loops behind the network and the k-NN baseline.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2/FMA variant. The active table is chosen once at startup from the CPU's
// capabilities; MINFO_KERNELS=scalar|avx2 in the environment overrides that.
// Variants agree to floating-point reassociation (tested in kernels_test).

#include <cstddef>
#include <string_view>

namespace minfo::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);

  // out[r][j] = bias[j] + <in[r], weight[j]>, weight stored out_dim x in_dim.
  void (*affine_forward)(const double* in, std::size_t rows, std::size_t in_dim,
                         const double* weight, const double* bias, std::size_t out_dim,
                         double* out);

  // gw[j][k] += sum_r delta[r][j] * in[r][k];  gb[j] += sum_r delta[r][j].
  void (*affine_weight_grad)(const double* delta, const double* in, std::size_t rows,
                             std::size_t in_dim, std::size_t out_dim, double* gw, double* gb);

  // gin[r][k] = sum_j delta[r][j] * weight[j][k]  (overwrites gin).
  void (*affine_input_grad)(const double* delta, const double* weight, std::size_t rows,
                            std::size_t in_dim, std::size_t out_dim, double* gin);

  // dist[j] = max(dist[j], |column[j] - center|).
  void (*chebyshev_accumulate)(const double* column, double center, double* dist,
                               std::size_t n);

  // Number of j with values[j] < threshold.
  std::size_t (*count_below)(const double* values, double threshold, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;

bool supported(Backend backend) noexcept;

// The table used by the library.
const KernelTable& active() noexcept;

// Force a backend (tests, benchmarks). Throws ArgumentError if unsupported.
void select(Backend backend);

Backend parse_backend(std::string_view name);

}  // namespace minfo::kernels
