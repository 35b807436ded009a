#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "minfo/errors.hpp"

namespace minfo::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(MINFO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("MINFO_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &detail::kScalarTable;
    if (want == "avx2" && best != nullptr) return best;
  }
  return best != nullptr ? best : &detail::kScalarTable;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#if defined(MINFO_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

bool supported(Backend backend) noexcept {
  return backend == Backend::Scalar || avx2_table() != nullptr;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Backend backend) {
  if (!supported(backend)) throw ArgumentError("kernel backend not available on this build/CPU");
  current().store(backend == Backend::Scalar ? &detail::kScalarTable : avx2_table(),
                  std::memory_order_release);
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  throw ArgumentError("unknown kernel backend '" + std::string(name) + "'");
}

}  // namespace minfo::kernels
