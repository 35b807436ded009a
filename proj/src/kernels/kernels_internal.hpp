#pragma once

#include "minfo/kernels.hpp"

namespace minfo::kernels::detail {

extern const KernelTable kScalarTable;

#if defined(MINFO_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace minfo::kernels::detail
