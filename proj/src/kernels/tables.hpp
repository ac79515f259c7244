#pragma once

#include "mva/kernels.hpp"

// Internal: per-backend tables, defined in their own translation units so
// each can be compiled with the matching instruction-set flags.
namespace mva::kernels::detail {

const Ops& scalar_table();

#if defined(MVA_HAVE_AVX2)
const Ops& avx2_table();
bool avx2_supported();  // runtime CPUID check
#endif

#if defined(MVA_HAVE_NEON)
const Ops& neon_table();
#endif

}  // namespace mva::kernels::detail
