#pragma once

#include "shaprob/kernels.hpp"

namespace shaprob::kernels {

#if defined(SHAPROB_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(SHAPROB_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace shaprob::kernels
