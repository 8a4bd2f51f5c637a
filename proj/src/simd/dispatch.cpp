#include <cstdlib>
#include <string>

#include "simd/kernels_internal.hpp"

namespace shaprob::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(SHAPROB_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(SHAPROB_HAVE_NEON)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) noexcept {
  if (!isa_available(isa)) return scalar_kernels();
  switch (isa) {
#if defined(SHAPROB_HAVE_AVX2)
    case Isa::Avx2: return avx2_kernels();
#endif
#if defined(SHAPROB_HAVE_NEON)
    case Isa::Neon: return neon_kernels();
#endif
    default: return scalar_kernels();
  }
}

namespace {

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("SHAPROB_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2") return kernels_for(Isa::Avx2);
    if (want == "neon") return kernels_for(Isa::Neon);
  }
  if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
  if (isa_available(Isa::Neon)) return kernels_for(Isa::Neon);
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace shaprob::kernels
