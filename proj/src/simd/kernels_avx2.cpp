// Compiled with -mavx2 -mfma; only reached after a cpuid check in dispatch.cpp.
#include <immintrin.h>

#include <array>
#include <cstddef>

#include "simd/kernels_internal.hpp"

namespace shaprob::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(p + i + 4));
    a2 = _mm256_add_pd(a2, _mm256_loadu_pd(p + i + 8));
    a3 = _mm256_add_pd(a3, _mm256_loadu_pd(p + i + 12));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) s += p[i];
  return s;
}

double ssd_avx2(std::span<const double> x, double center) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(p + i + 4), c);
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    a0 = _mm256_fmadd_pd(d, d, a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) {
    const double d = p[i] - center;
    s += d * d;
  }
  return s;
}

inline __m256d log_ratio_lanes(__m256d x, __m256d acc, const GaussianRatio& g) {
  const __m256d dp = _mm256_sub_pd(x, _mm256_set1_pd(g.mean_pos));
  const __m256d dn = _mm256_sub_pd(x, _mm256_set1_pd(g.mean_neg));
  // offset - dp^2 * kp + dn^2 * kn
  __m256d t = _mm256_fnmadd_pd(_mm256_mul_pd(dp, dp), _mm256_set1_pd(g.inv2var_pos), _mm256_set1_pd(g.offset));
  t = _mm256_fmadd_pd(_mm256_mul_pd(dn, dn), _mm256_set1_pd(g.inv2var_neg), t);
  return _mm256_add_pd(acc, t);
}

void log_ratio_avx2(std::span<const double> x, const GaussianRatio& g, std::span<double> acc) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = log_ratio_lanes(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(acc.data() + i), g);
    _mm256_storeu_pd(acc.data() + i, r);
  }
  if (i < n) {
    // Tail goes through the same lanes so a value's result never depends on
    // its position in the column.
    std::array<double, 4> xs{}, as{};
    for (std::size_t k = i; k < n; ++k) {
      xs[k - i] = x[k];
      as[k - i] = acc[k];
    }
    _mm256_storeu_pd(as.data(), log_ratio_lanes(_mm256_loadu_pd(xs.data()), _mm256_loadu_pd(as.data()), g));
    for (std::size_t k = i; k < n; ++k) acc[k] = as[k - i];
  }
}

constexpr KernelTable kAvx2{Isa::Avx2, &sum_avx2, &ssd_avx2, &log_ratio_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace shaprob::kernels
