#include <arm_neon.h>

#include <array>
#include <cstddef>

#include "simd/kernels_internal.hpp"

namespace shaprob::kernels {

namespace {

double sum_neon(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vaddq_f64(a0, vld1q_f64(p + i));
    a1 = vaddq_f64(a1, vld1q_f64(p + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += p[i];
  return s;
}

double ssd_neon(std::span<const double> x, double center) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t a0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(p + i), c);
    a0 = vfmaq_f64(a0, d, d);
  }
  double s = vaddvq_f64(a0);
  for (; i < n; ++i) {
    const double d = p[i] - center;
    s += d * d;
  }
  return s;
}

inline float64x2_t log_ratio_lanes(float64x2_t x, float64x2_t acc, const GaussianRatio& g) {
  const float64x2_t dp = vsubq_f64(x, vdupq_n_f64(g.mean_pos));
  const float64x2_t dn = vsubq_f64(x, vdupq_n_f64(g.mean_neg));
  float64x2_t t = vfmsq_f64(vdupq_n_f64(g.offset), vmulq_f64(dp, dp), vdupq_n_f64(g.inv2var_pos));
  t = vfmaq_f64(t, vmulq_f64(dn, dn), vdupq_n_f64(g.inv2var_neg));
  return vaddq_f64(acc, t);
}

void log_ratio_neon(std::span<const double> x, const GaussianRatio& g, std::span<double> acc) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(acc.data() + i, log_ratio_lanes(vld1q_f64(x.data() + i), vld1q_f64(acc.data() + i), g));
  if (i < n) {
    std::array<double, 2> xs{x[i], 0.0}, as{acc[i], 0.0};
    vst1q_f64(as.data(), log_ratio_lanes(vld1q_f64(xs.data()), vld1q_f64(as.data()), g));
    acc[i] = as[0];
  }
}

constexpr KernelTable kNeon{Isa::Neon, &sum_neon, &ssd_neon, &log_ratio_neon};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace shaprob::kernels
