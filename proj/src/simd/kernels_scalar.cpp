#include "shaprob/kernels.hpp"

#include <cstddef>

namespace shaprob::kernels {

namespace {

double sum_scalar(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double ssd_scalar(std::span<const double> x, double center) {
  double s = 0.0;
  for (double v : x) {
    const double d = v - center;
    s += d * d;
  }
  return s;
}

void log_ratio_scalar(std::span<const double> x, const GaussianRatio& g, std::span<double> acc) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dp = x[i] - g.mean_pos;
    const double dn = x[i] - g.mean_neg;
    acc[i] += g.offset - dp * dp * g.inv2var_pos + dn * dn * g.inv2var_neg;
  }
}

constexpr KernelTable kScalar{Isa::Scalar, &sum_scalar, &ssd_scalar, &log_ratio_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace shaprob::kernels
