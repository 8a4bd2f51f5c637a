#pragma once

#include <span>
#include <string_view>

namespace shaprob::kernels {

/// Per-feature constants of a two-class Gaussian log-likelihood ratio:
///   term(x) = offset - (x - mean_pos)^2 * inv2var_pos + (x - mean_neg)^2 * inv2var_neg
/// with offset = 0.5 * log(var_neg / var_pos) and inv2var = 1 / (2 var).
struct GaussianRatio {
  double mean_pos;
  double inv2var_pos;
  double mean_neg;
  double inv2var_neg;
  double offset;
};

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// Function table for one instruction set. All variants agree with the scalar
/// reference up to floating-point reassociation; within one variant every
/// element goes through the same arithmetic so equal inputs give equal outputs.
struct KernelTable {
  Isa isa;
  double (*sum)(std::span<const double> x);
  /// Sum of (x_i - center)^2.
  double (*sum_squared_deviation)(std::span<const double> x, double center);
  /// acc[i] += term(x[i]); x and acc have equal length.
  void (*accumulate_log_ratio)(std::span<const double> x, const GaussianRatio& g, std::span<double> acc);
};

const KernelTable& scalar_kernels() noexcept;

/// True when the running CPU (and this build) supports `isa`.
bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA; falls back to scalar when unavailable.
const KernelTable& kernels_for(Isa isa) noexcept;

/// Table chosen once per process: best available ISA, unless the SHAPROB_SIMD
/// environment variable names one (scalar, avx2, neon).
const KernelTable& active() noexcept;

}  // namespace shaprob::kernels
