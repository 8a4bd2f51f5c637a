#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shaprob/coalition.hpp"
#include "shaprob/game.hpp"

namespace shaprob {

/// Per-feature Shapley values of one scalar game.
struct Attribution {
  std::vector<std::string> names;
  std::vector<double> values;
  /// Metric value of the random classifier.
  double baseline = 0.0;
  /// Achieved metric value: baseline + payoff of the grand coalition.
  double total = 0.0;
  std::string target_tag;

  std::size_t players() const { return values.size(); }
  double sum() const;
  double value(const std::string& name) const;
  /// Feature indices by decreasing |phi|; ties keep feature order.
  std::vector<std::size_t> order_by_magnitude() const;
};

/// Shapley values of a family of slice games over a grid.
struct CurveAttribution {
  std::vector<double> abscissae;
  std::vector<std::string> names;
  /// per_feature[i][k] is feature i's value at abscissae[k].
  std::vector<std::vector<double>> per_feature;
  /// Grand-coalition metric at each abscissa (tpr or precision).
  std::vector<double> reference;
  std::vector<double> baseline;
  std::string target_tag;

  std::size_t players() const { return names.size(); }
  std::size_t points() const { return abscissae.size(); }
  double sum_at(std::size_t k) const;
  /// One grid point as a scalar attribution.
  Attribution slice(std::size_t k) const;
};

/// s!(n-s-1)!/n! for s = 0..n-1.
std::vector<double> shapley_weights(std::size_t n);

/// Shapley values of a game given as 2^n payoffs indexed by coalition mask.
std::vector<double> shapley_values(std::span<const double> payoffs, std::size_t n);

Attribution shapley_exact(const PayoffTable& t);

using Permutation = std::vector<std::size_t>;
using VectorPayoff = std::function<std::vector<double>(Coalition)>;

struct SamplingOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// `count` uniform permutations of 0..n-1, drawn with replacement.
std::vector<Permutation> draw_permutations(std::size_t n, std::size_t count, std::uint64_t seed);

/// All n! permutations in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

/// Mean marginal contributions over the given orders for a game returning
/// `width` payoffs per coalition. Result is [slot][player]. Each distinct
/// coalition is requested once; `fn` may be called from several threads.
/// The empty coalition is never requested and counts as all zeros.
std::vector<std::vector<double>> permutation_means(std::size_t n, std::size_t width, const VectorPayoff& fn,
                                                   std::span<const Permutation> orders, unsigned threads = 1);

Attribution shapley_sampled(CoalitionEvaluator& ev, const Target& target, const SamplingOptions& opt);
Attribution shapley_sampled(const GameSpec& spec, std::size_t samples, std::uint64_t seed);
Attribution shapley_from_orders(CoalitionEvaluator& ev, const Target& target, std::span<const Permutation> orders,
                                unsigned threads = 1);

/// Exact per-slice attributions assembled into curves; tables share names and
/// slice kind and are ordered by abscissa.
CurveAttribution shapley_curve(std::span<const PayoffTable> tables);

/// Sampled counterpart: one set of permutations serves every grid point.
CurveAttribution shapley_curve_sampled(CoalitionEvaluator& ev, TargetKind slice_kind, std::span<const double> grid,
                                       Strategy strategy, const SamplingOptions& opt);

/// |trapezoidal integral of each feature's ROC-slice series - its AUC value|.
/// The grid must run from 0 to 1 with at least 11 points.
std::vector<double> auc_roc_consistency(const Attribution& area, const CurveAttribution& curve);

/// Columns: target, feature, phi, percent, baseline, total.
void write_attribution_csv(const Attribution& a, const std::filesystem::path& path);
Attribution read_attribution_csv(const std::filesystem::path& path);

/// Columns: abscissa, reference, baseline, then one column per feature.
void write_curve_attribution_csv(const CurveAttribution& c, const std::filesystem::path& path);

}  // namespace shaprob
