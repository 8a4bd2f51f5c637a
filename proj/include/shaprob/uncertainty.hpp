#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shaprob/dataset.hpp"
#include "shaprob/game.hpp"
#include "shaprob/shapley.hpp"

namespace shaprob {

/// Monte-Carlo cross-validation settings. Iteration k splits with seed
/// base_seed + k.
struct McConfig {
  std::size_t iterations = 100;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.8;
  std::vector<double> grid = uniform_grid(101);
  /// Workers across iterations.
  unsigned threads = 1;
  std::size_t max_features = 20;
  /// Permutation samples per iteration; 0 means exact attributions.
  std::size_t samples = 0;

  std::uint64_t seed_of(std::size_t k) const { return base_seed + k; }
  void validate() const;
};

/// Mean and population standard deviation of a series across iterations.
struct BandedSeries {
  std::string label;
  std::vector<double> abscissae;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t iterations = 0;
};

/// Aggregates samples[iteration][point] in iteration order.
BandedSeries aggregate(std::string label, std::span<const double> abscissae,
                       std::span<const std::vector<double>> samples);

struct McCurves {
  BandedSeries roc;
  BandedSeries prc;
};

/// Grand-coalition ROC and PR curves per iteration, read on the grid with
/// Interpolation.
McCurves mc_curves(const Dataset& d, const McConfig& cfg);

/// Per-feature mean and std of exact Shapley values of one scalar target.
struct McAttribution {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> stddev;
  /// Mean grand-coalition payoff; equals the sum of `mean` up to rounding.
  double mean_payoff = 0.0;
  double baseline = 0.0;
  std::string target_tag;
  std::size_t iterations = 0;
  /// Per-iteration values, [iteration][feature].
  std::vector<std::vector<double>> runs;
};

McAttribution mc_attributions(const Dataset& d, const McConfig& cfg, const Target& target);

/// Per-feature bands of exact slice attributions over cfg.grid.
struct McCurveAttribution {
  std::vector<std::string> names;
  std::vector<BandedSeries> per_feature;
  BandedSeries reference;
  std::string target_tag;
};

McCurveAttribution mc_curve_attributions(const Dataset& d, const McConfig& cfg, TargetKind slice_kind,
                                         Strategy strategy);

/// Columns: abscissa, mean, std.
void write_band_csv(const BandedSeries& b, const std::filesystem::path& path);
/// Columns: target, feature, mean, std, mean_percent, std_percent.
void write_mc_attribution_csv(const McAttribution& a, const std::filesystem::path& path);

}  // namespace shaprob
