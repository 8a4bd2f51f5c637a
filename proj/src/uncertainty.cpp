#include "shaprob/uncertainty.hpp"

#include <cmath>
#include <functional>

#include "shaprob/csv.hpp"
#include "shaprob/error.hpp"
#include "shaprob/parallel.hpp"

namespace shaprob {

namespace {

template <class Result>
std::vector<Result> run_iterations(const Dataset& d, const McConfig& cfg,
                                   const std::function<Result(const Dataset&, const Dataset&, std::uint64_t)>& body) {
  cfg.validate();
  std::vector<Result> results(cfg.iterations);
  parallel_for(cfg.iterations, cfg.threads, [&](std::size_t k) {
    const auto seed = cfg.seed_of(k);
    try {
      auto [train, test] = split(d, SplitSpec{cfg.train_fraction, seed});
      results[k] = body(train, test, seed);
    } catch (const Error& e) {
      throw Error(e.kind(), "iteration with seed " + std::to_string(seed) + " failed: " + e.what());
    }
  });
  return results;
}

template <class Curve, class Read>
std::vector<double> read_curve(const Curve& c, std::span<const double> grid, Read read) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) out.push_back(read(c, g, Strategy::Interpolation));
  return out;
}

}  // namespace

void McConfig::validate() const {
  if (iterations < 2) throw Error(ErrorKind::InvalidArgument, "Monte-Carlo runs need at least 2 iterations");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "train fraction must lie in (0,1)");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  for (double g : grid)
    if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidArgument, "grid values must lie in [0,1]");
}

BandedSeries aggregate(std::string label, std::span<const double> abscissae,
                       std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no samples to aggregate");
  BandedSeries b;
  b.label = std::move(label);
  b.abscissae.assign(abscissae.begin(), abscissae.end());
  b.iterations = samples.size();
  const std::size_t points = abscissae.size();
  b.mean.assign(points, 0.0);
  b.stddev.assign(points, 0.0);
  const double count = static_cast<double>(samples.size());
  // Shifted by the first sample so identical samples give exactly zero spread.
  const auto& first = samples.front();
  for (const auto& s : samples) {
    if (s.size() != points) throw Error(ErrorKind::ArityMismatch, "sample length differs from the grid");
    for (std::size_t p = 0; p < points; ++p) b.mean[p] += s[p] - first[p];
  }
  for (std::size_t p = 0; p < points; ++p) b.mean[p] = first[p] + b.mean[p] / count;
  for (const auto& s : samples)
    for (std::size_t p = 0; p < points; ++p) b.stddev[p] += (s[p] - b.mean[p]) * (s[p] - b.mean[p]);
  for (auto& v : b.stddev) v = std::sqrt(v / count);
  return b;
}

McCurves mc_curves(const Dataset& d, const McConfig& cfg) {
  struct Run {
    std::vector<double> tpr;
    std::vector<double> precision;
  };
  const auto runs = run_iterations<Run>(d, cfg, [&](const Dataset& train, const Dataset& test, std::uint64_t) {
    const auto scores = train_gnb(train).score(test);
    const auto roc = roc_from_scores(scores.log_odds, test.labels());
    const auto pr = pr_from_scores(scores.log_odds, test.labels());
    return Run{read_curve(roc, cfg.grid, estimate_tpr), read_curve(pr, cfg.grid, estimate_precision)};
  });
  std::vector<std::vector<double>> tpr, precision;
  for (const auto& r : runs) {
    tpr.push_back(r.tpr);
    precision.push_back(r.precision);
  }
  return {aggregate("ROC", cfg.grid, tpr), aggregate("PRC", cfg.grid, precision)};
}

McAttribution mc_attributions(const Dataset& d, const McConfig& cfg, const Target& target) {
  target.validate();
  if (cfg.samples == 0 && d.features() > cfg.max_features)
    throw Error(ErrorKind::TooManyFeaturesForExactMode,
                std::to_string(d.features()) + " features exceed the exact-mode cap");
  const ExactOptions exact{cfg.max_features, 1};
  const auto runs = run_iterations<Attribution>(d, cfg, [&](const Dataset& train, const Dataset& test,
                                                            std::uint64_t seed) {
    CoalitionEvaluator ev(train, test);
    if (cfg.samples > 0) {
      // The split seed doubles as the permutation seed.
      return shapley_sampled(ev, target, SamplingOptions{cfg.samples, seed, 1});
    }
    return shapley_exact(evaluate_all(ev, target, exact));
  });

  McAttribution out;
  out.names = d.feature_names();
  out.baseline = target.baseline();
  out.target_tag = target.tag();
  out.iterations = runs.size();
  std::vector<double> axis(d.features());
  for (std::size_t i = 0; i < axis.size(); ++i) axis[i] = static_cast<double>(i);
  for (const auto& a : runs) {
    out.runs.push_back(a.values);
    out.mean_payoff += a.total - a.baseline;
  }
  out.mean_payoff /= static_cast<double>(runs.size());
  const auto band = aggregate(out.target_tag, axis, out.runs);
  out.mean = band.mean;
  out.stddev = band.stddev;
  return out;
}

McCurveAttribution mc_curve_attributions(const Dataset& d, const McConfig& cfg, TargetKind slice_kind,
                                         Strategy strategy) {
  if (cfg.samples == 0 && d.features() > cfg.max_features)
    throw Error(ErrorKind::TooManyFeaturesForExactMode,
                std::to_string(d.features()) + " features exceed the exact-mode cap");
  const ExactOptions exact{cfg.max_features, 1};
  const auto runs = run_iterations<CurveAttribution>(d, cfg, [&](const Dataset& train, const Dataset& test,
                                                                 std::uint64_t seed) {
    CoalitionEvaluator ev(train, test);
    if (cfg.samples > 0)
      return shapley_curve_sampled(ev, slice_kind, cfg.grid, strategy, SamplingOptions{cfg.samples, seed, 1});
    const auto tables = evaluate_slices(ev, slice_kind, cfg.grid, strategy, exact);
    return shapley_curve(tables);
  });

  McCurveAttribution out;
  out.names = d.feature_names();
  out.target_tag = runs.front().target_tag;
  for (std::size_t i = 0; i < out.names.size(); ++i) {
    std::vector<std::vector<double>> samples;
    for (const auto& r : runs) samples.push_back(r.per_feature[i]);
    out.per_feature.push_back(aggregate(out.names[i], cfg.grid, samples));
  }
  std::vector<std::vector<double>> reference;
  for (const auto& r : runs) reference.push_back(r.reference);
  out.reference = aggregate("reference", cfg.grid, reference);
  return out;
}

void write_band_csv(const BandedSeries& b, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"abscissa", "mean", "std"};
  for (std::size_t p = 0; p < b.abscissae.size(); ++p)
    t.rows.push_back({csv::number(b.abscissae[p]), csv::number(b.mean[p]), csv::number(b.stddev[p])});
  csv::write(t, path);
}

void write_mc_attribution_csv(const McAttribution& a, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"target", "feature", "mean", "std", "mean_percent", "std_percent"};
  for (std::size_t i = 0; i < a.names.size(); ++i)
    t.rows.push_back({a.target_tag, a.names[i], csv::number(a.mean[i]), csv::number(a.stddev[i]),
                      csv::number(a.mean[i] * 100.0), csv::number(a.stddev[i] * 100.0)});
  csv::write(t, path);
}

}  // namespace shaprob
