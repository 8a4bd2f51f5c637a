#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shaprob/curves.hpp"
#include "shaprob/shapley.hpp"
#include "shaprob/uncertainty.hpp"

namespace shaprob {

struct WaterfallBar {
  std::string name;
  double value = 0.0;
};

/// Baseline, bars by decreasing |value|, total.
struct WaterfallSpec {
  std::string title;
  std::string baseline_label;
  double baseline = 0.0;
  std::vector<WaterfallBar> bars;
  std::string total_label;
  double total = 0.0;

  /// Throws unless baseline + sum of bars == total within 1e-9.
  void check() const;
};

WaterfallSpec waterfall(const Attribution& a);

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  /// Missing values render as gaps.
  std::vector<std::optional<double>> y;
  bool dashed = false;
};

struct Band {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct PlotDocument {
  std::string title;
  std::string x_label;
  std::string y_label;
  double width = 720.0;
  double height = 440.0;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<Band> bands;
  std::vector<Series> series;

  /// Widens the axis ranges to cover every series and band value.
  void fit_axes();
};

/// Categorical palette indexed by feature position; wraps after 10.
const std::string& palette_color(std::size_t index);

/// "31.08%" for 0.3108.
std::string percent_label(double value);

PlotDocument contribution_curves(const CurveAttribution& ca);
/// phi_i / sum_j phi_j per grid point; gaps where |sum| < 1e-9.
PlotDocument relative_contributions(const CurveAttribution& ca);
/// Mean line and mean +/- std band, clipped to [0,1] when `unit_range`.
PlotDocument banded_plot(const BandedSeries& b, bool unit_range = true);
/// One banded series per feature.
PlotDocument banded_plot(std::span<const BandedSeries> bands, const std::string& title, bool unit_range = false);

std::string render_svg(const PlotDocument& doc);
std::string render_svg(const WaterfallSpec& w);
/// Mean bars with std whiskers.
std::string render_whiskers(const McAttribution& a);

/// Columns: x, then one per series (empty cell for a gap). Series must share x.
void write_series_csv(const PlotDocument& doc, const std::filesystem::path& path);
/// Columns: x, y.
void write_curve_csv(std::span<const CurvePoint> points, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace shaprob
