#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "shaprob/dataset.hpp"

namespace shaprob {

struct CurvePoint {
  double x;
  double y;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// How a curve is read at an abscissa that is not one of its knots.
enum class Strategy { Optimistic, Pessimistic, Interpolation };

std::string_view to_string(Strategy s) noexcept;
Strategy parse_strategy(std::string_view name);

/// (fpr, tpr) knots from a descending threshold sweep, (0,0) first and (1,1)
/// last, with the trapezoidal area cached.
class RocCurve {
 public:
  explicit RocCurve(std::vector<CurvePoint> points);

  const std::vector<CurvePoint>& points() const { return points_; }
  double auc() const { return auc_; }

 private:
  std::vector<CurvePoint> points_;
  double auc_;
};

/// (recall, precision) knots sorted by recall; precision need not be monotone.
class PrCurve {
 public:
  explicit PrCurve(std::vector<CurvePoint> points);

  const std::vector<CurvePoint>& points() const { return points_; }
  double auprc() const { return auprc_; }

 private:
  std::vector<CurvePoint> points_;
  double auprc_;
};

/// Trapezoidal area under knots sorted by x.
double trapezoid(std::span<const CurvePoint> points);

/// Equal scores cross the threshold together as one diagonal step.
RocCurve roc_from_scores(std::span<const double> scores, std::span<const Label> labels);

/// Sweep stops at the first threshold reaching full recall; a leading
/// (0, precision of the top-scored group) knot is prepended.
PrCurve pr_from_scores(std::span<const double> scores, std::span<const Label> labels);

inline double auc(const RocCurve& c) { return c.auc(); }
inline double auprc(const PrCurve& c) { return c.auprc(); }

/// Reads knots at `query`. When knots sit exactly at the query the first and
/// last of them form the bracket; otherwise the nearest knots on each side do.
/// Optimistic takes the larger y, Pessimistic the smaller, Interpolation the
/// linear interpolant (mean of the two when their x coincide). Queries outside
/// the knot span clamp to the nearest end knot.
double estimate_at(std::span<const CurvePoint> knots, double query, Strategy s);

/// As estimate_at, except fpr 1 always reads the (1,1) end point.
double estimate_tpr(const RocCurve& c, double fpr_query, Strategy s);
double estimate_precision(const PrCurve& c, double recall_query, Strategy s);

/// `count` evenly spaced points on [0,1]; count >= 1 (a single point is 0).
std::vector<double> uniform_grid(std::size_t count);

}  // namespace shaprob
