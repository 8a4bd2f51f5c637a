#include "shaprob/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "shaprob/error.hpp"

namespace shaprob {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::Optimistic: return "optimistic";
    case Strategy::Pessimistic: return "pessimistic";
    case Strategy::Interpolation: return "interpolation";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "optimistic") return Strategy::Optimistic;
  if (name == "pessimistic") return Strategy::Pessimistic;
  if (name == "interpolation") return Strategy::Interpolation;
  throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

double trapezoid(std::span<const CurvePoint> points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    area += (points[k].x - points[k - 1].x) * (points[k].y + points[k - 1].y) * 0.5;
  return area;
}

namespace {

void check_sorted_unit(const std::vector<CurvePoint>& pts, bool y_monotone, const char* what) {
  if (pts.empty()) throw Error(ErrorKind::DegenerateCurve, std::string(what) + " has no points");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
      throw Error(ErrorKind::DegenerateCurve, std::string(what) + " point outside the unit square");
    if (k > 0 && (p.x < pts[k - 1].x || (y_monotone && p.y < pts[k - 1].y)))
      throw Error(ErrorKind::DegenerateCurve, std::string(what) + " points out of order");
  }
}

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts count_labels(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::InvalidArgument, "score and label vectors differ in length");
  Counts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::isnan(scores[i])) throw Error(ErrorKind::DegenerateCurve, "score vector contains NaN");
    (labels[i] ? c.positives : c.negatives) += 1;
  }
  return c;
}

// Visits tied-score groups in descending score order, passing cumulative
// (true positives, false positives) after each group. Stops early when the
// visitor returns false.
template <class Visit>
void sweep(std::span<const double> scores, std::span<const Label> labels, Visit&& visit) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] ? tp : fp) += 1;
    if (!visit(tp, fp)) return;
  }
}

}  // namespace

RocCurve::RocCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
  check_sorted_unit(points_, true, "ROC curve");
  if (points_.front() != CurvePoint{0.0, 0.0} || points_.back() != CurvePoint{1.0, 1.0})
    throw Error(ErrorKind::DegenerateCurve, "ROC curve must run from (0,0) to (1,1)");
  auc_ = trapezoid(points_);
}

PrCurve::PrCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
  check_sorted_unit(points_, false, "PR curve");
  auprc_ = trapezoid(points_);
}

RocCurve roc_from_scores(std::span<const double> scores, std::span<const Label> labels) {
  const auto counts = count_labels(scores, labels);
  if (counts.positives == 0 || counts.negatives == 0)
    throw Error(ErrorKind::SingleClassLabels, "ROC needs both positive and negative labels");
  const double p = static_cast<double>(counts.positives);
  const double n = static_cast<double>(counts.negatives);
  std::vector<CurvePoint> pts{{0.0, 0.0}};
  sweep(scores, labels, [&](std::size_t tp, std::size_t fp) {
    pts.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p});
    return true;
  });
  return RocCurve(std::move(pts));
}

PrCurve pr_from_scores(std::span<const double> scores, std::span<const Label> labels) {
  const auto counts = count_labels(scores, labels);
  if (counts.positives == 0) throw Error(ErrorKind::NoPositiveLabels, "PR curve needs a positive label");
  const double p = static_cast<double>(counts.positives);
  std::vector<CurvePoint> pts;
  sweep(scores, labels, [&](std::size_t tp, std::size_t fp) {
    const CurvePoint pt{static_cast<double>(tp) / p, static_cast<double>(tp) / static_cast<double>(tp + fp)};
    if (pts.empty() || pts.back() != pt) pts.push_back(pt);
    return tp < counts.positives;
  });
  if (pts.front().x != 0.0) pts.insert(pts.begin(), CurvePoint{0.0, pts.front().y});
  return PrCurve(std::move(pts));
}

double estimate_at(std::span<const CurvePoint> knots, double query, Strategy s) {
  if (knots.empty()) throw Error(ErrorKind::DegenerateCurve, "no knots to estimate from");
  if (!(query >= 0.0 && query <= 1.0)) throw Error(ErrorKind::InvalidArgument, "query must lie in [0,1]");

  auto lo = std::lower_bound(knots.begin(), knots.end(), query,
                             [](const CurvePoint& p, double q) { return p.x < q; });
  auto hi = std::upper_bound(knots.begin(), knots.end(), query,
                             [](double q, const CurvePoint& p) { return q < p.x; });
  CurvePoint a, b;
  if (lo != hi) {
    a = *lo;
    b = *(hi - 1);
  } else if (lo == knots.begin()) {
    return knots.front().y;
  } else if (lo == knots.end()) {
    return knots.back().y;
  } else {
    a = *(lo - 1);
    b = *lo;
  }

  switch (s) {
    case Strategy::Optimistic: return std::max(a.y, b.y);
    case Strategy::Pessimistic: return std::min(a.y, b.y);
    case Strategy::Interpolation:
      if (a.x == b.x) return (a.y + b.y) * 0.5;
      // Clamped so rounding never leaves the [pessimistic, optimistic] band.
      return std::clamp((b.y - a.y) * (query - a.x) / (b.x - a.x) + a.y, std::min(a.y, b.y), std::max(a.y, b.y));
  }
  return a.y;
}

double estimate_tpr(const RocCurve& c, double fpr_query, Strategy s) {
  // Every threshold passes every instance at fpr 1.
  if (fpr_query == 1.0) return 1.0;
  return estimate_at(c.points(), fpr_query, s);
}

double estimate_precision(const PrCurve& c, double recall_query, Strategy s) {
  return estimate_at(c.points(), recall_query, s);
}

std::vector<double> uniform_grid(std::size_t count) {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one point");
  std::vector<double> grid(count, 0.0);
  if (count == 1) return grid;
  const double steps = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) / steps;
  return grid;
}

}  // namespace shaprob
