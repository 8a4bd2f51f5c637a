#include "shaprob/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "shaprob/csv.hpp"
#include "shaprob/error.hpp"
#include "shaprob/parallel.hpp"
#include "shaprob/random.hpp"

namespace shaprob {

namespace {

__extension__ using Wide = unsigned __int128;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide c = 1;
  for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return static_cast<std::uint64_t>(c);
}

void check_names(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a != b) throw Error(ErrorKind::ArityMismatch, "attributions cover different features");
}

}  // namespace

double Attribution::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double Attribution::value(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(ErrorKind::IndexOutOfRange, "no feature named '" + name + "'");
  return values[static_cast<std::size_t>(it - names.begin())];
}

std::vector<std::size_t> Attribution::order_by_magnitude() const {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [this](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  return idx;
}

double CurveAttribution::sum_at(std::size_t k) const {
  double s = 0.0;
  for (const auto& series : per_feature) s += series.at(k);
  return s;
}

Attribution CurveAttribution::slice(std::size_t k) const {
  Attribution a;
  a.names = names;
  for (const auto& series : per_feature) a.values.push_back(series.at(k));
  a.baseline = baseline.at(k);
  a.total = reference.at(k);
  a.target_tag = target_tag + "@" + csv::number(abscissae.at(k));
  return a;
}

std::vector<double> shapley_weights(std::size_t n) {
  if (n == 0) return {};
  if (n > kMaxPlayers) throw Error(ErrorKind::TooManyFeaturesForExactMode, "too many players");
  std::vector<double> w(n);
  for (std::size_t s = 0; s < n; ++s)
    w[s] = 1.0 / (static_cast<double>(n) * static_cast<double>(binomial(n - 1, s)));
  return w;
}

std::vector<double> shapley_values(std::span<const double> payoffs, std::size_t n) {
  if (n > kMaxPlayers || payoffs.size() != (std::size_t{1} << n))
    throw Error(ErrorKind::IncompleteTable, "payoff vector must hold 2^n values");
  const auto w = shapley_weights(n);
  std::vector<double> phi(n, 0.0);
  const std::size_t count = payoffs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double acc = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      if (m & bit) continue;
      acc += w[static_cast<std::size_t>(std::popcount(m))] * (payoffs[m | bit] - payoffs[m]);
    }
    phi[i] = acc;
  }
  return phi;
}

Attribution shapley_exact(const PayoffTable& t) {
  if (!t.complete()) throw Error(ErrorKind::IncompleteTable, "payoff table for " + t.tag() + " is incomplete");
  Attribution a;
  a.names = t.feature_names();
  a.values = shapley_values(t.values(), t.players());
  a.baseline = t.target().baseline();
  a.total = a.baseline + t.values().back();
  a.target_tag = t.tag();
  return a;
}

std::vector<Permutation> draw_permutations(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Permutation> out(count, Permutation(n));
  for (auto& p : out) {
    std::iota(p.begin(), p.end(), std::size_t{0});
    shuffle(p, rng);
  }
  return out;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  if (n > 10) throw Error(ErrorKind::InvalidArgument, "refusing to enumerate more than 10! permutations");
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::vector<double>> permutation_means(std::size_t n, std::size_t width, const VectorPayoff& fn,
                                                   std::span<const Permutation> orders, unsigned threads) {
  if (orders.empty()) throw Error(ErrorKind::InvalidArgument, "at least one permutation is required");
  if (n > kMaxPlayers) throw Error(ErrorKind::TooManyFeaturesForExactMode, "too many players");

  std::unordered_map<std::uint64_t, std::size_t> slot_of;
  std::vector<std::uint64_t> masks;
  for (const auto& order : orders) {
    if (order.size() != n) throw Error(ErrorKind::InvalidArgument, "permutation length differs from player count");
    std::uint64_t m = 0;
    for (auto player : order) {
      m |= std::uint64_t{1} << player;
      if (slot_of.emplace(m, masks.size()).second) masks.push_back(m);
    }
  }

  std::vector<std::vector<double>> payoffs(masks.size());
  parallel_for(masks.size(), threads, [&](std::size_t i) {
    payoffs[i] = fn(Coalition(masks[i]));
    if (payoffs[i].size() != width) throw Error(ErrorKind::InvalidArgument, "payoff width mismatch");
  });

  std::vector<std::vector<double>> sums(width, std::vector<double>(n, 0.0));
  const std::vector<double> zeros(width, 0.0);
  for (const auto& order : orders) {
    std::uint64_t m = 0;
    const std::vector<double>* prev = &zeros;
    for (auto player : order) {
      m |= std::uint64_t{1} << player;
      const auto& cur = payoffs[slot_of.at(m)];
      for (std::size_t k = 0; k < width; ++k) sums[k][player] += cur[k] - (*prev)[k];
      prev = &cur;
    }
  }
  const double count = static_cast<double>(orders.size());
  for (auto& row : sums)
    for (auto& v : row) v /= count;
  return sums;
}

Attribution shapley_from_orders(CoalitionEvaluator& ev, const Target& target, std::span<const Permutation> orders,
                                unsigned threads) {
  target.validate();
  const std::size_t n = ev.players();
  const std::uint64_t grand = Coalition::grand(n).mask();
  double grand_payoff = 0.0;
  auto fn = [&](Coalition c) {
    const double v = ev.payoff(target, c);
    if (c.mask() == grand) grand_payoff = v;  // requested exactly once
    return std::vector<double>{v};
  };
  auto means = permutation_means(n, 1, fn, orders, threads);
  Attribution a;
  a.names = ev.feature_names();
  a.values = std::move(means.front());
  a.baseline = target.baseline();
  a.total = a.baseline + grand_payoff;
  a.target_tag = target.tag();
  return a;
}

Attribution shapley_sampled(CoalitionEvaluator& ev, const Target& target, const SamplingOptions& opt) {
  if (opt.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  const auto orders = draw_permutations(ev.players(), opt.samples, opt.seed);
  return shapley_from_orders(ev, target, orders, opt.threads);
}

Attribution shapley_sampled(const GameSpec& spec, std::size_t samples, std::uint64_t seed) {
  CoalitionEvaluator ev(spec.train, spec.test);
  return shapley_sampled(ev, spec.target, SamplingOptions{samples, seed, 1});
}

CurveAttribution shapley_curve(std::span<const PayoffTable> tables) {
  if (tables.empty()) throw Error(ErrorKind::InvalidArgument, "no slice tables given");
  const auto kind = tables.front().target().kind;
  CurveAttribution c;
  c.names = tables.front().feature_names();
  c.per_feature.assign(c.names.size(), {});
  c.target_tag = kind == TargetKind::RocSlice ? "ROC" : "PRC";
  for (const auto& t : tables) {
    if (!t.target().is_slice() || t.target().kind != kind)
      throw Error(ErrorKind::InvalidArgument, "curve tables must all be slices of the same curve");
    check_names(c.names, t.feature_names());
    if (!c.abscissae.empty() && t.target().abscissa < c.abscissae.back())
      throw Error(ErrorKind::InvalidArgument, "slice tables must be ordered by abscissa");
    const auto a = shapley_exact(t);
    c.abscissae.push_back(t.target().abscissa);
    c.baseline.push_back(a.baseline);
    c.reference.push_back(a.total);
    for (std::size_t i = 0; i < a.values.size(); ++i) c.per_feature[i].push_back(a.values[i]);
  }
  c.target_tag += "/" + std::string(to_string(tables.front().target().strategy));
  return c;
}

CurveAttribution shapley_curve_sampled(CoalitionEvaluator& ev, TargetKind slice_kind, std::span<const double> grid,
                                       Strategy strategy, const SamplingOptions& opt) {
  if (opt.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  std::vector<Target> targets;
  for (double g : grid) {
    targets.push_back(Target{slice_kind, g, strategy});
    if (!targets.back().is_slice()) throw Error(ErrorKind::InvalidArgument, "curve attribution needs a slice target");
    targets.back().validate();
  }
  const std::size_t n = ev.players();
  const std::uint64_t grand = Coalition::grand(n).mask();
  std::vector<double> grand_payoffs;
  auto fn = [&](Coalition c) {
    const auto out = ev.outcome(c);
    std::vector<double> v;
    v.reserve(targets.size());
    for (const auto& t : targets) v.push_back(payoff_from_outcome(t, *out));
    if (c.mask() == grand) grand_payoffs = v;
    return v;
  };
  const auto orders = draw_permutations(n, opt.samples, opt.seed);
  const auto means = permutation_means(n, targets.size(), fn, orders, opt.threads);

  CurveAttribution c;
  c.abscissae.assign(grid.begin(), grid.end());
  c.names = ev.feature_names();
  c.per_feature.assign(n, std::vector<double>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) c.per_feature[i][k] = means[k][i];
    c.baseline.push_back(targets[k].baseline());
    c.reference.push_back(targets[k].baseline() + grand_payoffs[k]);
  }
  c.target_tag = std::string(slice_kind == TargetKind::RocSlice ? "ROC" : "PRC") + "/" + std::string(to_string(strategy));
  return c;
}

std::vector<double> auc_roc_consistency(const Attribution& area, const CurveAttribution& curve) {
  check_names(area.names, curve.names);
  if (curve.points() < 11) throw Error(ErrorKind::GridTooCoarse, "consistency check needs at least 11 grid points");
  if (curve.abscissae.front() != 0.0 || curve.abscissae.back() != 1.0 ||
      !std::is_sorted(curve.abscissae.begin(), curve.abscissae.end()))
    throw Error(ErrorKind::InvalidArgument, "consistency grid must be sorted and span [0,1]");
  std::vector<double> out(curve.players());
  std::vector<CurvePoint> pts(curve.points());
  for (std::size_t i = 0; i < curve.players(); ++i) {
    for (std::size_t k = 0; k < curve.points(); ++k) pts[k] = {curve.abscissae[k], curve.per_feature[i][k]};
    out[i] = std::abs(trapezoid(pts) - area.values[i]);
  }
  return out;
}

void write_attribution_csv(const Attribution& a, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"target", "feature", "phi", "percent", "baseline", "total"};
  for (std::size_t i = 0; i < a.players(); ++i)
    t.rows.push_back({a.target_tag, a.names[i], csv::number(a.values[i]), csv::number(a.values[i] * 100.0),
                      csv::number(a.baseline), csv::number(a.total)});
  csv::write(t, path);
}

Attribution read_attribution_csv(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto col = [&](const std::string& name) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw Error(ErrorKind::MissingColumn, "no column '" + name + "'");
    return static_cast<std::size_t>(it - t.header.begin());
  };
  Attribution a;
  a.values = csv::numeric_column(t, "phi");
  const auto baseline = csv::numeric_column(t, "baseline");
  const auto total = csv::numeric_column(t, "total");
  for (const auto& r : t.rows) a.names.push_back(r.at(col("feature")));
  if (!t.rows.empty()) {
    a.target_tag = t.rows.front().at(col("target"));
    a.baseline = baseline.front();
    a.total = total.front();
  }
  return a;
}

void write_curve_attribution_csv(const CurveAttribution& c, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"abscissa", "reference", "baseline"};
  t.header.insert(t.header.end(), c.names.begin(), c.names.end());
  for (std::size_t k = 0; k < c.points(); ++k) {
    std::vector<std::string> row{csv::number(c.abscissae[k]), csv::number(c.reference[k]),
                                 csv::number(c.baseline[k])};
    for (const auto& series : c.per_feature) row.push_back(csv::number(series[k]));
    t.rows.push_back(std::move(row));
  }
  csv::write(t, path);
}

}  // namespace shaprob
