#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "shaprob/coalition.hpp"
#include "shaprob/curves.hpp"
#include "shaprob/dataset.hpp"
#include "shaprob/model.hpp"

namespace shaprob {

enum class TargetKind { Auc, RocSlice, Auprc, PrcSlice };

/// What a coalition's payoff measures, relative to the random classifier:
///   Auc        AUC_A - 0.5
///   RocSlice   tpr_A(fpr) - fpr         (tpr read with `strategy`)
///   Auprc      AUPRC_A - 0.5
///   PrcSlice   precision_A(recall) - 0.5
struct Target {
  TargetKind kind = TargetKind::Auc;
  double abscissa = 0.0;
  Strategy strategy = Strategy::Interpolation;

  static Target auc() { return {TargetKind::Auc, 0.0, Strategy::Interpolation}; }
  static Target auprc() { return {TargetKind::Auprc, 0.0, Strategy::Interpolation}; }
  static Target roc_slice(double fpr, Strategy s = Strategy::Interpolation) { return {TargetKind::RocSlice, fpr, s}; }
  static Target prc_slice(double recall, Strategy s = Strategy::Interpolation) {
    return {TargetKind::PrcSlice, recall, s};
  }

  bool is_slice() const { return kind == TargetKind::RocSlice || kind == TargetKind::PrcSlice; }
  /// Metric value of the random classifier.
  double baseline() const { return kind == TargetKind::RocSlice ? abscissa : 0.5; }
  /// Identity tag, e.g. "AUC" or "ROC@0.2/interpolation".
  std::string tag() const;
  void validate() const;
};

struct GameSpec {
  Target target;
  Dataset train;
  Dataset test;
};

/// Trained-and-scored result for one non-empty coalition. A degenerate
/// outcome has no curves and a warning; its payoffs fall back to 0.
struct CoalitionOutcome {
  std::optional<RocCurve> roc;
  std::optional<PrCurve> pr;
  std::string warning;

  bool degenerate() const { return !roc.has_value(); }
};

double payoff_from_outcome(const Target& t, const CoalitionOutcome& o);

/// Owns one train/test pair and memoizes per-coalition models and curves so
/// every coalition is trained at most once, whatever targets are evaluated.
/// Safe to query from several threads.
///
/// Curves for 2^n coalitions stop fitting in memory well before the exact-mode
/// cap, so the cache is on by default only up to kDefaultCacheLimit players.
/// Without it each evaluate_* call still trains every coalition once.
class CoalitionEvaluator {
 public:
  static constexpr std::size_t kDefaultCacheLimit = 12;

  CoalitionEvaluator(Dataset train, Dataset test, std::shared_ptr<const Learner> learner = nullptr);
  CoalitionEvaluator(Dataset train, Dataset test, std::shared_ptr<const Learner> learner, bool cache_outcomes);

  CoalitionEvaluator(const CoalitionEvaluator&) = delete;
  CoalitionEvaluator& operator=(const CoalitionEvaluator&) = delete;

  std::size_t players() const { return train_.features(); }
  const std::vector<std::string>& feature_names() const { return train_.feature_names(); }
  const Dataset& train() const { return train_; }
  const Dataset& test() const { return test_; }

  /// Outcome for a non-empty coalition (trains on first request).
  std::shared_ptr<const CoalitionOutcome> outcome(Coalition c);

  /// 0 for the empty coalition without touching any model.
  double payoff(const Target& t, Coalition c);

  /// Trains all listed coalitions, in parallel when threads != 1. No-op
  /// without caching.
  void prefetch(std::span<const Coalition> coalitions, unsigned threads = 1);

  bool caching() const { return caching_; }
  std::size_t trainings() const { return trainings_.load(); }
  std::vector<std::string> warnings() const;
  void add_warning(std::string w);

 private:
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const CoalitionOutcome> value;
  };

  std::shared_ptr<const CoalitionOutcome> compute(Coalition c);

  Dataset train_;
  Dataset test_;
  std::shared_ptr<const Learner> learner_;
  mutable std::mutex mutex_;
  bool caching_;
  std::unordered_map<std::uint64_t, std::shared_ptr<Slot>> cache_;
  std::vector<std::pair<std::uint64_t, std::string>> transient_warnings_;
  std::atomic<std::size_t> trainings_{0};
};

/// Dense payoff map over all 2^n coalitions of one game.
class PayoffTable {
 public:
  PayoffTable(std::vector<std::string> names, Target target);

  std::size_t players() const { return names_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }
  const Target& target() const { return target_; }
  std::string tag() const { return target_.tag(); }

  void set(Coalition c, double value);
  bool has(Coalition c) const;
  /// IncompleteTable when the coalition has no payoff yet.
  double at(Coalition c) const;
  bool complete() const;

  /// Values indexed by coalition mask; only meaningful when complete().
  std::span<const double> values() const { return values_; }

  /// Number of model trainings the owning evaluator had performed once this
  /// table was filled.
  std::size_t evaluations = 0;
  std::vector<std::string> warnings;

 private:
  std::vector<std::string> names_;
  Target target_;
  std::vector<double> values_;
  std::vector<bool> known_;
};

struct ExactOptions {
  std::size_t max_features = 20;
  unsigned threads = 1;
};

double payoff(const GameSpec& spec, Coalition c);

/// Tables for several targets from a single pass over all coalitions.
std::vector<PayoffTable> evaluate_targets(CoalitionEvaluator& ev, std::span<const Target> targets,
                                          const ExactOptions& opt = {});

PayoffTable evaluate_all(CoalitionEvaluator& ev, const Target& target, const ExactOptions& opt = {});
PayoffTable evaluate_all(const GameSpec& spec, const ExactOptions& opt = {});

/// One table per grid abscissa; coalitions are trained once and only the
/// curve read-out changes between slices.
std::vector<PayoffTable> evaluate_slices(CoalitionEvaluator& ev, TargetKind slice_kind, std::span<const double> grid,
                                         Strategy strategy, const ExactOptions& opt = {});

/// Audit trail: mask, member names joined by '|', payoff.
void write_payoff_csv(const PayoffTable& t, const std::string& path);

}  // namespace shaprob
