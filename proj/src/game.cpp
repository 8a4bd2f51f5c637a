#include "shaprob/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shaprob/csv.hpp"
#include "shaprob/error.hpp"
#include "shaprob/parallel.hpp"

namespace shaprob {

std::string Target::tag() const {
  switch (kind) {
    case TargetKind::Auc: return "AUC";
    case TargetKind::Auprc: return "AUPRC";
    case TargetKind::RocSlice:
    case TargetKind::PrcSlice: {
      std::ostringstream os;
      os << (kind == TargetKind::RocSlice ? "ROC@" : "PRC@") << abscissa << '/' << to_string(strategy);
      return os.str();
    }
  }
  return "?";
}

void Target::validate() const {
  if (is_slice() && !(abscissa >= 0.0 && abscissa <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "slice abscissa must lie in [0,1]");
}

double payoff_from_outcome(const Target& t, const CoalitionOutcome& o) {
  if (o.degenerate()) return 0.0;
  switch (t.kind) {
    case TargetKind::Auc: return o.roc->auc() - 0.5;
    case TargetKind::RocSlice: return estimate_tpr(*o.roc, t.abscissa, t.strategy) - t.abscissa;
    case TargetKind::Auprc: return o.pr->auprc() - 0.5;
    case TargetKind::PrcSlice: return estimate_precision(*o.pr, t.abscissa, t.strategy) - 0.5;
  }
  return 0.0;
}

CoalitionEvaluator::CoalitionEvaluator(Dataset train, Dataset test, std::shared_ptr<const Learner> learner)
    : CoalitionEvaluator(std::move(train), std::move(test), std::move(learner), false) {
  caching_ = players() <= kDefaultCacheLimit;
}

CoalitionEvaluator::CoalitionEvaluator(Dataset train, Dataset test, std::shared_ptr<const Learner> learner,
                                       bool cache_outcomes)
    : train_(std::move(train)), test_(std::move(test)), learner_(std::move(learner)), caching_(cache_outcomes) {
  if (!learner_) learner_ = std::make_shared<GaussianNbLearner>();
  if (train_.feature_names() != test_.feature_names())
    throw Error(ErrorKind::ArityMismatch, "train and test must share feature names and order");
  if (train_.features() > kMaxPlayers)
    throw Error(ErrorKind::TooManyFeaturesForExactMode, "at most 63 features can be represented");
  if (!train_.has_both_classes())
    throw Error(ErrorKind::SingleClassTrainingSet, "training partition needs both classes");
  if (!test_.has_both_classes()) throw Error(ErrorKind::SingleClassLabels, "test partition needs both classes");
}

std::shared_ptr<const CoalitionOutcome> CoalitionEvaluator::compute(Coalition c) {
  const auto train = project(train_, c);
  const auto test = project(test_, c);
  const auto model = learner_->fit(train);
  trainings_.fetch_add(1);
  const auto scores = model->score(test);

  auto out = std::make_shared<CoalitionOutcome>();
  try {
    out->roc.emplace(roc_from_scores(scores.log_odds, test.labels()));
    out->pr.emplace(pr_from_scores(scores.log_odds, test.labels()));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateCurve) throw;
    out->roc.reset();
    out->pr.reset();
    out->warning = "coalition mask " + std::to_string(c.mask()) + ": " + e.what() + "; payoff set to baseline";
  }
  return out;
}

std::shared_ptr<const CoalitionOutcome> CoalitionEvaluator::outcome(Coalition c) {
  if (c.is_empty()) throw Error(ErrorKind::InvalidArgument, "the empty coalition is never trained");
  if (!c.fits(players())) throw Error(ErrorKind::IndexOutOfRange, "coalition exceeds the feature count");
  if (!caching_) {
    auto out = compute(c);
    if (!out->warning.empty()) add_warning(out->warning);
    return out;
  }
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    auto& s = cache_[c.mask()];
    if (!s) s = std::make_shared<Slot>();
    slot = s;
  }
  std::call_once(slot->once, [&] { slot->value = compute(c); });
  return slot->value;
}

double CoalitionEvaluator::payoff(const Target& t, Coalition c) {
  t.validate();
  if (c.is_empty()) return 0.0;
  return payoff_from_outcome(t, *outcome(c));
}

void CoalitionEvaluator::prefetch(std::span<const Coalition> coalitions, unsigned threads) {
  if (!caching_) return;
  parallel_for(coalitions.size(), threads, [&](std::size_t i) {
    if (!coalitions[i].is_empty()) outcome(coalitions[i]);
  });
}

void CoalitionEvaluator::add_warning(std::string w) {
  std::lock_guard lock(mutex_);
  transient_warnings_.emplace_back(0, std::move(w));
}

std::vector<std::string> CoalitionEvaluator::warnings() const {
  std::vector<std::pair<std::uint64_t, std::string>> found;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [mask, slot] : cache_)
      if (slot->value && !slot->value->warning.empty()) found.emplace_back(mask, slot->value->warning);
    found.insert(found.end(), transient_warnings_.begin(), transient_warnings_.end());
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<std::string> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

PayoffTable::PayoffTable(std::vector<std::string> names, Target target)
    : names_(std::move(names)), target_(target) {
  if (names_.size() > kMaxPlayers) throw Error(ErrorKind::TooManyFeaturesForExactMode, "too many players");
  const std::size_t size = std::size_t{1} << names_.size();
  values_.assign(size, 0.0);
  known_.assign(size, false);
  known_[0] = true;  // the empty coalition is the random classifier: exactly 0
}

void PayoffTable::set(Coalition c, double value) {
  if (!c.fits(players())) throw Error(ErrorKind::IndexOutOfRange, "coalition exceeds the table");
  if (c.is_empty()) {
    if (value != 0.0) throw Error(ErrorKind::InvalidArgument, "the empty coalition's payoff is fixed at 0");
    return;
  }
  if (!std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "payoffs must be finite");
  values_[c.mask()] = value;
  known_[c.mask()] = true;
}

bool PayoffTable::has(Coalition c) const { return c.fits(players()) && known_[c.mask()]; }

double PayoffTable::at(Coalition c) const {
  if (!has(c)) throw Error(ErrorKind::IncompleteTable, "no payoff for coalition mask " + std::to_string(c.mask()));
  return values_[c.mask()];
}

bool PayoffTable::complete() const { return std::find(known_.begin(), known_.end(), false) == known_.end(); }

namespace {

void check_exact_cap(std::size_t n, const ExactOptions& opt) {
  if (n > opt.max_features)
    throw Error(ErrorKind::TooManyFeaturesForExactMode,
                std::to_string(n) + " features exceed the exact-mode cap of " + std::to_string(opt.max_features) +
                    "; use permutation sampling");
}

}  // namespace

std::vector<PayoffTable> evaluate_targets(CoalitionEvaluator& ev, std::span<const Target> targets,
                                          const ExactOptions& opt) {
  for (const auto& t : targets) t.validate();
  check_exact_cap(ev.players(), opt);
  const std::size_t count = std::size_t{1} << ev.players();
  const std::size_t k = targets.size();
  // Row-major [mask][target]; each worker writes only its own mask's row.
  std::vector<double> values(count * k, 0.0);
  parallel_for(count - 1, opt.threads, [&](std::size_t i) {
    const std::size_t mask = i + 1;
    const auto out = ev.outcome(Coalition(mask));
    for (std::size_t t = 0; t < k; ++t) values[mask * k + t] = payoff_from_outcome(targets[t], *out);
  });

  std::vector<PayoffTable> tables;
  tables.reserve(k);
  const auto warnings = ev.warnings();
  for (std::size_t t = 0; t < k; ++t) {
    PayoffTable table(ev.feature_names(), targets[t]);
    for (std::size_t mask = 1; mask < count; ++mask) table.set(Coalition(mask), values[mask * k + t]);
    table.evaluations = ev.trainings();
    table.warnings = warnings;
    tables.push_back(std::move(table));
  }
  return tables;
}

double payoff(const GameSpec& spec, Coalition c) {
  spec.target.validate();
  if (c.is_empty()) return 0.0;
  CoalitionEvaluator ev(spec.train, spec.test);
  return ev.payoff(spec.target, c);
}

PayoffTable evaluate_all(CoalitionEvaluator& ev, const Target& target, const ExactOptions& opt) {
  return std::move(evaluate_targets(ev, std::span(&target, 1), opt).front());
}

PayoffTable evaluate_all(const GameSpec& spec, const ExactOptions& opt) {
  check_exact_cap(spec.train.features(), opt);
  CoalitionEvaluator ev(spec.train, spec.test);
  return evaluate_all(ev, spec.target, opt);
}

std::vector<PayoffTable> evaluate_slices(CoalitionEvaluator& ev, TargetKind slice_kind, std::span<const double> grid,
                                         Strategy strategy, const ExactOptions& opt) {
  if (slice_kind != TargetKind::RocSlice && slice_kind != TargetKind::PrcSlice)
    throw Error(ErrorKind::InvalidArgument, "slice evaluation needs a ROC or PRC slice target");
  for (double g : grid)
    if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidArgument, "grid values must lie in [0,1]");
  std::vector<Target> targets;
  targets.reserve(grid.size());
  for (double g : grid) targets.push_back(Target{slice_kind, g, strategy});
  return evaluate_targets(ev, targets, opt);
}

void write_payoff_csv(const PayoffTable& t, const std::string& path) {
  csv::Table out;
  out.header = {"mask", "members", "payoff"};
  const std::uint64_t count = std::uint64_t{1} << t.players();
  for (std::uint64_t m = 0; m < count; ++m) {
    const Coalition c(m);
    std::string members;
    for (auto i : c.members()) {
      if (!members.empty()) members += '|';
      members += t.feature_names()[i];
    }
    out.rows.push_back({std::to_string(m), members, t.has(c) ? csv::number(t.at(c)) : std::string{}});
  }
  csv::write(out, path);
}

}  // namespace shaprob
