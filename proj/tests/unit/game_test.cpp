#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "shaprob/error.hpp"
#include "shaprob/game.hpp"
#include "shaprob/parallel.hpp"
#include "support/support.hpp"

using namespace shaprob;

namespace {

std::pair<Dataset, Dataset> game_data(std::size_t n, std::uint64_t seed = 1) {
  std::vector<double> effects;
  for (std::size_t j = 0; j < n; ++j) effects.push_back(1.5 / static_cast<double>(j + 1));
  return split(testing_support::synthetic(240, effects, seed), {0.8, seed});
}

/// Scores NaN whenever the coalition includes the feature named "bad".
class PoisonLearner final : public Learner {
 public:
  std::unique_ptr<ScoringModel> fit(const Dataset& train) const override {
    const auto& names = train.feature_names();
    const bool poisoned = std::find(names.begin(), names.end(), "bad") != names.end();
    return std::make_unique<Model>(train_gnb(train), poisoned);
  }

 private:
  struct Model final : ScoringModel {
    Model(GaussianNb m, bool p) : inner(std::move(m)), poisoned(p) {}
    std::size_t arity() const override { return inner.arity(); }
    ScoreVector score(const Dataset& test) const override {
      auto s = inner.score(test);
      if (poisoned) s.log_odds.assign(s.size(), std::numeric_limits<double>::quiet_NaN());
      return s;
    }
    GaussianNb inner;
    bool poisoned;
  };
};

}  // namespace

TEST(Target, TagsAndBaselines) {
  EXPECT_EQ(Target::auc().tag(), "AUC");
  EXPECT_EQ(Target::roc_slice(0.2).tag(), "ROC@0.2/interpolation");
  EXPECT_DOUBLE_EQ(Target::roc_slice(0.2).baseline(), 0.2);
  EXPECT_DOUBLE_EQ(Target::prc_slice(0.2).baseline(), 0.5);
  EXPECT_DOUBLE_EQ(Target::auprc().baseline(), 0.5);
  EXPECT_THROW(Target::roc_slice(1.5).validate(), Error);
}

TEST(Game, EmptyCoalitionIsZeroWithoutTraining) {
  auto [train, test] = game_data(3);
  CoalitionEvaluator ev(train, test);
  for (const auto& t : {Target::auc(), Target::auprc(), Target::roc_slice(0.3), Target::prc_slice(0.7)})
    EXPECT_EQ(ev.payoff(t, Coalition::empty()), 0.0);
  EXPECT_EQ(ev.trainings(), 0u);
}

TEST(Game, PayoffsMatchDirectComputation) {
  auto [train, test] = game_data(3);
  CoalitionEvaluator ev(train, test);
  const Coalition c{0, 2};
  const auto scores = train_gnb(project(train, c)).score(project(test, c));
  const auto r = roc_from_scores(scores.log_odds, test.labels());
  const auto p = pr_from_scores(scores.log_odds, test.labels());
  EXPECT_EQ(ev.payoff(Target::auc(), c), r.auc() - 0.5);
  EXPECT_EQ(ev.payoff(Target::auprc(), c), p.auprc() - 0.5);
  EXPECT_EQ(ev.payoff(Target::roc_slice(0.2), c), estimate_tpr(r, 0.2, Strategy::Interpolation) - 0.2);
  EXPECT_EQ(ev.payoff(Target::prc_slice(0.4, Strategy::Optimistic), c),
            estimate_precision(p, 0.4, Strategy::Optimistic) - 0.5);
  EXPECT_EQ(payoff(GameSpec{Target::auc(), train, test}, c), r.auc() - 0.5);
}

TEST(Game, EvaluateAllCoversEveryCoalition) {
  auto [train, test] = game_data(4);
  CoalitionEvaluator ev(train, test);
  const auto t = evaluate_all(ev, Target::auc());
  EXPECT_TRUE(t.complete());
  EXPECT_EQ(t.values().size(), 16u);
  EXPECT_EQ(t.at(Coalition::empty()), 0.0);
  EXPECT_EQ(t.evaluations, 15u);
  for (double v : t.values()) {
    EXPECT_GE(v, -0.5);
    EXPECT_LE(v, 0.5);
  }
}

TEST(Game, SmallestGame) {
  auto [train, test] = game_data(1);
  const auto t = evaluate_all(GameSpec{Target::auc(), train, test});
  ASSERT_EQ(t.values().size(), 2u);
  EXPECT_EQ(t.values()[0], 0.0);
  EXPECT_GT(t.values()[1], 0.0);
}

TEST(Game, SlicesShareTrainedModels) {
  auto [train, test] = game_data(4);
  CoalitionEvaluator ev(train, test);
  const auto grid = uniform_grid(101);
  const auto tables = evaluate_slices(ev, TargetKind::RocSlice, grid, Strategy::Interpolation);
  EXPECT_EQ(tables.size(), 101u);
  EXPECT_EQ(ev.trainings(), 15u);
  evaluate_all(ev, Target::auc());
  EXPECT_EQ(ev.trainings(), 15u);
  for (const auto& t : tables)
    for (double v : t.values()) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
}

TEST(Game, UncachedEvaluatorTrainsOncePerPass) {
  auto [train, test] = game_data(4);
  CoalitionEvaluator cached(train, test, nullptr, true);
  CoalitionEvaluator uncached(train, test, nullptr, false);
  const auto grid = uniform_grid(11);
  const auto a = evaluate_slices(cached, TargetKind::PrcSlice, grid, Strategy::Pessimistic);
  const auto b = evaluate_slices(uncached, TargetKind::PrcSlice, grid, Strategy::Pessimistic);
  EXPECT_EQ(uncached.trainings(), 15u);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_TRUE(std::equal(a[k].values().begin(), a[k].values().end(), b[k].values().begin()));
}

TEST(Game, SingleSliceGridMatchesDirectEvaluation) {
  auto [train, test] = game_data(3);
  CoalitionEvaluator ev(train, test);
  const double g[] = {0.2};
  const auto tables = evaluate_slices(ev, TargetKind::RocSlice, g, Strategy::Interpolation);
  const auto direct = evaluate_all(ev, Target::roc_slice(0.2));
  EXPECT_TRUE(std::equal(tables[0].values().begin(), tables[0].values().end(), direct.values().begin()));
}

TEST(Game, GrandSlicePayoffIsEstimateMinusFpr) {
  auto [train, test] = game_data(3);
  CoalitionEvaluator ev(train, test);
  const auto grand = Coalition::grand(3);
  const auto& roc = *ev.outcome(grand)->roc;
  for (double f : {0.0, 0.13, 0.5, 1.0})
    EXPECT_EQ(ev.payoff(Target::roc_slice(f), grand), estimate_tpr(roc, f, Strategy::Interpolation) - f);
}

TEST(Game, ThreadedEvaluationIsIdentical) {
  auto [train, test] = game_data(5);
  CoalitionEvaluator a(train, test);
  CoalitionEvaluator b(train, test);
  const auto ta = evaluate_all(a, Target::auprc(), {20, 1});
  const auto tb = evaluate_all(b, Target::auprc(), {20, 4});
  EXPECT_TRUE(std::equal(ta.values().begin(), ta.values().end(), tb.values().begin()));
  EXPECT_EQ(b.trainings(), 31u);
}

TEST(Game, ExactModeCap) {
  std::vector<double> effects(21, 0.1);
  auto [train, test] = split(testing_support::synthetic(80, effects, 3), {0.8, 3});
  CoalitionEvaluator ev(train, test);
  try {
    evaluate_all(ev, Target::auc());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyFeaturesForExactMode);
  }
  EXPECT_EQ(ev.trainings(), 0u);
}

TEST(Game, DegenerateCoalitionFallsBackToBaselineWithWarning) {
  auto [train, test] = game_data(2);
  auto rename = [](const Dataset& d) {
    std::vector<std::vector<double>> cols{{d.column(0).begin(), d.column(0).end()},
                                          {d.column(1).begin(), d.column(1).end()}};
    return Dataset(cols, {d.labels().begin(), d.labels().end()}, {"good", "bad"});
  };
  CoalitionEvaluator ev(rename(train), rename(test), std::make_shared<PoisonLearner>());
  const auto t = evaluate_all(ev, Target::auc());
  EXPECT_GT(t.at(Coalition{0}), 0.0);
  EXPECT_EQ(t.at(Coalition{1}), 0.0);
  EXPECT_EQ(t.at(Coalition{0, 1}), 0.0);
  EXPECT_EQ(t.warnings.size(), 2u);
}

TEST(Game, EvaluatorRejectsInconsistentPartitions) {
  auto [train, test] = game_data(2);
  try {
    CoalitionEvaluator ev(train, project(test, Coalition{0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
  Dataset ones({{1, 2}, {3, 4}}, {1, 1}, train.feature_names());
  EXPECT_THROW(CoalitionEvaluator(ones, test), Error);
  EXPECT_THROW(CoalitionEvaluator(train, ones), Error);
}

TEST(PayoffTableTest, Contract) {
  PayoffTable t({"a", "b"}, Target::auc());
  EXPECT_TRUE(t.has(Coalition::empty()));
  EXPECT_FALSE(t.complete());
  try {
    t.at(Coalition{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompleteTable);
  }
  EXPECT_THROW(t.set(Coalition::empty(), 0.1), Error);
  EXPECT_THROW(t.set(Coalition{0}, std::nan("")), Error);
  t.set(Coalition{0}, 0.1);
  t.set(Coalition{1}, 0.2);
  t.set(Coalition{0, 1}, 0.3);
  EXPECT_TRUE(t.complete());
}

TEST(PayoffTableTest, CsvAuditTrail) {
  PayoffTable t({"a", "b"}, Target::auc());
  t.set(Coalition{0}, 0.1);
  t.set(Coalition{1}, 0.2);
  t.set(Coalition{0, 1}, 0.3);
  const auto dir = testing_support::temp_dir("payoff_csv");
  write_payoff_csv(t, (dir / "p.csv").string());
  EXPECT_EQ(testing_support::slurp(dir / "p.csv"), "mask,members,payoff\n0,,0\n1,a,0.1\n2,b,0.2\n3,a|b,0.3\n");
}

TEST(Parallel, CoversEveryIndexAndRethrowsLowestFailure) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) EXPECT_EQ(h, 1);
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 0) throw std::runtime_error("zero");
      if (i % 10 == 5) throw std::runtime_error("other");
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "zero");
  }
}
