#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "shaprob/dataset.hpp"
#include "shaprob/error.hpp"
#include "shaprob/random.hpp"
#include "support/support.hpp"

using namespace shaprob;

namespace {

Dataset tiny() { return Dataset({{1, 2, 3, 4}, {5, 6, 7, 8}}, {0, 1, 0, 1}, {"a", "b"}); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Dataset, RejectsMalformedConstruction) {
  EXPECT_EQ(kind_of([] { Dataset({}, {}, {}); }), ErrorKind::EmptyDataset);
  EXPECT_EQ(kind_of([] { Dataset({{1, 2}}, {0, 2}, {"a"}); }), ErrorKind::NonBinaryLabel);
  EXPECT_EQ(kind_of([] { Dataset({{1, 2}, {3, 4}}, {0, 1}, {"a", "a"}); }), ErrorKind::DuplicateFeatureName);
  EXPECT_EQ(kind_of([] { Dataset({{1, 2}}, {0, 1}, {"a", "b"}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { Dataset({{1}}, {0, 1}, {"a"}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { Dataset({{1, std::numeric_limits<double>::quiet_NaN()}}, {0, 1}, {"a"}); }),
            ErrorKind::NonNumericCell);
}

TEST(Dataset, ZeroColumnsIsLegal) {
  Dataset d({}, {0, 1, 1}, {});
  EXPECT_EQ(d.features(), 0u);
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.positives(), 2u);
}

TEST(Dataset, ParsesCsv) {
  const auto d = parse_csv(" x , y ,class\n1.5,2,0\n\"3\",4e1,1\n", "class");
  ASSERT_EQ(d.features(), 2u);
  EXPECT_EQ(d.feature_names()[0], "x");
  EXPECT_EQ(d.feature_names()[1], "y");
  EXPECT_DOUBLE_EQ(d.at(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(d.at(1, 1), 40.0);
  EXPECT_EQ(d.labels()[1], 1);
}

TEST(Dataset, CsvErrors) {
  EXPECT_EQ(kind_of([] { parse_csv("a,b\n1,0\n", "class"); }), ErrorKind::MissingColumn);
  EXPECT_EQ(kind_of([] { parse_csv("a,class\nx,0\n1,1\n", "class"); }), ErrorKind::NonNumericCell);
  EXPECT_EQ(kind_of([] { parse_csv("a,class\n1,0\n2,3\n", "class"); }), ErrorKind::NonBinaryLabel);
  EXPECT_EQ(kind_of([] { parse_csv("a,class\n", "class"); }), ErrorKind::EmptyDataset);
  EXPECT_EQ(kind_of([] { parse_csv("a,a,class\n1,2,0\n1,2,1\n", "class"); }), ErrorKind::DuplicateFeatureName);
  EXPECT_EQ(kind_of([] { parse_csv("a,class\n1,0\n2,0\n", "class"); }), ErrorKind::SingleClassLabels);
  EXPECT_EQ(kind_of([] { parse_csv("a,class\n1,0,7\n2,1\n", "class"); }), ErrorKind::NonNumericCell);
}

TEST(Dataset, CsvRoundTripIsExact) {
  const auto d = testing_support::synthetic(50, {1.0, 0.3, -0.2}, 3);
  const auto dir = testing_support::temp_dir("dataset_roundtrip");
  write_csv(d, dir / "d.csv", "label");
  EXPECT_EQ(load_csv(dir / "d.csv", "label"), d);
}

TEST(Dataset, SplitSizesOrderAndDeterminism) {
  const auto d = testing_support::synthetic(101, {1.0}, 11);
  const auto [train, test] = split(d, {0.8, 7});
  EXPECT_EQ(train.rows(), 80u);
  EXPECT_EQ(test.rows(), 21u);
  const auto [train2, test2] = split(d, {0.8, 7});
  EXPECT_EQ(train, train2);
  EXPECT_EQ(test, test2);
  const auto [train3, test3] = split(d, {0.8, 8});
  EXPECT_NE(train, train3);

  // Partitions are disjoint, cover every row and keep original order.
  std::vector<double> all(d.column(0).begin(), d.column(0).end());
  std::vector<double> seen(train.column(0).begin(), train.column(0).end());
  seen.insert(seen.end(), test.column(0).begin(), test.column(0).end());
  std::sort(all.begin(), all.end());
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(all, seen);
  auto position = [&](double v) { return std::find(d.column(0).begin(), d.column(0).end(), v) - d.column(0).begin(); };
  for (std::size_t r = 1; r < train.rows(); ++r) EXPECT_LT(position(train.at(r - 1, 0)), position(train.at(r, 0)));
}

TEST(Dataset, SplitDegenerateCases) {
  EXPECT_EQ(kind_of([] { split(tiny(), {0.1, 0}); }), ErrorKind::DegenerateSplit);
  EXPECT_EQ(kind_of([] { split(tiny(), {1.0, 0}); }), ErrorKind::InvalidArgument);
  // Only one positive: one partition always lacks it.
  Dataset lone({{1, 2, 3, 4}}, {0, 0, 0, 1}, {"a"});
  EXPECT_EQ(kind_of([&] { split(lone, {0.5, 0}); }), ErrorKind::DegenerateSplit);
}

TEST(Dataset, ProjectKeepsMembersInOrder) {
  const auto d = tiny();
  const auto p = project(d, Coalition{1});
  ASSERT_EQ(p.features(), 1u);
  EXPECT_EQ(p.feature_names()[0], "b");
  EXPECT_EQ(project(d, Coalition::empty()).features(), 0u);
  EXPECT_EQ(project(d, Coalition::grand(2)), d);
  EXPECT_EQ(kind_of([&] { project(d, Coalition{2}); }), ErrorKind::IndexOutOfRange);
}

TEST(Dataset, SubsampleHitsTargetFraction) {
  const auto d = testing_support::synthetic(1000, {1.0}, 5);
  const auto s = subsample_imbalance(d, {0.1, 3});
  const double share = static_cast<double>(s.positives()) / static_cast<double>(s.rows());
  EXPECT_EQ(s.negatives(), d.negatives());
  EXPECT_LE(std::abs(share - 0.1), 1.0 / static_cast<double>(s.rows()));
  EXPECT_EQ(subsample_imbalance(d, {0.1, 3}), s);
  // Negatives are trimmed when the target exceeds the current share.
  const auto heavy = subsample_imbalance(d, {0.8, 3});
  EXPECT_EQ(heavy.positives(), d.positives());
  EXPECT_LE(std::abs(static_cast<double>(heavy.positives()) / static_cast<double>(heavy.rows()) - 0.8),
            1.0 / static_cast<double>(heavy.rows()));
}

TEST(Dataset, SubsampleAtCurrentShareIsIdentity) {
  Dataset d({{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0}, {"a"});
  EXPECT_EQ(subsample_imbalance(d, {0.2, 9}), d);
}

TEST(Dataset, SubsampleErrors) {
  EXPECT_EQ(kind_of([] { subsample_imbalance(tiny(), {0.0, 0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { subsample_imbalance(tiny(), {0.01, 0}); }), ErrorKind::InfeasibleProportion);
}

TEST(Dataset, DuplicateAndDrop) {
  const auto d = tiny();
  const auto dup = duplicate_feature(d, 0, "a2");
  ASSERT_EQ(dup.features(), 3u);
  EXPECT_TRUE(std::equal(dup.column(2).begin(), dup.column(2).end(), d.column(0).begin()));
  EXPECT_EQ(kind_of([&] { duplicate_feature(d, 0, "b"); }), ErrorKind::DuplicateFeatureName);
  EXPECT_EQ(kind_of([&] { duplicate_feature(d, 5, "z"); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(drop_features(dup, {"a2"}), d);
  EXPECT_EQ(kind_of([&] { drop_features(d, {"zzz"}); }), ErrorKind::IndexOutOfRange);
}

TEST(Random, UniformBelowAndShuffle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_below(rng, 7), 7u);
  const auto p = shuffled_indices(50, 4);
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(p, shuffled_indices(50, 4));
  EXPECT_NE(p, shuffled_indices(50, 5));
}

TEST(Random, ShuffleIsRoughlyUniform) {
  // Each of the 6 orders of 3 items should appear about 1/6 of the time.
  std::mt19937_64 rng(99);
  std::vector<int> counts(6, 0);
  for (int t = 0; t < 60000; ++t) {
    std::vector<std::size_t> v{0, 1, 2};
    shuffle(v, rng);
    counts[static_cast<std::size_t>(v[0] * 2 + (v[1] > v[2] ? 1 : 0))]++;
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}
