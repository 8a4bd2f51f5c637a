#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shaprob/error.hpp"
#include "shaprob/kernels.hpp"
#include "shaprob/model.hpp"
#include "support/support.hpp"

using namespace shaprob;

namespace {

/// Direct evaluation of the Gaussian posterior from class densities.
std::vector<double> posterior_oracle(const Dataset& train, const Dataset& test) {
  const std::size_t n = train.features();
  double max_var = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double m = 0.0, v = 0.0;
    for (double x : train.column(j)) m += x;
    m /= static_cast<double>(train.rows());
    for (double x : train.column(j)) v += (x - m) * (x - m);
    max_var = std::max(max_var, v / static_cast<double>(train.rows()));
  }
  const double eps = 1e-9 * max_var;
  std::array<double, 2> count{};
  for (auto y : train.labels()) count[y] += 1.0;
  std::vector<std::array<double, 2>> mean(n), var(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int c = 0; c < 2; ++c) {
      double m = 0.0, v = 0.0;
      for (std::size_t r = 0; r < train.rows(); ++r)
        if (train.labels()[r] == c) m += train.at(r, j);
      m /= count[c];
      for (std::size_t r = 0; r < train.rows(); ++r)
        if (train.labels()[r] == c) v += (train.at(r, j) - m) * (train.at(r, j) - m);
      mean[j][c] = m;
      var[j][c] = std::max(v / count[c] + eps, 1e-12);
    }
  }
  std::vector<double> out;
  for (std::size_t r = 0; r < test.rows(); ++r) {
    std::array<double, 2> logp{};
    for (int c = 0; c < 2; ++c) {
      logp[c] = std::log(count[c] / static_cast<double>(train.rows()));
      for (std::size_t j = 0; j < n; ++j) {
        const double d = test.at(r, j) - mean[j][c];
        logp[c] += -0.5 * std::log(2 * std::numbers::pi * var[j][c]) - d * d / (2 * var[j][c]);
      }
    }
    out.push_back(1.0 / (1.0 + std::exp(logp[0] - logp[1])));
  }
  return out;
}

}  // namespace

TEST(Gnb, HandMomentsAndEqualPriors) {
  Dataset train({{0, 2, 10, 12}}, {0, 0, 1, 1}, {"x"});
  const auto m = train_gnb(train);
  EXPECT_DOUBLE_EQ(m.moments()[0].mean[0], 1.0);
  EXPECT_DOUBLE_EQ(m.moments()[0].mean[1], 11.0);
  EXPECT_DOUBLE_EQ(m.priors()[0], 0.5);
  EXPECT_DOUBLE_EQ(m.priors()[1], 0.5);
  // Population variance 1 plus smoothing 1e-9 * 26.
  EXPECT_NEAR(m.moments()[0].variance[0], 1.0 + 26e-9, 1e-15);
}

TEST(Gnb, MatchesDensityOracle) {
  const auto train = testing_support::synthetic(300, {1.2, -0.4, 0.0, 2.5, 0.7}, 21, 0.3);
  const auto test = testing_support::synthetic(80, {1.2, -0.4, 0.0, 2.5, 0.7}, 22, 0.3);
  const auto scores = train_gnb(train).score(test);
  const auto oracle = posterior_oracle(train, test);
  ASSERT_EQ(scores.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_NEAR(scores.probability[i], oracle[i], 1e-12);
    EXPECT_NEAR(1.0 / (1.0 + std::exp(-scores.log_odds[i])), scores.probability[i], 1e-15);
  }
}

TEST(Gnb, PriorOnlyModel) {
  Dataset train({}, {0, 1, 1, 1}, {});
  const auto m = train_gnb(train);
  Dataset test({}, {0, 1}, {});
  const auto s = m.score(test);
  for (double p : s.probability) EXPECT_NEAR(p, 0.75, 1e-15);
  Dataset balanced({}, {0, 1}, {});
  for (double p : train_gnb(balanced).score(test).probability) EXPECT_DOUBLE_EQ(p, 0.5);
}

TEST(Gnb, ConfidentAtPositiveMeanAndNeutralAtMidpoint) {
  Dataset train({{0, 2, 10, 12}}, {0, 0, 1, 1}, {"x"});
  const auto m = train_gnb(train);
  Dataset test({{11, 6}}, {1, 0}, {"x"});
  const auto s = m.score(test);
  EXPECT_GT(s.probability[0], 0.99);
  EXPECT_NEAR(s.probability[1], 0.5, 1e-9);
}

TEST(Gnb, Errors) {
  Dataset ones({{1, 2}}, {1, 1}, {"x"});
  try {
    train_gnb(ones);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingleClassTrainingSet);
  }
  const auto m = train_gnb(Dataset({{0, 1}}, {0, 1}, {"x"}));
  try {
    m.score(Dataset({{0, 1}, {1, 2}}, {0, 1}, {"x", "y"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
}

TEST(Gnb, ConstantFeatureLeavesScoresUnchanged) {
  const auto train = testing_support::synthetic(200, {1.0, 0.5}, 4);
  const auto test = testing_support::synthetic(60, {1.0, 0.5}, 5);
  auto with_constant = [](const Dataset& d) {
    std::vector<std::vector<double>> cols{{d.column(0).begin(), d.column(0).end()},
                                          {d.column(1).begin(), d.column(1).end()},
                                          std::vector<double>(d.rows(), 3.25)};
    return Dataset(cols, {d.labels().begin(), d.labels().end()}, {"f0", "f1", "c"});
  };
  const auto base = train_gnb(train).score(test);
  const auto more = train_gnb(with_constant(train)).score(with_constant(test));
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(base.probability[i], more.probability[i], 1e-9);
}

TEST(Gnb, ExtremeInputsStayInUnitInterval) {
  Dataset train({{0, 0.001, 1, 1.001}}, {0, 0, 1, 1}, {"x"});
  const auto m = train_gnb(train);
  const auto s = m.score(Dataset({{-1e6, 1e6, 0.5}}, {0, 1, 0}, {"x"}));
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GE(s.probability[i], 0.0);
    EXPECT_LE(s.probability[i], 1.0);
    EXPECT_FALSE(std::isnan(s.log_odds[i]));
  }
}

TEST(Gnb, RowOrderInvariance) {
  const auto train = testing_support::synthetic(100, {1.0, 0.2}, 8);
  const auto test = testing_support::synthetic(30, {1.0, 0.2}, 9);
  std::vector<std::size_t> rev(test.rows());
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
  const auto m = train_gnb(train);
  const auto a = m.score(test);
  const auto b = m.score(test.select_rows(rev));
  for (std::size_t i = 0; i < rev.size(); ++i) EXPECT_EQ(a.log_odds[i], b.log_odds[rev[i]]);
}

TEST(Kernels, EveryAvailableIsaMatchesScalar) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0.0, 3.0);
  const kernels::GaussianRatio g{0.7, 0.31, -0.4, 0.12, 0.05};
  const auto& ref = kernels::scalar_kernels();
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (!kernels::isa_available(isa)) continue;
    const auto& k = kernels::kernels_for(isa);
    EXPECT_EQ(k.isa, isa);
    for (std::size_t len = 0; len < 70; ++len) {
      std::vector<double> x(len);
      for (auto& v : x) v = nd(rng);
      EXPECT_NEAR(k.sum(x), ref.sum(x), 1e-12 * (1.0 + len)) << to_string(isa) << " len " << len;
      EXPECT_NEAR(k.sum_squared_deviation(x, 0.3), ref.sum_squared_deviation(x, 0.3), 1e-11 * (1.0 + len));
      std::vector<double> a(len, 1.0), b(len, 1.0);
      k.accumulate_log_ratio(x, g, a);
      ref.accumulate_log_ratio(x, g, b);
      for (std::size_t i = 0; i < len; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * (1.0 + std::abs(b[i])));
    }
  }
}

TEST(Kernels, EqualInputsGiveBitIdenticalOutputs) {
  // Lanes and tail must agree so duplicated columns score identically.
  for (auto isa : {kernels::Isa::Scalar, kernels::Isa::Avx2, kernels::Isa::Neon}) {
    const auto& k = kernels::kernels_for(isa);
    const kernels::GaussianRatio g{0.7, 0.31, -0.4, 0.12, 0.05};
    std::vector<double> x(11, 1.2345), acc(11, 0.0);
    k.accumulate_log_ratio(x, g, acc);
    for (double v : acc) EXPECT_EQ(v, acc.front());
  }
}

TEST(Kernels, UnavailableIsaFallsBackToScalar) {
  EXPECT_TRUE(kernels::isa_available(kernels::Isa::Scalar));
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon})
    if (!kernels::isa_available(isa)) EXPECT_EQ(kernels::kernels_for(isa).isa, kernels::Isa::Scalar);
}

TEST(Kernels, ModelAgreesAcrossIsas) {
  const auto train = testing_support::synthetic(257, {1.0, -0.3, 0.8}, 31);
  const auto test = testing_support::synthetic(67, {1.0, -0.3, 0.8}, 32);
  const auto ref = train_gnb(train, kernels::scalar_kernels()).score(test, kernels::scalar_kernels());
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (!kernels::isa_available(isa)) continue;
    const auto& k = kernels::kernels_for(isa);
    const auto got = train_gnb(train, k).score(test, k);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got.log_odds[i], ref.log_odds[i], 1e-9);
  }
}
