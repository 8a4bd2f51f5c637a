#include "shaprob/model.hpp"

#include <algorithm>
#include <cmath>

#include "shaprob/error.hpp"

namespace shaprob {

GaussianNb::GaussianNb(std::array<double, 2> priors, std::vector<FeatureMoments> moments)
    : priors_(priors), moments_(std::move(moments)) {
  if (!(priors_[0] > 0.0 && priors_[1] > 0.0) || std::abs(priors_[0] + priors_[1] - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "class priors must be positive and sum to 1");
  ratios_.reserve(moments_.size());
  for (const auto& m : moments_) {
    if (!(m.variance[0] > 0.0 && m.variance[1] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "variances must be positive");
    ratios_.push_back({m.mean[1], 0.5 / m.variance[1], m.mean[0], 0.5 / m.variance[0],
                       0.5 * std::log(m.variance[0] / m.variance[1])});
  }
  prior_log_odds_ = std::log(priors_[1]) - std::log(priors_[0]);
}

ScoreVector GaussianNb::score(const Dataset& test) const { return score(test, kernels::active()); }

ScoreVector GaussianNb::score(const Dataset& test, const kernels::KernelTable& k) const {
  if (test.features() != arity())
    throw Error(ErrorKind::ArityMismatch, "model expects " + std::to_string(arity()) + " features, got " +
                                              std::to_string(test.features()));
  ScoreVector out;
  out.log_odds.assign(test.rows(), prior_log_odds_);
  for (std::size_t j = 0; j < arity(); ++j) k.accumulate_log_ratio(test.column(j), ratios_[j], out.log_odds);
  out.probability.resize(test.rows());
  std::transform(out.log_odds.begin(), out.log_odds.end(), out.probability.begin(), [](double z) {
    // Logistic map written to avoid overflow on either tail.
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  });
  return out;
}

GaussianNb train_gnb(const Dataset& train) { return train_gnb(train, kernels::active()); }

GaussianNb train_gnb(const Dataset& train, const kernels::KernelTable& k) {
  if (!train.has_both_classes())
    throw Error(ErrorKind::SingleClassTrainingSet, "training set needs at least one row of each class");

  const auto labels = train.labels();
  const double n = static_cast<double>(train.rows());
  const double n_pos = static_cast<double>(train.positives());
  const std::array<double, 2> counts{n - n_pos, n_pos};

  std::vector<GaussianNb::FeatureMoments> moments(train.features());
  double max_variance = 0.0;
  std::array<std::vector<double>, 2> by_class;
  for (std::size_t j = 0; j < train.features(); ++j) {
    const auto col = train.column(j);
    const double overall_mean = k.sum(col) / n;
    max_variance = std::max(max_variance, k.sum_squared_deviation(col, overall_mean) / n);

    by_class[0].clear();
    by_class[1].clear();
    for (std::size_t r = 0; r < col.size(); ++r) by_class[labels[r]].push_back(col[r]);
    for (int c = 0; c < 2; ++c) {
      const double mean = k.sum(by_class[c]) / counts[c];
      moments[j].mean[c] = mean;
      moments[j].variance[c] = k.sum_squared_deviation(by_class[c], mean) / counts[c];
    }
  }

  const double epsilon = GaussianNb::kSmoothingFactor * max_variance;
  for (auto& m : moments)
    for (auto& v : m.variance) v = std::max(v + epsilon, GaussianNb::kVarianceFloor);

  return GaussianNb({counts[0] / n, counts[1] / n}, std::move(moments));
}

ScoreVector score(const GaussianNb& m, const Dataset& test) { return m.score(test); }

std::unique_ptr<ScoringModel> GaussianNbLearner::fit(const Dataset& train) const {
  return std::make_unique<GaussianNb>(train_gnb(train));
}

}  // namespace shaprob
