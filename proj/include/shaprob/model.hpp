#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "shaprob/dataset.hpp"
#include "shaprob/kernels.hpp"

namespace shaprob {

/// Per-instance output of a scoring model. `probability` is the posterior of
/// the positive class; `log_odds` is the same quantity before the logistic
/// map and is what ranking code should consume (it does not saturate).
struct ScoreVector {
  std::vector<double> probability;
  std::vector<double> log_odds;

  std::size_t size() const { return probability.size(); }
};

class ScoringModel {
 public:
  virtual ~ScoringModel() = default;
  virtual std::size_t arity() const = 0;
  virtual ScoreVector score(const Dataset& test) const = 0;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::unique_ptr<ScoringModel> fit(const Dataset& train) const = 0;
};

/// Gaussian naive Bayes with maximum-likelihood class moments.
///
/// Every variance is smoothed by 1e-9 times the largest per-feature variance
/// of the whole training set and floored at 1e-12. With zero features the
/// model reduces to the class prior.
class GaussianNb final : public ScoringModel {
 public:
  static constexpr double kSmoothingFactor = 1e-9;
  static constexpr double kVarianceFloor = 1e-12;

  struct FeatureMoments {
    std::array<double, 2> mean;      // [negative, positive]
    std::array<double, 2> variance;  // smoothed
  };

  GaussianNb(std::array<double, 2> priors, std::vector<FeatureMoments> moments);

  std::size_t arity() const override { return moments_.size(); }
  ScoreVector score(const Dataset& test) const override;
  ScoreVector score(const Dataset& test, const kernels::KernelTable& k) const;

  const std::array<double, 2>& priors() const { return priors_; }
  const std::vector<FeatureMoments>& moments() const { return moments_; }

 private:
  std::array<double, 2> priors_;
  std::vector<FeatureMoments> moments_;
  std::vector<kernels::GaussianRatio> ratios_;
  double prior_log_odds_;
};

GaussianNb train_gnb(const Dataset& train);
GaussianNb train_gnb(const Dataset& train, const kernels::KernelTable& k);

ScoreVector score(const GaussianNb& m, const Dataset& test);

class GaussianNbLearner final : public Learner {
 public:
  std::unique_ptr<ScoringModel> fit(const Dataset& train) const override;
};

}  // namespace shaprob
