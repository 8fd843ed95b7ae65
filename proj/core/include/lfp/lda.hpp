#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lfp {

enum class PriorMode { empirical, uniform };

/// Gaussian classifier with class means and one pooled covariance.
struct LDAModel {
  std::vector<std::size_t> labels; // class ids, ascending; row i of means is labels[i]
  Eigen::MatrixXd means;           // K x d
  Eigen::MatrixXd covariance;      // pooled within-class covariance + ridge I
  Eigen::VectorXd priors;
  double ridge = 0.0;
  // delta_k(x) = x . weights.col(k) + offsets(k)
  Eigen::MatrixXd weights;
  Eigen::VectorXd offsets;

  [[nodiscard]] std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(means.cols());
  }
};

struct LdaPrediction {
  std::size_t label = 0;
  Eigen::VectorXd scores; // aligned with LDAModel::labels
};

/// Pooled covariance uses the maximum-likelihood divisor n, so duplicating the
/// training set leaves the model unchanged. Requires at least 2 classes with
/// at least 2 samples each (ValidationError); a covariance that is not
/// positive definite after the ridge raises NumericError.
[[nodiscard]] LDAModel lda_train(const Eigen::MatrixXd& samples, std::span<const std::size_t> labels,
                                 double ridge, PriorMode priors = PriorMode::empirical);

/// argmax_k x' S^-1 m_k - m_k' S^-1 m_k / 2 + log pi_k, lowest label on ties.
[[nodiscard]] LdaPrediction lda_predict(const LDAModel& model, const Eigen::VectorXd& x);

} // namespace lfp
