#include "lfp/lda.hpp"

#include <cmath>
#include <map>
#include <string>

#include "lfp/errors.hpp"

namespace lfp {

LDAModel lda_train(const Eigen::MatrixXd& samples, std::span<const std::size_t> labels, double ridge,
                   PriorMode priors) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw ValidationError("lda_train: sample and label counts differ");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ValidationError("lda_train: ridge must be >= 0");

  std::map<std::size_t, std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < n; ++i) members[labels[static_cast<std::size_t>(i)]].push_back(i);
  if (members.size() < 2) throw ValidationError("lda_train: need at least 2 classes");
  for (const auto& [label, rows] : members) {
    if (rows.size() < 2) {
      throw ValidationError("lda_train: class " + std::to_string(label) +
                            " has fewer than 2 samples");
    }
  }

  LDAModel model;
  const auto K = static_cast<Eigen::Index>(members.size());
  model.means.resize(K, d);
  model.priors.resize(K);
  model.ridge = ridge;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  Eigen::Index k = 0;
  for (const auto& [label, rows] : members) {
    model.labels.push_back(label);
    Eigen::MatrixXd block(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t r = 0; r < rows.size(); ++r) block.row(static_cast<Eigen::Index>(r)) = samples.row(rows[r]);
    const Eigen::RowVectorXd mean = block.colwise().mean();
    model.means.row(k) = mean;
    const Eigen::MatrixXd centered = block.rowwise() - mean;
    scatter.noalias() += centered.transpose() * centered;
    model.priors(k) = priors == PriorMode::empirical
                          ? static_cast<double>(rows.size()) / static_cast<double>(n)
                          : 1.0 / static_cast<double>(K);
    ++k;
  }
  model.covariance = scatter / static_cast<double>(n);
  model.covariance.diagonal().array() += ridge;

  const Eigen::LLT<Eigen::MatrixXd> chol(model.covariance);
  if (chol.info() != Eigen::Success || !(chol.rcond() > 1e-13)) {
    throw NumericError(
        "lda_train: pooled covariance is singular; use a nonzero ridge or reduce the dimension "
        "with PCA first");
  }
  model.weights = chol.solve(model.means.transpose()); // d x K
  model.offsets.resize(K);
  for (Eigen::Index j = 0; j < K; ++j) {
    model.offsets(j) = -0.5 * model.means.row(j).dot(model.weights.col(j)) + std::log(model.priors(j));
  }
  return model;
}

LdaPrediction lda_predict(const LDAModel& model, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != model.dimension()) {
    throw DomainError("lda_predict: feature dimension " + std::to_string(x.size()) +
                      " does not match model dimension " + std::to_string(model.dimension()));
  }
  LdaPrediction out;
  out.scores = model.weights.transpose() * x + model.offsets;
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < out.scores.size(); ++j) {
    if (out.scores(j) > out.scores(best)) best = j;
  }
  out.label = model.labels[static_cast<std::size_t>(best)];
  return out;
}

} // namespace lfp
