#include "lfp/pca.hpp"

#include <string>

#include "lfp/errors.hpp"

namespace lfp {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

// Gram-Schmidt over the columns of Q; columns that collapse are replaced by
// the first standard basis vector that completes the set.
void orthonormalize_columns(Eigen::MatrixXd& Q) {
  const Eigen::Index d = Q.rows();
  Eigen::Index fallback = 0;
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
    }
    double norm = Q.col(j).norm();
    while (norm < 1e-10 && fallback < d) {
      Q.col(j) = Eigen::VectorXd::Unit(d, fallback++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
      }
      norm = Q.col(j).norm();
    }
    Q.col(j) /= norm;
  }
}

} // namespace

PCAProjection pca_fit(const Eigen::MatrixXd& samples, std::size_t P) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (n < 2) throw DomainError("pca_fit: need at least 2 samples");
  if (P == 0 || static_cast<Eigen::Index>(P) > std::min(n - 1, d)) {
    throw DomainError("pca_fit: P = " + std::to_string(P) + " must lie in 1..min(n-1, d) = " +
                      std::to_string(std::min(n - 1, d)));
  }
  const auto p = static_cast<Eigen::Index>(P);
  PCAProjection out;
  out.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - out.mean.transpose();
  const double denom = static_cast<double>(n - 1);

  Eigen::MatrixXd axes(d, p);
  out.variances.resize(p);
  if (d <= n) {
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericError("pca_fit: eigendecomposition failed");
    for (Eigen::Index i = 0; i < p; ++i) {
      axes.col(i) = eig.eigenvectors().col(d - 1 - i);
      out.variances(i) = std::max(0.0, eig.eigenvalues()(d - 1 - i));
    }
  } else {
    const Eigen::MatrixXd gram = centered * centered.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericError("pca_fit: eigendecomposition failed");
    for (Eigen::Index i = 0; i < p; ++i) {
      const double lambda = std::max(0.0, eig.eigenvalues()(n - 1 - i));
      axes.col(i) = centered.transpose() * eig.eigenvectors().col(n - 1 - i);
      if (lambda > 0.0) axes.col(i) /= std::sqrt(lambda);
      out.variances(i) = lambda / denom;
    }
    orthonormalize_columns(axes);
  }
  for (Eigen::Index i = 0; i < p; ++i) fix_sign(axes.col(i));
  out.components = axes.transpose();
  return out;
}

Eigen::VectorXd pca_apply(const PCAProjection& projection, const Eigen::VectorXd& x) {
  if (x.size() != projection.components.cols()) {
    throw DomainError("pca_apply: feature dimension mismatch");
  }
  return projection.components * (x - projection.mean);
}

Eigen::MatrixXd pca_apply_rows(const PCAProjection& projection, const Eigen::MatrixXd& samples) {
  if (samples.cols() != projection.components.cols()) {
    throw DomainError("pca_apply: feature dimension mismatch");
  }
  return (samples.rowwise() - projection.mean.transpose()) * projection.components.transpose();
}

} // namespace lfp
