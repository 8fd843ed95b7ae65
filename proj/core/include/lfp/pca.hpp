#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace lfp {

/// Mean-centred projection onto the leading principal axes.
struct PCAProjection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components; // P x d, orthonormal rows
  Eigen::VectorXd variances;  // nonincreasing sample-covariance eigenvalues

  [[nodiscard]] std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(components.rows());
  }
  [[nodiscard]] std::size_t input_dimension() const noexcept {
    return static_cast<std::size_t>(components.cols());
  }
};

/// Fits on the rows of `samples`. Requires at least 2 rows and
/// P <= min(rows - 1, cols); throws DomainError otherwise. When cols exceeds
/// rows the eigenproblem is solved on the rows x rows Gram matrix.
/// Each component's largest-magnitude entry is made positive.
[[nodiscard]] PCAProjection pca_fit(const Eigen::MatrixXd& samples, std::size_t P);

[[nodiscard]] Eigen::VectorXd pca_apply(const PCAProjection& projection, const Eigen::VectorXd& x);

/// Row-wise pca_apply.
[[nodiscard]] Eigen::MatrixXd pca_apply_rows(const PCAProjection& projection,
                                             const Eigen::MatrixXd& samples);

} // namespace lfp
