#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lfp/basis.hpp"

namespace lfp {

/// Sobolev-type ellipsoid sum_k a_k^2 theta_k^2 <= C^2 with trigonometric
/// weights a_1 = 0, a_{2k} = a_{2k+1} = (2k)^alpha.
class EllipsoidSpec {
public:
  /// Throws ValidationError unless alpha > 0 and C > 0.
  EllipsoidSpec(double alpha, double radius);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }

  /// a_k for one-based k.
  [[nodiscard]] double weight(std::size_t k) const;

  /// sum_k a_k^2 theta_k^2 over the given (one-based) coefficients.
  [[nodiscard]] double energy(std::span<const double> theta) const;
  [[nodiscard]] bool contains(std::span<const double> theta, double slack = 0.0) const;

  friend bool operator==(const EllipsoidSpec&, const EllipsoidSpec&) = default;

private:
  double alpha_;
  double radius_;
};

/// (a_1, ..., a_K).
[[nodiscard]] std::vector<double> ellipsoid_weights(const EllipsoidSpec& spec, std::size_t K);

/// Diagonal weights c_k in [0, 1]; coefficients past weights().size() are dropped.
class ShrinkageProfile {
public:
  ShrinkageProfile() = default;
  /// Throws ValidationError when any weight leaves [0, 1].
  explicit ShrinkageProfile(std::vector<double> weights);

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

  /// (c_1 y_1, ..., c_T y_T) for T = size(); y is zero-padded if shorter.
  [[nodiscard]] std::vector<double> apply(std::span<const double> y) const;

  friend bool operator==(const ShrinkageProfile&, const ShrinkageProfile&) = default;

private:
  std::vector<double> weights_;
};

/// Root mu of eps^2 sum_k a_k (mu - a_k)_+ = C^2, found by bisection to
/// relative tolerance 1e-10 (in practice ~1e-12). A nonzero `truncation`
/// restricts the sum to k <= truncation, i.e. the ellipsoid cut to its first
/// coordinates; the root then exists only if some a_k > 0 in range.
[[nodiscard]] double pinsker_mu(const EllipsoidSpec& spec, double epsilon,
                                std::size_t truncation = 0);

/// Left side of the Pinsker equation, eps^2 sum_k a_k (mu - a_k)_+.
[[nodiscard]] double pinsker_water_level(const EllipsoidSpec& spec, double epsilon, double mu,
                                         std::size_t truncation = 0);

/// c_k = (1 - a_k/mu)_+ for k = 1..K.
[[nodiscard]] ShrinkageProfile pinsker_profile(const EllipsoidSpec& spec, double mu, std::size_t K);

/// theta_k = (1 - a_k/mu)_+ y_k. Output keeps y's length and epsilon.
[[nodiscard]] CoefficientVector pinsker_shrink(const CoefficientVector& y, const EllipsoidSpec& spec,
                                               double mu);

/// (1 - (n-2) eps^2 / |y|^2)_+ y. Throws DomainError for n <= 2 or eps <= 0.
/// A zero input maps to zero.
[[nodiscard]] std::vector<double> james_stein(std::span<const double> y, double epsilon);

/// Common factor applied by james_stein.
[[nodiscard]] double james_stein_factor(std::span<const double> y, double epsilon);

/// One-based inclusive index range [first, last].
struct IndexRange {
  std::size_t first;
  std::size_t last;
  [[nodiscard]] std::size_t size() const noexcept { return last - first + 1; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Dyadic blocks B_j = {2^j, ..., 2^{j+1}-1} for j = 0..J-1 with a
/// pass-through limit L.
class BlockPartition {
public:
  /// Throws DomainError unless L < J; J is capped at 62.
  BlockPartition(std::size_t pass_through, std::size_t levels);

  [[nodiscard]] std::size_t pass_through() const noexcept { return pass_through_; }
  [[nodiscard]] std::size_t levels() const noexcept { return levels_; }
  [[nodiscard]] IndexRange block(std::size_t j) const;
  [[nodiscard]] std::vector<IndexRange> blocks() const;
  /// 2^J - 1, the last index that is not forced to zero.
  [[nodiscard]] std::size_t covered() const noexcept { return (std::size_t{1} << levels_) - 1; }

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

private:
  std::size_t pass_through_;
  std::size_t levels_;
};

[[nodiscard]] BlockPartition dyadic_blocks(std::size_t L, std::size_t J);

/// Blockwise James-Stein: blocks j <= L copied, L < j < J shrunk with
/// n = 2^j and eps = y.epsilon(), indices >= 2^J zeroed. Blocks of size <= 2
/// in the shrinkage range pass through. Output has max(y.size(), 2^J - 1)
/// entries. Throws DomainError when y.epsilon() is not positive.
[[nodiscard]] CoefficientVector bjs_estimate(const CoefficientVector& y,
                                             const BlockPartition& partition);

/// floor(log2 N), the BJS level count used for regression data of length N.
[[nodiscard]] std::size_t bjs_levels_for(std::size_t N);

} // namespace lfp
