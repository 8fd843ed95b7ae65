#include "lfp/shrinkage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "lfp/errors.hpp"

namespace lfp {

EllipsoidSpec::EllipsoidSpec(double alpha, double radius) : alpha_(alpha), radius_(radius) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw ValidationError("EllipsoidSpec: alpha must be a positive finite number");
  }
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw ValidationError("EllipsoidSpec: C must be a positive finite number");
  }
}

double EllipsoidSpec::weight(std::size_t k) const {
  if (k == 0) throw DomainError("EllipsoidSpec::weight: indices start at 1");
  if (k == 1) return 0.0;
  return std::pow(static_cast<double>(2 * harmonic_of(k)), alpha_);
}

double EllipsoidSpec::energy(std::span<const double> theta) const {
  double acc = 0.0;
  for (std::size_t k = 2; k <= theta.size(); ++k) {
    const double a = weight(k);
    acc += a * a * theta[k - 1] * theta[k - 1];
  }
  return acc;
}

bool EllipsoidSpec::contains(std::span<const double> theta, double slack) const {
  return energy(theta) <= radius_ * radius_ + slack;
}

std::vector<double> ellipsoid_weights(const EllipsoidSpec& spec, std::size_t K) {
  std::vector<double> a(K);
  for (std::size_t k = 1; k <= K; ++k) a[k - 1] = spec.weight(k);
  return a;
}

ShrinkageProfile::ShrinkageProfile(std::vector<double> weights) : weights_(std::move(weights)) {
  for (double c : weights_) {
    if (!(c >= 0.0 && c <= 1.0)) throw ValidationError("ShrinkageProfile: weights must lie in [0, 1]");
  }
}

std::vector<double> ShrinkageProfile::apply(std::span<const double> y) const {
  std::vector<double> out(weights_.size(), 0.0);
  for (std::size_t k = 0; k < weights_.size() && k < y.size(); ++k) out[k] = weights_[k] * y[k];
  return out;
}

double pinsker_water_level(const EllipsoidSpec& spec, double epsilon, double mu,
                           std::size_t truncation) {
  double acc = 0.0;
  // a_k is nondecreasing, so the sum stops at the first a_k >= mu.
  for (std::size_t k = 2; truncation == 0 || k <= truncation; ++k) {
    const double a = spec.weight(k);
    if (a >= mu) break;
    acc += a * (mu - a);
  }
  return epsilon * epsilon * acc;
}

double pinsker_mu(const EllipsoidSpec& spec, double epsilon, std::size_t truncation) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("pinsker_mu: epsilon must be positive");
  }
  if (truncation == 1) throw DomainError("pinsker_mu: truncation must keep some a_k > 0");
  const double target = spec.radius() * spec.radius();
  double lo = 0.0;
  double hi = spec.weight(2);
  while (pinsker_water_level(spec, epsilon, hi, truncation) < target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("pinsker_mu: bracket diverged");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (pinsker_water_level(spec, epsilon, mid, truncation) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ShrinkageProfile pinsker_profile(const EllipsoidSpec& spec, double mu, std::size_t K) {
  if (!(mu > 0.0)) throw DomainError("pinsker_profile: mu must be positive");
  std::vector<double> c(K);
  for (std::size_t k = 1; k <= K; ++k) c[k - 1] = std::max(0.0, 1.0 - spec.weight(k) / mu);
  return ShrinkageProfile(std::move(c));
}

CoefficientVector pinsker_shrink(const CoefficientVector& y, const EllipsoidSpec& spec, double mu) {
  if (!(mu > 0.0)) throw DomainError("pinsker_shrink: mu must be positive");
  std::vector<double> out(y.coeffs().begin(), y.coeffs().end());
  for (std::size_t k = 1; k <= out.size(); ++k) {
    const double a = spec.weight(k);
    out[k - 1] = a >= mu ? 0.0 : (1.0 - a / mu) * out[k - 1];
  }
  return CoefficientVector(std::move(out), y.epsilon());
}

double james_stein_factor(std::span<const double> y, double epsilon) {
  const std::size_t n = y.size();
  if (n <= 2) throw DomainError("james_stein: defined only for n > 2, got n = " + std::to_string(n));
  if (!(epsilon > 0.0)) throw DomainError("james_stein: epsilon must be positive");
  double norm2 = 0.0;
  for (double v : y) norm2 += v * v;
  if (norm2 == 0.0) return 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(n - 2) * epsilon * epsilon / norm2);
}

std::vector<double> james_stein(std::span<const double> y, double epsilon) {
  const double factor = james_stein_factor(y, epsilon);
  std::vector<double> out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), [factor](double v) { return factor * v; });
  return out;
}

BlockPartition::BlockPartition(std::size_t pass_through, std::size_t levels)
    : pass_through_(pass_through), levels_(levels) {
  if (levels_ == 0) throw DomainError("BlockPartition: J must be positive");
  if (pass_through_ >= levels_) {
    throw DomainError("BlockPartition: need L < J, got L = " + std::to_string(pass_through_) +
                      ", J = " + std::to_string(levels_));
  }
  if (levels_ > 62) throw DomainError("BlockPartition: J must not exceed 62");
}

IndexRange BlockPartition::block(std::size_t j) const {
  if (j >= levels_) throw DomainError("BlockPartition::block: j must be below J");
  const std::size_t first = std::size_t{1} << j;
  return {first, 2 * first - 1};
}

std::vector<IndexRange> BlockPartition::blocks() const {
  std::vector<IndexRange> out;
  out.reserve(levels_);
  for (std::size_t j = 0; j < levels_; ++j) out.push_back(block(j));
  return out;
}

BlockPartition dyadic_blocks(std::size_t L, std::size_t J) { return BlockPartition(L, J); }

CoefficientVector bjs_estimate(const CoefficientVector& y, const BlockPartition& partition) {
  const double eps = y.epsilon();
  if (!(eps > 0.0)) throw DomainError("bjs_estimate: y.epsilon() must be positive");
  const std::size_t covered = partition.covered();
  std::vector<double> out(std::max(y.size(), covered), 0.0);
  std::vector<double> block;
  for (std::size_t j = 0; j < partition.levels(); ++j) {
    const IndexRange range = partition.block(j);
    block.assign(range.size(), 0.0);
    for (std::size_t k = range.first; k <= range.last; ++k) block[k - range.first] = y.at(k);
    double factor = 1.0;
    if (j > partition.pass_through() && block.size() > 2) factor = james_stein_factor(block, eps);
    for (std::size_t k = range.first; k <= range.last; ++k) out[k - 1] = factor * block[k - range.first];
  }
  return CoefficientVector(std::move(out), eps);
}

std::size_t bjs_levels_for(std::size_t N) {
  if (N < 2) throw DomainError("bjs_levels_for: N must be at least 2");
  return static_cast<std::size_t>(std::bit_width(N) - 1);
}

} // namespace lfp
