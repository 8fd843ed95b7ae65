#include "lfp/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lfp/errors.hpp"

namespace lfp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// phi_k at x = l/grid, with the phase h*l reduced modulo grid exactly.
double basis_on_grid(std::size_t k, std::size_t l, std::size_t grid) {
  if (k == 1) return 1.0;
  const std::size_t h = harmonic_of(k);
  const std::size_t phase = (h % grid) * (l % grid) % grid;
  const double angle = kTwoPi * static_cast<double>(phase) / static_cast<double>(grid);
  return (k % 2 == 0) ? kSqrt2 * std::cos(angle) : kSqrt2 * std::sin(angle);
}

} // namespace

SampledSignal::SampledSignal(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ValidationError("SampledSignal: N must be at least 1");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw ValidationError("SampledSignal: non-finite sample");
  }
}

SampledSignal SampledSignal::head(std::size_t n) const {
  if (n > samples_.size()) {
    throw ValidationError("SampledSignal::head: requested " + std::to_string(n) +
                          " samples but only " + std::to_string(samples_.size()) +
                          " are available");
  }
  return SampledSignal(std::vector<double>(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n)));
}

CoefficientVector::CoefficientVector(std::vector<double> coeffs, double epsilon)
    : coeffs_(std::move(coeffs)), epsilon_(epsilon) {
  if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) {
    throw ValidationError("CoefficientVector: epsilon must be finite and nonnegative");
  }
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw ValidationError("CoefficientVector: non-finite coefficient");
  }
}

double CoefficientVector::at(std::size_t k) const {
  if (k == 0) throw DomainError("CoefficientVector::at: indices start at 1");
  return k <= coeffs_.size() ? coeffs_[k - 1] : 0.0;
}

std::size_t nyquist_coefficient_cap(std::size_t N) {
  // Largest 2T+1 with 2(2T+1) < N.
  if (N < 3) return 0;
  const std::size_t half_floor = (N - 1) / 2; // largest m with 2m < N
  return (half_floor % 2 == 1) ? half_floor : half_floor - 1;
}

double trig_basis_eval(std::size_t k, double x) {
  if (k == 0) throw DomainError("trig_basis_eval: k must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("trig_basis_eval: x must lie in [0, 1]");
  if (k == 1) return 1.0;
  const double angle = kTwoPi * static_cast<double>(harmonic_of(k)) * x;
  return (k % 2 == 0) ? kSqrt2 * std::cos(angle) : kSqrt2 * std::sin(angle);
}

TrigBasisTable::TrigBasisTable(std::size_t grid_size, std::size_t count, bool enforce_nyquist)
    : grid_(grid_size), count_(count) {
  if (count_ == 0) throw DomainError("TrigBasisTable: coefficient count must be >= 1");
  if (grid_ == 0) throw DomainError("TrigBasisTable: grid size must be >= 1");
  if (enforce_nyquist && 2 * count_ >= grid_) {
    throw FrequencyOverflow("coefficient count " + std::to_string(count_) +
                            " must be below N/2 = " + std::to_string(grid_) + "/2");
  }
  table_.resize(count_ * grid_);
  for (std::size_t k = 1; k <= count_; ++k) {
    for (std::size_t l = 0; l < grid_; ++l) table_[(k - 1) * grid_ + l] = basis_on_grid(k, l, grid_);
  }
}

CoefficientVector TrigBasisTable::analyze(std::span<const double> samples, double sigma) const {
  if (samples.size() != grid_) {
    throw ValidationError("TrigBasisTable::analyze: expected " + std::to_string(grid_) +
                          " samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> y(count_, 0.0);
  const double inv_n = 1.0 / static_cast<double>(grid_);
  for (std::size_t k = 0; k < count_; ++k) {
    const double* row = table_.data() + k * grid_;
    double acc = 0.0;
    for (std::size_t l = 0; l < grid_; ++l) acc += samples[l] * row[l];
    y[k] = acc * inv_n;
  }
  return CoefficientVector(std::move(y), sigma / std::sqrt(static_cast<double>(grid_)));
}

std::vector<double> TrigBasisTable::synthesize(std::span<const double> coeffs) const {
  std::vector<double> out(grid_, 0.0);
  const std::size_t used = std::min(count_, coeffs.size());
  for (std::size_t k = 0; k < used; ++k) {
    const double c = coeffs[k];
    if (c == 0.0) continue;
    const double* row = table_.data() + k * grid_;
    for (std::size_t l = 0; l < grid_; ++l) out[l] += c * row[l];
  }
  return out;
}

CoefficientVector forward_transform(const SampledSignal& signal, std::size_t T) {
  return forward_transform_count(signal, coefficient_count(T));
}

CoefficientVector forward_transform_count(const SampledSignal& signal, std::size_t count) {
  const TrigBasisTable table(signal.size(), count);
  return table.analyze(signal.samples());
}

SampledSignal reconstruct(const CoefficientVector& coeffs, std::size_t grid_size) {
  if (grid_size == 0) throw DomainError("reconstruct: grid_size must be >= 1");
  std::vector<double> out(grid_size, 0.0);
  const auto c = coeffs.coeffs();
  for (std::size_t k = 1; k <= c.size(); ++k) {
    if (c[k - 1] == 0.0) continue;
    for (std::size_t l = 0; l < grid_size; ++l) out[l] += c[k - 1] * basis_on_grid(k, l, grid_size);
  }
  return SampledSignal(std::move(out));
}

double coeff_l2_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double coeff_l2_distance(const CoefficientVector& a, const CoefficientVector& b) {
  return coeff_l2_distance(a.coeffs(), b.coeffs());
}

} // namespace lfp
