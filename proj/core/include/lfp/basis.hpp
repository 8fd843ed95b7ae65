#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lfp {

/// One channel's samples Y_0..Y_{N-1} taken on the grid l/N.
class SampledSignal {
public:
  SampledSignal() = default;
  /// Throws ValidationError when empty or when any sample is not finite.
  explicit SampledSignal(std::vector<double> samples);

  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
  [[nodiscard]] double operator[](std::size_t l) const { return samples_[l]; }

  /// First n samples; throws ValidationError when n exceeds size().
  [[nodiscard]] SampledSignal head(std::size_t n) const;

  friend bool operator==(const SampledSignal&, const SampledSignal&) = default;

private:
  std::vector<double> samples_;
};

/// Sequence-model coefficients with noise level epsilon.
///
/// Storage is dense and zero-based, but the public indexing of the model is
/// one-based: coeffs()[0] holds y_1 (the mean coefficient), coeffs()[2h-1]
/// and coeffs()[2h] hold the cosine and sine coefficients of harmonic h.
class CoefficientVector {
public:
  CoefficientVector() = default;
  explicit CoefficientVector(std::vector<double> coeffs, double epsilon = 0.0);

  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::vector<double>& mutable_coeffs() noexcept { return coeffs_; }

  /// One-based access; returns 0 for k beyond size() (implicit zero padding).
  [[nodiscard]] double at(std::size_t k) const;

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

private:
  std::vector<double> coeffs_;
  double epsilon_ = 0.0;
};

/// Harmonic of basis index k: 0 for the constant, h for 2h and 2h+1.
[[nodiscard]] constexpr std::size_t harmonic_of(std::size_t k) noexcept { return k / 2; }

/// Number of coefficients 2T+1 for truncation T.
[[nodiscard]] constexpr std::size_t coefficient_count(std::size_t T) noexcept { return 2 * T + 1; }

/// Largest odd coefficient count whose frequencies stay strictly below N/2.
[[nodiscard]] std::size_t nyquist_coefficient_cap(std::size_t N);

/// phi_1 = 1, phi_{2k} = sqrt2 cos(2 pi k x), phi_{2k+1} = sqrt2 sin(2 pi k x).
[[nodiscard]] double trig_basis_eval(std::size_t k, double x);

/// Precomputed basis values phi_k(l/N) for k = 1..count and l = 0..N-1.
///
/// Angles are reduced modulo N in integer arithmetic before evaluation, so the
/// table is exact up to one rounding of sin/cos.
class TrigBasisTable {
public:
  /// Throws FrequencyOverflow unless count < N/2. Synthesis-only tables may
  /// pass enforce_nyquist = false.
  TrigBasisTable(std::size_t grid_size, std::size_t count, bool enforce_nyquist = true);

  [[nodiscard]] std::size_t grid_size() const noexcept { return grid_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] double value(std::size_t k, std::size_t l) const {
    return table_[(k - 1) * grid_ + l];
  }

  /// y_k = (1/N) sum_l Y_l phi_k(l/N), epsilon set to sigma/sqrt(N).
  [[nodiscard]] CoefficientVector analyze(std::span<const double> samples,
                                          double sigma = 1.0) const;
  /// f(l/N) = sum_k c_k phi_k(l/N) over the first min(count, c.size()) terms.
  [[nodiscard]] std::vector<double> synthesize(std::span<const double> coeffs) const;

private:
  std::size_t grid_;
  std::size_t count_;
  std::vector<double> table_;
};

/// Coefficients k = 1..2T+1 of the signal, epsilon = 1/sqrt(N).
/// Throws FrequencyOverflow when 2T+1 >= N/2.
[[nodiscard]] CoefficientVector forward_transform(const SampledSignal& signal, std::size_t T);

/// Same as forward_transform but with an explicit coefficient count.
[[nodiscard]] CoefficientVector forward_transform_count(const SampledSignal& signal,
                                                        std::size_t count);

/// Evaluates sum_k coeffs_k phi_k on the grid l/grid_size, l = 0..grid_size-1.
[[nodiscard]] SampledSignal reconstruct(const CoefficientVector& coeffs, std::size_t grid_size);

/// Euclidean distance with the shorter vector zero-padded. Equals the L2
/// distance between the reconstructed functions by orthonormality.
[[nodiscard]] double coeff_l2_distance(const CoefficientVector& a, const CoefficientVector& b);
[[nodiscard]] double coeff_l2_distance(std::span<const double> a, std::span<const double> b);

} // namespace lfp
