#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lfp/basis.hpp"
#include "lfp/random.hpp"
#include "lfp/shrinkage.hpp"

namespace lfp {

/// i.i.d. N(0, sigma^2) sample noise.
struct NoiseModel {
  double sigma = 1.0;
  void validate() const;
};

/// Draws theta inside the ellipsoid: theta_k = g_k / max(a_k, 1) rescaled so
/// that sum a_k^2 theta_k^2 = r C^2 with r ~ U[0.2, 1]. Length 2T+1.
[[nodiscard]] CoefficientVector sample_sobolev(const EllipsoidSpec& spec, std::size_t T,
                                               std::uint64_t seed);

/// K disjoint function classes. Class k (one-based) is the ball of radius
/// within_spread around prototypes()[k-1], intersected with the ellipsoid.
class ClassModel {
public:
  /// Validates K >= 2, prototype lengths 2T+1, membership in the ellipsoid,
  /// within_spread < s/2 and prototype distances > 2s + 2 within_spread.
  ClassModel(EllipsoidSpec spec, std::size_t T, double separation, double within_spread,
             std::vector<CoefficientVector> prototypes);

  [[nodiscard]] std::size_t num_classes() const noexcept { return prototypes_.size(); }
  [[nodiscard]] std::size_t truncation() const noexcept { return T_; }
  [[nodiscard]] const EllipsoidSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] double separation() const noexcept { return separation_; }
  [[nodiscard]] double within_spread() const noexcept { return within_spread_; }
  [[nodiscard]] const std::vector<CoefficientVector>& prototypes() const noexcept {
    return prototypes_;
  }
  [[nodiscard]] const CoefficientVector& prototype(std::size_t label) const;

  /// min over pairs of prototype distances.
  [[nodiscard]] double min_prototype_distance() const;
  /// L2 distance from f to the class set: (|f - prototype| - within_spread)_+.
  [[nodiscard]] double distance_to_class(std::span<const double> f, std::size_t label) const;

private:
  EllipsoidSpec spec_;
  std::size_t T_;
  double separation_;
  double within_spread_;
  std::vector<CoefficientVector> prototypes_;
};

/// Rejection-samples K prototypes via sample_sobolev until every pairwise
/// distance exceeds 2s + 2 within_spread. Throws ValidationError reporting
/// the best separation seen when max_attempts draws do not suffice.
[[nodiscard]] ClassModel make_class_model(std::size_t K, const EllipsoidSpec& spec, std::size_t T,
                                          double separation, double within_spread,
                                          std::uint64_t seed, std::size_t max_attempts = 20000);

/// Classes that share all harmonic magnitudes: class k rotates every
/// (cos, sin) pair of one base prototype by 2 pi (k-1)/K. The base is a
/// sample_sobolev draw rescaled to 0.999 of the ellipsoid boundary. Separation is set
/// from the realized prototype geometry.
[[nodiscard]] ClassModel make_phase_class_model(std::size_t K, const EllipsoidSpec& spec,
                                                std::size_t T, double within_spread,
                                                std::uint64_t seed);

/// Control construction: class k scales every harmonic pair of one base
/// prototype by k/K, keeping phases and the mean coefficient fixed.
[[nodiscard]] ClassModel make_magnitude_class_model(std::size_t K, const EllipsoidSpec& spec,
                                                    std::size_t T, double within_spread,
                                                    std::uint64_t seed);

/// A uniform draw from the within_spread ball around the class prototype,
/// pulled back into the ellipsoid along the perturbation when needed.
[[nodiscard]] CoefficientVector perturb_within_class(const ClassModel& model, std::size_t label,
                                                     Rng& rng);

struct Trial {
  std::vector<SampledSignal> channels;
  std::size_t label = 0;   // 1..K
  std::size_t session = 0; // 1..sessions

  friend bool operator==(const Trial&, const Trial&) = default;
};

/// One trial: per channel an independent within-class function of the
/// label's class, sampled on l/N, plus N(0, sigma^2) noise.
[[nodiscard]] Trial generate_trial(const ClassModel& model, std::size_t label,
                                   std::size_t channels, std::size_t N, const NoiseModel& noise,
                                   std::uint64_t seed);

struct LabeledDataset {
  std::size_t N = 0;
  std::size_t channels = 0;
  std::size_t num_classes = 0;
  std::uint64_t seed = 0;
  std::vector<Trial> trials;
  /// Free-form generator parameters, serialized into the metadata sidecar.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Checks shared N and channel count and labels in 1..K.
  void validate() const;
  [[nodiscard]] std::size_t num_sessions() const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

/// Balanced dataset ordered label-major; trial i goes to session
/// (i mod sessions) + 1. Trial i uses the seed derive_seed(seed, {i}).
[[nodiscard]] LabeledDataset generate_dataset(const ClassModel& model,
                                              std::size_t trials_per_class,
                                              std::size_t channels, std::size_t N,
                                              std::size_t sessions, const NoiseModel& noise,
                                              std::uint64_t seed);

} // namespace lfp
