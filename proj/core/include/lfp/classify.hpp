#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lfp/basis.hpp"
#include "lfp/lda.hpp"
#include "lfp/pca.hpp"
#include "lfp/shrinkage.hpp"
#include "lfp/synth.hpp"

namespace lfp {

/// Nearest class set in L2: argmin_k (|fhat - prototype_k| - within_spread)_+,
/// lowest label on ties. Returns a one-based label.
[[nodiscard]] std::size_t min_distance_decode(std::span<const double> fhat, const ClassModel& classes);
[[nodiscard]] std::size_t min_distance_decode(const CoefficientVector& fhat, const ClassModel& classes);

/// Blockwise James-Stein features with pass-through limit L; J = floor(log2 N)
/// and epsilon = 1/sqrt(N).
struct BjsShrinkage {
  std::size_t pass_through = 2;
  friend bool operator==(const BjsShrinkage&, const BjsShrinkage&) = default;
};

using ShrinkageRule = std::variant<ShrinkageProfile, BjsShrinkage>;

struct PipelineConfig {
  std::size_t N = 500;
  std::size_t T = 5; // Pinsker pipeline: 2T+1 coefficients per channel
  ShrinkageRule shrinkage = ShrinkageProfile(std::vector<double>(11, 1.0));
  std::size_t P = 165;       // retained principal components, 0 = no PCA
  double ridge = 1e-6;       // LDA ridge relative to trace(cov)/dim of the training features
  PriorMode priors = PriorMode::empirical;
  bool magnitude_only = false; // replace each (cos, sin) pair by (magnitude, 0)
  std::uint64_t seed = 0;

  [[nodiscard]] bool is_bjs() const noexcept {
    return std::holds_alternative<BjsShrinkage>(shrinkage);
  }
  /// Coefficients kept per channel: 2T+1, or the Nyquist cap for BJS.
  [[nodiscard]] std::size_t coefficients_per_channel() const;
  void validate() const;

  /// N = 500, T = 5, low-pass mask keeping every coefficient, P = 165.
  [[nodiscard]] static PipelineConfig pinsker_defaults();
  /// N = 500, L = 2, P = 190.
  [[nodiscard]] static PipelineConfig bjs_defaults();

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Per channel: first N samples, 2T+1 Fourier coefficients, times c; channels
/// concatenated. Optional PCA projection applied last.
[[nodiscard]] Eigen::VectorXd pinsker_pipeline_features(const Trial& trial,
                                                        const PipelineConfig& config,
                                                        const PCAProjection* projection = nullptr);

/// Per channel: coefficients up to the Nyquist cap, BJS shrinkage, channels
/// concatenated. Optional PCA projection applied last.
[[nodiscard]] Eigen::VectorXd bjs_pipeline_features(const Trial& trial, const PipelineConfig& config,
                                                    const PCAProjection* projection = nullptr);

/// Pre-PCA features of every trial as rows, dispatching on config.shrinkage.
[[nodiscard]] Eigen::MatrixXd feature_matrix(const LabeledDataset& dataset,
                                             const PipelineConfig& config);

/// (cos, sin) -> (magnitude, 0) for every harmonic pair of every channel block.
void to_magnitude_features(Eigen::Ref<Eigen::VectorXd> features, std::size_t per_channel);

struct CvScheme {
  enum class Kind { leave_one_session_out, k_fold };
  Kind kind = Kind::leave_one_session_out;
  std::size_t k = 10;

  [[nodiscard]] static CvScheme leave_one_session_out() { return {}; }
  [[nodiscard]] static CvScheme k_fold(std::size_t k) { return {Kind::k_fold, k}; }
  [[nodiscard]] std::string name() const;
};

struct CvReport {
  double accuracy = 0.0;
  std::size_t num_classes = 0;
  std::vector<std::vector<std::size_t>> confusion; // [true-1][predicted-1]
  std::vector<double> per_class_accuracy;          // diagonal of the row-normalized confusion
  std::vector<std::size_t> predictions;            // per trial, in dataset order
  std::size_t num_folds = 0;
  std::vector<std::string> notes; // P caps, dropped classes

  /// max_k (1 - per_class_accuracy_k) over classes with test trials.
  [[nodiscard]] double worst_case_error() const;
  /// Number of correct predictions.
  [[nodiscard]] std::size_t correct() const;
  friend bool operator==(const CvReport&, const CvReport&) = default;
};

/// Trial-to-fold assignment (0-based fold ids). Leave-one-session-out folds
/// follow ascending session id; k-fold shuffles with config seed and deals
/// positions round-robin, so k = trial count is leave-one-out.
[[nodiscard]] std::vector<std::size_t> assign_folds(std::span<const std::size_t> sessions,
                                                    const CvScheme& scheme, std::uint64_t seed);

/// Cross-validated PCA + LDA on precomputed features. PCA and LDA see only the
/// training fold. P is capped at the fold rank; classes with fewer than two
/// training trials are left out of that fold's model.
[[nodiscard]] CvReport cross_validate_features(const Eigen::MatrixXd& features,
                                               std::span<const std::size_t> labels,
                                               std::span<const std::size_t> sessions,
                                               std::size_t num_classes,
                                               const PipelineConfig& config,
                                               const CvScheme& scheme);

[[nodiscard]] CvReport cross_validate(const LabeledDataset& dataset, const PipelineConfig& config,
                                      const CvScheme& scheme);

/// A named c-pattern of length 2T+1.
struct CPattern {
  std::string name;
  ShrinkageProfile profile;
};

/// Binary masks keeping one contiguous band of harmonics lo..hi (0 is the
/// mean), for all 0 <= lo <= hi <= T. Low-pass masks are the lo = 0 ones.
[[nodiscard]] std::vector<CPattern> band_masks(std::size_t T);

/// Pinsker profiles (1 - a_k/mu)_+ for the given smoothness and mu values.
[[nodiscard]] std::vector<CPattern> pinsker_patterns(std::size_t T, double alpha,
                                                     std::span<const double> mus);

struct PinskerGrid {
  std::vector<std::size_t> Ts{5};
  bool include_band_masks = true;
  double pinsker_alpha = 2.0;
  std::vector<double> pinsker_mus;
  std::vector<std::size_t> Ps{165};

  [[nodiscard]] std::size_t size() const; // number of grid cells
};

struct GridRow {
  std::size_t T = 0;
  std::string pattern;
  std::size_t P = 0;
  double accuracy = 0.0;
};

struct GridResult {
  PipelineConfig best;
  std::string best_pattern;
  double best_accuracy = 0.0;
  CvReport best_report;
  std::vector<GridRow> table; // enumeration order: T, pattern, P
};

/// Exhaustive cross-validated search; ties go to the earliest cell in
/// enumeration order. Throws ValidationError on an empty grid or a BJS base.
[[nodiscard]] GridResult grid_search(const LabeledDataset& dataset, const PipelineConfig& base,
                                     const PinskerGrid& grid, const CvScheme& scheme);

} // namespace lfp
