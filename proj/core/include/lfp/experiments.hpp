#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lfp/basis.hpp"
#include "lfp/classify.hpp"
#include "lfp/shrinkage.hpp"
#include "lfp/synth.hpp"

namespace lfp {

/// Squared L2 distance between the functions, computed in coefficient space.
[[nodiscard]] double mse_function(const CoefficientVector& f_true, const CoefficientVector& f_est);

struct RiskPoint {
  double abscissa = 0.0;  // epsilon, or N
  double mse = 0.0;       // worst mean squared error over the theta set
  double std_error = 0.0; // Monte-Carlo standard error at the worst theta
  std::size_t trials = 0;
  std::size_t worst_theta = 0;
};

struct RiskCurve {
  std::vector<RiskPoint> points;
  /// Least-squares slope of log(mse) against log(abscissa); informational.
  [[nodiscard]] double log_log_slope() const;
};

/// Boundary-heavy parameters on the ellipsoid sum a_k^2 theta_k^2 = C^2 with
/// 2T+1 coordinates: single-coordinate vertices at the cosine index of
/// selected harmonics, the flat profile on each dyadic block, and random
/// boundary draws, at least `count` in total.
[[nodiscard]] std::vector<CoefficientVector> boundary_thetas(const EllipsoidSpec& spec,
                                                             std::size_t T, std::size_t count,
                                                             std::uint64_t seed);

struct RiskCurveOptions {
  std::size_t T = 64; // parameters live in the first 2T+1 coordinates
  std::size_t thetas = 50;
};

/// For each epsilon: y = theta + eps z over the theta set, Pinsker shrinkage
/// with pinsker_mu(spec, eps), worst mean loss over theta. Noise draws are
/// shared across epsilons. Requires epsilons strictly decreasing and
/// trials >= 100.
[[nodiscard]] RiskCurve risk_curve_pinsker(const EllipsoidSpec& spec,
                                           std::span<const double> epsilons, std::size_t trials,
                                           std::uint64_t seed, const RiskCurveOptions& options = {});

struct AdaptivityRow {
  EllipsoidSpec spec;
  double bjs_risk = 0.0;
  double bjs_se = 0.0;
  double pinsker_risk = 0.0;
  double pinsker_se = 0.0;
  double ratio = 0.0;
  double ratio_se = 0.0;
};

struct AdaptivityOptions {
  std::size_t thetas = 24;
  std::size_t pass_through = 2;
};

/// Sequence model of dimension 2^J - 1 with J = floor(log2 eps^-2). For each
/// spec: worst-case risk over that spec's boundary thetas of BJS (which never
/// sees the spec) and of Pinsker with the true spec, on common noise draws.
[[nodiscard]] std::vector<AdaptivityRow> adaptivity_ratio_bjs(std::span<const EllipsoidSpec> specs,
                                                              double epsilon, std::size_t trials,
                                                              std::uint64_t seed,
                                                              const AdaptivityOptions& options = {});

struct ConsistencyRow {
  std::size_t N = 0;
  std::size_t trials_per_class = 0;
  std::vector<double> class_errors;
  double worst_class_error = 0.0;
  double worst_class_se = 0.0;
  double sup_mse = 0.0; // max over classes of the mean squared estimation error
  double sup_mse_se = 0.0;
  double bound_term = 0.0; // sup_mse / s^2
};

/// For each N: noisy single-channel trials from every class, BJS estimate with
/// epsilon = sigma/sqrt(N), minimum-distance decoding against the class model.
[[nodiscard]] std::vector<ConsistencyRow> consistency_experiment(const ClassModel& model,
                                                                 std::span<const std::size_t> Ns,
                                                                 std::size_t trials_per_class,
                                                                 std::uint64_t seed,
                                                                 const NoiseModel& noise = {});

struct BenchmarkReport {
  std::string name;
  PipelineConfig config;
  std::string scheme;
  std::uint64_t seed = 0;
  CvReport cv;

  [[nodiscard]] double overall_accuracy() const noexcept { return cv.accuracy; }
  /// P_e = max_k (1 - per-class accuracy).
  [[nodiscard]] double worst_case_error() const { return cv.worst_case_error(); }
};

struct NamedConfig {
  std::string name;
  PipelineConfig config;
};

/// cross_validate for each config with config.seed replaced by `seed`.
[[nodiscard]] std::vector<BenchmarkReport> benchmark_classifiers(const LabeledDataset& dataset,
                                                                 std::span<const NamedConfig> configs,
                                                                 const CvScheme& scheme,
                                                                 std::uint64_t seed);

struct PhaseAblation {
  BenchmarkReport full;
  BenchmarkReport magnitude_only;
  double paired_difference = 0.0; // accuracy(full) - accuracy(magnitude-only)
  double paired_se = 0.0;         // std error of the per-trial paired difference
};

/// Same folds and seed, with and without the (cos, sin) -> (magnitude, 0)
/// feature map.
[[nodiscard]] PhaseAblation phase_ablation(const LabeledDataset& dataset, const PipelineConfig& config,
                                           const CvScheme& scheme, std::uint64_t seed);

} // namespace lfp
