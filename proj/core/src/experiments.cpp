#include "lfp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lfp/errors.hpp"
#include "lfp/random.hpp"

namespace lfp {

namespace {

// Running mean and standard error of one loss sequence.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  [[nodiscard]] double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  [[nodiscard]] double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

std::vector<double> scaled_to_boundary(const EllipsoidSpec& spec, std::vector<double> theta) {
  const double energy = spec.energy(theta);
  if (energy <= 0.0) return theta;
  const double scale = spec.radius() / std::sqrt(energy);
  for (double& v : theta) v *= scale;
  return theta;
}

std::vector<double> noise_draw(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> z(n);
  for (double& v : z) v = rng.normal();
  return z;
}

double squared_error(std::span<const double> estimate, std::span<const double> truth) {
  const double d = coeff_l2_distance(estimate, truth);
  return d * d;
}

} // namespace

double mse_function(const CoefficientVector& f_true, const CoefficientVector& f_est) {
  return squared_error(f_est.coeffs(), f_true.coeffs());
}

double RiskCurve::log_log_slope() const {
  if (points.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(p.abscissa), y = std::log(p.mse);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

std::vector<CoefficientVector> boundary_thetas(const EllipsoidSpec& spec, std::size_t T,
                                               std::size_t count, std::uint64_t seed) {
  if (T == 0) throw ValidationError("boundary_thetas: T must be at least 1");
  const std::size_t n = coefficient_count(T);
  std::vector<CoefficientVector> out;

  std::set<std::size_t> harmonics;
  for (std::size_t h = 1; h <= std::min<std::size_t>(T, 16); ++h) harmonics.insert(h);
  for (double h = 16.0; h <= static_cast<double>(T); h *= 1.2) {
    harmonics.insert(static_cast<std::size_t>(std::lround(h)));
  }
  harmonics.insert(T);
  for (std::size_t h : harmonics) {
    if (h > T) continue;
    std::vector<double> theta(n, 0.0);
    theta[2 * h - 1] = spec.radius() / spec.weight(2 * h);
    out.emplace_back(std::move(theta));
  }

  for (std::size_t j = 1; (std::size_t{1} << j) <= n; ++j) {
    std::vector<double> theta(n, 0.0);
    const std::size_t first = std::size_t{1} << j;
    const std::size_t last = std::min(n, 2 * first - 1);
    for (std::size_t k = first; k <= last; ++k) theta[k - 1] = 1.0;
    out.emplace_back(scaled_to_boundary(spec, std::move(theta)));
  }

  const std::size_t random_draws = std::max<std::size_t>(4, count > out.size() ? count - out.size() : 0);
  for (std::size_t r = 0; r < random_draws; ++r) {
    const CoefficientVector draw = sample_sobolev(spec, T, derive_seed(seed, {0xB0, r}));
    out.emplace_back(scaled_to_boundary(spec, {draw.coeffs().begin(), draw.coeffs().end()}));
  }
  return out;
}

RiskCurve risk_curve_pinsker(const EllipsoidSpec& spec, std::span<const double> epsilons,
                             std::size_t trials, std::uint64_t seed, const RiskCurveOptions& options) {
  if (trials < 100) throw ValidationError("risk_curve_pinsker: need at least 100 trials per point");
  if (epsilons.empty()) throw ValidationError("risk_curve_pinsker: no epsilon values");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ValidationError("risk_curve_pinsker: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw ValidationError("risk_curve_pinsker: epsilons must be strictly decreasing");
    }
  }
  const std::vector<CoefficientVector> thetas =
      boundary_thetas(spec, options.T, options.thetas, derive_seed(seed, {0x7E7A}));
  const std::size_t n = coefficient_count(options.T);

  RiskCurve curve;
  for (double eps : epsilons) {
    const double mu = pinsker_mu(spec, eps);
    const ShrinkageProfile profile = pinsker_profile(spec, mu, n);
    const auto c = profile.weights();
    RiskPoint point{eps, -1.0, 0.0, trials, 0};
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const auto theta = thetas[i].coeffs();
      Moments loss;
      for (std::size_t t = 0; t < trials; ++t) {
        const std::vector<double> z = noise_draw(n, derive_seed(seed, {i, t}));
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double diff = c[k] * (theta[k] + eps * z[k]) - theta[k];
          acc += diff * diff;
        }
        loss.add(acc);
      }
      if (loss.mean() > point.mse) {
        point.mse = loss.mean();
        point.std_error = loss.std_error();
        point.worst_theta = i;
      }
    }
    curve.points.push_back(point);
  }
  return curve;
}

std::vector<AdaptivityRow> adaptivity_ratio_bjs(std::span<const EllipsoidSpec> specs, double epsilon,
                                                std::size_t trials, std::uint64_t seed,
                                                const AdaptivityOptions& options) {
  if (trials < 100) throw ValidationError("adaptivity_ratio_bjs: need at least 100 trials");
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ValidationError("adaptivity_ratio_bjs: epsilon must lie in (0, 0.5)");
  }
  const auto levels = static_cast<std::size_t>(std::floor(std::log2(1.0 / (epsilon * epsilon))));
  const BlockPartition partition(options.pass_through, levels);
  const std::size_t n = partition.covered();
  const std::size_t T = (n - 1) / 2;

  std::vector<AdaptivityRow> rows;
  for (const EllipsoidSpec& spec : specs) {
    const std::vector<CoefficientVector> thetas =
        boundary_thetas(spec, T, options.thetas, derive_seed(seed, {0x7E7A}));
    const double mu = pinsker_mu(spec, epsilon);
    const ShrinkageProfile profile = pinsker_profile(spec, mu, n);
    const auto c = profile.weights();

    AdaptivityRow row{spec};
    row.bjs_risk = -1.0;
    row.pinsker_risk = -1.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const auto theta = thetas[i].coeffs();
      Moments bjs_loss, pinsker_loss;
      std::vector<double> y(n);
      for (std::size_t t = 0; t < trials; ++t) {
        const std::vector<double> z = noise_draw(n, derive_seed(seed, {i, t}));
        double pinsker_acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          y[k] = theta[k] + epsilon * z[k];
          const double d = c[k] * y[k] - theta[k];
          pinsker_acc += d * d;
        }
        pinsker_loss.add(pinsker_acc);
        const CoefficientVector estimate = bjs_estimate(CoefficientVector(y, epsilon), partition);
        bjs_loss.add(squared_error(estimate.coeffs(), theta));
      }
      if (bjs_loss.mean() > row.bjs_risk) {
        row.bjs_risk = bjs_loss.mean();
        row.bjs_se = bjs_loss.std_error();
      }
      if (pinsker_loss.mean() > row.pinsker_risk) {
        row.pinsker_risk = pinsker_loss.mean();
        row.pinsker_se = pinsker_loss.std_error();
      }
    }
    row.ratio = row.bjs_risk / row.pinsker_risk;
    row.ratio_se = row.ratio * std::hypot(row.bjs_se / row.bjs_risk, row.pinsker_se / row.pinsker_risk);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConsistencyRow> consistency_experiment(const ClassModel& model,
                                                   std::span<const std::size_t> Ns,
                                                   std::size_t trials_per_class, std::uint64_t seed,
                                                   const NoiseModel& noise) {
  if (trials_per_class == 0) throw ValidationError("consistency_experiment: need trials");
  noise.validate();
  for (std::size_t i = 1; i < Ns.size(); ++i) {
    if (!(Ns[i] > Ns[i - 1])) throw ValidationError("consistency_experiment: Ns must be increasing");
  }
  const std::size_t K = model.num_classes();
  const std::size_t coeffs = coefficient_count(model.truncation());
  const double s2 = model.separation() * model.separation();

  std::vector<ConsistencyRow> rows;
  for (std::size_t N : Ns) {
    const std::size_t cap = nyquist_coefficient_cap(N);
    if (cap < coeffs) {
      throw ValidationError("consistency_experiment: N = " + std::to_string(N) +
                            " cannot resolve the class model's 2T+1 coefficients");
    }
    const TrigBasisTable synth_table(N, coeffs, false);
    const TrigBasisTable analysis(N, cap);
    const BlockPartition partition(2, bjs_levels_for(N));

    ConsistencyRow row;
    row.N = N;
    row.trials_per_class = trials_per_class;
    row.class_errors.assign(K, 0.0);
    row.worst_class_error = -1.0;
    row.sup_mse = -1.0;
    for (std::size_t label = 1; label <= K; ++label) {
      std::size_t errors = 0;
      Moments mse;
      for (std::size_t t = 0; t < trials_per_class; ++t) {
        Rng rng(derive_seed(seed, {N, label, t}));
        const CoefficientVector f = perturb_within_class(model, label, rng);
        std::vector<double> samples = synth_table.synthesize(f.coeffs());
        for (double& v : samples) v += noise.sigma * rng.normal();
        const CoefficientVector y = analysis.analyze(samples, noise.sigma);
        const CoefficientVector estimate = bjs_estimate(y, partition);
        if (min_distance_decode(estimate, model) != label) ++errors;
        mse.add(mse_function(f, estimate));
      }
      const double err = static_cast<double>(errors) / static_cast<double>(trials_per_class);
      row.class_errors[label - 1] = err;
      if (err > row.worst_class_error) {
        row.worst_class_error = err;
        row.worst_class_se = std::sqrt(err * (1.0 - err) / static_cast<double>(trials_per_class));
      }
      if (mse.mean() > row.sup_mse) {
        row.sup_mse = mse.mean();
        row.sup_mse_se = mse.std_error();
      }
    }
    row.bound_term = row.sup_mse / s2;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchmarkReport> benchmark_classifiers(const LabeledDataset& dataset,
                                                   std::span<const NamedConfig> configs,
                                                   const CvScheme& scheme, std::uint64_t seed) {
  if (configs.empty()) throw ValidationError("benchmark_classifiers: no configurations");
  std::vector<BenchmarkReport> out;
  for (const auto& named : configs) {
    PipelineConfig config = named.config;
    config.seed = seed;
    out.push_back({named.name, config, scheme.name(), seed, cross_validate(dataset, config, scheme)});
  }
  return out;
}

PhaseAblation phase_ablation(const LabeledDataset& dataset, const PipelineConfig& config,
                             const CvScheme& scheme, std::uint64_t seed) {
  PipelineConfig full = config;
  full.magnitude_only = false;
  full.seed = seed;
  PipelineConfig magnitude = full;
  magnitude.magnitude_only = true;

  PhaseAblation out;
  out.full = {"full", full, scheme.name(), seed, cross_validate(dataset, full, scheme)};
  out.magnitude_only = {"magnitude-only", magnitude, scheme.name(), seed,
                        cross_validate(dataset, magnitude, scheme)};
  Moments diff;
  for (std::size_t i = 0; i < dataset.trials.size(); ++i) {
    const std::size_t truth = dataset.trials[i].label;
    const double a = out.full.cv.predictions[i] == truth ? 1.0 : 0.0;
    const double b = out.magnitude_only.cv.predictions[i] == truth ? 1.0 : 0.0;
    diff.add(a - b);
  }
  out.paired_difference = diff.mean();
  out.paired_se = diff.std_error();
  return out;
}

} // namespace lfp
