#include "lfp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "lfp/errors.hpp"

namespace lfp {

namespace {

double pair_distance(const CoefficientVector& a, const CoefficientVector& b) {
  return coeff_l2_distance(a, b);
}

std::vector<double> unit_direction(std::size_t dim, Rng& rng) {
  std::vector<double> d(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : d) {
      v = rng.normal();
      norm2 += v * v;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : d) v *= inv;
  return d;
}

// Largest t in [0, 1] keeping center + t*delta inside the ellipsoid, given a
// center that is already inside.
double clip_to_ellipsoid(const EllipsoidSpec& spec, std::span<const double> center,
                         std::span<const double> delta) {
  double A = 0.0, B = 0.0, P = 0.0;
  for (std::size_t k = 2; k <= center.size(); ++k) {
    const double a2 = spec.weight(k) * spec.weight(k);
    A += a2 * delta[k - 1] * delta[k - 1];
    B += a2 * center[k - 1] * delta[k - 1];
    P += a2 * center[k - 1] * center[k - 1];
  }
  const double c2 = spec.radius() * spec.radius();
  if (A == 0.0 || P + 2.0 * B + A <= c2) return 1.0;
  const double disc = std::max(0.0, B * B - A * (P - c2));
  const double t = (-B + std::sqrt(disc)) / A;
  return std::clamp(t * (1.0 - 1e-12), 0.0, 1.0);
}

Trial generate_trial_on(const ClassModel& model, std::size_t label, std::size_t channels,
                        const TrigBasisTable& table, const NoiseModel& noise, std::uint64_t seed) {
  Trial trial;
  trial.label = label;
  trial.channels.reserve(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    Rng rng(derive_seed(seed, {c}));
    const CoefficientVector f = perturb_within_class(model, label, rng);
    std::vector<double> y = table.synthesize(f.coeffs());
    for (double& v : y) v += noise.sigma * rng.normal();
    trial.channels.emplace_back(std::move(y));
  }
  return trial;
}

void check_trial_args(const ClassModel& model, std::size_t label, std::size_t channels,
                      std::size_t N) {
  if (label < 1 || label > model.num_classes()) {
    throw ValidationError("generate_trial: label must lie in 1.." +
                          std::to_string(model.num_classes()));
  }
  if (channels == 0) throw ValidationError("generate_trial: channel count must be positive");
  if (N <= coefficient_count(model.truncation())) {
    throw ValidationError("generate_trial: N must exceed 2T+1 = " +
                          std::to_string(coefficient_count(model.truncation())));
  }
}

} // namespace

void NoiseModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("noise sigma must be a positive finite number");
  }
}

CoefficientVector sample_sobolev(const EllipsoidSpec& spec, std::size_t T, std::uint64_t seed) {
  if (T == 0) throw ValidationError("sample_sobolev: T must be at least 1");
  Rng rng(seed);
  const std::size_t n = coefficient_count(T);
  std::vector<double> theta(n);
  for (std::size_t k = 1; k <= n; ++k) theta[k - 1] = rng.normal() / std::max(spec.weight(k), 1.0);
  const double r = 0.2 + 0.8 * rng.uniform();
  double energy = spec.energy(theta);
  while (energy == 0.0) {
    for (std::size_t k = 2; k <= n; ++k) theta[k - 1] = rng.normal() / spec.weight(k);
    energy = spec.energy(theta);
  }
  const double scale = std::sqrt(r) * spec.radius() / std::sqrt(energy);
  for (double& v : theta) v *= scale;
  return CoefficientVector(std::move(theta));
}

ClassModel::ClassModel(EllipsoidSpec spec, std::size_t T, double separation, double within_spread,
                       std::vector<CoefficientVector> prototypes)
    : spec_(spec), T_(T), separation_(separation), within_spread_(within_spread),
      prototypes_(std::move(prototypes)) {
  if (prototypes_.size() < 2) throw ValidationError("ClassModel: need at least 2 classes");
  if (T_ == 0) throw ValidationError("ClassModel: T must be at least 1");
  if (!(separation_ > 0.0)) throw ValidationError("ClassModel: separation s must be positive");
  if (!(within_spread_ >= 0.0)) throw ValidationError("ClassModel: within_spread must be >= 0");
  if (!(within_spread_ < separation_ / 2.0)) {
    throw ValidationError("ClassModel: within_spread must be below s/2");
  }
  for (const auto& p : prototypes_) {
    if (p.size() != coefficient_count(T_)) {
      throw ValidationError("ClassModel: prototypes must have 2T+1 coefficients");
    }
    if (!spec_.contains(p.coeffs(), 1e-12)) {
      throw ValidationError("ClassModel: prototype lies outside the ellipsoid");
    }
  }
  const double need = 2.0 * separation_ + 2.0 * within_spread_;
  const double got = min_prototype_distance();
  if (!(got > need)) {
    std::ostringstream msg;
    msg << "ClassModel: min prototype distance " << got << " must exceed 2s + 2*within_spread = "
        << need;
    throw ValidationError(msg.str());
  }
}

const CoefficientVector& ClassModel::prototype(std::size_t label) const {
  if (label < 1 || label > prototypes_.size()) throw DomainError("ClassModel: label out of range");
  return prototypes_[label - 1];
}

double ClassModel::min_prototype_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prototypes_.size(); ++i) {
    for (std::size_t j = i + 1; j < prototypes_.size(); ++j) {
      best = std::min(best, pair_distance(prototypes_[i], prototypes_[j]));
    }
  }
  return best;
}

double ClassModel::distance_to_class(std::span<const double> f, std::size_t label) const {
  const double d = coeff_l2_distance(f, prototype(label).coeffs());
  return std::max(0.0, d - within_spread_);
}

ClassModel make_class_model(std::size_t K, const EllipsoidSpec& spec, std::size_t T,
                            double separation, double within_spread, std::uint64_t seed,
                            std::size_t max_attempts) {
  if (K < 2) throw ValidationError("make_class_model: K must be at least 2");
  if (!(separation > 0.0)) throw ValidationError("make_class_model: s must be positive");
  if (!(within_spread >= 0.0 && within_spread < separation / 2.0)) {
    throw ValidationError("make_class_model: within_spread must lie in [0, s/2)");
  }
  const double need = 2.0 * separation + 2.0 * within_spread;
  std::vector<CoefficientVector> accepted;
  double best_gap = 0.0; // best min-distance of a candidate against the accepted set
  for (std::size_t attempt = 0; attempt < max_attempts && accepted.size() < K; ++attempt) {
    CoefficientVector candidate = sample_sobolev(spec, T, derive_seed(seed, {attempt}));
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& p : accepted) gap = std::min(gap, pair_distance(candidate, p));
    if (!accepted.empty()) best_gap = std::max(best_gap, gap);
    if (gap > need) accepted.push_back(std::move(candidate));
  }
  if (accepted.size() < K) {
    std::ostringstream msg;
    msg << "make_class_model: separation s = " << separation << " is not achievable for K = " << K
        << " inside the ellipsoid (C = " << spec.radius() << "): placed " << accepted.size()
        << " classes, best candidate distance " << best_gap << " < 2s + 2*within_spread = " << need
        << "; the largest s supported by this draw is about "
        << std::max(0.0, best_gap / 2.0 - within_spread);
    throw ValidationError(msg.str());
  }
  return ClassModel(spec, T, separation, within_spread, std::move(accepted));
}

namespace {

// sample_sobolev draw pushed out to 0.999 of the ellipsoid boundary, so that
// rotated and scaled copies stay well separated.
CoefficientVector boundary_base(const EllipsoidSpec& spec, std::size_t T, std::uint64_t seed) {
  CoefficientVector base = sample_sobolev(spec, T, seed);
  const double scale = std::sqrt(0.999) * spec.radius() / std::sqrt(spec.energy(base.coeffs()));
  for (double& v : base.mutable_coeffs()) v *= scale;
  return base;
}

ClassModel from_transformed_base(std::size_t K, const EllipsoidSpec& spec, std::size_t T,
                                 double within_spread, std::vector<CoefficientVector> prototypes) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prototypes.size(); ++i) {
    for (std::size_t j = i + 1; j < prototypes.size(); ++j) {
      dmin = std::min(dmin, coeff_l2_distance(prototypes[i], prototypes[j]));
    }
  }
  // Largest s with distance > 2s + 2 within_spread, backed off slightly.
  const double s = 0.999 * (dmin / 2.0 - within_spread);
  if (!(s > 2.0 * within_spread)) {
    std::ostringstream msg;
    msg << "class construction: within_spread " << within_spread
        << " is too large for prototype distance " << dmin << " (K = " << K << ")";
    throw ValidationError(msg.str());
  }
  return ClassModel(spec, T, s, within_spread, std::move(prototypes));
}

} // namespace

ClassModel make_phase_class_model(std::size_t K, const EllipsoidSpec& spec, std::size_t T,
                                  double within_spread, std::uint64_t seed) {
  if (K < 2) throw ValidationError("make_phase_class_model: K must be at least 2");
  const CoefficientVector base = boundary_base(spec, T, seed);
  std::vector<CoefficientVector> prototypes;
  prototypes.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(K);
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<double> theta(base.coeffs().begin(), base.coeffs().end());
    for (std::size_t h = 1; h <= T; ++h) {
      const double x = theta[2 * h - 1], y = theta[2 * h];
      theta[2 * h - 1] = c * x - s * y;
      theta[2 * h] = s * x + c * y;
    }
    prototypes.emplace_back(std::move(theta));
  }
  return from_transformed_base(K, spec, T, within_spread, std::move(prototypes));
}

ClassModel make_magnitude_class_model(std::size_t K, const EllipsoidSpec& spec, std::size_t T,
                                      double within_spread, std::uint64_t seed) {
  if (K < 2) throw ValidationError("make_magnitude_class_model: K must be at least 2");
  const CoefficientVector base = boundary_base(spec, T, seed);
  std::vector<CoefficientVector> prototypes;
  prototypes.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double scale = static_cast<double>(k) / static_cast<double>(K);
    std::vector<double> theta(base.coeffs().begin(), base.coeffs().end());
    for (std::size_t i = 1; i < theta.size(); ++i) theta[i] *= scale;
    prototypes.emplace_back(std::move(theta));
  }
  return from_transformed_base(K, spec, T, within_spread, std::move(prototypes));
}

CoefficientVector perturb_within_class(const ClassModel& model, std::size_t label, Rng& rng) {
  const CoefficientVector& center = model.prototype(label);
  const std::size_t dim = center.size();
  std::vector<double> theta(center.coeffs().begin(), center.coeffs().end());
  if (model.within_spread() == 0.0) return CoefficientVector(std::move(theta));
  std::vector<double> delta = unit_direction(dim, rng);
  const double radius =
      model.within_spread() * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  for (double& v : delta) v *= radius;
  const double t = clip_to_ellipsoid(model.spec(), center.coeffs(), delta);
  for (std::size_t i = 0; i < dim; ++i) theta[i] += t * delta[i];
  return CoefficientVector(std::move(theta));
}

Trial generate_trial(const ClassModel& model, std::size_t label, std::size_t channels,
                     std::size_t N, const NoiseModel& noise, std::uint64_t seed) {
  check_trial_args(model, label, channels, N);
  noise.validate();
  const TrigBasisTable table(N, coefficient_count(model.truncation()), false);
  return generate_trial_on(model, label, channels, table, noise, seed);
}

void LabeledDataset::validate() const {
  if (N == 0 || channels == 0) throw ValidationError("dataset: N and channel count must be positive");
  if (num_classes < 2) throw ValidationError("dataset: need at least 2 classes");
  for (const auto& t : trials) {
    if (t.channels.size() != channels) throw ValidationError("dataset: inconsistent channel count");
    for (const auto& ch : t.channels) {
      if (ch.size() != N) throw ValidationError("dataset: inconsistent sample count");
    }
    if (t.label < 1 || t.label > num_classes) throw ValidationError("dataset: label out of range");
  }
}

std::size_t LabeledDataset::num_sessions() const {
  std::set<std::size_t> ids;
  for (const auto& t : trials) ids.insert(t.session);
  return ids.size();
}

LabeledDataset generate_dataset(const ClassModel& model, std::size_t trials_per_class,
                                std::size_t channels, std::size_t N, std::size_t sessions,
                                const NoiseModel& noise, std::uint64_t seed) {
  if (trials_per_class == 0 || channels == 0 || N == 0 || sessions == 0) {
    throw ValidationError("generate_dataset: all counts must be positive");
  }
  check_trial_args(model, 1, channels, N);
  noise.validate();
  const TrigBasisTable table(N, coefficient_count(model.truncation()), false);
  LabeledDataset ds;
  ds.N = N;
  ds.channels = channels;
  ds.num_classes = model.num_classes();
  ds.seed = seed;
  const std::size_t total = trials_per_class * model.num_classes();
  ds.trials.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t label = i / trials_per_class + 1;
    Trial t = generate_trial_on(model, label, channels, table, noise, derive_seed(seed, {i}));
    t.session = i % sessions + 1;
    ds.trials.push_back(std::move(t));
  }
  return ds;
}

} // namespace lfp
