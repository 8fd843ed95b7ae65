#include "lfp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "lfp/errors.hpp"
#include "lfp/random.hpp"

namespace lfp {

std::size_t min_distance_decode(std::span<const double> fhat, const ClassModel& classes) {
  std::size_t best = 1;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= classes.num_classes(); ++k) {
    const double d = classes.distance_to_class(fhat, k);
    if (d < best_distance) {
      best_distance = d;
      best = k;
    }
  }
  return best;
}

std::size_t min_distance_decode(const CoefficientVector& fhat, const ClassModel& classes) {
  return min_distance_decode(fhat.coeffs(), classes);
}

std::size_t PipelineConfig::coefficients_per_channel() const {
  return is_bjs() ? nyquist_coefficient_cap(N) : coefficient_count(T);
}

void PipelineConfig::validate() const {
  if (N < 8) throw ValidationError("pipeline: N must be at least 8");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ValidationError("pipeline: ridge must be >= 0");
  if (const auto* profile = std::get_if<ShrinkageProfile>(&shrinkage)) {
    if (T == 0) throw ValidationError("pipeline: T must be at least 1");
    if (profile->size() != coefficient_count(T)) {
      throw ValidationError("pipeline: shrinkage profile needs 2T+1 = " +
                            std::to_string(coefficient_count(T)) + " weights, got " +
                            std::to_string(profile->size()));
    }
    if (2 * coefficient_count(T) >= N) {
      throw FrequencyOverflow("pipeline: 2T+1 = " + std::to_string(coefficient_count(T)) +
                              " must be below N/2 = " + std::to_string(N) + "/2");
    }
  } else {
    const auto& bjs = std::get<BjsShrinkage>(shrinkage);
    if (bjs.pass_through >= bjs_levels_for(N)) {
      throw ValidationError("pipeline: BJS pass-through L must be below J = floor(log2 N)");
    }
  }
}

PipelineConfig PipelineConfig::pinsker_defaults() {
  PipelineConfig c;
  c.N = 500;
  c.T = 5;
  c.shrinkage = ShrinkageProfile(std::vector<double>(coefficient_count(5), 1.0));
  c.P = 165;
  return c;
}

PipelineConfig PipelineConfig::bjs_defaults() {
  PipelineConfig c;
  c.N = 500;
  c.shrinkage = BjsShrinkage{2};
  c.P = 190;
  return c;
}

void to_magnitude_features(Eigen::Ref<Eigen::VectorXd> features, std::size_t per_channel) {
  if (per_channel == 0 || features.size() % static_cast<Eigen::Index>(per_channel) != 0) {
    throw DomainError("to_magnitude_features: length is not a multiple of the channel block");
  }
  const auto block = static_cast<Eigen::Index>(per_channel);
  for (Eigen::Index base = 0; base < features.size(); base += block) {
    // Zero-based offsets 2h-1 and 2h hold the cosine and sine of harmonic h.
    for (Eigen::Index c = 1; c + 1 < block; c += 2) {
      const double magnitude = std::hypot(features(base + c), features(base + c + 1));
      features(base + c) = magnitude;
      features(base + c + 1) = 0.0;
    }
  }
}

namespace {

// Per-channel coefficients of one trial, shrunk according to the config.
class FeatureExtractor {
public:
  explicit FeatureExtractor(const PipelineConfig& config)
      : config_(config), table_(config.N, config.coefficients_per_channel()) {
    config_.validate();
    if (config_.is_bjs()) {
      partition_.emplace(std::get<BjsShrinkage>(config_.shrinkage).pass_through,
                         bjs_levels_for(config_.N));
    }
  }

  [[nodiscard]] std::size_t dimension(std::size_t channels) const {
    return channels * config_.coefficients_per_channel();
  }

  [[nodiscard]] Eigen::VectorXd operator()(const Trial& trial) const {
    const std::size_t per = config_.coefficients_per_channel();
    Eigen::VectorXd out(static_cast<Eigen::Index>(dimension(trial.channels.size())));
    for (std::size_t c = 0; c < trial.channels.size(); ++c) {
      const auto samples = trial.channels[c].samples();
      if (samples.size() < config_.N) {
        throw ValidationError("pipeline: channel has " + std::to_string(samples.size()) +
                              " samples, need N = " + std::to_string(config_.N));
      }
      const CoefficientVector y = table_.analyze(samples.first(config_.N));
      std::vector<double> shrunk;
      if (partition_) {
        const CoefficientVector estimate = bjs_estimate(y, *partition_);
        shrunk.assign(estimate.coeffs().begin(),
                      estimate.coeffs().begin() + static_cast<std::ptrdiff_t>(per));
      } else {
        shrunk = std::get<ShrinkageProfile>(config_.shrinkage).apply(y.coeffs());
      }
      for (std::size_t k = 0; k < per; ++k) out(static_cast<Eigen::Index>(c * per + k)) = shrunk[k];
    }
    if (config_.magnitude_only) to_magnitude_features(out, per);
    return out;
  }

private:
  PipelineConfig config_;
  TrigBasisTable table_;
  std::optional<BlockPartition> partition_;
};

Eigen::VectorXd project(Eigen::VectorXd features, const PCAProjection* projection) {
  if (projection == nullptr) return features;
  return pca_apply(*projection, features);
}

} // namespace

Eigen::VectorXd pinsker_pipeline_features(const Trial& trial, const PipelineConfig& config,
                                          const PCAProjection* projection) {
  if (config.is_bjs()) throw ValidationError("pinsker_pipeline_features: config selects BJS shrinkage");
  return project(FeatureExtractor(config)(trial), projection);
}

Eigen::VectorXd bjs_pipeline_features(const Trial& trial, const PipelineConfig& config,
                                      const PCAProjection* projection) {
  if (!config.is_bjs()) throw ValidationError("bjs_pipeline_features: config selects a c-profile");
  return project(FeatureExtractor(config)(trial), projection);
}

Eigen::MatrixXd feature_matrix(const LabeledDataset& dataset, const PipelineConfig& config) {
  const FeatureExtractor extract(config);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(dataset.trials.size()),
                      static_cast<Eigen::Index>(extract.dimension(dataset.channels)));
  for (std::size_t i = 0; i < dataset.trials.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = extract(dataset.trials[i]).transpose();
  }
  return out;
}

std::string CvScheme::name() const {
  return kind == Kind::leave_one_session_out ? "loso" : "kfold" + std::to_string(k);
}

double CvReport::worst_case_error() const {
  double worst = 0.0;
  for (double acc : per_class_accuracy) {
    if (std::isfinite(acc)) worst = std::max(worst, 1.0 - acc);
  }
  return worst;
}

std::size_t CvReport::correct() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < confusion.size(); ++k) n += confusion[k][k];
  return n;
}

std::vector<std::size_t> assign_folds(std::span<const std::size_t> sessions, const CvScheme& scheme,
                                      std::uint64_t seed) {
  const std::size_t n = sessions.size();
  std::vector<std::size_t> fold(n);
  if (scheme.kind == CvScheme::Kind::leave_one_session_out) {
    std::map<std::size_t, std::size_t> index;
    for (std::size_t s : sessions) index.emplace(s, 0);
    if (index.size() < 2) {
      throw ValidationError("cross_validate: leave-one-session-out needs at least 2 sessions");
    }
    std::size_t next = 0;
    for (auto& [session, id] : index) id = next++;
    for (std::size_t i = 0; i < n; ++i) fold[i] = index.at(sessions[i]);
    return fold;
  }
  if (scheme.k < 2 || scheme.k > n) {
    throw ValidationError("cross_validate: k-fold needs 2 <= k <= trial count (" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x6b666f6c64ULL}));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % scheme.k;
  return fold;
}

CvReport cross_validate_features(const Eigen::MatrixXd& features, std::span<const std::size_t> labels,
                                 std::span<const std::size_t> sessions, std::size_t num_classes,
                                 const PipelineConfig& config, const CvScheme& scheme) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (labels.size() != n || sessions.size() != n) {
    throw ValidationError("cross_validate: features, labels and sessions disagree in length");
  }
  if (n < 4) throw ValidationError("cross_validate: need at least 4 trials");
  const std::vector<std::size_t> fold = assign_folds(sessions, scheme, config.seed);
  const std::size_t num_folds = *std::max_element(fold.begin(), fold.end()) + 1;

  CvReport report;
  report.num_classes = num_classes;
  report.num_folds = num_folds;
  report.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  report.predictions.assign(n, 0);
  bool p_capped = false;

  for (std::size_t f = 0; f < num_folds; ++f) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (fold[i] == f ? test_rows : train_rows).push_back(static_cast<Eigen::Index>(i));
    }
    if (test_rows.empty()) continue;

    // Classes with fewer than two training trials cannot contribute a mean
    // and scatter; they are left out of this fold's model.
    std::map<std::size_t, std::size_t> counts;
    for (Eigen::Index r : train_rows) ++counts[labels[static_cast<std::size_t>(r)]];
    std::vector<Eigen::Index> kept;
    for (Eigen::Index r : train_rows) {
      if (counts[labels[static_cast<std::size_t>(r)]] >= 2) kept.push_back(r);
    }
    for (std::size_t k = 1; k <= num_classes; ++k) {
      if (counts[k] < 2) {
        report.notes.push_back("fold " + std::to_string(f) + ": class " + std::to_string(k) +
                               " has " + std::to_string(counts[k]) +
                               " training trials and is left out of the model");
      }
    }

    Eigen::MatrixXd train(static_cast<Eigen::Index>(kept.size()), features.cols());
    std::vector<std::size_t> train_labels(kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r) {
      train.row(static_cast<Eigen::Index>(r)) = features.row(kept[r]);
      train_labels[r] = labels[static_cast<std::size_t>(kept[r])];
    }

    Eigen::MatrixXd train_proj = train;
    std::optional<PCAProjection> projection;
    if (config.P > 0) {
      const std::size_t rank_cap =
          std::min<std::size_t>(kept.size() - 1, static_cast<std::size_t>(features.cols()));
      std::size_t p = std::min(config.P, rank_cap);
      if (p < config.P) p_capped = true;
      PCAProjection fitted = pca_fit(train, p);
      // Drop numerically null directions.
      const double top = fitted.variances.size() > 0 ? fitted.variances(0) : 0.0;
      Eigen::Index live = 0;
      while (live < fitted.variances.size() && fitted.variances(live) > 1e-12 * top) ++live;
      if (live == 0) live = 1;
      if (live < fitted.variances.size()) {
        p_capped = true;
        fitted.components.conservativeResize(live, Eigen::NoChange);
        fitted.variances.conservativeResize(live);
      }
      train_proj = pca_apply_rows(fitted, train);
      projection = std::move(fitted);
    }

    const Eigen::RowVectorXd mean = train_proj.colwise().mean();
    const double total_var = (train_proj.rowwise() - mean).squaredNorm() /
                             static_cast<double>(std::max<Eigen::Index>(1, train_proj.rows() - 1));
    const double ridge = config.ridge * total_var / static_cast<double>(train_proj.cols());
    const LDAModel model = lda_train(train_proj, train_labels, ridge, config.priors);

    for (Eigen::Index r : test_rows) {
      Eigen::VectorXd x = features.row(r).transpose();
      if (projection) x = pca_apply(*projection, x);
      const std::size_t predicted = lda_predict(model, x).label;
      const std::size_t truth = labels[static_cast<std::size_t>(r)];
      report.predictions[static_cast<std::size_t>(r)] = predicted;
      ++report.confusion[truth - 1][predicted - 1];
    }
  }
  if (p_capped) {
    report.notes.push_back("P = " + std::to_string(config.P) +
                           " capped at the training-fold rank in at least one fold");
  }

  std::size_t correct = 0;
  report.per_class_accuracy.assign(num_classes, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < num_classes; ++k) {
    const std::size_t row_total =
        std::accumulate(report.confusion[k].begin(), report.confusion[k].end(), std::size_t{0});
    correct += report.confusion[k][k];
    if (row_total > 0) {
      report.per_class_accuracy[k] =
          static_cast<double>(report.confusion[k][k]) / static_cast<double>(row_total);
    }
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return report;
}

CvReport cross_validate(const LabeledDataset& dataset, const PipelineConfig& config,
                        const CvScheme& scheme) {
  dataset.validate();
  const Eigen::MatrixXd features = feature_matrix(dataset, config);
  std::vector<std::size_t> labels, sessions;
  for (const auto& t : dataset.trials) {
    labels.push_back(t.label);
    sessions.push_back(t.session);
  }
  CvReport report =
      cross_validate_features(features, labels, sessions, dataset.num_classes, config, scheme);
  if (config.is_bjs() && config.coefficients_per_channel() < config.N) {
    report.notes.push_back("BJS coefficients capped at " +
                           std::to_string(config.coefficients_per_channel()) +
                           " per channel (below Nyquist) instead of N = " + std::to_string(config.N));
  }
  return report;
}

std::vector<CPattern> band_masks(std::size_t T) {
  std::vector<CPattern> out;
  const std::size_t n = coefficient_count(T);
  for (std::size_t lo = 0; lo <= T; ++lo) {
    for (std::size_t hi = lo; hi <= T; ++hi) {
      std::vector<double> c(n, 0.0);
      for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t h = harmonic_of(k);
        if (h >= lo && h <= hi) c[k - 1] = 1.0;
      }
      out.push_back({"band:" + std::to_string(lo) + "-" + std::to_string(hi), ShrinkageProfile(std::move(c))});
    }
  }
  return out;
}

std::vector<CPattern> pinsker_patterns(std::size_t T, double alpha, std::span<const double> mus) {
  const EllipsoidSpec spec(alpha, 1.0);
  std::vector<CPattern> out;
  for (double mu : mus) {
    std::ostringstream name;
    name << "pinsker:alpha=" << alpha << ":mu=" << mu;
    out.push_back({name.str(), pinsker_profile(spec, mu, coefficient_count(T))});
  }
  return out;
}

std::size_t PinskerGrid::size() const {
  std::size_t cells = 0;
  for (std::size_t T : Ts) {
    const std::size_t patterns =
        (include_band_masks ? (T + 1) * (T + 2) / 2 : 0) + pinsker_mus.size();
    cells += patterns * Ps.size();
  }
  return cells;
}

GridResult grid_search(const LabeledDataset& dataset, const PipelineConfig& base,
                       const PinskerGrid& grid, const CvScheme& scheme) {
  if (base.is_bjs()) throw ValidationError("grid_search: the BJS pipeline has no shrinkage grid");
  if (grid.size() == 0) throw ValidationError("grid_search: empty grid");
  dataset.validate();
  std::vector<std::size_t> labels, sessions;
  for (const auto& t : dataset.trials) {
    labels.push_back(t.label);
    sessions.push_back(t.session);
  }

  GridResult result;
  bool have_best = false;
  for (std::size_t T : grid.Ts) {
    PipelineConfig raw = base;
    raw.T = T;
    raw.shrinkage = ShrinkageProfile(std::vector<double>(coefficient_count(T), 1.0));
    raw.magnitude_only = false;
    // Unshrunk coefficients once per T; each pattern scales columns.
    const Eigen::MatrixXd coefficients = feature_matrix(dataset, raw);
    const std::size_t per = coefficient_count(T);

    std::vector<CPattern> patterns;
    if (grid.include_band_masks) patterns = band_masks(T);
    for (auto& p : pinsker_patterns(T, grid.pinsker_alpha, grid.pinsker_mus)) patterns.push_back(std::move(p));

    for (const CPattern& pattern : patterns) {
      Eigen::MatrixXd features = coefficients;
      for (Eigen::Index col = 0; col < features.cols(); ++col) {
        features.col(col) *= pattern.profile.weights()[static_cast<std::size_t>(col) % per];
      }
      if (base.magnitude_only) {
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
          Eigen::VectorXd row = features.row(r).transpose();
          to_magnitude_features(row, per);
          features.row(r) = row.transpose();
        }
      }
      for (std::size_t P : grid.Ps) {
        PipelineConfig cell = base;
        cell.T = T;
        cell.shrinkage = pattern.profile;
        cell.P = P;
        CvReport report = cross_validate_features(features, labels, sessions, dataset.num_classes,
                                                  cell, scheme);
        result.table.push_back({T, pattern.name, P, report.accuracy});
        if (!have_best || report.accuracy > result.best_accuracy) {
          have_best = true;
          result.best = cell;
          result.best_pattern = pattern.name;
          result.best_accuracy = report.accuracy;
          result.best_report = std::move(report);
        }
      }
    }
  }
  return result;
}

} // namespace lfp
