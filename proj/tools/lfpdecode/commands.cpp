#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "lfp/errors.hpp"
#include "lfp/shrinkage.hpp"

namespace lfp::cli {
namespace {

namespace fs = std::filesystem;

const std::set<std::string> kModelKeys{"model.kind",  "model.K",          "model.alpha",
                                       "model.C",     "model.T",          "model.separation",
                                       "model.spread"};
const std::set<std::string> kDataKeys{"data.trials_per_class", "data.channels", "data.N",
                                      "data.sessions"};
const std::set<std::string> kPipelineKeys{
    "pipeline.N",     "pipeline.T",     "pipeline.P",     "pipeline.ridge",
    "pipeline.priors", "pipeline.magnitude_only", "pipeline.c", "pipeline.alpha",
    "pipeline.mu",    "pipeline.L"};
const std::set<std::string> kCvKeys{"cv.scheme", "cv.k"};
const std::set<std::string> kGridKeys{"grid.Ts", "grid.bands", "grid.alpha", "grid.mus",
                                      "grid.Ps"};

std::set<std::string> keys(std::initializer_list<const std::set<std::string>*> groups,
                           std::initializer_list<std::string> extra = {}) {
  std::set<std::string> out(extra);
  out.insert("seed");
  for (const auto* g : groups) out.insert(g->begin(), g->end());
  return out;
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

std::vector<std::pair<std::string, std::string>> model_metadata(const io::Config& config) {
  std::vector<std::pair<std::string, std::string>> meta;
  for (const auto& [key, value] : config.values()) {
    if (kModelKeys.contains(key) || key == "noise.sigma" || key == "data.sessions") {
      meta.emplace_back(key, value);
    }
  }
  return meta;
}

} // namespace

void write_outputs(const FileSet& files) {
  for (const auto& [path, content] : files) {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
      if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    io::write_file_atomic(path, content);
  }
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"rates", "adaptivity", "consistency", "phase"};
  return names;
}

ClassModel class_model_from(const io::Config& config) {
  const std::string kind = config.get_string("model.kind", "generic");
  const std::size_t K = config.get_size("model.K", 8);
  const EllipsoidSpec spec(config.get_double("model.alpha", 2.0), config.get_double("model.C", 10.0));
  const std::size_t T = config.get_size("model.T", 5);
  const double spread = config.get_double("model.spread", 0.1);
  const std::uint64_t seed = derive_seed(config.get_u64("seed", 0), {1});
  if (kind == "generic") {
    return make_class_model(K, spec, T, config.get_double("model.separation", 0.5), spread, seed);
  }
  if (config.has("model.separation")) {
    throw ValidationError("model.separation applies to model.kind = generic only");
  }
  if (kind == "phase") return make_phase_class_model(K, spec, T, spread, seed);
  if (kind == "magnitude") return make_magnitude_class_model(K, spec, T, spread, seed);
  throw ValidationError("model.kind must be generic, phase or magnitude, got '" + kind + "'");
}

NoiseModel noise_from(const io::Config& config) {
  NoiseModel noise{config.get_double("noise.sigma", 1.0)};
  noise.validate();
  return noise;
}

PipelineConfig pipeline_from(const io::Config& config, const std::string& kind,
                             std::size_t dataset_N) {
  PipelineConfig p;
  if (kind == "pinsker") {
    p = PipelineConfig::pinsker_defaults();
    if (config.has("pipeline.L")) throw ValidationError("pipeline.L applies to the bjs pipeline");
  } else if (kind == "bjs") {
    p = PipelineConfig::bjs_defaults();
    for (const char* key : {"pipeline.c", "pipeline.alpha", "pipeline.mu", "pipeline.T"}) {
      if (config.has(key)) {
        throw ValidationError(std::string(key) + " does not apply to the bjs pipeline (BJS has no tuning)");
      }
    }
  } else {
    throw ValidationError("pipeline must be pinsker or bjs, got '" + kind + "'");
  }
  p.N = config.get_size("pipeline.N", dataset_N == 0 ? p.N : std::min<std::size_t>(p.N, dataset_N));
  p.T = config.get_size("pipeline.T", p.T);
  p.P = config.get_size("pipeline.P", p.P);
  p.ridge = config.get_double("pipeline.ridge", p.ridge);
  const std::string priors = config.get_string("pipeline.priors", "empirical");
  if (priors == "empirical") {
    p.priors = PriorMode::empirical;
  } else if (priors == "uniform") {
    p.priors = PriorMode::uniform;
  } else {
    throw ValidationError("pipeline.priors must be empirical or uniform");
  }
  p.magnitude_only = config.get_bool("pipeline.magnitude_only", false);
  p.seed = config.get_u64("seed", 0);
  if (kind == "pinsker") {
    const bool has_c = config.has("pipeline.c");
    const bool has_mu = config.has("pipeline.mu") || config.has("pipeline.alpha");
    if (has_c && has_mu) throw ValidationError("give either pipeline.c or pipeline.alpha/mu, not both");
    if (has_c) {
      p.shrinkage = ShrinkageProfile(config.get_doubles("pipeline.c", {}));
    } else if (has_mu) {
      if (!config.has("pipeline.mu")) throw ValidationError("pipeline.alpha needs pipeline.mu");
      const EllipsoidSpec spec(config.get_double("pipeline.alpha", 2.0), 1.0);
      p.shrinkage = pinsker_profile(spec, config.get_double("pipeline.mu", 0.0),
                                    coefficient_count(p.T));
    } else {
      p.shrinkage = ShrinkageProfile(std::vector<double>(coefficient_count(p.T), 1.0));
    }
  } else {
    p.shrinkage = BjsShrinkage{config.get_size("pipeline.L", 2)};
  }
  p.validate();
  return p;
}

CvScheme scheme_from(const io::Config& config) {
  const std::string name = config.get_string("cv.scheme", "loso");
  if (name == "loso") {
    if (config.has("cv.k")) throw ValidationError("cv.k applies to cv.scheme = kfold only");
    return CvScheme::leave_one_session_out();
  }
  if (name == "kfold") return CvScheme::k_fold(config.get_size("cv.k", 10));
  throw ValidationError("cv.scheme must be loso or kfold, got '" + name + "'");
}

FileSet synth_command(const io::Config& config, const fs::path& out_csv) {
  config.require_known(keys({&kModelKeys, &kDataKeys}, {"noise.sigma"}));
  const ClassModel model = class_model_from(config);
  const NoiseModel noise = noise_from(config);
  const std::uint64_t seed = config.get_u64("seed", 0);
  LabeledDataset ds = generate_dataset(
      model, config.get_size("data.trials_per_class", 20), config.get_size("data.channels", 4),
      config.get_size("data.N", 500), config.get_size("data.sessions", 5), noise,
      derive_seed(seed, {2}));
  ds.seed = seed;
  ds.metadata = model_metadata(config);
  ds.metadata.emplace_back("separation", io::format_double(model.separation()));
  return {{out_csv, render([&](std::ostream& o) { io::write_dataset_csv(o, ds); })},
          {io::meta_path_for(out_csv), render([&](std::ostream& o) { io::write_dataset_meta(o, ds); })}};
}

FileSet estimate_command(const io::Config& config, const SampledSignal& signal,
                         const std::string& method, const fs::path& out_dir) {
  const std::size_t N = signal.size();
  const double sigma = noise_from(config).sigma;
  const std::size_t cap = nyquist_coefficient_cap(N);
  if (cap == 0) throw ValidationError("estimate: signal too short for any coefficient");
  CoefficientVector estimate;
  CoefficientVector observed;
  if (method == "pinsker") {
    config.require_known(keys({}, {"noise.sigma", "pinsker.alpha", "pinsker.C", "pinsker.mu",
                                   "estimate.T"}));
    const std::size_t count =
        config.has("estimate.T") ? coefficient_count(config.get_size("estimate.T", 0)) : cap;
    observed = TrigBasisTable(N, count).analyze(signal.samples(), sigma);
    if (!config.has("pinsker.mu") && !(config.has("pinsker.alpha") && config.has("pinsker.C"))) {
      throw ValidationError("pinsker estimate needs pinsker.alpha and pinsker.C (or pinsker.mu)");
    }
    const EllipsoidSpec spec(config.get_double("pinsker.alpha", 2.0), config.get_double("pinsker.C", 1.0));
    const double mu = config.has("pinsker.mu") ? config.get_double("pinsker.mu", 0.0)
                                               : pinsker_mu(spec, observed.epsilon());
    estimate = pinsker_shrink(observed, spec, mu);
  } else if (method == "bjs") {
    config.require_known(keys({}, {"noise.sigma", "bjs.L"}));
    observed = TrigBasisTable(N, cap).analyze(signal.samples(), sigma);
    const auto partition = dyadic_blocks(config.get_size("bjs.L", 2), bjs_levels_for(N));
    estimate = bjs_estimate(observed, partition);
    auto& c = estimate.mutable_coeffs();
    c.resize(std::min(c.size(), cap));
  } else {
    throw ValidationError("estimate method must be pinsker or bjs, got '" + method + "'");
  }
  const SampledSignal fitted = reconstruct(estimate, N);
  return {{out_dir / "coefficients.csv",
           render([&](std::ostream& o) { io::write_coefficients_csv(o, observed, estimate); })},
          {out_dir / "reconstruction.csv",
           render([&](std::ostream& o) { io::write_reconstruction_csv(o, signal, fitted); })}};
}

FileSet benchmark_command(const io::Config& config, const LabeledDataset& dataset,
                          const std::string& pipeline, bool grid, const fs::path& out_dir) {
  config.require_known(keys({&kPipelineKeys, &kCvKeys, &kGridKeys}));
  if (grid && pipeline == "bjs") {
    throw ValidationError("--grid applies to the pinsker pipeline only; BJS has no shrinkage grid");
  }
  if (!grid) {
    for (const auto& key : kGridKeys) {
      if (config.has(key)) throw ValidationError(key + " needs --grid");
    }
  }
  dataset.validate();
  const PipelineConfig base = pipeline_from(config, pipeline, dataset.N);
  const CvScheme scheme = scheme_from(config);
  FileSet files;
  BenchmarkReport report;
  if (grid) {
    PinskerGrid g;
    g.Ts = config.get_sizes("grid.Ts", {base.T});
    g.include_band_masks = config.get_bool("grid.bands", true);
    g.pinsker_alpha = config.get_double("grid.alpha", 2.0);
    g.pinsker_mus = config.get_doubles("grid.mus", {});
    g.Ps = config.get_sizes("grid.Ps", {base.P});
    const GridResult result = grid_search(dataset, base, g, scheme);
    report = {"pinsker:" + result.best_pattern, result.best, scheme.name(), base.seed,
              result.best_report};
    files.emplace_back(out_dir / "grid.csv",
                       render([&](std::ostream& o) { io::write_grid_csv(o, result); }));
  } else {
    const std::vector<NamedConfig> configs{{pipeline, base}};
    report = benchmark_classifiers(dataset, configs, scheme, base.seed).front();
  }
  const std::vector<BenchmarkReport> reports{report};
  files.emplace_back(out_dir / "report.csv",
                     render([&](std::ostream& o) { io::write_report_csv(o, reports); }));
  files.emplace_back(out_dir / "confusion.csv",
                     render([&](std::ostream& o) { io::write_confusion_csv(o, reports); }));
  files.emplace_back(out_dir / "summary.txt",
                     render([&](std::ostream& o) { io::write_summary(o, reports); }));
  return files;
}

FileSet experiment_command(const std::string& name, const io::Config& config,
                           const fs::path& out_dir) {
  const std::uint64_t seed = config.get_u64("seed", 0);
  std::ostringstream summary;
  summary << std::setprecision(6);
  FileSet files;
  if (name == "rates") {
    config.require_known(keys({}, {"rates.alpha", "rates.C", "rates.epsilons", "rates.trials",
                                   "rates.T", "rates.thetas"}));
    const EllipsoidSpec spec(config.get_double("rates.alpha", 2.0), config.get_double("rates.C", 10.0));
    const auto eps = config.get_doubles("rates.epsilons", {0.5, 0.2, 0.1, 0.05});
    RiskCurveOptions opts;
    opts.T = config.get_size("rates.T", opts.T);
    opts.thetas = config.get_size("rates.thetas", opts.thetas);
    const RiskCurve curve =
        risk_curve_pinsker(spec, eps, config.get_size("rates.trials", 200), seed, opts);
    files.emplace_back(out_dir / "rates.csv",
                       render([&](std::ostream& o) { io::write_risk_curve_csv(o, curve); }));
    summary << "Pinsker worst-case risk, alpha = " << spec.alpha() << ", C = " << spec.radius() << '\n';
    for (const auto& p : curve.points) {
      summary << "  eps " << p.abscissa << ": " << p.mse << " +- " << p.std_error << '\n';
    }
    if (curve.points.size() >= 2) summary << "  log-log slope: " << curve.log_log_slope() << '\n';
  } else if (name == "adaptivity") {
    config.require_known(keys({}, {"adaptivity.alphas", "adaptivity.Cs", "adaptivity.epsilon",
                                   "adaptivity.trials", "adaptivity.thetas", "adaptivity.L"}));
    std::vector<EllipsoidSpec> specs;
    for (double a : config.get_doubles("adaptivity.alphas", {1, 2, 3})) {
      for (double c : config.get_doubles("adaptivity.Cs", {5, 10})) specs.emplace_back(a, c);
    }
    AdaptivityOptions opts;
    opts.thetas = config.get_size("adaptivity.thetas", opts.thetas);
    opts.pass_through = config.get_size("adaptivity.L", opts.pass_through);
    const auto rows = adaptivity_ratio_bjs(specs, config.get_double("adaptivity.epsilon", 0.02),
                                           config.get_size("adaptivity.trials", 200), seed, opts);
    files.emplace_back(out_dir / "adaptivity.csv",
                       render([&](std::ostream& o) { io::write_adaptivity_csv(o, rows); }));
    summary << "BJS / oracle Pinsker worst-case risk ratio\n";
    for (const auto& r : rows) {
      summary << "  alpha " << r.spec.alpha() << ", C " << r.spec.radius() << ": " << r.ratio
              << " +- " << r.ratio_se << '\n';
    }
  } else if (name == "consistency") {
    config.require_known(keys({&kModelKeys}, {"noise.sigma", "consistency.Ns",
                                              "consistency.trials_per_class"}));
    const ClassModel model = class_model_from(config);
    const auto Ns = config.get_sizes("consistency.Ns", {64, 256, 1024});
    const auto rows = consistency_experiment(model, Ns, config.get_size("consistency.trials_per_class", 500),
                                             derive_seed(seed, {2}), noise_from(config));
    files.emplace_back(out_dir / "consistency.csv",
                       render([&](std::ostream& o) { io::write_consistency_csv(o, rows); }));
    summary << "Minimum-distance decoding with BJS estimates, K = " << model.num_classes() << '\n';
    for (const auto& r : rows) {
      summary << "  N " << r.N << ": worst-class error " << r.worst_class_error << " +- "
              << r.worst_class_se << ", bound term " << r.bound_term << '\n';
    }
  } else if (name == "phase") {
    config.require_known(keys({&kModelKeys, &kDataKeys, &kPipelineKeys, &kCvKeys}, {"noise.sigma"}));
    io::Config with_kind = config;
    if (!with_kind.has("model.kind")) with_kind.set("model.kind", "phase");
    const ClassModel model = class_model_from(with_kind);
    const auto ds = generate_dataset(
        model, config.get_size("data.trials_per_class", 20), config.get_size("data.channels", 4),
        config.get_size("data.N", 500), config.get_size("data.sessions", 5), noise_from(config),
        derive_seed(seed, {2}));
    const PipelineConfig pipeline = pipeline_from(config, "pinsker", ds.N);
    const auto result = phase_ablation(ds, pipeline, scheme_from(config), seed);
    files.emplace_back(out_dir / "phase.csv",
                       render([&](std::ostream& o) { io::write_phase_csv(o, result); }));
    summary << "Phase ablation on " << with_kind.get_string("model.kind", "") << "-coded classes\n"
            << "  full: " << result.full.overall_accuracy() << '\n'
            << "  magnitude-only: " << result.magnitude_only.overall_accuracy() << '\n'
            << "  paired difference: " << result.paired_difference << " +- " << result.paired_se
            << '\n';
  } else {
    std::string valid;
    for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ValidationError("unknown experiment '" + name + "'; valid names: " + valid);
  }
  files.emplace_back(out_dir / "summary.txt", summary.str());
  return files;
}

} // namespace lfp::cli
