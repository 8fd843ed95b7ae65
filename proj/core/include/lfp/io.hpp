#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/basis.hpp"
#include "lfp/classify.hpp"
#include "lfp/experiments.hpp"
#include "lfp/synth.hpp"

namespace lfp::io {

/// Shortest-round-trip-safe text for a double: 17 significant digits.
[[nodiscard]] std::string format_double(double v);
/// Strict parse of a whole field; throws ValidationError.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] std::uint64_t parse_u64(std::string_view text);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Datasets: `trial_id,session,label,channel,sample_index,value`, one row per
// sample, plus a `<basename>.meta` sidecar of key=value lines.

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset);
void write_dataset_meta(std::ostream& out, const LabeledDataset& dataset);
/// Parses the CSV; N, channels and K come from the meta map when present and
/// are checked against the rows.
[[nodiscard]] LabeledDataset read_dataset(std::istream& csv,
                                          const std::map<std::string, std::string>& meta);

[[nodiscard]] std::filesystem::path meta_path_for(const std::filesystem::path& csv_path);
void save_dataset(const std::filesystem::path& csv_path, const LabeledDataset& dataset);
[[nodiscard]] LabeledDataset load_dataset(const std::filesystem::path& csv_path);

// ---------------------------------------------------------------------------
// Single-channel signals: a `sample_index,value` CSV or one value per line.

[[nodiscard]] SampledSignal read_signal_csv(std::istream& in);
void write_signal_csv(std::ostream& out, const SampledSignal& signal);

/// `k,observed,estimate`
void write_coefficients_csv(std::ostream& out, const CoefficientVector& observed,
                            const CoefficientVector& estimate);
/// `sample_index,observed,estimate`
void write_reconstruction_csv(std::ostream& out, const SampledSignal& observed,
                              const SampledSignal& estimate);

// ---------------------------------------------------------------------------
// Flat key=value configuration with dotted section prefixes.

class Config {
public:
  Config() = default;

  /// `key = value` lines; '#' starts a comment. Duplicate keys are rejected.
  [[nodiscard]] static Config parse(std::istream& in, std::string_view origin = "config");
  [[nodiscard]] static Config load(const std::filesystem::path& path);

  /// Sets or overrides a value from a `key=value` string.
  void set(std::string_view assignment);
  void set(std::string key, std::string value);

  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
  [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

  /// Throws ValidationError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  [[nodiscard]] std::string get_string(const std::string& key, std::string fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] std::size_t get_size(const std::string& key, std::size_t fallback) const;
  [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key,
                                                std::vector<double> fallback) const;
  [[nodiscard]] std::vector<std::size_t> get_sizes(const std::string& key,
                                                   std::vector<std::size_t> fallback) const;

private:
  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Reports and experiment tables.

[[nodiscard]] std::string describe_shrinkage(const PipelineConfig& config);

/// `name,pipeline,scheme,seed,N,T,P,ridge,priors,magnitude_only,shrinkage,
/// overall_accuracy,worst_case_error,accuracy_class_1..K`
void write_report_csv(std::ostream& out, std::span<const BenchmarkReport> reports);
/// `name,true_label,predicted_1..predicted_K`
void write_confusion_csv(std::ostream& out, std::span<const BenchmarkReport> reports);
void write_summary(std::ostream& out, std::span<const BenchmarkReport> reports);
/// `T,pattern,P,accuracy`
void write_grid_csv(std::ostream& out, const GridResult& grid);

/// `epsilon,mse,std_error,trials,worst_theta`
void write_risk_curve_csv(std::ostream& out, const RiskCurve& curve);
/// `alpha,C,bjs_risk,bjs_se,pinsker_risk,pinsker_se,ratio,ratio_se`
void write_adaptivity_csv(std::ostream& out, std::span<const AdaptivityRow> rows);
/// `N,trials_per_class,worst_class_error,worst_class_se,sup_mse,sup_mse_se,
/// bound_term,class_error_1..K`
void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows);
/// `variant,overall_accuracy,worst_case_error,paired_difference,paired_se,accuracy_class_1..K`
void write_phase_csv(std::ostream& out, const PhaseAblation& result);

} // namespace lfp::io
