#include "lfp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "lfp/errors.hpp"

namespace lfp::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t parse_index(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ValidationError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw NumericError("format_double: conversion failed");
  out.append(buf, ptr);
}

void append_size(std::string& out, std::size_t v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, ptr);
}

std::string priors_name(PriorMode m) { return m == PriorMode::empirical ? "empirical" : "uniform"; }

} // namespace

std::string format_double(double v) {
  std::string out;
  append_double(out, v);
  return out;
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(v)) {
    throw ValidationError("invalid number '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ValidationError("invalid unsigned integer '" + std::string(text) + "'");
  }
  return v;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset) {
  std::string buf = "trial_id,session,label,channel,sample_index,value\n";
  for (std::size_t i = 0; i < dataset.trials.size(); ++i) {
    const Trial& t = dataset.trials[i];
    for (std::size_t c = 0; c < t.channels.size(); ++c) {
      const auto samples = t.channels[c].samples();
      for (std::size_t l = 0; l < samples.size(); ++l) {
        append_size(buf, i);
        buf += ',';
        append_size(buf, t.session);
        buf += ',';
        append_size(buf, t.label);
        buf += ',';
        append_size(buf, c);
        buf += ',';
        append_size(buf, l);
        buf += ',';
        append_double(buf, samples[l]);
        buf += '\n';
      }
    }
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void write_dataset_meta(std::ostream& out, const LabeledDataset& dataset) {
  out << "N=" << dataset.N << '\n'
      << "channels=" << dataset.channels << '\n'
      << "K=" << dataset.num_classes << '\n'
      << "seed=" << dataset.seed << '\n'
      << "trials=" << dataset.trials.size() << '\n'
      << "sessions=" << dataset.num_sessions() << '\n';
  for (const auto& [key, value] : dataset.metadata) out << key << '=' << value << '\n';
}

LabeledDataset read_dataset(std::istream& csv, const std::map<std::string, std::string>& meta) {
  std::string line;
  if (!std::getline(csv, line)) throw ValidationError("dataset: empty file");
  if (trim(line) != "trial_id,session,label,channel,sample_index,value") {
    throw ValidationError("dataset: unexpected header '" + std::string(trim(line)) + "'");
  }
  struct Row {
    std::size_t session = 0, label = 0;
    std::vector<std::vector<double>> channels;
    std::vector<std::vector<char>> seen;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  std::size_t max_channel = 0, max_sample = 0;
  bool any = false;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, double>> cells;
  while (std::getline(csv, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw ValidationError("dataset line " + std::to_string(line_no) + ": expected 6 fields");
    }
    const std::size_t trial = parse_index(fields[0], "trial_id");
    const std::size_t session = parse_index(fields[1], "session");
    const std::size_t label = parse_index(fields[2], "label");
    const std::size_t channel = parse_index(fields[3], "channel");
    const std::size_t sample = parse_index(fields[4], "sample_index");
    const double value = parse_double(fields[5]);
    if (!std::isfinite(value)) {
      throw ValidationError("dataset line " + std::to_string(line_no) + ": non-finite value");
    }
    if (trial >= rows.size()) rows.resize(trial + 1);
    Row& r = rows[trial];
    if (r.label == 0) {
      r.session = session;
      r.label = label;
    } else if (r.session != session || r.label != label) {
      throw ValidationError("dataset line " + std::to_string(line_no) +
                            ": session/label disagree with earlier rows of trial " +
                            std::to_string(trial));
    }
    max_channel = std::max(max_channel, channel);
    max_sample = std::max(max_sample, sample);
    cells.emplace_back(trial, channel, sample, value);
    any = true;
  }
  if (!any) throw ValidationError("dataset: no rows");

  LabeledDataset ds;
  ds.channels = max_channel + 1;
  ds.N = max_sample + 1;
  auto meta_size = [&](const char* key, std::size_t fallback) {
    const auto it = meta.find(key);
    return it == meta.end() ? fallback : static_cast<std::size_t>(parse_u64(it->second));
  };
  std::size_t max_label = 0;
  for (const auto& r : rows) max_label = std::max(max_label, r.label);
  ds.num_classes = meta_size("K", max_label);
  ds.seed = meta.contains("seed") ? parse_u64(meta.at("seed")) : 0;
  if (meta_size("N", ds.N) != ds.N || meta_size("channels", ds.channels) != ds.channels) {
    throw ValidationError("dataset: rows disagree with N/channels in the metadata sidecar");
  }
  for (auto& r : rows) {
    r.channels.assign(ds.channels, std::vector<double>(ds.N, 0.0));
    r.seen.assign(ds.channels, std::vector<char>(ds.N, 0));
  }
  for (const auto& [trial, channel, sample, value] : cells) {
    char& seen = rows[trial].seen[channel][sample];
    if (seen) {
      throw ValidationError("dataset: duplicate sample (trial " + std::to_string(trial) +
                            ", channel " + std::to_string(channel) + ", index " +
                            std::to_string(sample) + ")");
    }
    seen = 1;
    rows[trial].channels[channel][sample] = value;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& ch : rows[i].seen) {
      if (std::find(ch.begin(), ch.end(), 0) != ch.end()) {
        throw ValidationError("dataset: trial " + std::to_string(i) + " is missing samples");
      }
    }
    Trial t;
    t.label = rows[i].label;
    t.session = rows[i].session;
    for (auto& ch : rows[i].channels) t.channels.emplace_back(std::move(ch));
    ds.trials.push_back(std::move(t));
  }
  static const std::set<std::string> reserved{"N", "channels", "K", "seed", "trials", "sessions"};
  for (const auto& [key, value] : meta) {
    if (!reserved.contains(key)) ds.metadata.emplace_back(key, value);
  }
  ds.validate();
  return ds;
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path meta = csv_path;
  meta.replace_extension(".meta");
  return meta;
}

void save_dataset(const std::filesystem::path& csv_path, const LabeledDataset& dataset) {
  std::ostringstream csv, meta;
  write_dataset_csv(csv, dataset);
  write_dataset_meta(meta, dataset);
  write_file_atomic(csv_path, csv.str());
  write_file_atomic(meta_path_for(csv_path), meta.str());
}

LabeledDataset load_dataset(const std::filesystem::path& csv_path) {
  std::map<std::string, std::string> meta;
  const auto meta_path = meta_path_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    meta = Config::parse(in, meta_path.string()).values();
  }
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open dataset '" + csv_path.string() + "'");
  return read_dataset(in, meta);
}

SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  std::vector<double> values;
  bool first = true;
  bool indexed = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (first) {
      first = false;
      if (fields.size() == 2 && fields[0] == "sample_index") {
        indexed = true;
        continue;
      }
      if (fields.size() == 1 && fields[0] == "value") continue;
      indexed = fields.size() == 2;
    }
    if (fields.size() != (indexed ? 2u : 1u)) {
      throw ValidationError("signal line " + std::to_string(line_no) + ": unexpected field count");
    }
    if (indexed && parse_index(fields[0], "sample_index") != values.size()) {
      throw ValidationError("signal line " + std::to_string(line_no) +
                            ": sample indices must run 0, 1, 2, ...");
    }
    values.push_back(parse_double(fields.back()));
  }
  if (values.empty()) throw ValidationError("signal: no samples");
  return SampledSignal(std::move(values));
}

void write_signal_csv(std::ostream& out, const SampledSignal& signal) {
  std::string buf = "sample_index,value\n";
  for (std::size_t l = 0; l < signal.size(); ++l) {
    append_size(buf, l);
    buf += ',';
    append_double(buf, signal[l]);
    buf += '\n';
  }
  out << buf;
}

void write_coefficients_csv(std::ostream& out, const CoefficientVector& observed,
                            const CoefficientVector& estimate) {
  std::string buf = "k,observed,estimate\n";
  const std::size_t n = std::max(observed.size(), estimate.size());
  for (std::size_t k = 1; k <= n; ++k) {
    append_size(buf, k);
    buf += ',';
    append_double(buf, observed.at(k));
    buf += ',';
    append_double(buf, estimate.at(k));
    buf += '\n';
  }
  out << buf;
}

void write_reconstruction_csv(std::ostream& out, const SampledSignal& observed,
                              const SampledSignal& estimate) {
  if (observed.size() != estimate.size()) {
    throw ValidationError("reconstruction: observed and estimate lengths differ");
  }
  std::string buf = "sample_index,observed,estimate\n";
  for (std::size_t l = 0; l < observed.size(); ++l) {
    append_size(buf, l);
    buf += ',';
    append_double(buf, observed[l]);
    buf += ',';
    append_double(buf, estimate[l]);
    buf += '\n';
  }
  out << buf;
}

Config Config::parse(std::istream& in, std::string_view origin) {
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(std::string(origin) + ":" + std::to_string(line_no) +
                            ": expected key=value");
    }
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (key.empty()) {
      throw ValidationError(std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
    }
    if (cfg.values_.contains(key)) {
      throw ValidationError(std::string(origin) + ":" + std::to_string(line_no) +
                            ": duplicate key '" + key + "'");
    }
    cfg.values_.emplace(std::move(key), std::move(value));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse(in, path.string());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override '" + std::string(assignment) + "' is not key=value");
  }
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(std::string key, std::string value) {
  if (key.empty()) throw ValidationError("config: empty key");
  values_[std::move(key)] = std::move(value);
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (!allowed.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
}

std::string Config::get_string(const std::string& key, std::string fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? std::move(fallback) : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const ValidationError& e) {
    throw ValidationError(key + ": " + e.what());
  }
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_u64(it->second);
  } catch (const ValidationError& e) {
    throw ValidationError(key + ": " + e.what());
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ValidationError(key + ": expected true/false, got '" + it->second + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (auto field : split(it->second, ',')) {
    try {
      out.push_back(parse_double(field));
    } catch (const ValidationError& e) {
      throw ValidationError(key + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key,
                                           std::vector<std::size_t> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::size_t> out;
  for (auto field : split(it->second, ',')) {
    try {
      out.push_back(static_cast<std::size_t>(parse_u64(field)));
    } catch (const ValidationError& e) {
      throw ValidationError(key + ": " + e.what());
    }
  }
  return out;
}

std::string describe_shrinkage(const PipelineConfig& config) {
  if (const auto* bjs = std::get_if<BjsShrinkage>(&config.shrinkage)) {
    return "bjs:L=" + std::to_string(bjs->pass_through) +
           ":J=" + std::to_string(bjs_levels_for(config.N));
  }
  std::string out = "c=";
  const auto w = std::get<ShrinkageProfile>(config.shrinkage).weights();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ';';
    append_double(out, w[k]);
  }
  return out;
}

void write_report_csv(std::ostream& out, std::span<const BenchmarkReport> reports) {
  std::size_t K = 0;
  for (const auto& r : reports) K = std::max(K, r.cv.num_classes);
  std::string buf =
      "name,pipeline,scheme,seed,N,T,P,ridge,priors,magnitude_only,shrinkage,overall_accuracy,"
      "worst_case_error";
  for (std::size_t k = 1; k <= K; ++k) buf += ",accuracy_class_" + std::to_string(k);
  buf += '\n';
  for (const auto& r : reports) {
    const auto& c = r.config;
    buf += r.name + ',' + (c.is_bjs() ? "bjs" : "pinsker") + ',' + r.scheme + ',' +
           std::to_string(r.seed) + ',' + std::to_string(c.N) + ',' + std::to_string(c.T) + ',' +
           std::to_string(c.P) + ',';
    append_double(buf, c.ridge);
    buf += ',' + priors_name(c.priors) + ',' + (c.magnitude_only ? "true" : "false") + ',' +
           describe_shrinkage(c) + ',';
    append_double(buf, r.cv.accuracy);
    buf += ',';
    append_double(buf, r.worst_case_error());
    for (std::size_t k = 0; k < K; ++k) {
      buf += ',';
      if (k < r.cv.per_class_accuracy.size() && std::isfinite(r.cv.per_class_accuracy[k])) {
        append_double(buf, r.cv.per_class_accuracy[k]);
      }
    }
    buf += '\n';
  }
  out << buf;
}

void write_confusion_csv(std::ostream& out, std::span<const BenchmarkReport> reports) {
  std::size_t K = 0;
  for (const auto& r : reports) K = std::max(K, r.cv.num_classes);
  std::string buf = "name,true_label";
  for (std::size_t k = 1; k <= K; ++k) buf += ",predicted_" + std::to_string(k);
  buf += '\n';
  for (const auto& r : reports) {
    for (std::size_t t = 0; t < r.cv.confusion.size(); ++t) {
      buf += r.name + ',' + std::to_string(t + 1);
      for (std::size_t p = 0; p < K; ++p) {
        buf += ',' + std::to_string(p < r.cv.confusion[t].size() ? r.cv.confusion[t][p] : 0);
      }
      buf += '\n';
    }
  }
  out << buf;
}

void write_summary(std::ostream& out, std::span<const BenchmarkReport> reports) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3);
  for (const auto& r : reports) {
    ss << r.name << " (" << (r.config.is_bjs() ? "bjs" : "pinsker") << ", " << r.scheme
       << ", seed " << r.seed << ")\n";
    ss << "  shrinkage: " << describe_shrinkage(r.config) << '\n';
    ss << "  N = " << r.config.N << ", T = " << r.config.T << ", P = " << r.config.P << '\n';
    ss << "  accuracy: " << r.cv.accuracy << " (" << r.cv.correct() << " of "
       << r.cv.predictions.size() << " trials, " << r.cv.num_folds << " folds)\n";
    ss << "  worst-case error P_e: " << r.worst_case_error() << '\n';
    ss << "  per-class accuracy:";
    for (double a : r.cv.per_class_accuracy) {
      if (std::isfinite(a)) {
        ss << ' ' << a;
      } else {
        ss << " n/a";
      }
    }
    ss << '\n';
    for (const auto& note : r.cv.notes) ss << "  note: " << note << '\n';
  }
  out << ss.str();
}

void write_grid_csv(std::ostream& out, const GridResult& grid) {
  std::string buf = "T,pattern,P,accuracy\n";
  for (const auto& row : grid.table) {
    buf += std::to_string(row.T) + ',' + row.pattern + ',' + std::to_string(row.P) + ',';
    append_double(buf, row.accuracy);
    buf += '\n';
  }
  out << buf;
}

void write_risk_curve_csv(std::ostream& out, const RiskCurve& curve) {
  std::string buf = "epsilon,mse,std_error,trials,worst_theta\n";
  for (const auto& p : curve.points) {
    append_double(buf, p.abscissa);
    buf += ',';
    append_double(buf, p.mse);
    buf += ',';
    append_double(buf, p.std_error);
    buf += ',' + std::to_string(p.trials) + ',' + std::to_string(p.worst_theta) + '\n';
  }
  out << buf;
}

void write_adaptivity_csv(std::ostream& out, std::span<const AdaptivityRow> rows) {
  std::string buf = "alpha,C,bjs_risk,bjs_se,pinsker_risk,pinsker_se,ratio,ratio_se\n";
  for (const auto& r : rows) {
    for (double v : {r.spec.alpha(), r.spec.radius(), r.bjs_risk, r.bjs_se, r.pinsker_risk,
                     r.pinsker_se, r.ratio}) {
      append_double(buf, v);
      buf += ',';
    }
    append_double(buf, r.ratio_se);
    buf += '\n';
  }
  out << buf;
}

void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows) {
  std::size_t K = 0;
  for (const auto& r : rows) K = std::max(K, r.class_errors.size());
  std::string buf = "N,trials_per_class,worst_class_error,worst_class_se,sup_mse,sup_mse_se,bound_term";
  for (std::size_t k = 1; k <= K; ++k) buf += ",class_error_" + std::to_string(k);
  buf += '\n';
  for (const auto& r : rows) {
    buf += std::to_string(r.N) + ',' + std::to_string(r.trials_per_class);
    for (double v : {r.worst_class_error, r.worst_class_se, r.sup_mse, r.sup_mse_se, r.bound_term}) {
      buf += ',';
      append_double(buf, v);
    }
    for (double e : r.class_errors) {
      buf += ',';
      append_double(buf, e);
    }
    buf += '\n';
  }
  out << buf;
}

void write_phase_csv(std::ostream& out, const PhaseAblation& result) {
  const std::size_t K = result.full.cv.num_classes;
  std::string buf = "variant,overall_accuracy,worst_case_error,paired_difference,paired_se";
  for (std::size_t k = 1; k <= K; ++k) buf += ",accuracy_class_" + std::to_string(k);
  buf += '\n';
  for (const BenchmarkReport* r : {&result.full, &result.magnitude_only}) {
    buf += r->name;
    for (double v : {r->cv.accuracy, r->worst_case_error(), result.paired_difference, result.paired_se}) {
      buf += ',';
      append_double(buf, v);
    }
    for (double a : r->cv.per_class_accuracy) {
      buf += ',';
      if (std::isfinite(a)) append_double(buf, a);
    }
    buf += '\n';
  }
  out << buf;
}

} // namespace lfp::io
