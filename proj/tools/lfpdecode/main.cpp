#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "lfp/errors.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

lfp::io::Config build_config(const std::string& path, const std::vector<std::string>& sets,
                             const std::optional<std::uint64_t>& seed) {
  lfp::io::Config config;
  if (!path.empty()) config = lfp::io::Config::load(path);
  for (const auto& s : sets) config.set(s);
  if (seed) config.set("seed", std::to_string(*seed));
  return config;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-shrinkage estimation and LFP-style decoding pipelines"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "override one config key (key=value), repeatable");
    sub->add_option("--seed", seed, "global seed (overrides the config)");
  };

  std::string out;
  std::string input;

  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
  add_common(synth);
  synth->add_option("--out", out, "dataset CSV path (a .meta sidecar is written next to it)")->required();

  std::string method;
  auto* estimate = app.add_subcommand("estimate", "shrink and reconstruct one signal");
  add_common(estimate);
  estimate->add_option("--input", input, "signal CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--method", method, "pinsker or bjs")->required();
  estimate->add_option("--out", out, "output directory")->required();

  std::string pipeline;
  std::string scheme;
  std::optional<std::size_t> folds;
  bool grid = false;
  auto* benchmark = app.add_subcommand("benchmark", "cross-validate a decoding pipeline");
  add_common(benchmark);
  benchmark->add_option("--input", input, "dataset CSV")->required()->check(CLI::ExistingFile);
  benchmark->add_option("--pipeline", pipeline, "pinsker or bjs")->required();
  benchmark->add_option("--scheme", scheme, "loso or kfold (overrides cv.scheme)");
  benchmark->add_option("--k", folds, "fold count for kfold (overrides cv.k)");
  benchmark->add_flag("--grid", grid, "grid-search shrinkage masks (pinsker only)");
  benchmark->add_option("--out", out, "output directory")->required();

  std::string name;
  auto* experiment = app.add_subcommand("experiment", "run a simulation study");
  add_common(experiment);
  experiment->add_option("name", name, "rates, adaptivity, consistency or phase")->required();
  experiment->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    lfp::io::Config config = build_config(config_path, sets, seed);
    lfp::cli::FileSet files;
    if (*synth) {
      files = lfp::cli::synth_command(config, out);
    } else if (*estimate) {
      std::ifstream in(input);
      if (!in) throw lfp::IoError("cannot open " + input);
      files = lfp::cli::estimate_command(config, lfp::io::read_signal_csv(in), method, out);
    } else if (*benchmark) {
      if (!scheme.empty()) config.set("cv.scheme", scheme);
      if (folds) config.set("cv.k", std::to_string(*folds));
      const auto dataset = lfp::io::load_dataset(input);
      files = lfp::cli::benchmark_command(config, dataset, pipeline, grid, out);
      for (const auto& [path, content] : files) {
        if (path.filename() == "summary.txt") std::cout << content;
      }
    } else if (*experiment) {
      files = lfp::cli::experiment_command(name, config, out);
      for (const auto& [path, content] : files) {
        if (path.filename() == "summary.txt") std::cout << content;
      }
    }
    lfp::cli::write_outputs(files);
    for (const auto& [path, content] : files) std::cerr << "wrote " << path.string() << '\n';
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
