#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lfp/classify.hpp"
#include "lfp/experiments.hpp"
#include "lfp/io.hpp"
#include "lfp/synth.hpp"

namespace lfp::cli {

/// Output files as (path, content); written atomically by write_outputs.
using FileSet = std::vector<std::pair<std::filesystem::path, std::string>>;

void write_outputs(const FileSet& files);

/// Config sections shared by several commands.
/// model.kind = generic|phase|magnitude, model.K, model.alpha, model.C, model.T,
/// model.separation (generic only), model.spread. Built from derive_seed(seed, {1}).
[[nodiscard]] ClassModel class_model_from(const io::Config& config);
[[nodiscard]] NoiseModel noise_from(const io::Config& config);
/// pipeline.N, pipeline.T, pipeline.P, pipeline.ridge, pipeline.priors,
/// pipeline.magnitude_only, and either pipeline.c / pipeline.alpha + pipeline.mu
/// (pinsker) or pipeline.L (bjs). N defaults to min(500, dataset N).
[[nodiscard]] PipelineConfig pipeline_from(const io::Config& config, const std::string& kind,
                                           std::size_t dataset_N);
/// cv.scheme = loso|kfold, cv.k.
[[nodiscard]] CvScheme scheme_from(const io::Config& config);

/// Dataset CSV plus `.meta` sidecar. Dataset seed derive_seed(seed, {2}).
[[nodiscard]] FileSet synth_command(const io::Config& config, const std::filesystem::path& out_csv);

/// Shrinks the coefficients of one signal and reconstructs it. Writes
/// coefficients.csv and reconstruction.csv into out_dir.
[[nodiscard]] FileSet estimate_command(const io::Config& config, const SampledSignal& signal,
                                       const std::string& method,
                                       const std::filesystem::path& out_dir);

/// Cross-validated pipeline. Writes report.csv, confusion.csv, summary.txt and,
/// with a grid, grid.csv.
[[nodiscard]] FileSet benchmark_command(const io::Config& config, const LabeledDataset& dataset,
                                        const std::string& pipeline, bool grid,
                                        const std::filesystem::path& out_dir);

/// rates | adaptivity | consistency | phase. Writes <name>.csv and summary.txt.
[[nodiscard]] FileSet experiment_command(const std::string& name, const io::Config& config,
                                         const std::filesystem::path& out_dir);

[[nodiscard]] const std::vector<std::string>& experiment_names();

} // namespace lfp::cli
