#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sokofm/config.hpp"
#include "sokofm/harness.hpp"
#include "sokofm/tuner.hpp"

namespace sokofm {

// Artifact locations under config.out_dir.
std::filesystem::path dataset_path(const ExperimentConfig& config, const std::string& set_name);
std::filesystem::path model_path(const ExperimentConfig& config, ModelKind kind,
                                 const PatternSpec& spec);

/// Collect train/easy/hard transition datasets and write one dataset file per
/// set. Returns the file paths.
std::vector<std::filesystem::path> run_collect(const ExperimentConfig& config,
                                               std::ostream& log);

/// Train every configured (kind, shape, span) model from the train dataset
/// file and write one model file each.
std::vector<std::filesystem::path> run_train(const ExperimentConfig& config, std::ostream& log);

/// One-step accuracy of the baselines and every trained model on the easy and
/// hard datasets; writes eval_results.csv.
std::vector<ResultRow> run_eval(const ExperimentConfig& config, std::ostream& log);

/// Playing performance of the baselines and every trained model on the easy
/// and hard level sets; writes play_results.csv and play_levels.csv.
std::vector<ResultRow> run_play(const ExperimentConfig& config, std::ostream& log);

/// NTBEA tuning of the agent parameters against the true model on the
/// training levels; writes tuning_log.csv and tuned_params.json.
TuneResult run_tune(const ExperimentConfig& config, std::ostream& log);

struct BenchReport {
    std::uint64_t steps = 0;
    double seconds = 0.0;
    double ticks_per_second = 0.0;
};

/// Engine throughput: random actions on the first training level.
BenchReport run_bench(const ExperimentConfig& config, std::ostream& log);

/// The full pipeline: collect, train, eval, play; merges both row sets into
/// results.csv.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace sokofm
