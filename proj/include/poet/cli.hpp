#pragma once

// Epoch workflow commands behind the `poet` executable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "poet/domain.hpp"
#include "poet/metrics.hpp"
#include "poet/optimizer.hpp"

namespace poet::cli {

struct TrainOptions {
  std::filesystem::path dataset;
  std::filesystem::path out_dir = "runs";
  std::string experiment = "experiment";
  int repeats = 50;
  std::uint64_t master_seed = 1;
  /// Concurrent repeats; 0 picks the hardware concurrency.
  int jobs = 0;
  EvolutionConfig config;
};

struct RunSummary {
  int repeat = 0;
  std::uint64_t seed = 0;
  double training_fitness = 0.0;
  double test_fitness = 0.0;
  std::size_t total_rules = 0;
  std::size_t expressed_rules = 0;
};

struct TrainResult {
  std::vector<RunSummary> runs;
  std::size_t best = 0;  // index into runs
  std::filesystem::path experiment_dir;
};

/// Distinct per-repeat seeds, reproducible from the master seed.
std::vector<std::uint64_t> derive_repeat_seeds(std::uint64_t master_seed, int repeats);

/// Writes <out>/<experiment>/<seed>/{trace.csv,model.txt} per repeat, then
/// summary.csv and best_model.txt. The best run has the lowest training
/// fitness, then the lowest test fitness, then the lowest seed.
TrainResult cmd_train(const TrainOptions& options, std::ostream& log);

struct OptimizeOptions {
  std::filesystem::path model;
  std::filesystem::path out = "candidates.csv";
  OptimizerConfig config;
};

std::vector<Candidate> cmd_optimize(const OptimizeOptions& options, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path model;
  std::filesystem::path labeled;
  std::filesystem::path out = "rank_report.csv";
  std::size_t k = 10;
};

RankEvaluation cmd_evaluate(const EvaluateOptions& options, std::ostream& log);

struct ReportMotifsOptions {
  /// File paths or glob patterns.
  std::vector<std::string> models;
  double threshold = 0.10;
  std::filesystem::path out = "motifs.csv";
};

MotifFrequencyReport cmd_report_motifs(const ReportMotifsOptions& options, std::ostream& log);

struct EpochAppendOptions {
  std::filesystem::path previous;
  std::filesystem::path additions;
  std::filesystem::path out;
  /// 0 derives it from the previous file's `# epoch:` header (+1, default 2).
  int epoch = 0;
};

Dataset cmd_epoch_append(const EpochAppendOptions& options, std::ostream& log);

/// Reads `key = value` lines (`#` comments allowed) into a config.
void apply_config_file(EvolutionConfig& config, const std::filesystem::path& path);
void apply_config_file(OptimizerConfig& config, const std::filesystem::path& path);
void set_optimizer_value(OptimizerConfig& config, std::string_view key, std::string_view value);

/// Entry point of the `poet` executable. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace poet::cli
