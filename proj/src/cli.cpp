#include "poet/cli.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "poet/evolution.hpp"
#include "poet/io.hpp"
#include "poet/random.hpp"

namespace poet::cli {

namespace fs = std::filesystem;

std::vector<std::uint64_t> derive_repeat_seeds(std::uint64_t master_seed, int repeats) {
  if (repeats <= 0) throw ConfigError("repeats must be positive");
  std::vector<std::uint64_t> seeds;
  std::set<std::uint64_t> used;
  for (std::uint64_t counter = 0; seeds.size() < static_cast<std::size_t>(repeats); ++counter) {
    // Keep seeds in a range that is friendly to spreadsheets and shells.
    const std::uint64_t seed = derive_seed(master_seed, counter, 0x5eed) % 1'000'000'000ULL;
    if (used.insert(seed).second) seeds.push_back(seed);
  }
  return seeds;
}

namespace {

std::string summary_csv(const TrainResult& result) {
  std::string out = "repeat,seed,best_training_rmse,best_test_rmse,total_rules,expressed_rules,selected\n";
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& r = result.runs[i];
    out += std::to_string(r.repeat) + ',' + std::to_string(r.seed) + ',' + io::format_double(r.training_fitness) +
           ',' + io::format_double(r.test_fitness) + ',' + std::to_string(r.total_rules) + ',' +
           std::to_string(r.expressed_rules) + ',' + (i == result.best ? "1" : "0") + '\n';
  }
  return out;
}

bool better_run(const RunSummary& a, const RunSummary& b) {
  if (a.training_fitness != b.training_fitness) return a.training_fitness < b.training_fitness;
  if (a.test_fitness != b.test_fitness) return a.test_fitness < b.test_fitness;
  return a.seed < b.seed;
}

}  // namespace

TrainResult cmd_train(const TrainOptions& options, std::ostream& log) {
  const Dataset dataset = io::load_dataset(options.dataset);
  validate(options.config, dataset.size());
  const auto checksum = io::file_checksum(options.dataset);
  const auto seeds = derive_repeat_seeds(options.master_seed, options.repeats);

  TrainResult result;
  result.experiment_dir = options.out_dir / options.experiment;
  fs::create_directories(result.experiment_dir);

  std::string manifest = "# poet training manifest\n";
  manifest += "experiment = " + options.experiment + "\n";
  manifest += "dataset = " + options.dataset.string() + "\n";
  manifest += "dataset-checksum = " + checksum + "\n";
  manifest += "master-seed = " + std::to_string(options.master_seed) + "\n";
  manifest += "repeats = " + std::to_string(options.repeats) + "\n";
  for (const auto& [key, value] : io::config_entries(options.config)) {
    if (key != "rng-seed") manifest += key + " = " + value + "\n";
  }
  io::write_file(result.experiment_dir / "manifest.txt", manifest);

  const auto n = seeds.size();
  result.runs.resize(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        EvolutionConfig config = options.config;
        config.rng_seed = seeds[i];
        const auto evo = run_evolution(dataset, config);
        const auto run_dir = result.experiment_dir / std::to_string(seeds[i]);
        io::write_trace(evo.trace, run_dir / "trace.csv");
        io::save_model({io::kModelFormatVersion, config, evo.best.model, {seeds[i], checksum, config.generations}},
                       run_dir / "model.txt");
        result.runs[i] = {static_cast<int>(i), seeds[i], evo.best.training_fitness, evo.best.test_fitness,
                          evo.best.model.size(), evo.best.model.expressed_count()};
        std::lock_guard lock(log_mutex);
        log << "repeat " << i << " (seed " << seeds[i] << "): training RMSE "
            << io::format_double(evo.best.training_fitness) << ", test RMSE "
            << io::format_double(evo.best.test_fitness) << '\n';
      } catch (const std::exception& e) {
        failures[i] = "repeat " + std::to_string(i) + " (seed " + std::to_string(seeds[i]) + "): " + e.what();
      }
    }
  };

  int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(n));
  {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  std::string failed;
  for (const auto& f : failures) {
    if (!f.empty()) failed += "\n  " + f;
  }
  if (!failed.empty()) throw Error("training failed:" + failed);

  for (std::size_t i = 1; i < n; ++i) {
    if (better_run(result.runs[i], result.runs[result.best])) result.best = i;
  }
  io::write_file(result.experiment_dir / "summary.csv", summary_csv(result));
  const auto best_seed = std::to_string(result.runs[result.best].seed);
  fs::copy_file(result.experiment_dir / best_seed / "model.txt", result.experiment_dir / "best_model.txt",
                fs::copy_options::overwrite_existing);
  log << "best run: seed " << best_seed << " (training RMSE "
      << io::format_double(result.runs[result.best].training_fitness) << ")\n";
  return result;
}

std::vector<Candidate> cmd_optimize(const OptimizeOptions& options, std::ostream& log) {
  const auto file = io::load_model(options.model);
  const auto& table = HydrophobicityTable::rose();
  auto candidates = optimize(file.model, options.config, table);
  if (std::all_of(candidates.begin(), candidates.end(), [](const Candidate& c) { return c.score == 0.0; })) {
    log << "warning: every candidate scored 0 (insoluble or no matching rules)\n";
  }
  io::write_candidates(candidates, table, options.out);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    log << i + 1 << '\t' << candidates[i].sequence.str() << '\t' << io::format_double(candidates[i].score) << '\n';
  }
  return candidates;
}

RankEvaluation cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
  const auto file = io::load_model(options.model);
  const auto labeled = io::load_dataset(options.labeled);
  if (options.k > labeled.size()) {
    throw ConfigError("k = " + std::to_string(options.k) + " exceeds the " + std::to_string(labeled.size()) +
                      " labeled entries");
  }
  auto eval = rank_evaluation(file.model, labeled, options.k);
  io::write_rank_report(eval, labeled, options.out);
  log << "entries: " << labeled.size() << '\n';
  log << "rank pearson r: " << io::format_double(eval.pearson_r) << '\n';
  log << "raw pearson r: " << (eval.raw_pearson_r ? io::format_double(*eval.raw_pearson_r) : "undefined") << '\n';
  log << "top-" << eval.k << " overlap: " << eval.top_k_overlap << " of " << eval.k << '\n';
  return eval;
}

namespace {

std::vector<fs::path> expand(const std::vector<std::string>& patterns) {
  std::vector<fs::path> paths;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    }
    ::globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw Error("cannot expand '" + pattern + "'");
  }
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return paths;
}

}  // namespace

MotifFrequencyReport cmd_report_motifs(const ReportMotifsOptions& options, std::ostream& log) {
  const auto paths = expand(options.models);
  if (paths.empty()) throw Error("no model files matched");
  std::vector<Model> models;
  for (const auto& p : paths) models.push_back(io::load_model(p).model);
  auto report = motif_frequency(models, options.threshold);
  io::write_motif_report(report, options.out);
  log << report.rows.size() << " motifs in >= " << io::format_double(options.threshold) << " of " << models.size()
      << " models\n";
  return report;
}

Dataset cmd_epoch_append(const EpochAppendOptions& options, std::ostream& log) {
  const auto prev_text = io::read_file(options.previous);
  const auto new_text = io::read_file(options.additions);
  Dataset dataset = io::parse_dataset(prev_text);
  Dataset additions;
  try {
    additions = io::parse_dataset(new_text);
  } catch (const ParseError& e) {
    throw ParseError(options.additions.string() + ": " + e.what());
  }

  int epoch = options.epoch;
  if (epoch <= 0) {
    epoch = 2;
    for (auto line : io::split_lines(prev_text)) {
      constexpr std::string_view tag = "# epoch: ";
      if (line.starts_with(tag)) epoch = std::stoi(std::string(line.substr(tag.size()))) + 1;
    }
  }

  for (const auto& row : additions) {
    const bool dup = std::any_of(dataset.begin(), dataset.end(), [&](const LabeledSequence& e) { return e == row; });
    if (dup) {
      log << "warning: duplicate measurement " << row.sequence.str() << ',' << io::format_double(row.cest_value)
          << " appended\n";
    }
    dataset.push_back(row);
  }

  const std::vector<std::string> comments = {
      "epoch: " + std::to_string(epoch),
      "previous: " + options.previous.filename().string() + " fnv1a64=" + io::fnv1a64_hex(prev_text),
      "added: " + options.additions.filename().string() + " fnv1a64=" + io::fnv1a64_hex(new_text),
      "rows: " + std::to_string(dataset.size() - additions.size()) + " + " + std::to_string(additions.size()) + " = " +
          std::to_string(dataset.size()),
  };
  io::save_dataset(dataset, options.out, comments);
  log << "epoch " << epoch << " dataset: " << dataset.size() << " rows -> " << options.out.string() << '\n';
  return dataset;
}

// ---------------------------------------------------------------------------
// Config files

namespace {

template <typename Setter>
void read_key_values(const fs::path& path, Setter&& set) {
  const auto text = io::read_file(path);
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string() + ": expected 'key = value'", i + 1);
    auto strip = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string_view::npos) return std::string_view{};
      return s.substr(b, s.find_last_not_of(" \t") - b + 1);
    };
    try {
      set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ParseError(path.string() + ": " + e.what(), i + 1);
    }
  }
}

}  // namespace

void apply_config_file(EvolutionConfig& config, const fs::path& path) {
  read_key_values(path, [&](std::string_view k, std::string_view v) { io::set_config_value(config, k, v); });
}

void set_optimizer_value(OptimizerConfig& config, std::string_view key, std::string_view value) {
  auto as_int = [&] {
    try {
      std::size_t used = 0;
      const int v = std::stoi(std::string(value), &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
    }
  };
  if (key == "pool-size") {
    config.pool_size = as_int();
  } else if (key == "sequence-length") {
    config.sequence_length = as_int();
  } else if (key == "generations") {
    config.generations = as_int();
  } else if (key == "top-n") {
    config.top_n = as_int();
  } else if (key == "rng-seed") {
    config.rng_seed = static_cast<std::uint64_t>(std::stoull(std::string(value)));
  } else if (key == "solubility-filter") {
    if (value == "true" || value == "1") {
      config.solubility_filter = true;
    } else if (value == "false" || value == "0") {
      config.solubility_filter = false;
    } else {
      throw ConfigError("solubility-filter must be true or false");
    }
  } else {
    throw ConfigError("unknown optimizer key '" + std::string(key) + "'");
  }
}

void apply_config_file(OptimizerConfig& config, const fs::path& path) {
  read_key_values(path, [&](std::string_view k, std::string_view v) { set_optimizer_value(config, k, v); });
}

// ---------------------------------------------------------------------------
// Command line

int run(int argc, char** argv) {
  CLI::App app{"poet: evolve weighted-motif sequence models and optimize peptides"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Run independent evolution repeats and pick the best model");
  TrainOptions train_opts;
  std::string train_config;
  std::map<std::string, std::string> evo_flags;
  for (const auto& [key, value] : io::config_entries(EvolutionConfig{})) {
    if (key != "rng-seed") evo_flags[key];
  }
  evo_flags["mutation-rate"];
  train->add_option("--dataset", train_opts.dataset, "Labeled dataset CSV")->required();
  train->add_option("--out", train_opts.out_dir, "Output root directory")->capture_default_str();
  train->add_option("--experiment", train_opts.experiment, "Experiment id")->capture_default_str();
  train->add_option("--repeats", train_opts.repeats, "Independent runs")->capture_default_str();
  train->add_option("--seed", train_opts.master_seed, "Master seed")->capture_default_str();
  train->add_option("--jobs", train_opts.jobs, "Concurrent runs (0 = all cores)")->capture_default_str();
  train->add_option("--config", train_config, "key = value config file (flags override)");
  for (auto& [key, value] : evo_flags) train->add_option("--" + key, value);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Hill-climb candidate peptides under a trained model");
  OptimizeOptions opt_opts;
  std::string opt_config;
  std::map<std::string, std::string> opt_flags{
      {"pool-size", ""}, {"sequence-length", ""}, {"generations", ""}, {"top-n", ""}};
  bool no_filter = false;
  std::uint64_t opt_seed = 0;
  opt->add_option("--model", opt_opts.model, "Model file")->required();
  opt->add_option("--out", opt_opts.out, "Candidate CSV")->capture_default_str();
  opt->add_option("--seed", opt_seed, "Seed");
  opt->add_option("--config", opt_config, "key = value config file (flags override)");
  opt->add_flag("--no-solubility-filter", no_filter, "Score insoluble sequences too");
  for (auto& [key, value] : opt_flags) opt->add_option("--" + key, value);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Rank a labeled set with a model and compare to measured order");
  EvaluateOptions eval_opts;
  eval->add_option("--model", eval_opts.model, "Model file")->required();
  eval->add_option("--labeled", eval_opts.labeled, "Labeled CSV")->required();
  eval->add_option("-k,--k", eval_opts.k, "Top-k size")->capture_default_str();
  eval->add_option("--out", eval_opts.out, "Rank report CSV")->capture_default_str();

  // report-motifs
  auto* motifs = app.add_subcommand("report-motifs", "Motif frequency across model files");
  ReportMotifsOptions motif_opts;
  motifs->add_option("--models,models", motif_opts.models, "Model files or glob patterns")->required();
  motifs->add_option("--threshold", motif_opts.threshold, "Minimum fraction of models")->capture_default_str();
  motifs->add_option("--out", motif_opts.out, "Motif CSV")->capture_default_str();

  // epoch-append
  auto* epoch = app.add_subcommand("epoch-append", "Append new measurements to form the next epoch's dataset");
  EpochAppendOptions epoch_opts;
  epoch->add_option("--previous", epoch_opts.previous, "Previous epoch dataset")->required();
  epoch->add_option("--new", epoch_opts.additions, "New measurements CSV")->required();
  epoch->add_option("--out", epoch_opts.out, "Output dataset")->required();
  epoch->add_option("--epoch", epoch_opts.epoch, "Epoch number (default: previous + 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train) {
      if (!train_config.empty()) apply_config_file(train_opts.config, train_config);
      if (train->count("--mutation-rate") > 0) {
        io::set_config_value(train_opts.config, "mutation-rate", evo_flags["mutation-rate"]);
      }
      for (const auto& [key, value] : evo_flags) {
        if (key != "mutation-rate" && train->count("--" + key) > 0) io::set_config_value(train_opts.config, key, value);
      }
      cmd_train(train_opts, std::cerr);
    } else if (*opt) {
      if (!opt_config.empty()) apply_config_file(opt_opts.config, opt_config);
      for (const auto& [key, value] : opt_flags) {
        if (opt->count("--" + key) > 0) set_optimizer_value(opt_opts.config, key, value);
      }
      if (opt->count("--seed") > 0) opt_opts.config.rng_seed = opt_seed;
      if (no_filter) opt_opts.config.solubility_filter = false;
      cmd_optimize(opt_opts, std::cerr);
    } else if (*eval) {
      cmd_evaluate(eval_opts, std::cout);
    } else if (*motifs) {
      cmd_report_motifs(motif_opts, std::cerr);
    } else if (*epoch) {
      cmd_epoch_append(epoch_opts, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace poet::cli
