#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "poet/cli.hpp"
#include "poet/io.hpp"

using namespace poet;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "poet_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

cli::TrainOptions small_train(const fs::path& out) {
  cli::TrainOptions o;
  o.dataset = POET_DATA_DIR "/cest_epoch1.csv";
  o.out_dir = out;
  o.experiment = "smoke";
  o.repeats = 2;
  o.master_seed = 11;
  o.jobs = 1;
  o.config.population_size = 12;
  o.config.generations = 50;
  return o;
}

void save_k_model(const fs::path& path) {
  const Model m({{0, Sequence::parse("K"), 1.0, true}});
  io::save_model({io::kModelFormatVersion, EvolutionConfig{}, m, {}}, path);
}

}  // namespace

TEST_CASE("repeat seeds are distinct and reproducible") {
  const auto a = cli::derive_repeat_seeds(5, 200);
  CHECK(a == cli::derive_repeat_seeds(5, 200));
  CHECK(std::set(a.begin(), a.end()).size() == 200);
  CHECK(a != cli::derive_repeat_seeds(6, 200));
  CHECK_THROWS_AS(cli::derive_repeat_seeds(5, 0), ConfigError);
}

TEST_CASE("train writes per-repeat artifacts and a summary") {
  const auto dir = fresh_dir("train");
  std::ostringstream log;
  const auto result = cli::cmd_train(small_train(dir), log);
  REQUIRE(result.runs.size() == 2);
  const auto exp = dir / "smoke";
  for (const auto& run : result.runs) {
    const auto run_dir = exp / std::to_string(run.seed);
    const auto trace = io::read_trace(run_dir / "trace.csv");
    CHECK(trace.size() == 51);
    CHECK(trace.back().best_training_fitness == run.training_fitness);
    const auto model = io::load_model(run_dir / "model.txt");
    CHECK(model.provenance.seed == run.seed);
    CHECK(model.config.rng_seed == run.seed);
    CHECK(model.model.size() == run.total_rules);
  }
  const auto summary = io::read_file(exp / "summary.csv");
  CHECK(io::split_lines(summary).size() == 3);
  CHECK(fs::exists(exp / "manifest.txt"));
  const auto best = io::load_model(exp / "best_model.txt");
  CHECK(best.provenance.seed == result.runs[result.best].seed);
  for (const auto& run : result.runs) CHECK(run.training_fitness >= result.runs[result.best].training_fitness);
}

TEST_CASE("train is reproducible and independent of job count") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  std::ostringstream log;
  auto opts = small_train(a);
  opts.repeats = 3;
  const auto ra = cli::cmd_train(opts, log);
  opts.out_dir = b;
  opts.jobs = 3;
  cli::cmd_train(opts, log);
  CHECK(io::read_file(a / "smoke" / "summary.csv") == io::read_file(b / "smoke" / "summary.csv"));
  for (const auto& run : ra.runs) {
    const auto seed = std::to_string(run.seed);
    CHECK(io::read_file(a / "smoke" / seed / "model.txt") == io::read_file(b / "smoke" / seed / "model.txt"));
    CHECK(io::read_file(a / "smoke" / seed / "trace.csv") == io::read_file(b / "smoke" / seed / "trace.csv"));
  }
}

TEST_CASE("train rejects invalid configuration before running") {
  const auto dir = fresh_dir("bad_train");
  std::ostringstream log;
  auto opts = small_train(dir);
  opts.config.k_folds = 37;
  CHECK_THROWS_AS(cli::cmd_train(opts, log), ConfigError);
  opts = small_train(dir);
  opts.config.tournament_size = 13;
  CHECK_THROWS_AS(cli::cmd_train(opts, log), ConfigError);
}

TEST_CASE("optimize writes ranked candidates") {
  const auto dir = fresh_dir("optimize");
  save_k_model(dir / "k.txt");
  cli::OptimizeOptions o;
  o.model = dir / "k.txt";
  o.out = dir / "cands.csv";
  o.config.pool_size = 20;
  o.config.generations = 400;
  std::ostringstream log;
  const auto cands = cli::cmd_optimize(o, log);
  CHECK(cands.size() == 10);
  const auto text = io::read_file(o.out);
  const auto lines = io::split_lines(text);
  CHECK(lines.size() == 11);
  CHECK(lines[0] == "rank,sequence,predicted_score,hydrophobicity_sum");
  CHECK(log.str().find("warning") == std::string::npos);

  // A model with no usable rules yields an all-zero warning.
  const Model none({{0, Sequence::parse("J"), 1.0, true}});
  io::save_model({io::kModelFormatVersion, EvolutionConfig{}, none, {}}, dir / "none.txt");
  o.model = dir / "none.txt";
  std::ostringstream log2;
  cli::cmd_optimize(o, log2);
  CHECK(log2.str().find("warning") != std::string::npos);
}

TEST_CASE("evaluate reports rank agreement") {
  const auto dir = fresh_dir("evaluate");
  save_k_model(dir / "k.txt");
  io::write_file(dir / "labeled.csv", "sequence,cest_3_6ppm\nK,1\nKK,2\nKKK,3\nKKKK,4\n");
  cli::EvaluateOptions o;
  o.model = dir / "k.txt";
  o.labeled = dir / "labeled.csv";
  o.out = dir / "rank.csv";
  o.k = 2;
  std::ostringstream log;
  const auto eval = cli::cmd_evaluate(o, log);
  CHECK(eval.pearson_r == doctest::Approx(1.0));
  CHECK(eval.top_k_overlap == 2);
  CHECK(fs::exists(o.out));
  o.k = 5;
  CHECK_THROWS_AS(cli::cmd_evaluate(o, log), ConfigError);
}

TEST_CASE("report-motifs aggregates over model files") {
  const auto dir = fresh_dir("motifs");
  save_k_model(dir / "a.model");
  cli::ReportMotifsOptions o;
  o.models = {(dir / "*.model").string()};
  o.threshold = 0.0;
  o.out = dir / "motifs.csv";
  std::ostringstream log;
  const auto report = cli::cmd_report_motifs(o, log);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].fraction == 1.0);
  o.models = {(dir / "*.missing").string()};
  CHECK_THROWS_AS(cli::cmd_report_motifs(o, log), Error);
}

TEST_CASE("epoch-append concatenates with provenance") {
  const auto dir = fresh_dir("epoch");
  std::string additions = "sequence,cest_3_6ppm\n";
  for (int i = 0; i < 10; ++i) additions += "KKKKKKKKKKK" + std::string(1, "ACDEFGHIKL"[i]) + ",1." + std::to_string(i) + "\n";
  io::write_file(dir / "new.csv", additions);
  cli::EpochAppendOptions o;
  o.previous = POET_DATA_DIR "/cest_epoch1.csv";
  o.additions = dir / "new.csv";
  o.out = dir / "epoch2.csv";
  std::ostringstream log;
  const auto merged = cli::cmd_epoch_append(o, log);
  CHECK(merged.size() == 46);
  CHECK(io::load_dataset(o.out) == merged);
  const auto text = io::read_file(o.out);
  CHECK(text.starts_with("# epoch: 2\n"));
  CHECK(text.find("rows: 36 + 10 = 46") != std::string::npos);

  // The epoch number continues from the previous header.
  io::write_file(dir / "more.csv", "sequence,cest_3_6ppm\nKKKKKKKKKKKK,12.5\n");
  o.previous = dir / "epoch2.csv";
  o.additions = dir / "more.csv";
  o.out = dir / "epoch3.csv";
  std::ostringstream dup_log;
  CHECK(cli::cmd_epoch_append(o, dup_log).size() == 47);
  CHECK(io::read_file(o.out).starts_with("# epoch: 3\n"));
  CHECK(dup_log.str().find("warning: duplicate") != std::string::npos);

  io::write_file(dir / "empty.csv", "");
  o.additions = dir / "empty.csv";
  CHECK_THROWS_AS(cli::cmd_epoch_append(o, log), ParseError);
  io::write_file(dir / "bad.csv", "sequence,cest_3_6ppm\nKK,1\nKK\n");
  o.additions = dir / "bad.csv";
  try {
    cli::cmd_epoch_append(o, log);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("config files") {
  const auto dir = fresh_dir("config");
  io::write_file(dir / "evo.conf", "# small run\npopulation-size = 20\nmutation-rate = 0.25\n\ngenerations=7\n");
  EvolutionConfig c;
  cli::apply_config_file(c, dir / "evo.conf");
  CHECK(c.population_size == 20);
  CHECK(c.generations == 7);
  CHECK(c.mutation_rates.remove_rule == 0.25);
  io::write_file(dir / "bad.conf", "population-size 20\n");
  CHECK_THROWS(cli::apply_config_file(c, dir / "bad.conf"));
  OptimizerConfig oc;
  cli::set_optimizer_value(oc, "pool-size", "30");
  CHECK(oc.pool_size == 30);
  CHECK_THROWS_AS(cli::set_optimizer_value(oc, "pool", "30"), ConfigError);
}

TEST_CASE("run reports errors with a nonzero exit code") {
  std::vector<std::string> args{"poet", "evaluate", "--model", "/nonexistent/model.txt", "--labeled", "x.csv"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  CHECK(cli::run(static_cast<int>(argv.size()), argv.data()) != 0);
}
