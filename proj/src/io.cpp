#include "poet/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace poet::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("failed to format number");
  return std::string(buf.data(), end);
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string file_checksum(const fs::path& path) { return fnv1a64_hex(read_file(path)); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && p == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto at = s.find(sep);
    parts.push_back(s.substr(0, at));
    if (at == std::string_view::npos) break;
    s.remove_prefix(at + 1);
  }
  return parts;
}

template <typename T>
T config_number(std::string_view key, std::string_view value) {
  T out{};
  if (!parse_number(value, out)) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::pair<std::string, std::string>> config_entries(const EvolutionConfig& c) {
  return {
      {"population-size", std::to_string(c.population_size)},
      {"tournament-size", std::to_string(c.tournament_size)},
      {"max-motif-length", std::to_string(c.max_motif_length)},
      {"max-rule-count", std::to_string(c.max_rule_count)},
      {"generations", std::to_string(c.generations)},
      {"unused-rule-crossover-rate", format_double(c.unused_rule_crossover_rate)},
      {"arm-rate", format_double(c.mutation_rates.add_rule)},
      {"rrm-rate", format_double(c.mutation_rates.remove_rule)},
      {"cwm-rate", format_double(c.mutation_rates.change_weight)},
      {"apm-rate", format_double(c.mutation_rates.add_to_pattern)},
      {"rpm-rate", format_double(c.mutation_rates.remove_from_pattern)},
      {"k-folds", std::to_string(c.k_folds)},
      {"weight-init-low", format_double(c.weight_init_range.low)},
      {"weight-init-high", format_double(c.weight_init_range.high)},
      {"rng-seed", std::to_string(c.rng_seed)},
      {"eval-threads", std::to_string(c.eval_threads)},
  };
}

void set_config_value(EvolutionConfig& c, std::string_view key, std::string_view value) {
  if (key == "population-size") {
    c.population_size = config_number<int>(key, value);
  } else if (key == "tournament-size") {
    c.tournament_size = config_number<int>(key, value);
  } else if (key == "max-motif-length") {
    c.max_motif_length = config_number<int>(key, value);
  } else if (key == "max-rule-count") {
    c.max_rule_count = config_number<int>(key, value);
  } else if (key == "generations") {
    c.generations = config_number<int>(key, value);
  } else if (key == "unused-rule-crossover-rate") {
    c.unused_rule_crossover_rate = config_number<double>(key, value);
  } else if (key == "arm-rate") {
    c.mutation_rates.add_rule = config_number<double>(key, value);
  } else if (key == "rrm-rate") {
    c.mutation_rates.remove_rule = config_number<double>(key, value);
  } else if (key == "cwm-rate") {
    c.mutation_rates.change_weight = config_number<double>(key, value);
  } else if (key == "apm-rate") {
    c.mutation_rates.add_to_pattern = config_number<double>(key, value);
  } else if (key == "rpm-rate") {
    c.mutation_rates.remove_from_pattern = config_number<double>(key, value);
  } else if (key == "mutation-rate") {
    const double r = config_number<double>(key, value);
    c.mutation_rates = {r, r, r, r, r};
  } else if (key == "k-folds") {
    c.k_folds = config_number<int>(key, value);
  } else if (key == "weight-init-low") {
    c.weight_init_range.low = config_number<double>(key, value);
  } else if (key == "weight-init-high") {
    c.weight_init_range.high = config_number<double>(key, value);
  } else if (key == "rng-seed") {
    c.rng_seed = config_number<std::uint64_t>(key, value);
  } else if (key == "eval-threads") {
    c.eval_threads = config_number<int>(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

// ---------------------------------------------------------------------------
// Datasets

Dataset parse_dataset(std::string_view text) {
  Dataset out;
  bool header_seen = false;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kDatasetHeader) {
        throw ParseError("expected header '" + std::string(kDatasetHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("expected 2 fields, found " + std::to_string(fields.size()), line_no);
    double value = 0.0;
    if (!parse_number(fields[1], value) || !std::isfinite(value) || value < 0.0) {
      throw ParseError("invalid CEST value '" + std::string(trim(fields[1])) + "'", line_no);
    }
    try {
      out.push_back({Sequence::parse(trim(fields[0]), Alphabet::extended), value});
    } catch (const SequenceError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (out.empty()) throw ParseError("empty dataset");
  return out;
}

Dataset load_dataset(const fs::path& path) {
  try {
    return parse_dataset(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_dataset(const Dataset& dataset, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += kDatasetHeader;
  out += '\n';
  for (const auto& entry : dataset) {
    out += entry.sequence.str();
    out += ',';
    out += format_double(entry.cest_value);
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const fs::path& path, const std::vector<std::string>& comments) {
  write_file(path, serialize_dataset(dataset, comments));
}

std::vector<FastaRecord> parse_fasta(std::string_view text) {
  std::vector<FastaRecord> records;
  std::string header;
  std::string residues;
  std::size_t header_line = 0;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    try {
      records.push_back({header, Sequence::parse(residues, Alphabet::extended)});
    } catch (const SequenceError& e) {
      throw ParseError("record '" + header + "': " + e.what(), header_line);
    }
  };
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '>') {
      flush();
      header = std::string(trim(line.substr(1)));
      residues.clear();
      header_line = i + 1;
      open = true;
      continue;
    }
    if (!open) throw ParseError("sequence data before first '>' header", i + 1);
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '*') residues += static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
    }
  }
  flush();
  if (records.empty()) throw ParseError("no FASTA records");
  return records;
}

std::vector<FastaRecord> load_fasta(const fs::path& path) { return parse_fasta(read_file(path)); }

// ---------------------------------------------------------------------------
// Models
//
// Layout:
//   # poet model
//   # seed: <u64>
//   # dataset_checksum: <hex>
//   # generation: <int>
//   format_version 1
//   config <key> <value>      (zero or more)
//   rules <count>
//   rule <id> <motif> <weight> <0|1>   (count lines)
//   end

std::string serialize_model(const ModelFile& file) {
  std::ostringstream out;
  out << "# poet model\n";
  out << "# seed: " << file.provenance.seed << "\n";
  out << "# dataset_checksum: " << file.provenance.dataset_checksum << "\n";
  out << "# generation: " << file.provenance.generation << "\n";
  out << "format_version " << file.format_version << "\n";
  for (const auto& [key, value] : config_entries(file.config)) out << "config " << key << ' ' << value << "\n";
  out << "rules " << file.model.size() << "\n";
  char weight[40];
  for (const auto& rule : file.model.rules()) {
    std::snprintf(weight, sizeof weight, "%.17g", rule.weight);
    out << "rule " << rule.id << ' ' << rule.motif.str() << ' ' << weight << ' ' << (rule.expressed ? 1 : 0) << "\n";
  }
  out << "end\n";
  return out.str();
}

ModelFile parse_model(std::string_view text) {
  ModelFile file;
  const auto lines = split_lines(text);
  bool version_seen = false;
  bool ended = false;
  std::size_t expected_rules = 0;
  bool rules_header = false;
  std::vector<Rule> rules;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (ended) throw ParseError("content after 'end'", line_no);
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, colon));
      const auto value = trim(body.substr(colon + 1));
      if (key == "seed") {
        if (!parse_number(value, file.provenance.seed)) throw ParseError("invalid seed", line_no);
      } else if (key == "dataset_checksum") {
        file.provenance.dataset_checksum = std::string(value);
      } else if (key == "generation") {
        if (!parse_number(value, file.provenance.generation)) throw ParseError("invalid generation", line_no);
      }
      continue;
    }
    std::istringstream fields{std::string(line)};
    std::string keyword;
    fields >> keyword;
    if (!version_seen) {
      int version = 0;
      if (keyword != "format_version" || !(fields >> version)) {
        throw ParseError("expected 'format_version'", line_no);
      }
      if (version != kModelFormatVersion) {
        throw ParseError("unsupported model format version " + std::to_string(version), line_no);
      }
      file.format_version = version;
      version_seen = true;
      continue;
    }
    if (keyword == "config") {
      if (rules_header) throw ParseError("config after rules", line_no);
      std::string key, value, extra;
      if (!(fields >> key >> value) || (fields >> extra)) throw ParseError("expected 'config <key> <value>'", line_no);
      try {
        set_config_value(file.config, key, value);
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (keyword == "rules") {
      if (rules_header || !(fields >> expected_rules)) throw ParseError("invalid 'rules' line", line_no);
      rules_header = true;
    } else if (keyword == "rule") {
      if (!rules_header) throw ParseError("'rule' before 'rules'", line_no);
      if (rules.size() == expected_rules) throw ParseError("more rules than declared", line_no);
      std::string id_text, motif, weight_text, status_text, extra;
      if (!(fields >> id_text >> motif >> weight_text >> status_text) || (fields >> extra)) {
        throw ParseError("expected 'rule <id> <motif> <weight> <status>'", line_no);
      }
      int id = 0;
      double weight = 0.0;
      if (!parse_number(id_text, id)) throw ParseError("invalid rule id", line_no);
      if (!parse_number(weight_text, weight) || !std::isfinite(weight)) throw ParseError("invalid weight", line_no);
      if (status_text != "0" && status_text != "1") throw ParseError("status must be 0 or 1", line_no);
      for (const auto& r : rules) {
        if (r.id == id) throw ParseError("duplicate rule id " + id_text, line_no);
      }
      try {
        rules.push_back({id, Sequence::parse(motif, Alphabet::extended), weight, status_text == "1"});
      } catch (const SequenceError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (keyword == "end") {
      if (!rules_header) throw ParseError("'end' before 'rules'", line_no);
      if (rules.size() != expected_rules) {
        throw ParseError("declared " + std::to_string(expected_rules) + " rules, found " + std::to_string(rules.size()),
                         line_no);
      }
      ended = true;
    } else {
      throw ParseError("unknown keyword '" + keyword + "'", line_no);
    }
  }
  if (!version_seen) throw ParseError("missing 'format_version'");
  if (!ended) throw ParseError("truncated model file: missing 'end'");
  file.model = Model(std::move(rules));
  return file;
}

void save_model(const ModelFile& file, const fs::path& path) { write_file(path, serialize_model(file)); }

ModelFile load_model(const fs::path& path) {
  try {
    return parse_model(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

void write_trace(const std::vector<GenerationTrace>& trace, const fs::path& path) {
  std::string out = "generation,best_training_rmse,mean_training_rmse,best_test_rmse\n";
  for (const auto& t : trace) {
    out += std::to_string(t.generation) + ',' + format_double(t.best_training_fitness) + ',' +
           format_double(t.mean_training_fitness) + ',' + format_double(t.best_test_fitness) + '\n';
  }
  write_file(path, out);
}

std::vector<GenerationTrace> read_trace(const fs::path& path) {
  const auto text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "generation,best_training_rmse,mean_training_rmse,best_test_rmse") {
    throw ParseError(path.string() + ": missing trace header");
  }
  std::vector<GenerationTrace> trace;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split(lines[i], ',');
    GenerationTrace t;
    if (f.size() != 4 || !parse_number(f[0], t.generation) || !parse_number(f[1], t.best_training_fitness) ||
        !parse_number(f[2], t.mean_training_fitness) || !parse_number(f[3], t.best_test_fitness)) {
      throw ParseError(path.string() + ": malformed trace row", i + 1);
    }
    trace.push_back(t);
  }
  return trace;
}

void write_rank_report(const RankEvaluation& eval, const Dataset& labeled, const fs::path& path) {
  std::vector<std::size_t> predicted_rank(labeled.size()), actual_rank(labeled.size());
  for (std::size_t r = 0; r < eval.predicted_order.size(); ++r) predicted_rank[eval.predicted_order[r]] = r + 1;
  for (std::size_t r = 0; r < eval.actual_order.size(); ++r) actual_rank[eval.actual_order[r]] = r + 1;
  std::string out = "index,sequence,actual_cest,predicted_cest,actual_rank,predicted_rank,top_k_actual,top_k_predicted\n";
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    out += std::to_string(i) + ',' + labeled[i].sequence.str() + ',' + format_double(labeled[i].cest_value) + ',' +
           format_double(eval.predictions[i]) + ',' + std::to_string(actual_rank[i]) + ',' +
           std::to_string(predicted_rank[i]) + ',' + (actual_rank[i] <= eval.k ? "1" : "0") + ',' +
           (predicted_rank[i] <= eval.k ? "1" : "0") + '\n';
  }
  write_file(path, out);
}

void write_motif_report(const MotifFrequencyReport& report, const fs::path& path) {
  std::string out = "motif,length,count,fraction\n";
  for (const auto& row : report.rows) {
    out += row.motif.str() + ',' + std::to_string(row.motif.size()) + ',' + std::to_string(row.count) + ',' +
           format_double(row.fraction) + '\n';
  }
  write_file(path, out);
}

void write_candidates(const std::vector<Candidate>& candidates, const HydrophobicityTable& table,
                      const fs::path& path) {
  std::string out = "rank,sequence,predicted_score,hydrophobicity_sum\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out += std::to_string(i + 1) + ',' + candidates[i].sequence.str() + ',' + format_double(candidates[i].score) +
           ',' + format_double(hydrophobicity_sum(candidates[i].sequence, table)) + '\n';
  }
  write_file(path, out);
}

}  // namespace poet::io
