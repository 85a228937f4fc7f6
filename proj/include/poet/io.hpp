#pragma once

// File formats: labeled-sequence CSV, FASTA import, model files, trace and
// report CSVs.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poet/domain.hpp"
#include "poet/evolution.hpp"
#include "poet/metrics.hpp"
#include "poet/optimizer.hpp"

namespace poet::io {

inline constexpr std::string_view kDatasetHeader = "sequence,cest_3_6ppm";
inline constexpr int kModelFormatVersion = 1;

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// FNV-1a 64-bit hash, rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);
std::string file_checksum(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Splits text into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view text);

// -- configuration ----------------------------------------------------------

/// Evolution parameters as kebab-case (key, value) pairs, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const EvolutionConfig& config);
/// Throws ConfigError on an unknown key or unparsable value.
void set_config_value(EvolutionConfig& config, std::string_view key, std::string_view value);

// -- datasets ---------------------------------------------------------------

/// Parses dataset CSV text. `#` lines and blank lines are skipped; the first
/// remaining line must be the header. Errors carry the 1-based line number.
Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path& path);

/// `comments` are written as `# ...` lines above the header.
std::string serialize_dataset(const Dataset& dataset, const std::vector<std::string>& comments = {});
void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

struct FastaRecord {
  std::string header;
  Sequence sequence;
};

/// Reads `>`-headed records, joining wrapped sequence lines.
std::vector<FastaRecord> parse_fasta(std::string_view text);
std::vector<FastaRecord> load_fasta(const std::filesystem::path& path);

// -- models -----------------------------------------------------------------

struct Provenance {
  std::uint64_t seed = 0;
  std::string dataset_checksum;
  int generation = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ModelFile {
  int format_version = kModelFormatVersion;
  EvolutionConfig config;
  Model model;
  Provenance provenance;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

std::string serialize_model(const ModelFile& file);
/// Throws ParseError on malformed or truncated input, and on an unsupported
/// format_version.
ModelFile parse_model(std::string_view text);
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

// -- reports ----------------------------------------------------------------

void write_trace(const std::vector<GenerationTrace>& trace, const std::filesystem::path& path);
std::vector<GenerationTrace> read_trace(const std::filesystem::path& path);

void write_rank_report(const RankEvaluation& eval, const Dataset& labeled, const std::filesystem::path& path);
void write_motif_report(const MotifFrequencyReport& report, const std::filesystem::path& path);
void write_candidates(const std::vector<Candidate>& candidates, const HydrophobicityTable& table,
                      const std::filesystem::path& path);

}  // namespace poet::io
