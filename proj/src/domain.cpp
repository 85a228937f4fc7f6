#include "poet/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace poet {

bool is_valid_residue(char symbol, Alphabet alphabet) noexcept {
  const auto set = alphabet == Alphabet::standard ? kStandardAlphabet : kExtendedAlphabet;
  return set.find(symbol) != std::string_view::npos;
}

Sequence Sequence::parse(std::string_view text, Alphabet alphabet) {
  if (text.empty()) throw SequenceError("empty sequence");
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_valid_residue(text[i], alphabet)) {
      throw SequenceError("unknown residue '" + std::string(1, text[i]) + "' at position " +
                          std::to_string(i));
    }
  }
  return Sequence(std::string(text));
}

Sequence Sequence::reversed() const { return Sequence(std::string(residues_.rbegin(), residues_.rend())); }

Sequence Sequence::with_inserted(std::size_t pos, char symbol) const {
  if (pos > residues_.size()) throw SequenceError("insert position out of range");
  if (!is_valid_residue(symbol, Alphabet::extended)) {
    throw SequenceError("unknown residue '" + std::string(1, symbol) + "'");
  }
  std::string s = residues_;
  s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), symbol);
  return Sequence(std::move(s));
}

Sequence Sequence::with_erased(std::size_t pos) const {
  if (pos >= residues_.size()) throw SequenceError("erase position out of range");
  if (residues_.size() == 1) throw SequenceError("cannot erase the only residue");
  std::string s = residues_;
  s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos));
  return Sequence(std::move(s));
}

Sequence Sequence::with_replaced(std::size_t pos, char symbol) const {
  if (pos >= residues_.size()) throw SequenceError("replace position out of range");
  if (!is_valid_residue(symbol, Alphabet::extended)) {
    throw SequenceError("unknown residue '" + std::string(1, symbol) + "'");
  }
  std::string s = residues_;
  s[pos] = symbol;
  return Sequence(std::move(s));
}

// ---------------------------------------------------------------------------
// Hydrophobicity

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Parses a decimal with at most two fractional digits into hundredths.
std::optional<std::int64_t> parse_hundredths(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto whole = text.substr(0, dot);
  auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (frac.size() > 2) return std::nullopt;
  std::int64_t w = 0;
  if (!whole.empty()) {
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
    if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;
  }
  std::int64_t f = 0;
  if (!frac.empty()) {
    auto [p, ec] = std::from_chars(frac.data(), frac.data() + frac.size(), f);
    if (ec != std::errc{} || p != frac.data() + frac.size()) return std::nullopt;
    if (frac.size() == 1) f *= 10;
  }
  const std::int64_t v = w * 100 + f;
  return negative ? -v : v;
}

std::string format_hundredths(std::int64_t v) {
  const bool negative = v < 0;
  const std::int64_t a = negative ? -v : v;
  std::string out = negative ? "-" : "";
  out += std::to_string(a / 100);
  out += '.';
  const auto frac = a % 100;
  if (frac < 10) out += '0';
  out += std::to_string(frac);
  return out;
}

}  // namespace

const HydrophobicityTable& HydrophobicityTable::rose() {
  static const HydrophobicityTable table = [] {
    HydrophobicityTable t;
    const std::pair<char, std::int64_t> values[] = {
        {'I', -31}, {'L', -56}, {'F', -113}, {'V', 7},   {'M', -23}, {'P', 45},  {'W', -185},
        {'J', 17},  {'T', 14},  {'E', 202},  {'K', 99},  {'Q', 58},  {'C', -24}, {'Y', -94},
        {'A', 17},  {'S', 13},  {'N', 42},   {'D', 123}, {'R', 81},  {'G', 1},   {'H', 96},
    };
    for (auto [symbol, centi] : values) t.centi_[static_cast<std::size_t>(symbol - 'A')] = centi;
    return t;
  }();
  return table;
}

HydrophobicityTable HydrophobicityTable::from_text(std::string_view text) {
  HydrophobicityTable t;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma != 1 || !is_upper(line.front())) throw ParseError("expected SYMBOL,VALUE", line_no);
    const auto centi = parse_hundredths(line.substr(2));
    if (!centi) throw ParseError("value must be a decimal with at most two fractional digits", line_no);
    t.centi_[static_cast<std::size_t>(line.front() - 'A')] = *centi;
  }
  return t;
}

std::string HydrophobicityTable::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < centi_.size(); ++i) {
    if (centi_[i] == kMissing) continue;
    out += static_cast<char>('A' + i);
    out += ',';
    out += format_hundredths(centi_[i]);
    out += '\n';
  }
  return out;
}

void HydrophobicityTable::set(char symbol, double value) {
  if (!is_upper(symbol)) throw SequenceError("invalid symbol '" + std::string(1, symbol) + "'");
  const double scaled = value * 100.0;
  const auto rounded = std::llround(scaled);
  if (std::abs(scaled - static_cast<double>(rounded)) > 1e-6) {
    throw ConfigError("hydrophobicity values must have at most two decimals");
  }
  centi_[static_cast<std::size_t>(symbol - 'A')] = rounded;
}

std::optional<std::int64_t> HydrophobicityTable::hundredths(char symbol) const noexcept {
  if (!is_upper(symbol)) return std::nullopt;
  const auto v = centi_[static_cast<std::size_t>(symbol - 'A')];
  if (v == kMissing) return std::nullopt;
  return v;
}

std::optional<double> HydrophobicityTable::value(char symbol) const noexcept {
  if (auto c = hundredths(symbol)) return static_cast<double>(*c) / 100.0;
  return std::nullopt;
}

std::size_t HydrophobicityTable::size() const noexcept {
  return static_cast<std::size_t>(std::count_if(centi_.begin(), centi_.end(), [](auto v) { return v != kMissing; }));
}

namespace {

std::int64_t hydrophobicity_hundredths(std::string_view seq, const HydrophobicityTable& table) {
  if (seq.empty()) throw SequenceError("empty sequence");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto v = table.hundredths(seq[i]);
    if (!v) {
      throw SequenceError("no hydrophobicity value for residue '" + std::string(1, seq[i]) + "' at position " +
                          std::to_string(i));
    }
    sum += *v;
  }
  return sum;
}

}  // namespace

double hydrophobicity_sum(std::string_view seq, const HydrophobicityTable& table) {
  return static_cast<double>(hydrophobicity_hundredths(seq, table)) / 100.0;
}

double hydrophobicity_sum(const Sequence& seq, const HydrophobicityTable& table) {
  return hydrophobicity_sum(seq.view(), table);
}

bool is_soluble(std::string_view seq, const HydrophobicityTable& table) {
  return hydrophobicity_hundredths(seq, table) >= 0;
}

bool is_soluble(const Sequence& seq, const HydrophobicityTable& table) { return is_soluble(seq.view(), table); }

// ---------------------------------------------------------------------------
// Model

bool rule_order(const Rule& a, const Rule& b) noexcept {
  if (a.motif.size() != b.motif.size()) return a.motif.size() > b.motif.size();
  return a.id < b.id;
}

Model::Model(std::vector<Rule> rules) : rules_(std::move(rules)) { sort(); }

void Model::sort() { std::stable_sort(rules_.begin(), rules_.end(), rule_order); }

std::size_t Model::expressed_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(rules_.begin(), rules_.end(), [](const Rule& r) { return r.expressed; }));
}

int Model::next_id() const noexcept {
  int id = 0;
  for (const auto& r : rules_) id = std::max(id, r.id + 1);
  return id;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError(std::string(name) + " must be in [0, 1]");
}

void check_positive(int value, const char* name) {
  if (value <= 0) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

void validate(const EvolutionConfig& config, std::optional<std::size_t> dataset_size) {
  check_positive(config.population_size, "population_size");
  check_positive(config.tournament_size, "tournament_size");
  check_positive(config.max_motif_length, "max_motif_length");
  check_positive(config.max_rule_count, "max_rule_count");
  check_positive(config.eval_threads, "eval_threads");
  if (config.generations < 0) throw ConfigError("generations must be non-negative");
  if (config.tournament_size > config.population_size) {
    throw ConfigError("tournament_size exceeds population_size");
  }
  if (config.tournament_size < 2) throw ConfigError("tournament_size must be at least 2");
  check_rate(config.unused_rule_crossover_rate, "unused_rule_crossover_rate");
  check_rate(config.mutation_rates.add_rule, "arm rate");
  check_rate(config.mutation_rates.remove_rule, "rrm rate");
  check_rate(config.mutation_rates.change_weight, "cwm rate");
  check_rate(config.mutation_rates.add_to_pattern, "apm rate");
  check_rate(config.mutation_rates.remove_from_pattern, "rpm rate");
  if (config.k_folds < 2) throw ConfigError("k_folds must be at least 2");
  if (!(std::isfinite(config.weight_init_range.low) && std::isfinite(config.weight_init_range.high)) ||
      config.weight_init_range.low > config.weight_init_range.high) {
    throw ConfigError("weight_init_range must be a finite interval with low <= high");
  }
  if (dataset_size) {
    if (*dataset_size == 0) throw ConfigError("empty dataset");
    if (static_cast<std::size_t>(config.k_folds) > *dataset_size) {
      throw ConfigError("k_folds exceeds dataset size");
    }
  }
}

}  // namespace poet
