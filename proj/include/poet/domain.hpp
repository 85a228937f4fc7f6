#pragma once

// Core value types: amino-acid alphabet, sequences, rules, models, datasets
// and the evolution configuration.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poet/error.hpp"

namespace poet {

/// The 20 standard amino acids. Generation and mutation draw only from here.
inline constexpr std::string_view kStandardAlphabet = "ACDEFGHIKLMNPQRSTVWY";

/// Standard alphabet plus `J`, accepted when reading external data.
inline constexpr std::string_view kExtendedAlphabet = "ACDEFGHIJKLMNPQRSTVWY";

enum class Alphabet { standard, extended };

bool is_valid_residue(char symbol, Alphabet alphabet) noexcept;

/// Non-empty, validated string of amino-acid symbols.
class Sequence {
 public:
  /// Throws SequenceError on empty input or a symbol outside `alphabet`.
  static Sequence parse(std::string_view text, Alphabet alphabet = Alphabet::extended);

  const std::string& str() const noexcept { return residues_; }
  std::string_view view() const noexcept { return residues_; }
  std::size_t size() const noexcept { return residues_.size(); }
  char operator[](std::size_t i) const noexcept { return residues_[i]; }

  Sequence reversed() const;
  Sequence with_inserted(std::size_t pos, char symbol) const;
  Sequence with_erased(std::size_t pos) const;
  Sequence with_replaced(std::size_t pos, char symbol) const;

  friend auto operator<=>(const Sequence&, const Sequence&) = default;
  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  explicit Sequence(std::string residues) : residues_(std::move(residues)) {}

  std::string residues_;
};

/// Per-residue hydrophobicity on the Rose scale, held as exact hundredths.
class HydrophobicityTable {
 public:
  /// Rose-scale values for the 20 standard residues plus `J`.
  static const HydrophobicityTable& rose();

  /// Parses `SYMBOL,VALUE` lines (blank lines and `#` comments skipped).
  /// Values may carry at most two decimals.
  static HydrophobicityTable from_text(std::string_view text);
  std::string to_text() const;

  void set(char symbol, double value);
  std::optional<double> value(char symbol) const noexcept;
  std::optional<std::int64_t> hundredths(char symbol) const noexcept;
  std::size_t size() const noexcept;

  friend bool operator==(const HydrophobicityTable&, const HydrophobicityTable&) = default;

 private:
  static constexpr std::int64_t kMissing = INT64_MIN;
  std::array<std::int64_t, 26> centi_ = make_empty();

  static constexpr std::array<std::int64_t, 26> make_empty() {
    std::array<std::int64_t, 26> a{};
    a.fill(kMissing);
    return a;
  }
};

/// Sum of residue hydrophobicities. Throws SequenceError naming the symbol
/// and position of the first residue missing from `table`.
double hydrophobicity_sum(std::string_view seq, const HydrophobicityTable& table);
double hydrophobicity_sum(const Sequence& seq, const HydrophobicityTable& table);

/// A sum of exactly zero counts as soluble.
bool is_soluble(std::string_view seq, const HydrophobicityTable& table);
bool is_soluble(const Sequence& seq, const HydrophobicityTable& table);

struct Rule {
  int id = 0;
  Sequence motif;
  double weight = 0.0;
  bool expressed = false;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Ordered rule table. Rules are kept longest-motif-first, ties by ascending id.
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }
  std::size_t expressed_count() const noexcept;
  int next_id() const noexcept;

  /// Mutable access; callers must call sort() before the model is observed.
  std::vector<Rule>& mutable_rules() noexcept { return rules_; }
  void sort();

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::vector<Rule> rules_;
};

/// True iff `a` precedes `b` in table order.
bool rule_order(const Rule& a, const Rule& b) noexcept;

struct LabeledSequence {
  Sequence sequence;
  double cest_value = 0.0;

  friend bool operator==(const LabeledSequence&, const LabeledSequence&) = default;
};

using Dataset = std::vector<LabeledSequence>;

struct MutationRates {
  double add_rule = 0.16;
  double remove_rule = 0.16;
  double change_weight = 0.16;
  double add_to_pattern = 0.16;
  double remove_from_pattern = 0.16;

  friend bool operator==(const MutationRates&, const MutationRates&) = default;
};

struct WeightRange {
  double low = -5.0;
  double high = 5.0;

  friend bool operator==(const WeightRange&, const WeightRange&) = default;
};

struct EvolutionConfig {
  int population_size = 100;
  int tournament_size = 5;
  int max_motif_length = 9;
  int max_rule_count = 100;
  int generations = 5000;
  double unused_rule_crossover_rate = 0.20;
  MutationRates mutation_rates;
  int k_folds = 10;
  WeightRange weight_init_range;
  std::uint64_t rng_seed = 0;
  /// Worker threads for fitness evaluation; results do not depend on it.
  int eval_threads = 1;

  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

/// Throws ConfigError when `config` violates its invariants. When
/// `dataset_size` is given, also checks k_folds against it.
void validate(const EvolutionConfig& config, std::optional<std::size_t> dataset_size = {});

}  // namespace poet
