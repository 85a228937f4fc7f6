#pragma once

// Rule-table prediction and rule-status refresh.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "poet/domain.hpp"

namespace poet {

struct RuleMatch {
  int rule_id = 0;
  std::size_t position = 0;

  friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

struct Prediction {
  double value = 0.0;
  std::vector<RuleMatch> matched_rules;
};

/// Precompiled view of a model's expressed rules for repeated scoring.
///
/// Scanning starts at position 0. At each position the expressed rules are
/// tried in table order; the first rule whose motif or reversed motif equals
/// the window starting there fires, adds its weight and moves the position
/// past the window. Without a match the position advances by one.
class RuleMatcher {
 public:
  explicit RuleMatcher(const Model& model);

  double score(std::string_view seq) const noexcept;
  Prediction explain(std::string_view seq) const;

 private:
  struct Entry {
    std::string forward;
    std::string backward;
    double weight;
    int id;
  };

  // Returns index into entries_ of the rule firing at `pos`, or -1.
  int match_at(std::string_view seq, std::size_t pos) const noexcept;

  std::vector<Entry> entries_;
  // Rules whose motif starts or ends with a given letter, in table order.
  std::array<std::vector<int>, 26> by_edge_;
};

Prediction predict(const Model& model, const Sequence& seq);
double predict_value(const Model& model, std::string_view seq);

/// Every distinct substring of dataset sequences up to a maximum length.
class MotifIndex {
 public:
  MotifIndex(const Dataset& dataset, std::size_t max_length);

  /// True iff `motif` or its reverse is a substring of some dataset sequence.
  bool contains(std::string_view motif) const;

 private:
  bool lookup(std::string_view s) const;

  std::size_t max_length_;
  std::unordered_set<std::string> substrings_;
  std::vector<std::string> sequences_;
};

Model refresh_status(const Model& model, const Dataset& dataset);
Model refresh_status(const Model& model, const MotifIndex& index);

}  // namespace poet
