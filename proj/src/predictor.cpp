#include "poet/predictor.hpp"

#include <algorithm>

namespace poet {

RuleMatcher::RuleMatcher(const Model& model) {
  for (const auto& rule : model.rules()) {
    if (!rule.expressed) continue;
    const auto& m = rule.motif.str();
    entries_.push_back(Entry{m, std::string(m.rbegin(), m.rend()), rule.weight, rule.id});
  }
  for (int i = 0; i < static_cast<int>(entries_.size()); ++i) {
    const auto& f = entries_[static_cast<std::size_t>(i)].forward;
    const auto first = static_cast<std::size_t>(f.front() - 'A');
    const auto last = static_cast<std::size_t>(f.back() - 'A');
    by_edge_[first].push_back(i);
    if (last != first) by_edge_[last].push_back(i);
  }
}

int RuleMatcher::match_at(std::string_view seq, std::size_t pos) const noexcept {
  const char c = seq[pos];
  if (c < 'A' || c > 'Z') return -1;
  const std::size_t remaining = seq.size() - pos;
  for (int i : by_edge_[static_cast<std::size_t>(c - 'A')]) {
    const auto& e = entries_[static_cast<std::size_t>(i)];
    if (e.forward.size() > remaining) continue;
    const auto window = seq.substr(pos, e.forward.size());
    if (window == e.forward || window == e.backward) return i;
  }
  return -1;
}

double RuleMatcher::score(std::string_view seq) const noexcept {
  double total = 0.0;
  std::size_t pos = 0;
  while (pos < seq.size()) {
    const int hit = match_at(seq, pos);
    if (hit < 0) {
      ++pos;
      continue;
    }
    const auto& e = entries_[static_cast<std::size_t>(hit)];
    total += e.weight;
    pos += e.forward.size();
  }
  return total;
}

Prediction RuleMatcher::explain(std::string_view seq) const {
  Prediction out;
  std::size_t pos = 0;
  while (pos < seq.size()) {
    const int hit = match_at(seq, pos);
    if (hit < 0) {
      ++pos;
      continue;
    }
    const auto& e = entries_[static_cast<std::size_t>(hit)];
    out.value += e.weight;
    out.matched_rules.push_back({e.id, pos});
    pos += e.forward.size();
  }
  return out;
}

Prediction predict(const Model& model, const Sequence& seq) { return RuleMatcher(model).explain(seq.view()); }

double predict_value(const Model& model, std::string_view seq) { return RuleMatcher(model).score(seq); }

// ---------------------------------------------------------------------------

MotifIndex::MotifIndex(const Dataset& dataset, std::size_t max_length) : max_length_(max_length) {
  for (const auto& entry : dataset) {
    const auto& s = entry.sequence.str();
    sequences_.push_back(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t len = 1; len <= max_length_ && i + len <= s.size(); ++len) {
        substrings_.emplace(s, i, len);
      }
    }
  }
}

bool MotifIndex::lookup(std::string_view s) const {
  if (s.size() <= max_length_) return substrings_.count(std::string(s)) > 0;
  return std::any_of(sequences_.begin(), sequences_.end(),
                     [&](const std::string& seq) { return seq.find(s) != std::string::npos; });
}

bool MotifIndex::contains(std::string_view motif) const {
  if (lookup(motif)) return true;
  const std::string rev(motif.rbegin(), motif.rend());
  return lookup(rev);
}

Model refresh_status(const Model& model, const MotifIndex& index) {
  Model out = model;
  for (auto& rule : out.mutable_rules()) rule.expressed = index.contains(rule.motif.view());
  return out;
}

Model refresh_status(const Model& model, const Dataset& dataset) {
  std::size_t longest = 0;
  for (const auto& r : model.rules()) longest = std::max(longest, r.motif.size());
  return refresh_status(model, MotifIndex(dataset, longest));
}

}  // namespace poet
