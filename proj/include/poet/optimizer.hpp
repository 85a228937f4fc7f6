#pragma once

// Hill-climbing search for high-scoring peptides under a trained model.

#include <cstdint>
#include <string_view>
#include <vector>

#include "poet/domain.hpp"
#include "poet/predictor.hpp"

namespace poet {

struct OptimizerConfig {
  int pool_size = 100;
  int sequence_length = 12;
  int generations = 5000;
  int top_n = 10;
  bool solubility_filter = true;
  std::uint64_t rng_seed = 0;
};

void validate(const OptimizerConfig& config);

struct Candidate {
  Sequence sequence;
  double score = 0.0;
};

/// Model prediction, or 0 for insoluble sequences when `filter_on`.
double gated_predict(const Model& model, const Sequence& seq, const HydrophobicityTable& table, bool filter_on);
double gated_predict(const RuleMatcher& matcher, std::string_view seq, const HydrophobicityTable& table,
                     bool filter_on);

/// Called after each generation with the current pool (same order every call).
struct OptimizerObserver {
  virtual ~OptimizerObserver() = default;
  virtual void on_generation(int generation, const std::vector<Candidate>& pool) = 0;
};

/// Evolves a random pool by single-site substitutions, keeping a change only
/// when the gated score does not decrease. The current best sequence is left
/// untouched each generation. Returns the top_n sequences, score descending,
/// ties in lexicographic order.
///
/// Each (sequence, generation) pair draws from its own seeded stream, so the
/// result does not depend on evaluation order.
std::vector<Candidate> optimize(const Model& model, const OptimizerConfig& config,
                                const HydrophobicityTable& table = HydrophobicityTable::rose(),
                                OptimizerObserver* observer = nullptr);

}  // namespace poet
