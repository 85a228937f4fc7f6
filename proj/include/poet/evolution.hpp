#pragma once

// Genetic-programming search over rule-table models.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "poet/domain.hpp"
#include "poet/predictor.hpp"
#include "poet/random.hpp"

namespace poet {

struct Individual {
  Model model;
  double training_fitness = 0.0;  // RMSE, lower is better
  double test_fitness = 0.0;
};

/// Maps dataset index to fold id in [0, k).
struct FoldAssignment {
  std::vector<int> fold_of;
  int k = 0;

  /// Shuffled balanced assignment: fold sizes differ by at most one.
  static FoldAssignment make(std::size_t n, int k, Rng& rng);
};

struct GenerationTrace {
  int generation = 0;
  double best_training_fitness = 0.0;
  double mean_training_fitness = 0.0;
  double best_test_fitness = 0.0;

  friend bool operator==(const GenerationTrace&, const GenerationTrace&) = default;
};

struct EvolutionResult {
  Individual best;
  std::vector<GenerationTrace> trace;
  FoldAssignment folds;
};

/// A uniformly random rule with status unexpressed.
Rule random_rule(int id, const EvolutionConfig& config, Rng& rng);

std::vector<Individual> init_population(const EvolutionConfig& config, const Dataset& dataset, Rng& rng);

/// k-fold evaluation: training_fitness is the mean over folds of the RMSE on
/// the other folds, test_fitness the mean of the held-out RMSEs.
Individual evaluate(Individual individual, const Dataset& dataset, const FoldAssignment& folds);

/// Evaluates every individual; `threads` > 1 splits the work across workers
/// with results identical to a sequential pass.
void evaluate_all(std::span<Individual> population, const Dataset& dataset, const FoldAssignment& folds,
                  int threads = 1);

/// Samples tournament_size distinct individuals and returns the indices of
/// the two with the lowest training fitness (ties by lower index).
std::pair<std::size_t, std::size_t> tournament_select(std::span<const Individual> population,
                                                      const EvolutionConfig& config, Rng& rng);

/// Removes rules until `model` holds at most `max_rules`: unexpressed rules
/// first, then expressed ones, shortest motif first in both phases.
void shrink(Model& model, std::size_t max_rules);

/// Offspring of all expressed parent rules plus the unexpressed ones for
/// which `keep_unexpressed` returns true (parent A first), shrunk to
/// `max_rules` and renumbered.
Model merge_parents(const Model& a, const Model& b, const std::function<bool(const Rule&)>& keep_unexpressed,
                    std::size_t max_rules);

Model crossover(const Model& a, const Model& b, const EvolutionConfig& config, Rng& rng);

Model mutate(const Model& model, const EvolutionConfig& config, Rng& rng);

/// Runs the full search. The trace holds generation 0 (initial population)
/// plus one entry per generation.
EvolutionResult run_evolution(const Dataset& dataset, const EvolutionConfig& config);
EvolutionResult run_evolution(const Dataset& dataset, EvolutionConfig config, std::uint64_t rng_seed);

}  // namespace poet
