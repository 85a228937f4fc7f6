#pragma once

// Error metrics, correlation, CEST signal helpers and model-set reports.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poet/domain.hpp"

namespace poet {

/// Root mean square error. Throws Error on empty or mismatched inputs.
double rmse(std::span<const double> targets, std::span<const double> predictions);

/// Asymmetric magnetization transfer ratio (S- minus S+) over S0.
double mtr_asym(double s_minus, double s_plus, double s0);

/// Divides each value by `reference` (e.g. the K12 contrast).
std::vector<double> normalize_to_reference(std::span<const double> values, double reference);

/// Sample Pearson correlation. Needs at least two points and non-constant
/// series; throws Error otherwise.
double pearson(std::span<const double> x, std::span<const double> y);

struct RankEvaluation {
  /// Pearson r between predicted and actual rank vectors.
  double pearson_r = 0.0;
  /// Pearson r between raw predictions and measured values; absent when the
  /// predictions are constant.
  std::optional<double> raw_pearson_r;
  std::size_t k = 0;
  std::size_t top_k_overlap = 0;
  /// Entry indices, best first.
  std::vector<std::size_t> predicted_order;
  std::vector<std::size_t> actual_order;
  std::vector<double> predictions;
};

/// Ranks `labeled` by raw model prediction (no solubility gate) and by the
/// measured value, both descending with ties in input order. The caller is
/// responsible for `labeled` being disjoint from the training data.
RankEvaluation rank_evaluation(const Model& model, const Dataset& labeled, std::size_t k);

struct MotifFrequencyRow {
  Sequence motif;
  std::size_t count = 0;
  double fraction = 0.0;
};

struct MotifFrequencyReport {
  std::vector<MotifFrequencyRow> rows;
  double threshold = 0.10;
  std::size_t model_count = 0;
};

/// Counts, per motif, the models holding at least one expressed rule with
/// it. Keeps motifs with fraction >= threshold, sorted by count descending,
/// then motif length descending, then motif text.
MotifFrequencyReport motif_frequency(std::span<const Model> models, double threshold = 0.10);

}  // namespace poet
