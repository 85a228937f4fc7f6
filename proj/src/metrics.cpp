#include "poet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "poet/predictor.hpp"

namespace poet {

double rmse(std::span<const double> targets, std::span<const double> predictions) {
  if (targets.size() != predictions.size()) throw Error("rmse: length mismatch");
  if (targets.empty()) throw Error("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = targets[i] - predictions[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(targets.size()));
}

double mtr_asym(double s_minus, double s_plus, double s0) {
  if (s0 == 0.0) throw Error("mtr_asym: S0 must be non-zero");
  return (s_minus - s_plus) / s0;
}

std::vector<double> normalize_to_reference(std::span<const double> values, double reference) {
  if (reference == 0.0) throw Error("normalize_to_reference: zero reference");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v / reference);
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: length mismatch");
  if (x.size() < 2) throw Error("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

std::vector<double> ranks_of(const std::vector<std::size_t>& order) {
  std::vector<double> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<double>(r + 1);
  return rank;
}

}  // namespace

RankEvaluation rank_evaluation(const Model& model, const Dataset& labeled, std::size_t k) {
  if (k == 0 || k > labeled.size()) throw Error("rank_evaluation: k must be in [1, number of entries]");
  const RuleMatcher matcher(model);
  RankEvaluation out;
  out.k = k;
  std::vector<double> actual;
  for (const auto& entry : labeled) {
    out.predictions.push_back(matcher.score(entry.sequence.view()));
    actual.push_back(entry.cest_value);
  }
  out.predicted_order = descending_order(out.predictions);
  out.actual_order = descending_order(actual);
  out.pearson_r = pearson(ranks_of(out.predicted_order), ranks_of(out.actual_order));
  try {
    out.raw_pearson_r = pearson(out.predictions, actual);
  } catch (const Error&) {
    out.raw_pearson_r.reset();
  }
  const std::set<std::size_t> top_actual(out.actual_order.begin(),
                                         out.actual_order.begin() + static_cast<std::ptrdiff_t>(k));
  out.top_k_overlap = static_cast<std::size_t>(
      std::count_if(out.predicted_order.begin(), out.predicted_order.begin() + static_cast<std::ptrdiff_t>(k),
                    [&](std::size_t i) { return top_actual.count(i) > 0; }));
  return out;
}

MotifFrequencyReport motif_frequency(std::span<const Model> models, double threshold) {
  if (models.empty()) throw Error("motif_frequency: no models");
  std::map<std::string, std::size_t> counts;
  for (const auto& model : models) {
    std::set<std::string> seen;
    for (const auto& rule : model.rules()) {
      if (rule.expressed) seen.insert(rule.motif.str());
    }
    for (const auto& m : seen) ++counts[m];
  }
  MotifFrequencyReport report;
  report.threshold = threshold;
  report.model_count = models.size();
  const double n = static_cast<double>(models.size());
  for (const auto& [motif, count] : counts) {
    const double fraction = static_cast<double>(count) / n;
    if (fraction >= threshold) report.rows.push_back({Sequence::parse(motif), count, fraction});
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const MotifFrequencyRow& a, const MotifFrequencyRow& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.motif.size() != b.motif.size()) return a.motif.size() > b.motif.size();
    return a.motif < b.motif;
  });
  return report;
}

}  // namespace poet
