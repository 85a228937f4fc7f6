#include "poet/evolution.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "poet/metrics.hpp"

namespace poet {

FoldAssignment FoldAssignment::make(std::size_t n, int k, Rng& rng) {
  if (k < 2) throw ConfigError("k_folds must be at least 2");
  if (static_cast<std::size_t>(k) > n) throw ConfigError("k_folds exceeds dataset size");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  FoldAssignment folds;
  folds.k = k;
  folds.fold_of.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) folds.fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return folds;
}

namespace {

char random_symbol(Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kStandardAlphabet.size() - 1);
  return kStandardAlphabet[pick(rng)];
}

bool chance(double rate, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < rate;
}

}  // namespace

Rule random_rule(int id, const EvolutionConfig& config, Rng& rng) {
  std::uniform_int_distribution<int> length(1, config.max_motif_length);
  std::uniform_real_distribution<double> weight(config.weight_init_range.low, config.weight_init_range.high);
  const int len = length(rng);
  std::string motif;
  for (int i = 0; i < len; ++i) motif += random_symbol(rng);
  const double w = weight(rng);
  return Rule{id, Sequence::parse(motif, Alphabet::standard), w, false};
}

std::vector<Individual> init_population(const EvolutionConfig& config, const Dataset& dataset, Rng& rng) {
  validate(config);
  const MotifIndex index(dataset, static_cast<std::size_t>(config.max_motif_length));
  std::uniform_int_distribution<int> rule_count(1, config.max_rule_count);
  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(config.population_size));
  for (int p = 0; p < config.population_size; ++p) {
    const int n = rule_count(rng);
    std::vector<Rule> rules;
    rules.reserve(static_cast<std::size_t>(n));
    for (int id = 0; id < n; ++id) rules.push_back(random_rule(id, config, rng));
    population.push_back(Individual{refresh_status(Model(std::move(rules)), index)});
  }
  return population;
}

Individual evaluate(Individual individual, const Dataset& dataset, const FoldAssignment& folds) {
  if (folds.fold_of.size() != dataset.size()) throw ConfigError("fold assignment does not match dataset");
  if (folds.k < 2) throw ConfigError("k_folds must be at least 2");
  const RuleMatcher matcher(individual.model);
  std::vector<double> predictions;
  predictions.reserve(dataset.size());
  for (const auto& entry : dataset) predictions.push_back(matcher.score(entry.sequence.view()));

  double train_sum = 0.0;
  double test_sum = 0.0;
  std::vector<double> train_t, train_p, test_t, test_p;
  for (int f = 0; f < folds.k; ++f) {
    train_t.clear();
    train_p.clear();
    test_t.clear();
    test_p.clear();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      auto& t = folds.fold_of[i] == f ? test_t : train_t;
      auto& p = folds.fold_of[i] == f ? test_p : train_p;
      t.push_back(dataset[i].cest_value);
      p.push_back(predictions[i]);
    }
    if (test_t.empty() || train_t.empty()) throw ConfigError("fold " + std::to_string(f) + " is empty");
    train_sum += rmse(train_t, train_p);
    test_sum += rmse(test_t, test_p);
  }
  individual.training_fitness = train_sum / folds.k;
  individual.test_fitness = test_sum / folds.k;
  return individual;
}

void evaluate_all(std::span<Individual> population, const Dataset& dataset, const FoldAssignment& folds,
                  int threads) {
  const auto n = population.size();
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (auto& ind : population) ind = evaluate(std::move(ind), dataset, folds);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) population[i] = evaluate(std::move(population[i]), dataset, folds);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::pair<std::size_t, std::size_t> tournament_select(std::span<const Individual> population,
                                                      const EvolutionConfig& config, Rng& rng) {
  const auto size = static_cast<std::size_t>(config.tournament_size);
  if (config.tournament_size < 2) throw ConfigError("tournament_size must be at least 2");
  if (size > population.size()) throw ConfigError("tournament_size exceeds population size");

  // Partial Fisher-Yates: the first `size` slots become the pool.
  std::vector<std::size_t> idx(population.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (population[a].training_fitness != population[b].training_fitness) {
      return population[a].training_fitness < population[b].training_fitness;
    }
    return a < b;
  });
  return {idx[0], idx[1]};
}

void shrink(Model& model, std::size_t max_rules) {
  model.sort();
  auto& rules = model.mutable_rules();
  // Table order is longest first, so scanning from the back finds the shortest.
  while (rules.size() > max_rules) {
    auto it = std::find_if(rules.rbegin(), rules.rend(), [](const Rule& r) { return !r.expressed; });
    if (it == rules.rend()) break;
    rules.erase(std::next(it).base());
  }
  if (rules.size() > max_rules) rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(max_rules), rules.end());
}

Model merge_parents(const Model& a, const Model& b, const std::function<bool(const Rule&)>& keep_unexpressed,
                    std::size_t max_rules) {
  std::vector<Rule> rules;
  rules.reserve(a.size() + b.size());
  for (const Model* parent : {&a, &b}) {
    for (const auto& rule : parent->rules()) {
      if (rule.expressed || keep_unexpressed(rule)) rules.push_back(rule);
    }
  }
  for (std::size_t i = 0; i < rules.size(); ++i) rules[i].id = static_cast<int>(i);
  Model child(std::move(rules));
  shrink(child, max_rules);
  return child;
}

Model crossover(const Model& a, const Model& b, const EvolutionConfig& config, Rng& rng) {
  const double rate = config.unused_rule_crossover_rate;
  return merge_parents(a, b, [&](const Rule&) { return chance(rate, rng); },
                       static_cast<std::size_t>(config.max_rule_count));
}

Model mutate(const Model& model, const EvolutionConfig& config, Rng& rng) {
  const auto& rates = config.mutation_rates;
  Model out = model;
  auto& rules = out.mutable_rules();

  if (chance(rates.add_rule, rng) && rules.size() < static_cast<std::size_t>(config.max_rule_count)) {
    rules.push_back(random_rule(out.next_id(), config, rng));
  }
  if (chance(rates.remove_rule, rng) && rules.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, rules.size() - 1);
    rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& rule : rules) {
    if (chance(rates.change_weight, rng)) {
      const double delta = unit(rng);
      rule.weight += chance(0.5, rng) ? delta : -delta;
    }
    if (chance(rates.add_to_pattern, rng) && rule.motif.size() < static_cast<std::size_t>(config.max_motif_length)) {
      std::uniform_int_distribution<std::size_t> pos(0, rule.motif.size());
      const auto at = pos(rng);
      rule.motif = rule.motif.with_inserted(at, random_symbol(rng));
    }
    if (chance(rates.remove_from_pattern, rng) && rule.motif.size() > 1) {
      std::uniform_int_distribution<std::size_t> pos(0, rule.motif.size() - 1);
      rule.motif = rule.motif.with_erased(pos(rng));
    }
  }
  out.sort();
  return out;
}

namespace {

std::size_t best_index(std::span<const Individual> population) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].training_fitness < population[best].training_fitness) best = i;
  }
  return best;
}

// best_test_fitness is the held-out fitness of the best-by-training individual.
GenerationTrace summarize(int generation, std::span<const Individual> population) {
  const auto& best = population[best_index(population)];
  double sum = 0.0;
  for (const auto& ind : population) sum += ind.training_fitness;
  return {generation, best.training_fitness, sum / static_cast<double>(population.size()), best.test_fitness};
}

}  // namespace

EvolutionResult run_evolution(const Dataset& dataset, const EvolutionConfig& config) {
  validate(config, dataset.size());
  Rng rng(config.rng_seed);
  EvolutionResult result;
  result.folds = FoldAssignment::make(dataset.size(), config.k_folds, rng);
  const MotifIndex index(dataset, static_cast<std::size_t>(config.max_motif_length));

  auto population = init_population(config, dataset, rng);
  evaluate_all(population, dataset, result.folds, config.eval_threads);
  result.trace.push_back(summarize(0, population));

  const auto pop_size = static_cast<std::size_t>(config.population_size);
  std::vector<Individual> next;
  next.reserve(pop_size);
  for (int g = 1; g <= config.generations; ++g) {
    next.clear();
    next.push_back(population[best_index(population)]);
    while (next.size() < pop_size) {
      const auto [a, b] = tournament_select(population, config, rng);
      Model child = crossover(population[a].model, population[b].model, config, rng);
      child = mutate(child, config, rng);
      next.push_back(Individual{refresh_status(child, index)});
    }
    evaluate_all(std::span(next).subspan(1), dataset, result.folds, config.eval_threads);
    std::swap(population, next);
    result.trace.push_back(summarize(g, population));
  }
  result.best = population[best_index(population)];
  return result;
}

EvolutionResult run_evolution(const Dataset& dataset, EvolutionConfig config, std::uint64_t rng_seed) {
  config.rng_seed = rng_seed;
  return run_evolution(dataset, config);
}

}  // namespace poet
