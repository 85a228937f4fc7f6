#include "poet/optimizer.hpp"

#include <algorithm>

#include "poet/random.hpp"

namespace poet {

void validate(const OptimizerConfig& config) {
  if (config.pool_size <= 0) throw ConfigError("pool_size must be positive");
  if (config.sequence_length <= 0) throw ConfigError("sequence_length must be positive");
  if (config.generations < 0) throw ConfigError("generations must be non-negative");
  if (config.top_n <= 0) throw ConfigError("top_n must be positive");
  if (config.top_n > config.pool_size) throw ConfigError("top_n exceeds pool_size");
}

double gated_predict(const RuleMatcher& matcher, std::string_view seq, const HydrophobicityTable& table,
                     bool filter_on) {
  if (filter_on && !is_soluble(seq, table)) return 0.0;
  return matcher.score(seq);
}

double gated_predict(const Model& model, const Sequence& seq, const HydrophobicityTable& table, bool filter_on) {
  return gated_predict(RuleMatcher(model), seq.view(), table, filter_on);
}

namespace {

// Stream id reserved for initial pool construction.
constexpr std::uint64_t kInitStream = ~std::uint64_t{0};

char draw_symbol(SplitMix64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kStandardAlphabet.size() - 1);
  return kStandardAlphabet[pick(rng)];
}

}  // namespace

std::vector<Candidate> optimize(const Model& model, const OptimizerConfig& config, const HydrophobicityTable& table,
                                OptimizerObserver* observer) {
  validate(config);
  const RuleMatcher matcher(model);
  const auto length = static_cast<std::size_t>(config.sequence_length);
  const bool filter = config.solubility_filter;

  std::vector<Candidate> pool;
  pool.reserve(static_cast<std::size_t>(config.pool_size));
  for (int i = 0; i < config.pool_size; ++i) {
    SplitMix64 rng(derive_seed(config.rng_seed, static_cast<std::uint64_t>(i), kInitStream));
    std::string s(length, 'A');
    for (auto& c : s) c = draw_symbol(rng);
    const double score = gated_predict(matcher, s, table, filter);
    pool.push_back({Sequence::parse(s, Alphabet::standard), score});
  }

  std::uniform_int_distribution<std::size_t> site(0, length - 1);
  for (int g = 0; g < config.generations; ++g) {
    std::size_t elite = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      if (pool[i].score > pool[elite].score) elite = i;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i == elite) continue;
      SplitMix64 rng(derive_seed(config.rng_seed, i, static_cast<std::uint64_t>(g)));
      const auto at = site(rng);
      const char symbol = draw_symbol(rng);
      auto& cand = pool[i];
      std::string trial = cand.sequence.str();
      trial[at] = symbol;
      const double score = gated_predict(matcher, trial, table, filter);
      if (score < cand.score) continue;
      cand.sequence = cand.sequence.with_replaced(at, symbol);
      cand.score = score;
    }
    if (observer) observer->on_generation(g, pool);
  }

  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.sequence < b.sequence;
  });
  pool.erase(pool.begin() + config.top_n, pool.end());
  return pool;
}

}  // namespace poet
