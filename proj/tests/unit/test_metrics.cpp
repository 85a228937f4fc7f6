#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "poet/metrics.hpp"

using namespace poet;

namespace {

bool rel_close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300) || a == b;
}

}  // namespace

TEST_CASE("rmse closed-form values") {
  const std::vector<double> x{1.5, 2.5, 3.5};
  CHECK(rmse(x, x) == 0.0);
  CHECK(rmse(std::vector{3.0}, std::vector{1.0}) == 2.0);
  CHECK(rel_close(rmse(std::vector{1.0, 2.0}, std::vector{2.0, 4.0}), std::sqrt(2.5)));
  CHECK(rel_close(std::sqrt(2.5), 1.58113883, 1e-8));
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), Error);
  CHECK_THROWS_AS(rmse(std::vector{1.0}, std::vector{1.0, 2.0}), Error);
}

TEST_CASE("rmse properties against the two-pass oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> d(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = u(rng);
      f[i] = u(rng);
    }
    const double r = rmse(d, f);
    REQUIRE(rel_close(r, testing::two_pass_rmse(d, f)));
    REQUIRE(r == rmse(f, d));
    const double c = u(rng);
    std::vector<double> cd(n), cf(n);
    for (std::size_t i = 0; i < n; ++i) {
      cd[i] = c * d[i];
      cf[i] = c * f[i];
    }
    REQUIRE(rel_close(rmse(cd, cf), std::abs(c) * r, 1e-10));
  }
}

TEST_CASE("mtr_asym") {
  CHECK(rel_close(mtr_asym(0.8, 0.6, 1.0), 0.2));
  CHECK(mtr_asym(0.5, 0.5, 3.0) == 0.0);
  CHECK(rel_close(mtr_asym(0.9, 0.3, 2.0), 0.3));
  CHECK_THROWS_AS(mtr_asym(1.0, 0.5, 0.0), Error);
}

TEST_CASE("normalize_to_reference") {
  CHECK(normalize_to_reference(std::vector{12.5}, 12.5) == std::vector{1.0});
  CHECK(normalize_to_reference(std::vector{50.0}, 12.5) == std::vector{4.0});
  CHECK(normalize_to_reference(std::vector{0.0}, 7.0) == std::vector{0.0});
  CHECK_THROWS_AS(normalize_to_reference(std::vector{1.0}, 0.0), Error);
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4};
  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  CHECK(rel_close(pearson(x, lin), 1.0));
  CHECK(rel_close(pearson(x, neg), -1.0));
  // cov = 4, var_x = var_y = 5 over the centered sums.
  CHECK(rel_close(pearson(x, std::vector<double>{1, 3, 2, 4}), 0.8));
  CHECK_THROWS_AS(pearson(x, std::vector<double>{2, 2, 2, 2}), Error);
  CHECK_THROWS_AS(pearson(std::vector{1.0}, std::vector{1.0}), Error);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), Error);
}

TEST_CASE("pearson is invariant under positive affine maps") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_real_distribution<double> scale(0.1, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 50;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    const double r = pearson(x, y);
    const double a = scale(rng), b = u(rng);
    std::vector<double> ax(n);
    for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
    REQUIRE(std::abs(pearson(ax, y) - r) <= 1e-12);
  }
}

namespace {

Dataset ladder(std::vector<double> values) {
  Dataset d;
  std::string s;
  for (double v : values) {
    s += 'K';
    d.push_back({Sequence::parse(s), v});
  }
  return d;
}

const Model kOneK({{0, Sequence::parse("K"), 1.0, true}});

}  // namespace

TEST_CASE("rank_evaluation on perfect and reversed orderings") {
  const auto perfect = rank_evaluation(kOneK, ladder({1, 2, 3, 4, 5}), 3);
  CHECK(perfect.pearson_r == doctest::Approx(1.0));
  CHECK(perfect.top_k_overlap == 3);
  CHECK(perfect.predicted_order == perfect.actual_order);
  REQUIRE(perfect.raw_pearson_r.has_value());
  CHECK(*perfect.raw_pearson_r == doctest::Approx(1.0));

  const auto reversed = rank_evaluation(kOneK, ladder({4, 3, 2, 1}), 2);
  CHECK(reversed.top_k_overlap == 0);
  CHECK(reversed.pearson_r == doctest::Approx(-1.0));

  CHECK_THROWS_AS(rank_evaluation(kOneK, ladder({1, 2}), 3), Error);
  CHECK_THROWS_AS(rank_evaluation(kOneK, ladder({1, 2}), 0), Error);
}

TEST_CASE("rank_evaluation top-k overlap over every 4-element ordering") {
  // Predictions are 1..4 for K, KK, KKK, KKKK; enumerate every assignment of
  // measured values and recount the overlap by hand.
  std::vector<double> values{10, 20, 30, 40};
  do {
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto eval = rank_evaluation(kOneK, ladder(values), k);
      std::set<std::size_t> top_pred, top_actual;
      for (std::size_t i = 4 - k; i < 4; ++i) top_pred.insert(i);
      std::vector<std::size_t> idx{0, 1, 2, 3};
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] > values[b]; });
      top_actual.insert(idx.begin(), idx.begin() + static_cast<long>(k));
      std::size_t overlap = 0;
      for (auto i : top_pred) overlap += top_actual.count(i);
      REQUIRE(eval.top_k_overlap == overlap);
      REQUIRE(eval.top_k_overlap <= k);
    }
  } while (std::next_permutation(values.begin(), values.end()));
}

TEST_CASE("rank_evaluation keeps input order for ties") {
  const Dataset d{{Sequence::parse("AAA"), 5}, {Sequence::parse("AAA"), 5}, {Sequence::parse("KAA"), 1}};
  const auto eval = rank_evaluation(kOneK, d, 1);
  CHECK(eval.actual_order == std::vector<std::size_t>{0, 1, 2});
  CHECK(eval.predicted_order == std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("motif_frequency") {
  const Model single({{0, Sequence::parse("KK"), 1.0, true}});
  const std::vector<Model> same(50, single);
  const auto all = motif_frequency(same);
  REQUIRE(all.rows.size() == 1);
  CHECK(all.rows[0].fraction == 1.0);
  CHECK(all.rows[0].count == 50);
  CHECK(motif_frequency(same, 1.1).rows.empty());

  std::vector<Model> ten(9, Model({{0, Sequence::parse("A"), 1.0, true}}));
  ten.push_back(Model({{0, Sequence::parse("A"), 1.0, true},
                       {1, Sequence::parse("WK"), 1.0, true},
                       {2, Sequence::parse("WK"), 2.0, true},
                       {3, Sequence::parse("TTT"), 1.0, false}}));
  const auto r = motif_frequency(ten, 0.10);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].motif.str() == "A");
  CHECK(r.rows[1].motif.str() == "WK");
  CHECK(r.rows[1].count == 1);
  CHECK(r.rows[1].fraction == 0.1);
  CHECK(motif_frequency(ten, 0.11).rows.size() == 1);
  CHECK(motif_frequency(ten, 0.0).rows.size() == 2);  // unexpressed TTT never counted

  CHECK_THROWS_AS(motif_frequency(std::vector<Model>{}), Error);
}

TEST_CASE("motif_frequency orders by count then length") {
  const std::vector<Model> models{
      Model({{0, Sequence::parse("K"), 1, true}, {1, Sequence::parse("KTW"), 1, true}}),
      Model({{0, Sequence::parse("K"), 1, true}, {1, Sequence::parse("KTW"), 1, true}, {2, Sequence::parse("E"), 1, true}}),
      Model({{0, Sequence::parse("E"), 1, true}}),
  };
  const auto r = motif_frequency(models, 0.0);
  std::vector<std::string> order;
  for (const auto& row : r.rows) order.push_back(row.motif.str());
  CHECK(order == std::vector<std::string>{"KTW", "E", "K"});
}
