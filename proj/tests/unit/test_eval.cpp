#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"

using namespace pqrank;
using Ints = std::vector<int>;
using Reals = std::vector<double>;

TEST_CASE("auc fixtures") {
  CHECK(*auc(Ints{1, 0, 0, 1}, Reals{0.9, 0.1, 0.2, 0.8}) == 1.0);
  CHECK(*auc(Ints{1, 0}, Reals{0.5, 0.5}) == 0.5);
  CHECK_FALSE(auc(Ints{0, 0}, Reals{0.1, 0.2}).has_value());
  CHECK_FALSE(auc(Ints{1, 1}, Reals{0.1, 0.2}).has_value());
  CHECK_THROWS_AS(auc(Ints{1, 0}, Reals{0.1}), Error);
}

TEST_CASE("auc equals brute-force pair enumeration") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 12;
    Ints y(n);
    Reals s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng() % 3 == 0;
      s[i] = static_cast<double>(rng() % 5) / 4.0;
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(*auc(y, s) == oracle::brute_auc(y, s));
  }
}

TEST_CASE("auc properties") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 30;
    Ints y(n);
    Reals s(n), neg(n), mono(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng() % 2;
      s[i] = nd(rng);
      neg[i] = -s[i];
      mono[i] = std::exp(3 * s[i]) + 1.0;
    }
    y[0] = 1;
    y[1] = 0;
    CHECK(*auc(y, s) + *auc(y, neg) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*auc(y, mono) == *auc(y, s));
  }
  // One positive ranked r-th of n, no ties.
  for (std::size_t n = 2; n < 15; ++n)
    for (std::size_t r = 1; r <= n; ++r) {
      Ints y(n, 0);
      Reals s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<double>(n - i);
      y[r - 1] = 1;
      CHECK(*auc(y, s) == doctest::Approx(static_cast<double>(n - r) / static_cast<double>(n - 1)));
    }
}

TEST_CASE("per-article averaging") {
  std::vector<ArticleEval> two = {evaluate_article("a", {1, 0}, {0.9, 0.1}),
                                  evaluate_article("b", {1, 0}, {0.1, 0.9})};
  CHECK(auc_avg(two) == 0.5);

  two.push_back(evaluate_article("c", {0, 0}, {0.3, 0.4}));
  CHECK(auc_avg(two) == 0.5);
  CHECK(skipped_count(two) == 1);
  CHECK_THROWS_AS(auc_avg(std::vector<ArticleEval>{evaluate_article("x", {0}, {0.1})}), Error);
}

TEST_CASE("averaging differs from pooling when one article scores high throughout") {
  // Article "hot" scores everything high; its positive beats one of two negatives.
  // Article "cold" ranks its positive first. Hand count:
  //   per-article: (1/2 + 1) / 2 = 0.75
  //   pooled: 0.9 beats {0.8, 0.1, 0.2}, 0.3 beats {0.1, 0.2} -> 5 / 8
  const std::vector<ArticleEval> arts = {evaluate_article("hot", {1, 0, 0}, {0.9, 0.8, 0.95}),
                                         evaluate_article("cold", {1, 0, 0}, {0.3, 0.1, 0.2})};
  CHECK(auc_avg(arts) == 0.75);
  CHECK(*pooled_auc(arts) == 0.625);
}

TEST_CASE("report output") {
  const EvalReport r = make_report({evaluate_article("a", {1, 0}, {0.9, 0.1}),
                                    evaluate_article("b", {0, 0}, {0.9, 0.1})});
  std::ostringstream out;
  write_report(out, r);
  CHECK(out.str() ==
        "article_id,auc,n_pos,n_neg\n"
        "a,1.000000,1,1\n"
        "b,NA,0,2\n"
        "# auc_avg=1.000000 skipped=1 articles=2\n");
}

TEST_CASE("grouped helpers and ranking") {
  const Ints y = {1, 0, 0, 1, 0};
  const Reals s = {0.2, 0.1, 0.3, 0.9, 0.8};
  const std::vector<std::size_t> offsets = {0, 3, 5};
  CHECK(grouped_auc_avg(y, s, offsets) == doctest::Approx((0.5 + 1.0) / 2));

  const auto ranked = rank_by_score(Reals{0.2, 0.9, 0.2, 0.5});
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].index == 1);
  CHECK(ranked[1].index == 3);
  CHECK(ranked[2].index == 0);
  CHECK(ranked[3].index == 2);
}
