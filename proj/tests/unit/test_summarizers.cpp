#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/summarizers.hpp"
#include "pqrank/synthetic.hpp"

using namespace pqrank;

namespace {

Article make_article(const std::vector<std::string>& texts) {
  Article a;
  a.id = "t";
  for (const std::string& t : texts) a.sentences.push_back(make_sentence(t));
  return a;
}

std::vector<Article> small_articles(std::size_t max_sentences, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.articles = 40;
  spec.sentences_per_article = max_sentences;
  spec.min_words = 3;
  spec.max_words = 9;
  spec.catchy_prob_positive = 0.5;
  spec.catchy_prob_negative = 0.1;
  auto corpus = gen_synthetic(spec, seed);
  std::mt19937_64 rng(seed);
  for (Article& a : corpus) a.sentences.resize(1 + rng() % max_sentences);
  return corpus;
}

}  // namespace

TEST_CASE("graph scorers match a direct linear solve") {
  for (const Article& a : small_articles(10, 4)) {
    const auto tr = textrank(a).scores;
    const auto tr_oracle = oracle::pagerank_solve(textrank_similarity(a), 0.85);
    const auto lr = lexrank(a).scores;
    const auto lr_oracle = oracle::pagerank_solve(lexrank_similarity(a, 0.1), 0.85);
    REQUIRE(tr.size() == a.sentences.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      CHECK(std::abs(tr[i] - tr_oracle[i]) < 1e-5);
      CHECK(std::abs(lr[i] - lr_oracle[i]) < 1e-5);
    }
    double sum = 0;
    for (double v : tr) {
      CHECK(v >= 0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("TextRank similarity is overlap over summed log lengths") {
  const Article a = make_article({"the cat sat on the mat", "a cat and a dog", "zebras run"});
  const Matrix m = textrank_similarity(a);
  // distinct overlap {cat} = 1; word counts 6 and 5
  CHECK(m(0, 1) == doctest::Approx(1.0 / (std::log(6.0) + std::log(5.0))));
  CHECK(m(1, 0) == m(0, 1));
  CHECK(m(0, 2) == 0.0);
  CHECK(m(0, 0) == 0.0);
}

TEST_CASE("graph scorer edge cases") {
  SUBCASE("identical sentences score uniformly") {
    const Article a = make_article({"Same words here.", "Same words here.", "Same words here."});
    for (double v : textrank(a).scores) CHECK(v == doctest::Approx(1.0 / 3));
    for (double v : lexrank(a).scores) CHECK(v == doctest::Approx(1.0 / 3));
  }
  SUBCASE("near duplicates outscore a disjoint sentence") {
    const Article a = make_article({"The mayor opened the new bridge today.",
                                    "Zebras graze quietly.",
                                    "The mayor opened the bridge today."});
    const auto s = textrank(a).scores;
    CHECK(s[0] > s[1]);
    CHECK(s[2] > s[1]);
  }
  SUBCASE("an isolated LexRank node keeps only the teleport share") {
    const Article a = make_article({"Budget vote delayed again.", "Budget vote delayed again.",
                                    "Zebras graze quietly."});
    const auto s = lexrank(a).scores;
    // Linked pair: x = (1-d)/3 + d*x, isolated: (1-d)/3, so isolated/linked = 1 - d.
    CHECK(s[2] / s[0] == doctest::Approx(0.15).epsilon(1e-5));
  }
  SUBCASE("singleton article") {
    const Article a = make_article({"Alone."});
    CHECK(textrank(a).scores == std::vector<double>{1.0});
    CHECK(lexrank(a).scores == std::vector<double>{1.0});
  }
}

TEST_CASE("SumBasic hand-simulated fixture") {
  // content words: {cats chase mice} {dogs chase cats} {birds sing}
  // p: cats 2/8, chase 2/8, others 1/8 -> averages 5/24, 5/24, 1/8 -> pick 0 (lowest index)
  // squaring cats/chase/mice -> s1 = (1/8+1/16+1/16)/3 < s2 = 1/8 -> pick 2, then 1
  const Article a = make_article({"Cats chase mice.", "Dogs chase cats.", "Birds sing."});
  CHECK(sumbasic_order(a, Lexicons::bundled().stopwords) == std::vector<std::size_t>{0, 2, 1});
  const auto s = sumbasic(a).scores;
  CHECK(s[0] == doctest::Approx(2.0 / 3));
  CHECK(s[2] == doctest::Approx(1.0 / 3));
  CHECK(s[1] == 0.0);
  CHECK(sumbasic(make_article({"Only one."})).scores == std::vector<double>{0.0});
}

TEST_CASE("KLSum first pick equals brute force") {
  for (const Article& a : small_articles(6, 9)) {
    std::size_t best = 0;
    double best_kl = oracle::kl_divergence(a, 0, 1e-3);
    for (std::size_t i = 1; i < a.sentences.size(); ++i) {
      const double kl = oracle::kl_divergence(a, i, 1e-3);
      if (kl < best_kl - 1e-12) {
        best = i;
        best_kl = kl;
      }
    }
    CHECK(klsum_order(a, Lexicons::bundled().stopwords, 1e-3).front() == best);
  }
  const Article a = make_article({"Cats chase mice.", "Dogs chase cats.", "Birds sing."});
  CHECK(klsum_divergence(a, {0, 1, 2}, Lexicons::bundled().stopwords, 1e-3) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("summarizers are deterministic and article-local") {
  const auto corpus = small_articles(8, 5);
  for (SummarizerMethod m : {SummarizerMethod::textrank, SummarizerMethod::lexrank,
                             SummarizerMethod::sumbasic, SummarizerMethod::klsum}) {
    const auto all = summarize_corpus(m, corpus, {}, 3);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(all[i].scores == summarize(m, corpus[i]).scores);
      CHECK(all[i].article_id == corpus[i].id);
    }
  }
}

TEST_CASE("rank conversion") {
  CHECK(order_to_scores({2, 0, 1}) == std::vector<double>{1.0 / 3, 0.0, 2.0 / 3});
  CHECK(rank_scores({0.1, 0.7, 0.1}) == std::vector<double>{1.0 / 3, 2.0 / 3, 0.0});
  SummarizerOptions o;
  o.values = ScoreValues::rank;
  const Article a = make_article({"The mayor opened the new bridge today.", "Zebras graze quietly.",
                                  "The mayor opened the bridge today."});
  const auto r = textrank(a, o).scores;
  CHECK(r[1] == 0.0);
  CHECK_THROWS_AS(parse_score_values("both"), Error);
  CHECK_THROWS_AS(parse_method("luhn"), Error);
}
