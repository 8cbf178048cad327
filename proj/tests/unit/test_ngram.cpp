#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>

#include "pqrank/errors.hpp"
#include "pqrank/ngram.hpp"
#include "pqrank/text.hpp"

using namespace pqrank;

namespace {

const std::vector<std::string> kTexts = {"The theory of the thing.", "Then there were three.",
                                         "Is this the path?", "Mathematics with the athletes."};

std::vector<double> dense(const SparseCounts& s, std::size_t n) {
  std::vector<double> v(n, 0.0);
  for (const auto& [i, c] : s) v[i] = c;
  return v;
}

std::string random_text(std::mt19937_64& rng) {
  const std::string alphabet = "abcAB .,\"x";
  std::string s;
  const std::size_t len = rng() % 15;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace

TEST_CASE("vocabulary ranks n-grams by corpus frequency") {
  std::map<std::string, std::size_t> counts;
  for (const std::string& t : kTexts) {
    const std::string low = to_lower(t);
    for (std::size_t i = 0; i + 2 <= low.size(); ++i) ++counts[low.substr(i, 2)];
  }
  std::vector<std::pair<std::string, std::size_t>> expected(counts.begin(), counts.end());
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  CHECK(expected.front().first == "th");

  const NgramVocab v = fit_vocab(kTexts, NgramUnit::character, 2, 10);
  REQUIRE(v.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(v.terms[i] == expected[i].first);
  CHECK(v.index.at("th") == 0);

  const NgramVocab again = fit_vocab(kTexts, NgramUnit::character, 2, 10);
  CHECK(again.terms == v.terms);
}

TEST_CASE("vocabulary cap and order validation") {
  const std::vector<std::string> texts = {"a b c d e"};
  CHECK(fit_vocab(texts, NgramUnit::word, 1, 2).size() == 2);
  CHECK(fit_vocab(texts, NgramUnit::word, 1, 100).size() == 5);
  CHECK_THROWS_AS(fit_vocab(texts, NgramUnit::word, 4, 10), Error);
  CHECK_THROWS_AS(fit_vocab(texts, NgramUnit::word, 0, 10), Error);
}

TEST_CASE("vectorize counts") {
  NgramVocab v;
  v.unit = NgramUnit::character;
  v.n = 2;
  v.terms = {"ab", "ba"};
  v.reindex();
  CHECK(dense(vectorize("aba", v), 2) == std::vector<double>{1, 1});
  CHECK(vectorize("", v).empty());
  CHECK(dense(vectorize("ABAB", v), 2) == std::vector<double>{2, 1});
}

TEST_CASE("word n-grams") {
  CHECK(extract_ngrams("The cat sat.", NgramUnit::word, 2) ==
        std::vector<std::string>{"the cat", "cat sat", "sat ."});
  CHECK(extract_ngrams("One", NgramUnit::word, 2).empty());
}

TEST_CASE("concatenation and case properties") {
  std::mt19937_64 rng(17);
  std::vector<std::string> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(random_text(rng));
  for (int n = 1; n <= 3; ++n) {
    const NgramVocab v = fit_vocab(corpus, NgramUnit::character, n, 1000);
    for (int t = 0; t < 100; ++t) {
      const std::string a = random_text(rng), b = random_text(rng);
      const auto ca = dense(vectorize(a, v), v.size());
      const auto cb = dense(vectorize(b, v), v.size());
      const auto cab = dense(vectorize(a + b, v), v.size());
      for (std::size_t j = 0; j < v.size(); ++j) {
        CHECK(ca[j] + cb[j] <= cab[j]);
        if (n == 1) CHECK(ca[j] + cb[j] == cab[j]);
      }
      CHECK(vectorize(a, v) == vectorize(to_upper(a), v));
    }
  }
}

TEST_CASE("vocabulary terms survive a file round trip") {
  NgramVocab v;
  v.terms = {"a b", "tab\there", "back\\slash", "new\nline", " "};
  const auto path = std::filesystem::temp_directory_path() / "pqrank_vocab.txt";
  save_vocab_terms(path, v);
  CHECK(load_vocab_terms(path) == v.terms);
  std::filesystem::remove(path);
  for (const std::string& t : v.terms) CHECK(unescape_term(escape_term(t)) == t);
}
