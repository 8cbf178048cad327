#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "pqrank/corpus.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/synthetic.hpp"
#include "pqrank/text.hpp"

using namespace pqrank;

namespace {

std::string two_records() {
  return R"({"id": "a1", "source": "x", "sentences": [{"text": "Hello there.", "tokens": ["Hello", "there", "."], "pos_tags": null, "is_pq_source": true}]})"
         "\n"
         R"({"id": "a2", "source": "x", "sentences": [{"text": "Bye.", "tokens": ["Bye", "."], "pos_tags": ["NN", "OTHER"], "is_pq_source": false}]})"
         "\n";
}

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("read_corpus parses well-formed records") {
  std::istringstream in(two_records());
  const auto corpus = read_corpus(in);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].id == "a1");
  CHECK(corpus[1].id == "a2");
  CHECK(corpus[0].sentences[0].is_pq_source);
  CHECK_FALSE(corpus[0].sentences[0].pos_tags.has_value());
  CHECK(corpus[1].sentences[0].pos_tags->at(0) == "NN");
}

TEST_CASE("read_corpus reports bad records") {
  SUBCASE("pos tag length mismatch names the article") {
    std::istringstream in(
        R"({"id": "bad7", "source": "x", "sentences": [{"text": "a b", "tokens": ["a", "b"], "pos_tags": ["NN"], "is_pq_source": false}]})");
    const std::string msg = error_of([&] { read_corpus(in); });
    CHECK(msg.find("bad7") != std::string::npos);
  }
  SUBCASE("malformed JSON names the line") {
    std::istringstream in(two_records() + "{not json\n");
    const std::string msg = error_of([&] { read_corpus(in); });
    CHECK(msg.find("line 3") != std::string::npos);
  }
  SUBCASE("duplicate id") {
    std::istringstream in(two_records() + two_records());
    CHECK(error_of([&] { read_corpus(in); }).find("duplicate") != std::string::npos);
  }
  SUBCASE("no sentences") {
    std::istringstream in(R"({"id": "e", "source": "x", "sentences": []})");
    CHECK_THROWS_AS(read_corpus(in), Error);
  }
  SUBCASE("missing file") {
    try {
      load_corpus("/nonexistent/corpus.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::io);
    }
  }
}

TEST_CASE("corpus save/load round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SyntheticSpec spec;
    spec.articles = 12;
    spec.sentences_per_article = 7;
    spec.quote_prob_positive = 0.5;
    spec.quote_prob_negative = 0.2;
    spec.doc_gated = seed == 2;
    auto corpus = gen_synthetic(spec, seed);
    corpus[0].sentences[0].pos_tags = std::vector<std::string>(corpus[0].sentences[0].tokens.size(), "NN");
    const auto path = std::filesystem::temp_directory_path() / "pqrank_roundtrip.jsonl";
    save_corpus(path, corpus);
    CHECK(load_corpus(path) == corpus);
    std::filesystem::remove(path);
  }
}

TEST_CASE("split_corpus sizes, determinism and partition") {
  SyntheticSpec spec;
  spec.articles = 100;
  spec.sentences_per_article = 3;
  const auto corpus = gen_synthetic(spec, 1);
  const CorpusSplit s = split_corpus(corpus, 7);
  CHECK(s.train.size() == 70);
  CHECK(s.validation.size() == 10);
  CHECK(s.test.size() == 20);
  const CorpusSplit again = split_corpus(corpus, 7);
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  std::set<std::string> ids;
  for (const auto* part : {&s.train, &s.validation, &s.test})
    for (const Article& a : *part) CHECK(ids.insert(a.id).second);
  CHECK(ids.size() == corpus.size());
  CHECK_THROWS_AS(split_corpus(std::vector<Article>(corpus.begin(), corpus.begin() + 9), 1), Error);
}

TEST_CASE("class_balance") {
  const ClassBalance b = class_balance(26591, 680220);
  CHECK(b.ratio == doctest::Approx(25.58).epsilon(0.001));

  Article a;
  a.id = "neg";
  a.sentences = {make_sentence("One."), make_sentence("Two.")};
  const ClassBalance none = class_balance(std::vector<Article>{a});
  CHECK(none.positives == 0);
  CHECK(none.negatives == 2);
  CHECK(std::isinf(none.ratio));
}

TEST_CASE("synthetic generator") {
  SUBCASE("planted rate 1/27 gives ratio near 26") {
    SyntheticSpec spec;
    spec.articles = 250;
    spec.sentences_per_article = 40;
    spec.ensure_positive = false;
    const auto corpus = gen_synthetic(spec, 5);
    CHECK(sentence_count(corpus) == 10000);
    CHECK(class_balance(corpus).ratio == doctest::Approx(26.0).epsilon(0.10));
  }
  SUBCASE("quote probability 1 plants quotes in every positive") {
    SyntheticSpec spec;
    spec.articles = 30;
    spec.quote_prob_positive = 1.0;
    for (const Article& a : gen_synthetic(spec, 9))
      for (const Sentence& s : a.sentences)
        if (s.is_pq_source) CHECK(s.text.find_first_of("\"\xE2") != std::string::npos);
  }
  SUBCASE("pure function of spec and seed") {
    SyntheticSpec spec;
    spec.articles = 5;
    spec.catchy_prob_positive = 0.3;
    CHECK(gen_synthetic(spec, 4) == gen_synthetic(spec, 4));
    CHECK_FALSE(gen_synthetic(spec, 4) == gen_synthetic(spec, 5));
  }
  SUBCASE("doc gating pairs labels with the article's marker") {
    SyntheticSpec spec;
    spec.articles = 40;
    spec.sentences_per_article = 20;
    spec.doc_gated = true;
    for (const Article& a : gen_synthetic(spec, 2)) {
      std::set<std::string> pos_marker, neg_marker;
      for (const Sentence& s : a.sentences)
        for (const std::string& m : gate_markers())
          if (to_lower(s.text).find(m) != std::string::npos)
            (s.is_pq_source ? pos_marker : neg_marker).insert(m);
      CHECK(pos_marker.size() == 1);
      CHECK(neg_marker.size() == 1);
      CHECK(*pos_marker.begin() != *neg_marker.begin());
    }
  }
  SUBCASE("invalid rates") {
    SyntheticSpec spec;
    spec.positive_rate = 0.0;
    CHECK_THROWS_AS(gen_synthetic(spec, 1), Error);
    spec.positive_rate = 0.1;
    spec.quote_prob_positive = 1.5;
    CHECK_THROWS_AS(gen_synthetic(spec, 1), Error);
  }
  SUBCASE("default article length") {
    SyntheticSpec spec;
    spec.articles = 1000;
    const auto corpus = gen_synthetic(spec, 1);
    CHECK(static_cast<double>(sentence_count(corpus)) / 1000.0 == doctest::Approx(48.32).epsilon(0.01));
  }
}
