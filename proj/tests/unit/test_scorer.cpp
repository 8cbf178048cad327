#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"
#include "pqrank/scorer.hpp"
#include "pqrank/synthetic.hpp"

using namespace pqrank;
namespace fs = std::filesystem;

namespace {

std::vector<Article> quote_corpus(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.articles = 30;
  spec.sentences_per_article = 15;
  spec.quote_prob_positive = 0.9;
  spec.quote_prob_negative = 0.05;
  spec.catchy_prob_positive = 0.6;
  spec.catchy_prob_negative = 0.1;
  return gen_synthetic(spec, seed);
}

void check_round_trip(const Scorer& s, const std::vector<Article>& corpus, const ScoringContext& ctx,
                      double tol = 0.0) {
  const fs::path p = fs::temp_directory_path() / "pqrank_scorer_model";
  save_model(p, s);
  const auto back = load_model(p);
  CHECK(back->kind() == s.kind());
  const auto a = score_corpus(s, corpus, ctx), b = score_corpus(*back, corpus, ctx);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
  fs::remove(p);
  fs::remove(p.string() + ".vocab");
}

}  // namespace

TEST_CASE("a quote-count model ranks the quoted sentence first") {
  const auto corpus = quote_corpus(1);
  const HandcraftedScorer s = train_handcrafted(corpus, Lexicons::bundled(), "quote_count", {});
  Article a;
  a.id = "q";
  a.sentences = {make_sentence("The council met on Tuesday."),
                 make_sentence("She said \"we will win\" at the rally."),
                 make_sentence("Rain is expected later.")};
  const auto scores = s.score_article(a, {});
  CHECK(rank_by_score(scores)[0].index == 1);
  CHECK(s.columns.size() == 1);
}

TEST_CASE("model files round trip for every scorer kind") {
  const auto corpus = quote_corpus(2);
  const ScoringContext ctx;

  ClassifierOptions lr;
  check_round_trip(train_handcrafted(corpus, Lexicons::bundled(), "surface", lr), corpus, ctx);
  ClassifierOptions boost;
  boost.type = Classifier::adaboost;
  boost.adaboost.n_estimators = 12;
  check_round_trip(train_handcrafted(corpus, Lexicons::bundled(), "all", boost), corpus, ctx);
  check_round_trip(train_ngram(corpus, NgramUnit::character, 2, 200, lr), corpus, ctx);
  check_round_trip(train_ngram(corpus, NgramUnit::word, 1, 100, boost), corpus, ctx);

  SummarizerScorer sum;
  sum.method = SummarizerMethod::klsum;
  sum.options.values = ScoreValues::rank;
  check_round_trip(sum, corpus, ctx);

  const EmbeddingStore store = hashed_token_store(corpus, 8, 1);
  ScoringContext with_store;
  with_store.store = &store;
  Matrix x(20, 8);
  ExternalLabelSet labels;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto row = store.at(corpus[0].id, i % 15);
    std::copy(row.begin(), row.end(), x.row(i).begin());
    labels.items.push_back({"h", static_cast<double>(i % 3)});
  }
  TransferScorer tr;
  tr.model = train_transfer(labels, x);
  check_round_trip(tr, corpus, with_store);

  NetSpec spec;
  spec.arch = Arch::B;
  spec.input_dim = 8;
  const Matrix xs = sentence_matrix(store, corpus), xd = document_matrix(store, corpus);
  const NetData data{&xs, &xd, corpus_labels(corpus), {}};
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.patience = 1;
  NeuralScorer nn;
  nn.trained = train_net(spec, data, data, cfg);
  check_round_trip(nn, corpus, with_store, 1e-5);
  CHECK_THROWS_AS(score_corpus(nn, corpus, ctx), Error);
}

TEST_CASE("malformed model files") {
  const fs::path p = fs::temp_directory_path() / "pqrank_bad_model.json";
  std::ofstream(p) << "{\"kind\":\"hc\",\"format_version\":99}";
  CHECK_THROWS_AS(load_model(p), Error);
  std::ofstream(p) << "{\"kind\":\"oracle\",\"format_version\":1}";
  CHECK_THROWS_AS(load_model(p), Error);
  std::ofstream(p) << "not json";
  CHECK_THROWS_AS(load_model(p), Error);
  fs::remove(p);
  try {
    load_model(p);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}
