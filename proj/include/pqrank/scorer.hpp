#pragma once
// Trained sentence scorers behind one interface, and their on-disk format.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pqrank/classic_ml.hpp"
#include "pqrank/corpus.hpp"
#include "pqrank/crosstask.hpp"
#include "pqrank/embeddings.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/neural.hpp"
#include "pqrank/ngram.hpp"
#include "pqrank/summarizers.hpp"

namespace pqrank {

inline constexpr int kModelFormatVersion = 1;

struct ScoringContext {
  const Lexicons* lexicons = nullptr;  // null: bundled
  const EmbeddingStore* store = nullptr;
  unsigned threads = 1;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string_view kind() const = 0;
  virtual bool needs_store() const { return false; }
  // One probability-like score per sentence of `article`.
  virtual std::vector<double> score_article(const Article& article,
                                            const ScoringContext& ctx) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

// Scores of every sentence, articles in corpus order.
std::vector<double> score_corpus(const Scorer& scorer, const std::vector<Article>& articles,
                                 const ScoringContext& ctx);

enum class Classifier { logreg, adaboost };
std::string_view classifier_name(Classifier c);
Classifier parse_classifier(std::string_view name);

// Either a logistic regression or a boosted ensemble over a feature matrix.
struct FeatureClassifier {
  Classifier type = Classifier::logreg;
  LinearModel linear;
  AdaBoostModel boost;

  double predict_proba(std::span<const double> x) const;
};

struct ClassifierOptions {
  Classifier type = Classifier::logreg;
  LogRegOptions logreg;
  AdaBoostOptions adaboost;
};

FeatureClassifier train_classifier(const Matrix& x, std::span<const int> y,
                                   const ClassifierOptions& options);

class HandcraftedScorer : public Scorer {
 public:
  std::vector<std::size_t> columns;  // indices into the handcrafted vector
  FeatureClassifier classifier;

  std::string_view kind() const override { return "hc"; }
  std::vector<double> score_article(const Article& article,
                                    const ScoringContext& ctx) const override;
  nlohmann::json to_json() const override;
};

HandcraftedScorer train_handcrafted(const std::vector<Article>& train, const Lexicons& lexicons,
                                    std::string_view features, const ClassifierOptions& options,
                                    unsigned threads = 1);

class NgramScorer : public Scorer {
 public:
  NgramVocab vocab;
  FeatureClassifier classifier;

  std::string_view kind() const override { return "ngram"; }
  std::vector<double> score_article(const Article& article,
                                    const ScoringContext& ctx) const override;
  nlohmann::json to_json() const override;
};

NgramScorer train_ngram(const std::vector<Article>& train, NgramUnit unit, int n,
                        std::size_t size_cap, const ClassifierOptions& options);

class NeuralScorer : public Scorer {
 public:
  TrainedNet trained;

  std::string_view kind() const override { return "nn"; }
  bool needs_store() const override { return true; }
  std::vector<double> score_article(const Article& article,
                                    const ScoringContext& ctx) const override;
  nlohmann::json to_json() const override;
};

class TransferScorer : public Scorer {
 public:
  TransferModel model;

  std::string_view kind() const override { return "transfer"; }
  bool needs_store() const override { return true; }
  std::vector<double> score_article(const Article& article,
                                    const ScoringContext& ctx) const override;
  nlohmann::json to_json() const override;
};

class SummarizerScorer : public Scorer {
 public:
  SummarizerMethod method = SummarizerMethod::textrank;
  SummarizerOptions options;

  std::string_view kind() const override { return "summarizer"; }
  std::vector<double> score_article(const Article& article,
                                    const ScoringContext& ctx) const override;
  nlohmann::json to_json() const override;
};

nlohmann::json linear_to_json(const LinearModel& m);
LinearModel linear_from_json(const nlohmann::json& j);
nlohmann::json tree_to_json(const DecisionTree& t);
DecisionTree tree_from_json(const nlohmann::json& j);
nlohmann::json adaboost_to_json(const AdaBoostModel& m);
AdaBoostModel adaboost_from_json(const nlohmann::json& j);

// Neural scorers are written as PQNET1 files, everything else as JSON with
// "kind" and "format_version" fields. N-gram models also get `<path>.vocab`.
void save_model(const std::filesystem::path& path, const Scorer& scorer);
std::unique_ptr<Scorer> load_model(const std::filesystem::path& path);
std::unique_ptr<Scorer> scorer_from_json(const nlohmann::json& j);

}  // namespace pqrank
