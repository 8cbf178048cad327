#include "pqrank/scorer.hpp"

#include <fstream>

#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"
#include "pqrank/handcrafted.hpp"
#include "pqrank/parallel.hpp"

namespace pqrank {
namespace {

using nlohmann::json;

const Lexicons& lex(const ScoringContext& ctx) {
  return ctx.lexicons ? *ctx.lexicons : Lexicons::bundled();
}

const EmbeddingStore& store_of(const ScoringContext& ctx, std::string_view kind) {
  if (!ctx.store)
    fail(ErrorCode::mismatch, std::string(kind) + " models need an embedding store (--store)");
  return *ctx.store;
}

json classifier_to_json(const FeatureClassifier& c) {
  json j = {{"type", std::string(classifier_name(c.type))}};
  if (c.type == Classifier::logreg)
    j["linear"] = linear_to_json(c.linear);
  else
    j["adaboost"] = adaboost_to_json(c.boost);
  return j;
}

FeatureClassifier classifier_from_json(const json& j) {
  FeatureClassifier c;
  c.type = parse_classifier(j.at("type").get<std::string>());
  if (c.type == Classifier::logreg)
    c.linear = linear_from_json(j.at("linear"));
  else
    c.boost = adaboost_from_json(j.at("adaboost"));
  return c;
}

json envelope(std::string_view kind) {
  return {{"kind", std::string(kind)}, {"format_version", kModelFormatVersion}};
}

}  // namespace

std::vector<double> score_corpus(const Scorer& scorer, const std::vector<Article>& articles,
                                 const ScoringContext& ctx) {
  if (scorer.needs_store()) store_of(ctx, scorer.kind());
  if (!ctx.lexicons) (void)Lexicons::bundled();
  std::vector<std::vector<double>> per(articles.size());
  parallel_for(articles.size(), ctx.threads,
               [&](std::size_t i) { per[i] = scorer.score_article(articles[i], ctx); });
  std::vector<double> out;
  out.reserve(sentence_count(articles));
  for (const auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::string_view classifier_name(Classifier c) {
  return c == Classifier::logreg ? "logreg" : "adaboost";
}

Classifier parse_classifier(std::string_view name) {
  if (name == "logreg") return Classifier::logreg;
  if (name == "adaboost") return Classifier::adaboost;
  fail(ErrorCode::invalid_argument, "unknown classifier '" + std::string(name) + "'");
}

double FeatureClassifier::predict_proba(std::span<const double> x) const {
  return type == Classifier::logreg ? linear.predict_proba(x) : boost.predict_proba(x);
}

FeatureClassifier train_classifier(const Matrix& x, std::span<const int> y,
                                   const ClassifierOptions& options) {
  FeatureClassifier c;
  c.type = options.type;
  if (c.type == Classifier::logreg)
    c.linear = train_logreg(x, y, options.logreg);
  else
    c.boost = train_adaboost(x, y, options.adaboost);
  return c;
}

// ---------------------------------------------------------------------------

std::vector<double> HandcraftedScorer::score_article(const Article& article,
                                                     const ScoringContext& ctx) const {
  const std::vector<HandcraftedVector> vecs = extract_all(article, lex(ctx));
  std::vector<double> out;
  std::vector<double> x(columns.size());
  for (const HandcraftedVector& v : vecs) {
    const auto all = v.values();
    for (std::size_t j = 0; j < columns.size(); ++j) x[j] = all.at(columns[j]);
    out.push_back(classifier.predict_proba(x));
  }
  return out;
}

json HandcraftedScorer::to_json() const {
  json j = envelope(kind());
  std::vector<std::string> names;
  for (std::size_t c : columns) names.emplace_back(handcrafted_feature_names().at(c));
  j["features"] = names;
  j["classifier"] = classifier_to_json(classifier);
  return j;
}

HandcraftedScorer train_handcrafted(const std::vector<Article>& train, const Lexicons& lexicons,
                                    std::string_view features, const ClassifierOptions& options,
                                    unsigned threads) {
  HandcraftedScorer s;
  s.columns = handcrafted_feature_selection(features);
  const Matrix all = extract_corpus(train, lexicons, threads);
  s.classifier = train_classifier(all.select_columns(s.columns), corpus_labels(train), options);
  return s;
}

std::vector<double> NgramScorer::score_article(const Article& article, const ScoringContext&) const {
  std::vector<double> out;
  std::vector<double> x(vocab.size());
  for (const Sentence& s : article.sentences) {
    std::fill(x.begin(), x.end(), 0.0);
    for (const auto& [col, count] : vectorize(s.text, vocab)) x[col] = count;
    out.push_back(classifier.predict_proba(x));
  }
  return out;
}

json NgramScorer::to_json() const {
  json j = envelope(kind());
  j["unit"] = std::string(unit_name(vocab.unit));
  j["n"] = vocab.n;
  j["size_cap"] = vocab.size_cap;
  j["lowercase"] = vocab.lowercase;
  j["vocab"] = vocab.terms;
  j["classifier"] = classifier_to_json(classifier);
  return j;
}

NgramScorer train_ngram(const std::vector<Article>& train, NgramUnit unit, int n,
                        std::size_t size_cap, const ClassifierOptions& options) {
  std::vector<std::string> texts;
  for (const Article& a : train)
    for (const Sentence& s : a.sentences) texts.push_back(s.text);
  NgramScorer s;
  s.vocab = fit_vocab(texts, unit, n, size_cap);
  s.classifier = train_classifier(vectorize_dense(texts, s.vocab), corpus_labels(train), options);
  return s;
}

std::vector<double> NeuralScorer::score_article(const Article& article,
                                                const ScoringContext& ctx) const {
  const EmbeddingStore& store = store_of(ctx, kind());
  const Net& net = trained.net;
  std::vector<double> doc;
  if (net.spec().needs_document()) doc = doc_embedding(store, article).vector;
  std::vector<double> out;
  for (std::size_t i = 0; i < article.sentences.size(); ++i)
    out.push_back(net.forward(store.at(article.id, i), doc));
  return out;
}

json NeuralScorer::to_json() const {
  json j = envelope(kind());
  j["spec"] = trained.net.spec().name();
  j["param_count"] = trained.net.size();
  return j;
}

std::vector<double> TransferScorer::score_article(const Article& article,
                                                  const ScoringContext& ctx) const {
  const EmbeddingStore& store = store_of(ctx, kind());
  std::vector<double> raw;
  for (std::size_t i = 0; i < article.sentences.size(); ++i)
    raw.push_back(model.predict(store.at(article.id, i)));
  return scale_per_article(raw);
}

json TransferScorer::to_json() const {
  json j = envelope(kind());
  j["task"] = std::string(task_name(model.task));
  if (model.task == TransferTask::regression) {
    j["weights"] = model.weights;
    j["bias"] = model.bias;
  } else {
    j["linear"] = linear_to_json(model.classifier);
  }
  return j;
}

std::vector<double> SummarizerScorer::score_article(const Article& article,
                                                    const ScoringContext&) const {
  return scale_per_article(summarize(method, article, options).scores);
}

json SummarizerScorer::to_json() const {
  json j = envelope(kind());
  j["method"] = std::string(method_name(method));
  j["values"] = options.values == ScoreValues::rank ? "rank" : "score";
  j["damping"] = options.damping;
  j["tolerance"] = options.tolerance;
  j["lexrank_threshold"] = options.lexrank_threshold;
  j["kl_smoothing"] = options.kl_smoothing;
  return j;
}

// ---------------------------------------------------------------------------

json linear_to_json(const LinearModel& m) {
  std::vector<int> frozen(m.standardizer.frozen.begin(), m.standardizer.frozen.end());
  return {{"weights", m.weights},
          {"bias", m.bias},
          {"l2_strength", m.l2_strength},
          {"mean", m.standardizer.mean},
          {"scale", m.standardizer.scale},
          {"frozen", frozen}};
}

LinearModel linear_from_json(const json& j) {
  LinearModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.l2_strength = j.at("l2_strength").get<double>();
  m.standardizer.mean = j.at("mean").get<std::vector<double>>();
  m.standardizer.scale = j.at("scale").get<std::vector<double>>();
  for (int f : j.at("frozen").get<std::vector<int>>()) m.standardizer.frozen.push_back(f != 0);
  const std::size_t d = m.weights.size();
  if (m.standardizer.mean.size() != d || m.standardizer.scale.size() != d ||
      m.standardizer.frozen.size() != d)
    fail(ErrorCode::format, "linear model arrays differ in length");
  return m;
}

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const TreeNode& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p0, n.p1, n.weight, n.depth});
  return {{"max_depth", t.max_depth}, {"nodes", nodes}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  t.max_depth = j.at("max_depth").get<int>();
  for (const json& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<int>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<int>();
    n.right = a.at(3).get<int>();
    n.p0 = a.at(4).get<double>();
    n.p1 = a.at(5).get<double>();
    n.weight = a.at(6).get<double>();
    n.depth = a.at(7).get<int>();
    t.nodes.push_back(n);
  }
  const int count = static_cast<int>(t.nodes.size());
  for (const TreeNode& n : t.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count))
      fail(ErrorCode::format, "tree node references a missing child");
  return t;
}

json adaboost_to_json(const AdaBoostModel& m) {
  json trees = json::array();
  for (const DecisionTree& t : m.estimators) trees.push_back(tree_to_json(t));
  return {{"n_estimators", m.n_estimators},
          {"learning_rate", m.learning_rate},
          {"stage_weights", m.stage_weights},
          {"stage_errors", m.stage_errors},
          {"estimators", trees}};
}

AdaBoostModel adaboost_from_json(const json& j) {
  AdaBoostModel m;
  m.n_estimators = j.at("n_estimators").get<std::size_t>();
  m.learning_rate = j.at("learning_rate").get<double>();
  m.stage_weights = j.at("stage_weights").get<std::vector<double>>();
  m.stage_errors = j.at("stage_errors").get<std::vector<double>>();
  for (const json& t : j.at("estimators")) m.estimators.push_back(tree_from_json(t));
  if (m.estimators.size() != m.stage_weights.size())
    fail(ErrorCode::format, "boosted model has mismatched stage arrays");
  return m;
}

std::unique_ptr<Scorer> scorer_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      fail(ErrorCode::format, "unsupported model format version " + std::to_string(version));
    if (kind == "hc") {
      auto s = std::make_unique<HandcraftedScorer>();
      for (const auto& name : j.at("features").get<std::vector<std::string>>())
        s->columns.push_back(handcrafted_feature_index(name));
      s->classifier = classifier_from_json(j.at("classifier"));
      return s;
    }
    if (kind == "ngram") {
      auto s = std::make_unique<NgramScorer>();
      s->vocab.unit = parse_unit(j.at("unit").get<std::string>());
      s->vocab.n = j.at("n").get<int>();
      s->vocab.size_cap = j.at("size_cap").get<std::size_t>();
      s->vocab.lowercase = j.at("lowercase").get<bool>();
      s->vocab.terms = j.at("vocab").get<std::vector<std::string>>();
      s->vocab.reindex();
      s->classifier = classifier_from_json(j.at("classifier"));
      return s;
    }
    if (kind == "transfer") {
      auto s = std::make_unique<TransferScorer>();
      s->model.task = parse_task(j.at("task").get<std::string>());
      if (s->model.task == TransferTask::regression) {
        s->model.weights = j.at("weights").get<std::vector<double>>();
        s->model.bias = j.at("bias").get<double>();
      } else {
        s->model.classifier = linear_from_json(j.at("linear"));
      }
      return s;
    }
    if (kind == "summarizer") {
      auto s = std::make_unique<SummarizerScorer>();
      s->method = parse_method(j.at("method").get<std::string>());
      s->options.values = parse_score_values(j.at("values").get<std::string>());
      s->options.damping = j.at("damping").get<double>();
      s->options.tolerance = j.at("tolerance").get<double>();
      s->options.lexrank_threshold = j.at("lexrank_threshold").get<double>();
      s->options.kl_smoothing = j.at("kl_smoothing").get<double>();
      return s;
    }
    fail(ErrorCode::format, "unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("malformed model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Scorer& scorer) {
  if (const auto* nn = dynamic_cast<const NeuralScorer*>(&scorer)) {
    save_net(path, nn->trained);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write model " + path.string());
  out << scorer.to_json().dump(1) << '\n';
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
  if (const auto* ng = dynamic_cast<const NgramScorer*>(&scorer))
    save_vocab_terms(path.string() + ".vocab", ng->vocab);
}

std::unique_ptr<Scorer> load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open model " + path.string());
  char head[6] = {};
  in.read(head, 6);
  if (in.gcount() == 6 && std::string_view(head, 6) == "PQNET1") {
    in.close();
    auto s = std::make_unique<NeuralScorer>();
    s->trained = load_net(path);
    return s;
  }
  in.clear();
  in.seekg(0);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::format, path.string() + ": not a model file: " + e.what());
  }
  return scorer_from_json(j);
}

}  // namespace pqrank
