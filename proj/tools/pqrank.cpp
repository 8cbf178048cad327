// pqrank: pull-quote sentence ranking toolkit.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "pqrank/analysis.hpp"
#include "pqrank/corpus.hpp"
#include "pqrank/crosstask.hpp"
#include "pqrank/embeddings.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/eval.hpp"
#include "pqrank/handcrafted.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/neural.hpp"
#include "pqrank/parallel.hpp"
#include "pqrank/scorer.hpp"
#include "pqrank/simd/kernels.hpp"
#include "pqrank/summarizers.hpp"
#include "pqrank/synthetic.hpp"

namespace fs = std::filesystem;
using namespace pqrank;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit : int { ok = 0, failure = 1, usage = 2, data_error = 65, no_input = 66 };

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string config;
  std::vector<std::string> argv;
  std::string resolved;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<fs::path> inputs;
};

Globals g;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

std::string sha256_text(const std::string& s) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

const fs::path& input(const fs::path& p) {
  if (!fs::exists(p)) fail(ErrorCode::io, "no such file: " + p.string());
  g.inputs.push_back(p);
  return p;
}

void write_manifest(const fs::path& out) {
  json inputs = json::array();
  for (const fs::path& p : g.inputs) inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - g.start)
                      .count();
  const json m = {{"command", g.argv},
                  {"seed", g.seed},
                  {"threads", resolve_threads(g.threads)},
                  {"config_sha256", sha256_text(g.resolved)},
                  {"inputs", inputs},
                  {"tool_version", kVersion},
                  {"isa", std::string(simd::isa_name(simd::active_isa()))},
                  {"elapsed_ms", ms}};
  std::ofstream f(out.string() + ".manifest.json");
  if (!f) fail(ErrorCode::io, "cannot write manifest for " + out.string());
  f << m.dump(1) << '\n';
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot write " + p.string());
  return f;
}

std::vector<Article> corpus_split(const fs::path& path, const std::string& split) {
  std::vector<Article> all = load_corpus(input(path));
  if (split == "all") return all;
  CorpusSplit s = split_corpus(all, g.seed);
  if (split == "train") return std::move(s.train);
  if (split == "validation") return std::move(s.validation);
  if (split == "test") return std::move(s.test);
  fail(ErrorCode::invalid_argument, "--split must be all, train, validation or test");
}

struct StoreArgs {
  std::string path;
  std::string index;

  void add(CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--store", path, "Embedding store (PQEMB1)");
    if (required) o->required();
    cmd->add_option("--index", index, "Store index (default: <store>.tsv)");
  }
  fs::path index_path() const { return index.empty() ? fs::path(path + ".tsv") : fs::path(index); }
  EmbeddingStore load() const {
    input(path);
    return load_store(path, input(index_path()));
  }
};

const Lexicons& lexicons_from(const std::string& dir, Lexicons& storage) {
  if (dir.empty()) return Lexicons::bundled();
  storage = Lexicons::load(dir);
  return storage;
}

std::string fmt(double v, const char* f = "%.6f") {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

// --------------------------------------------------------------------------

void add_gen_synthetic(CLI::App& app) {
  auto* cmd = app.add_subcommand("gen-synthetic", "Generate a synthetic labeled corpus");
  struct Args {
    SyntheticSpec spec;
    std::string out, store;
    std::size_t dim = 64;
    long plant_dim = -1;
    double plant_strength = 3.0;
    bool no_ensure = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--out", a->out, "Output corpus (JSON lines)")->required();
  cmd->add_option("--articles", a->spec.articles, "Number of articles")->capture_default_str();
  cmd->add_option("--sentences,--sents-per-article", a->spec.sentences_per_article, "Sentences per article")->capture_default_str();
  cmd->add_option("--positive-rate,--pos-rate", a->spec.positive_rate, "Base positive rate")->capture_default_str();
  cmd->add_flag("--no-ensure-positive", a->no_ensure, "Allow articles without positives");
  cmd->add_option("--min-words", a->spec.min_words)->capture_default_str();
  cmd->add_option("--max-words", a->spec.max_words)->capture_default_str();
  cmd->add_option("--quote-pos", a->spec.quote_prob_positive, "Quote plant probability in positives");
  cmd->add_option("--quote-neg", a->spec.quote_prob_negative, "Quote plant probability in negatives");
  cmd->add_option("--catchy-pos", a->spec.catchy_prob_positive, "Catchy word probability in positives");
  cmd->add_option("--catchy-neg", a->spec.catchy_prob_negative, "Catchy word probability in negatives");
  cmd->add_option("--position-skew", a->spec.position_skew, "Weight of the positional profile");
  cmd->add_option("--marker", a->spec.marker_word, "Marker token");
  cmd->add_option("--marker-pos", a->spec.marker_prob_positive);
  cmd->add_option("--marker-neg", a->spec.marker_prob_negative);
  cmd->add_flag("--doc-gated", a->spec.doc_gated, "Plant document-gated markers");
  cmd->add_option("--source", a->spec.source)->capture_default_str();
  cmd->add_option("--store", a->store, "Also write a hashed-token embedding store here");
  cmd->add_option("--dim", a->dim, "Embedding dim for --store")->capture_default_str();
  cmd->add_option("--plant-dim", a->plant_dim, "Dimension that carries --marker in the store");
  cmd->add_option("--plant-strength", a->plant_strength)->capture_default_str();
  cmd->callback([a] {
    a->spec.ensure_positive = !a->no_ensure;
    const std::vector<Article> corpus = gen_synthetic(a->spec, g.seed);
    save_corpus(a->out, corpus);
    write_manifest(a->out);
    if (!a->store.empty()) {
      const EmbeddingStore store =
          a->plant_dim >= 0
              ? planted_dimension_store(corpus, a->dim, static_cast<std::size_t>(a->plant_dim),
                                        a->spec.marker_word, a->plant_strength, g.seed)
              : hashed_token_store(corpus, a->dim, g.seed);
      save_store(a->store, a->store + ".tsv", store);
      write_manifest(a->store);
    }
    const ClassBalance b = class_balance(corpus);
    std::cout << "articles=" << corpus.size() << " sentences=" << sentence_count(corpus)
              << " positives=" << b.positives << " ratio=1:" << fmt(b.ratio, "%.2f") << '\n';
  });
}

void add_features(CLI::App& app) {
  auto* cmd = app.add_subcommand("features", "Extract handcrafted features to CSV");
  struct Args {
    std::string corpus, out, lexicons;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--corpus", a->corpus)->required();
  cmd->add_option("--out", a->out)->required();
  cmd->add_option("--lexicons", a->lexicons, "Lexicon directory (default: bundled)");
  cmd->callback([a] {
    const std::vector<Article> corpus = load_corpus(input(a->corpus));
    Lexicons storage;
    const Matrix x = extract_corpus(corpus, lexicons_from(a->lexicons, storage), g.threads);
    std::ofstream f = open_out(a->out);
    f << "article_id,sentence_index,label";
    for (auto n : handcrafted_feature_names()) f << ',' << n;
    f << '\n';
    std::size_t r = 0;
    for (const Article& art : corpus)
      for (std::size_t i = 0; i < art.sentences.size(); ++i, ++r) {
        f << art.id << ',' << i << ',' << (art.sentences[i].is_pq_source ? 1 : 0);
        for (double v : x.row(r)) f << ',' << fmt(v, "%.10g");
        f << '\n';
      }
    write_manifest(a->out);
  });
}

struct ClassifierArgs {
  std::string type = "logreg";
  double C = 1.0;
  std::size_t estimators = 100;
  int max_depth = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("--classifier", type, "logreg or adaboost")->capture_default_str();
    cmd->add_option("--C", C, "Inverse L2 strength for logreg")->capture_default_str();
    cmd->add_option("--estimators", estimators, "AdaBoost rounds")->capture_default_str();
    cmd->add_option("--max-depth", max_depth, "AdaBoost base tree depth")->capture_default_str();
  }
  ClassifierOptions options() const {
    ClassifierOptions o;
    o.type = parse_classifier(type);
    o.logreg.C = C;
    o.adaboost.n_estimators = estimators;
    o.adaboost.max_depth = max_depth;
    return o;
  }
};

void add_train_hc(CLI::App& app) {
  auto* cmd = app.add_subcommand("train-hc", "Train a handcrafted-feature model");
  struct Args {
    std::string corpus, out, features = "all", lexicons, split = "train";
    ClassifierArgs clf;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--corpus", a->corpus)->required();
  cmd->add_option("--out", a->out)->required();
  cmd->add_option("--features", a->features, "all, surface, pos, affect or a comma list")->capture_default_str();
  cmd->add_option("--lexicons", a->lexicons);
  cmd->add_option("--split", a->split, "Training portion: all or train")->capture_default_str();
  a->clf.add(cmd);
  cmd->callback([a] {
    const std::vector<Article> train = corpus_split(a->corpus, a->split);
    Lexicons storage;
    const HandcraftedScorer s = train_handcrafted(train, lexicons_from(a->lexicons, storage),
                                                  a->features, a->clf.options(), g.threads);
    save_model(a->out, s);
    write_manifest(a->out);
  });
}

void add_train_ngram(CLI::App& app) {
  auto* cmd = app.add_subcommand("train-ngram", "Train an n-gram count model");
  struct Args {
    std::string corpus, out, unit = "char", split = "train";
    int n = 2;
    std::size_t vocab = 1000;
    ClassifierArgs clf;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--corpus", a->corpus)->required();
  cmd->add_option("--out", a->out)->required();
  cmd->add_option("--unit", a->unit, "char or word")->capture_default_str();
  cmd->add_option("--n", a->n, "n-gram order (1-3)")->capture_default_str();
  cmd->add_option("--vocab-size", a->vocab)->capture_default_str();
  cmd->add_option("--split", a->split)->capture_default_str();
  a->clf.add(cmd);
  cmd->callback([a] {
    const std::vector<Article> train = corpus_split(a->corpus, a->split);
    const NgramScorer s = train_ngram(train, parse_unit(a->unit), a->n, a->vocab, a->clf.options());
    save_model(a->out, s);
    write_manifest(a->out);
  });
}

void add_train_nn(CLI::App& app) {
  auto* cmd = app.add_subcommand("train-nn", "Train an embedding network (A, B or C)");
  struct Args {
    std::string corpus, out, arch = "A", depth = "basic";
    StoreArgs store;
    std::size_t width = 128, experts = 4, trials = 5;
    TrainConfig config;
    bool grid = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--corpus", a->corpus)->required();
  a->store.add(cmd, true);
  cmd->add_option("--out", a->out)->required();
  cmd->add_option("--arch", a->arch)->capture_default_str();
  cmd->add_option("--depth", a->depth)->capture_default_str();
  cmd->add_option("--width", a->width)->capture_default_str();
  cmd->add_option("--experts", a->experts)->capture_default_str();
  cmd->add_option("--epochs", a->config.max_epochs)->capture_default_str();
  cmd->add_option("--patience", a->config.patience)->capture_default_str();
  cmd->add_option("--batch", a->config.batch_size)->capture_default_str();
  cmd->add_option("--dropout", a->config.dropout)->capture_default_str();
  cmd->add_option("--lr", a->config.learning_rate)->capture_default_str();
  cmd->add_flag("--grid", a->grid, "Grid search over the standard width/expert grid");
  cmd->add_option("--trials", a->trials, "Seeds per grid point")->capture_default_str();
  cmd->callback([a] {
    const std::vector<Article> all = load_corpus(input(a->corpus));
    const EmbeddingStore store = a->store.load();
    const CorpusSplit split = split_corpus(all, g.seed);
    const Matrix str = sentence_matrix(store, split.train), dtr = document_matrix(store, split.train);
    const Matrix sva = sentence_matrix(store, split.validation),
                 dva = document_matrix(store, split.validation);
    const NetData train{&str, &dtr, corpus_labels(split.train), {}};
    const NetData val{&sva, &dva, corpus_labels(split.validation), {}};
    NetSpec spec;
    spec.arch = parse_arch(a->arch);
    spec.depth = parse_depth(a->depth);
    spec.width = a->width;
    spec.experts = a->experts;
    spec.input_dim = store.dim;
    spec.seed = g.seed;
    if (a->grid) {
      std::vector<std::uint64_t> seeds(a->trials);
      std::iota(seeds.begin(), seeds.end(), g.seed);
      const auto offsets = article_offsets(split.validation);
      const GridSearchResult r = grid_search(default_grid(spec.arch, spec.depth, store.dim), train,
                                             val, offsets, seeds, a->config, g.threads);
      std::ofstream f = open_out(a->out + ".grid.csv");
      f << "spec,params,mean,std\n";
      for (const GridResult& x : r.results)
        f << x.spec.name() << ',' << param_count(x.spec) << ',' << fmt(x.mean) << ','
          << fmt(x.stddev) << '\n';
      spec = r.results[r.best].spec;
      spec.seed = g.seed;
      std::cout << "best " << spec.name() << " val_auc_avg=" << fmt(r.results[r.best].mean * 100, "%.1f")
                << "\xC2\xB1" << fmt(r.results[r.best].stddev * 100, "%.2f") << '\n';
    }
    NeuralScorer s;
    s.trained = train_net(spec, train, val, a->config);
    save_model(a->out, s);
    write_manifest(a->out);
    std::cout << spec.name() << " params=" << s.trained.net.size()
              << " epochs=" << s.trained.history.epochs_run
              << " best_epoch=" << s.trained.history.best_epoch + 1
              << " batch=" << a->config.batch_size << '\n';
  });
}

void add_train_transfer(CLI::App& app) {
  auto* cmd = app.add_subcommand("train-transfer", "Train a scorer on an external headline task");
  struct Args {
    std::string task = "regression", labels, out, article{kExternalArticle};
    StoreArgs store;
    double C = 1.0, ridge = 1e-3;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--task", a->task, "regression or binary")->capture_default_str();
  cmd->add_option("--labels", a->labels, "CSV text,label")->required();
  a->store.add(cmd, true);
  cmd->add_option("--article", a->article, "Store article id of the external items")->capture_default_str();
  cmd->add_option("--out", a->out)->required();
  cmd->add_option("--C", a->C)->capture_default_str();
  cmd->add_option("--ridge", a->ridge)->capture_default_str();
  cmd->callback([a] {
    const ExternalLabelSet labels = load_external_labels(input(a->labels), parse_task(a->task));
    const EmbeddingStore store = a->store.load();
    TransferOptions o;
    o.ridge = a->ridge;
    o.logreg.C = a->C;
    TransferScorer s;
    s.model = train_transfer(labels, external_embeddings(store, labels.items.size(), a->article), o);
    save_model(a->out, s);
    write_manifest(a->out);
  });
}

struct SummarizerArgs {
  std::string method = "textrank", values = "score";
  SummarizerOptions o;
  void add(CLI::App* cmd) {
    cmd->add_option("--method", method, "textrank, lexrank, sumbasic or klsum")->capture_default_str();
    cmd->add_option("--values", values, "score or rank")->capture_default_str();
    cmd->add_option("--damping", o.damping)->capture_default_str();
    cmd->add_option("--threshold", o.lexrank_threshold, "LexRank edge threshold")->capture_default_str();
    cmd->add_option("--smoothing", o.kl_smoothing, "KLSum additive smoothing")->capture_default_str();
  }
  SummarizerScorer scorer() const {
    SummarizerScorer s;
    s.method = parse_method(method);
    s.options = o;
    s.options.values = parse_score_values(values);
    return s;
  }
};

void add_summarize(CLI::App& app) {
  auto* cmd = app.add_subcommand("summarize", "Score sentences with an unsupervised summarizer");
  struct Args {
    std::string corpus, out, save_model;
    SummarizerArgs sum;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--corpus", a->corpus)->required();
  cmd->add_option("--out", a->out, "CSV article_id,sentence_index,score")->required();
  cmd->add_option("--save-model", a->save_model, "Also write a model file usable by eval/rank");
  a->sum.add(cmd);
  cmd->callback([a] {
    const std::vector<Article> corpus = load_corpus(input(a->corpus));
    const SummarizerScorer s = a->sum.scorer();
    const auto scores = summarize_corpus(s.method, corpus, s.options, g.threads);
    std::ofstream f = open_out(a->out);
    f << "article_id,sentence_index,score\n";
    for (const SentenceScores& sc : scores)
      for (std::size_t i = 0; i < sc.scores.size(); ++i)
        f << sc.article_id << ',' << i << ',' << fmt(sc.scores[i], "%.10g") << '\n';
    write_manifest(a->out);
    if (!a->save_model.empty()) {
      save_model(a->save_model, s);
      write_manifest(a->save_model);
    }
  });
}

std::vector<double> run_scorer(const std::string& model_path, const std::vector<Article>& corpus,
                               const StoreArgs& store_args, const std::string& lexicon_dir) {
  const std::unique_ptr<Scorer> scorer = load_model(input(model_path));
  std::optional<EmbeddingStore> store;
  if (!store_args.path.empty()) store = store_args.load();
  Lexicons storage;
  ScoringContext ctx{&lexicons_from(lexicon_dir, storage), store ? &*store : nullptr, g.threads};
  return score_corpus(*scorer, corpus, ctx);
}

void add_rank(CLI::App& app) {
  auto* cmd = app.add_subcommand("rank", "Rank each article's sentences with a model");
  struct Args {
    std::string model, corpus, out, lexicons, split = "all";
    StoreArgs store;
    std::size_t top = 0;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--model", a->model)->required();
  cmd->add_option("--corpus", a->corpus)->required();
  a->store.add(cmd, false);
  cmd->add_option("--lexicons", a->lexicons);
  cmd->add_option("--split", a->split)->capture_default_str();
  cmd->add_option("--top", a->top, "Keep only the top N per article (0: all)");
  cmd->add_option("--out", a->out, "CSV output (default: stdout)");
  cmd->callback([a] {
    const std::vector<Article> corpus = corpus_split(a->corpus, a->split);
    const std::vector<double> scores = run_scorer(a->model, corpus, a->store, a->lexicons);
    std::ofstream file;
    if (!a->out.empty()) file = open_out(a->out);
    std::ostream& out = a->out.empty() ? std::cout : file;
    out << "article_id,rank,sentence_index,probability\n";
    std::size_t off = 0;
    for (const Article& art : corpus) {
      const std::span<const double> s(scores.data() + off, art.sentences.size());
      const auto ranked = rank_by_score(s);
      for (std::size_t r = 0; r < ranked.size() && (a->top == 0 || r < a->top); ++r)
        out << art.id << ',' << r + 1 << ',' << ranked[r].index << ','
            << fmt(ranked[r].probability, "%.10g") << '\n';
      off += art.sentences.size();
    }
    if (!a->out.empty()) write_manifest(a->out);
  });
}

void add_eval(CLI::App& app) {
  auto* cmd = app.add_subcommand("eval", "Per-article AUC report for a model");
  struct Args {
    std::string model, corpus, out, lexicons, split = "all";
    StoreArgs store;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--model", a->model)->required();
  cmd->add_option("--corpus", a->corpus)->required();
  a->store.add(cmd, false);
  cmd->add_option("--lexicons", a->lexicons);
  cmd->add_option("--split", a->split, "all, train, validation or test")->capture_default_str();
  cmd->add_option("--out", a->out, "Report CSV (default: stdout)");
  cmd->callback([a] {
    const std::vector<Article> corpus = corpus_split(a->corpus, a->split);
    const std::vector<double> scores = run_scorer(a->model, corpus, a->store, a->lexicons);
    const EvalReport report = evaluate_corpus(corpus, scores);
    if (a->out.empty()) {
      write_report(std::cout, report);
      return;
    }
    std::ofstream f = open_out(a->out);
    write_report(f, report);
    f.close();
    write_manifest(a->out);
    std::cout << "auc_avg=" << fmt(report.auc_avg) << " skipped=" << report.skipped << '\n';
  });
}

void add_analyze(CLI::App& app) {
  auto* cmd = app.add_subcommand("analyze", "Feature distributions and embedding probes");
  cmd->require_subcommand(1);

  auto* dims = cmd->add_subcommand("dims", "Probe embedding dimensions");
  struct DimArgs {
    std::string corpus, out, dims = "all";
    StoreArgs store;
    std::size_t k = 2000, top = 10;
  };
  auto d = std::make_shared<DimArgs>();
  dims->add_option("--corpus", d->corpus)->required();
  d->store.add(dims, true);
  dims->add_option("--dims", d->dims, "Comma-separated dimensions or 'all'")->capture_default_str();
  dims->add_option("--k", d->k, "Band size")->capture_default_str();
  dims->add_option("--top-terms", d->top)->capture_default_str();
  dims->add_option("--out", d->out)->required();
  dims->callback([d] {
    const std::vector<Article> all = load_corpus(input(d->corpus));
    const EmbeddingStore store = d->store.load();
    const CorpusSplit split = split_corpus(all, g.seed);
    const Matrix etr = sentence_matrix(store, split.train), ete = sentence_matrix(store, split.test);
    const ProbeData train = probe_data(split.train, etr), test = probe_data(split.test, ete);
    std::vector<std::size_t> which;
    if (d->dims == "all") {
      which.resize(store.dim);
      std::iota(which.begin(), which.end(), std::size_t{0});
    } else {
      std::stringstream ss(d->dims);
      std::string item;
      while (std::getline(ss, item, ',')) which.push_back(std::stoul(item));
    }
    ProbeOptions o;
    o.k = d->k;
    o.top_terms = d->top;
    if (ete.rows < 4 * o.k)
      std::cerr << "warning: " << ete.rows << " test sentences < 4k; k shrinks to "
                << ete.rows / 4 << '\n';
    const auto probes = probe_dimensions(which, train, test, o, g.threads);
    std::ofstream f = open_out(d->out);
    write_probe_csv(f, probes);
    f.close();
    write_manifest(d->out);
  });

  auto* dist = cmd->add_subcommand("dist", "Per-class histogram of one handcrafted feature");
  struct DistArgs {
    std::string corpus, feature, out, lexicons;
    std::size_t bins = 50;
  };
  auto h = std::make_shared<DistArgs>();
  dist->add_option("--corpus", h->corpus)->required();
  dist->add_option("--feature", h->feature)->required();
  dist->add_option("--bins", h->bins)->capture_default_str();
  dist->add_option("--lexicons", h->lexicons);
  dist->add_option("--out", h->out)->required();
  dist->callback([h] {
    const std::vector<Article> corpus = load_corpus(input(h->corpus));
    Lexicons storage;
    const auto bins = feature_distributions(h->feature, corpus, lexicons_from(h->lexicons, storage),
                                            h->bins, g.threads);
    std::ofstream f = open_out(h->out);
    write_histogram_csv(f, bins);
    f.close();
    write_manifest(h->out);
  });
}

void add_embed_check(CLI::App& app) {
  auto* cmd = app.add_subcommand("embed-check", "Check that a store covers a corpus");
  struct Args {
    std::string corpus;
    StoreArgs store;
    std::size_t dim = 0;
  };
  auto a = std::make_shared<Args>();
  a->store.add(cmd, true);
  cmd->add_option("--corpus", a->corpus)->required();
  cmd->add_option("--dim", a->dim, "Expected dimension (0: any)");
  cmd->callback([a] {
    const EmbeddingStore store = a->store.load();
    const std::vector<Article> corpus = load_corpus(input(a->corpus));
    if (a->dim != 0 && store.dim != a->dim)
      fail(ErrorCode::mismatch, "store dim " + std::to_string(store.dim) + ", expected " +
                                    std::to_string(a->dim));
    const auto missing = missing_sentences(store, corpus);
    std::cout << "rows=" << store.size() << " dim=" << store.dim
              << " sentences=" << sentence_count(corpus) << " missing=" << missing.size() << '\n';
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i)
      std::cout << "missing " << missing[i].first << '\t' << missing[i].second << '\n';
    if (!missing.empty())
      fail(ErrorCode::mismatch, std::to_string(missing.size()) + " sentences have no embedding");
  });
}

void add_lexicons(CLI::App& app) {
  auto* cmd = app.add_subcommand("lexicons", "Lexicon utilities");
  cmd->require_subcommand(1);
  auto* validate = cmd->add_subcommand("validate", "Check a lexicon directory");
  auto dir = std::make_shared<std::string>();
  validate->add_option("--dir", *dir, "Directory (default: bundled)");
  validate->callback([dir] {
    const fs::path d = dir->empty() ? bundled_lexicon_dir() : fs::path(*dir);
    bool bad = false;
    for (const LexiconReport& r : validate_lexicon_dir(d)) {
      std::cout << r.file << '\t' << r.entries << '\t' << (r.problem.empty() ? "ok" : r.problem)
                << '\n';
      bad = bad || !r.problem.empty();
    }
    if (bad) fail(ErrorCode::format, "lexicon directory " + d.string() + " has problems");
  });
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::io:
      return no_input;
    case ErrorCode::format:
    case ErrorCode::mismatch:
      return data_error;
    case ErrorCode::invalid_argument:
      return usage;
    case ErrorCode::numeric:
      return failure;
  }
  return failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank article sentences by pull-quote suitability", "pqrank"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.set_config("--config", "", "Flat key=value config file");
  add_gen_synthetic(app);
  add_features(app);
  add_train_hc(app);
  add_train_ngram(app);
  add_train_nn(app);
  add_train_transfer(app);
  add_summarize(app);
  add_rank(app);
  add_eval(app);
  add_analyze(app);
  add_embed_check(app);
  add_lexicons(app);

  g.argv.assign(argv, argv + argc);
  app.parse_complete_callback([&app] { g.resolved = app.config_to_str(true, false); });
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  } catch (const Error& e) {
    std::cerr << "pqrank: error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "pqrank: error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
