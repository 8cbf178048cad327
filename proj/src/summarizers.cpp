#include "pqrank/summarizers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "pqrank/errors.hpp"
#include "pqrank/parallel.hpp"
#include "pqrank/text.hpp"

namespace pqrank {
namespace {

const WordList& stops(const SummarizerOptions& o) {
  return o.stopwords ? *o.stopwords : Lexicons::bundled().stopwords;
}

void require_sentences(const Article& a) {
  if (a.sentences.empty()) fail(ErrorCode::invalid_argument, "article " + a.id + " has no sentences");
}

using Counts = std::map<std::string, double>;

Counts count_words(const std::vector<std::string>& words) {
  Counts c;
  for (const std::string& w : words) c[w] += 1.0;
  return c;
}

SentenceScores graph_result(const Article& a, std::string method, std::vector<double> p,
                            const SummarizerOptions& o) {
  return {a.id, std::move(method), o.values == ScoreValues::rank ? rank_scores(p) : std::move(p)};
}

}  // namespace

std::string_view method_name(SummarizerMethod m) {
  switch (m) {
    case SummarizerMethod::textrank:
      return "textrank";
    case SummarizerMethod::lexrank:
      return "lexrank";
    case SummarizerMethod::sumbasic:
      return "sumbasic";
    case SummarizerMethod::klsum:
      return "klsum";
  }
  return "?";
}

SummarizerMethod parse_method(std::string_view name) {
  for (auto m : {SummarizerMethod::textrank, SummarizerMethod::lexrank, SummarizerMethod::sumbasic,
                 SummarizerMethod::klsum})
    if (method_name(m) == name) return m;
  fail(ErrorCode::invalid_argument, "unknown summarizer '" + std::string(name) + "'");
}

ScoreValues parse_score_values(std::string_view name) {
  if (name == "score") return ScoreValues::score;
  if (name == "rank") return ScoreValues::rank;
  fail(ErrorCode::invalid_argument, "--values must be 'score' or 'rank'");
}

// Greedy picks treat near-equal scores as ties so rounding cannot beat the lower index.
constexpr double kTieTolerance = 1e-12;

std::vector<std::string> graph_words(const Sentence& s) {
  std::vector<std::string> out;
  for (const std::string& t : s.tokens)
    if (!is_punct_token(t)) out.push_back(to_lower(t));
  return out;
}

std::vector<std::string> content_words(const Sentence& s, const WordList& stopwords) {
  std::vector<std::string> out;
  for (std::string& w : graph_words(s))
    if (!stopwords.contains(w)) out.push_back(std::move(w));
  return out;
}

Matrix textrank_similarity(const Article& article) {
  const std::size_t n = article.sentences.size();
  std::vector<std::set<std::string>> sets;
  std::vector<double> lens;
  for (const Sentence& s : article.sentences) {
    const auto w = graph_words(s);
    sets.emplace_back(w.begin(), w.end());
    lens.push_back(static_cast<double>(w.size()));
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double denom = (lens[i] > 0 ? std::log(lens[i]) : 0.0) +
                           (lens[j] > 0 ? std::log(lens[j]) : 0.0);
      if (lens[i] == 0 || lens[j] == 0 || denom <= 0) continue;
      std::size_t overlap = 0;
      for (const std::string& w : sets[i]) overlap += sets[j].count(w);
      m(i, j) = m(j, i) = static_cast<double>(overlap) / denom;
    }
  return m;
}

Matrix lexrank_similarity(const Article& article, double threshold) {
  const std::size_t n = article.sentences.size();
  std::vector<Counts> tf;
  std::map<std::string, double> df;
  for (const Sentence& s : article.sentences) {
    tf.push_back(count_words(graph_words(s)));
    for (const auto& [w, c] : tf.back()) df[w] += 1.0;
  }
  const double N = static_cast<double>(n);
  std::vector<Counts> vec(n);
  std::vector<double> norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [w, c] : tf[i]) {
      const double v = c * (std::log((1.0 + N) / (1.0 + df[w])) + 1.0);
      vec[i][w] = v;
      norm[i] += v * v;
    }
    norm[i] = std::sqrt(norm[i]);
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (norm[i] == 0 || norm[j] == 0) continue;
      double d = 0.0;
      for (const auto& [w, v] : vec[i]) {
        auto it = vec[j].find(w);
        if (it != vec[j].end()) d += v * it->second;
      }
      const double cos = d / (norm[i] * norm[j]);
      if (cos > 0 && cos >= threshold) m(i, j) = m(j, i) = cos;
    }
  return m;
}

std::vector<double> rank_graph(const Matrix& weights, double damping, double tolerance,
                               std::size_t max_iterations) {
  const std::size_t n = weights.rows;
  if (n == 0 || weights.cols != n) fail(ErrorCode::invalid_argument, "rank_graph needs a square nonempty matrix");
  Matrix t(n, n);  // t(j, i) = M(i, j)
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += weights(i, j);
    if (s <= 0) continue;
    for (std::size_t j = 0; j < n; ++j) t(j, i) = weights(i, j) / s;
  }
  const double base = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> p(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += t(j, i) * p[i];
      next[j] = base + damping * acc;
      change += std::abs(next[j] - p[j]);
    }
    p.swap(next);
    if (change < tolerance) break;
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> order_to_scores(const std::vector<std::size_t>& order) {
  const double n = static_cast<double>(order.size());
  std::vector<double> s(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) s[order[r]] = (n - static_cast<double>(r + 1)) / n;
  return s;
}

std::vector<double> rank_scores(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order_to_scores(order);
}

std::vector<std::size_t> sumbasic_order(const Article& article, const WordList& stopwords) {
  const std::size_t n = article.sentences.size();
  std::vector<std::vector<std::string>> words;
  Counts prob;
  double total = 0.0;
  for (const Sentence& s : article.sentences) {
    words.push_back(content_words(s, stopwords));
    for (const std::string& w : words.back()) {
      prob[w] += 1.0;
      total += 1.0;
    }
  }
  for (auto& [w, p] : prob) p /= total;

  std::vector<bool> used(n, false);
  std::vector<std::size_t> order;
  while (order.size() < n) {
    std::size_t best = n;
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      double score = 0.0;
      for (const std::string& w : words[i]) score += prob[w];
      if (!words[i].empty()) score /= static_cast<double>(words[i].size());
      if (score > best_score + kTieTolerance) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    order.push_back(best);
    for (const std::string& w : std::set<std::string>(words[best].begin(), words[best].end()))
      prob[w] *= prob[w];
  }
  return order;
}

double klsum_divergence(const Article& article, const std::vector<std::size_t>& summary,
                        const WordList& stopwords, double smoothing) {
  std::vector<std::vector<std::string>> words;
  for (const Sentence& s : article.sentences) words.push_back(content_words(s, stopwords));
  Counts doc, sum;
  for (const auto& ws : words)
    for (const std::string& w : ws) doc[w] += 1.0;
  if (doc.empty()) return 0.0;
  for (std::size_t i : summary)
    for (const std::string& w : words.at(i)) sum[w] += 1.0;
  double doc_total = 0.0, sum_total = 0.0;
  for (const auto& [w, c] : doc) doc_total += c;
  for (const auto& [w, c] : sum) sum_total += c;
  const double v = static_cast<double>(doc.size());
  double kl = 0.0;
  for (const auto& [w, c] : doc) {
    const double p = (c + smoothing) / (doc_total + smoothing * v);
    auto it = sum.find(w);
    const double q = ((it == sum.end() ? 0.0 : it->second) + smoothing) / (sum_total + smoothing * v);
    kl += p * std::log(p / q);
  }
  return kl;
}

std::vector<std::size_t> klsum_order(const Article& article, const WordList& stopwords,
                                     double smoothing) {
  const std::size_t n = article.sentences.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order;
  while (order.size() < n) {
    std::size_t best = n;
    double best_kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      order.push_back(i);
      const double kl = klsum_divergence(article, order, stopwords, smoothing);
      order.pop_back();
      if (best == n || kl < best_kl - kTieTolerance) {
        best = i;
        best_kl = kl;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

SentenceScores textrank(const Article& article, const SummarizerOptions& options) {
  require_sentences(article);
  return graph_result(article, "textrank",
                      rank_graph(textrank_similarity(article), options.damping, options.tolerance,
                                 options.max_iterations),
                      options);
}

SentenceScores lexrank(const Article& article, const SummarizerOptions& options) {
  require_sentences(article);
  return graph_result(article, "lexrank",
                      rank_graph(lexrank_similarity(article, options.lexrank_threshold),
                                 options.damping, options.tolerance, options.max_iterations),
                      options);
}

SentenceScores sumbasic(const Article& article, const SummarizerOptions& options) {
  require_sentences(article);
  return {article.id, "sumbasic", order_to_scores(sumbasic_order(article, stops(options)))};
}

SentenceScores klsum(const Article& article, const SummarizerOptions& options) {
  require_sentences(article);
  return {article.id, "klsum",
          order_to_scores(klsum_order(article, stops(options), options.kl_smoothing))};
}

SentenceScores summarize(SummarizerMethod method, const Article& article,
                         const SummarizerOptions& options) {
  switch (method) {
    case SummarizerMethod::textrank:
      return textrank(article, options);
    case SummarizerMethod::lexrank:
      return lexrank(article, options);
    case SummarizerMethod::sumbasic:
      return sumbasic(article, options);
    case SummarizerMethod::klsum:
      return klsum(article, options);
  }
  fail(ErrorCode::invalid_argument, "unknown summarizer");
}

std::vector<SentenceScores> summarize_corpus(SummarizerMethod method,
                                             const std::vector<Article>& articles,
                                             const SummarizerOptions& options, unsigned threads) {
  if (!options.stopwords) (void)Lexicons::bundled();
  std::vector<SentenceScores> out(articles.size());
  parallel_for(articles.size(), threads,
               [&](std::size_t i) { out[i] = summarize(method, articles[i], options); });
  return out;
}

}  // namespace pqrank
