#include "pqrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

#include "pqrank/errors.hpp"

namespace pqrank {

std::optional<double> auc(std::span<const int> inclusions, std::span<const double> predictions) {
  if (inclusions.size() != predictions.size())
    fail(ErrorCode::mismatch, "inclusions and predictions differ in length (" +
                                  std::to_string(inclusions.size()) + " vs " +
                                  std::to_string(predictions.size()) + ")");
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (double p : predictions)
    if (!std::isfinite(p)) fail(ErrorCode::invalid_argument, "non-finite prediction");
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return predictions[a] < predictions[b]; });

  // Twice the pair credit, kept integral so the result is exact.
  std::uint64_t credit2 = 0, negatives_below = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t p = 0, n = 0;
    while (j < order.size() && predictions[order[j]] == predictions[order[i]]) {
      (inclusions[order[j]] != 0 ? p : n) += 1;
      ++j;
    }
    credit2 += 2 * p * negatives_below + p * n;
    negatives_below += n;
    pos += p;
    neg += n;
    i = j;
  }
  if (pos == 0 || neg == 0) return std::nullopt;
  return static_cast<double>(credit2) / static_cast<double>(2 * pos * neg);
}

ArticleEval evaluate_article(std::string article_id, std::vector<int> inclusions,
                             std::vector<double> predictions) {
  ArticleEval e;
  e.auc = auc(inclusions, predictions);
  e.article_id = std::move(article_id);
  for (int v : inclusions) (v != 0 ? e.n_pos : e.n_neg) += 1;
  e.inclusions = std::move(inclusions);
  e.predictions = std::move(predictions);
  return e;
}

double auc_avg(std::span<const ArticleEval> articles) {
  std::vector<double> values;
  for (const ArticleEval& a : articles)
    if (a.auc) values.push_back(*a.auc);
  if (values.empty()) fail(ErrorCode::invalid_argument, "no article has both classes; AUC_avg undefined");
  // Summing in sorted order keeps the result bit-identical under article reordering.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::size_t skipped_count(std::span<const ArticleEval> articles) {
  return static_cast<std::size_t>(
      std::count_if(articles.begin(), articles.end(), [](const ArticleEval& a) { return !a.auc; }));
}

std::optional<double> pooled_auc(std::span<const ArticleEval> articles) {
  std::vector<int> y;
  std::vector<double> s;
  for (const ArticleEval& a : articles) {
    y.insert(y.end(), a.inclusions.begin(), a.inclusions.end());
    s.insert(s.end(), a.predictions.begin(), a.predictions.end());
  }
  return auc(y, s);
}

EvalReport make_report(std::vector<ArticleEval> articles) {
  EvalReport r;
  r.auc_avg = auc_avg(articles);
  r.skipped = skipped_count(articles);
  r.articles = std::move(articles);
  return r;
}

std::vector<int> inclusions_of(const Article& article) {
  std::vector<int> y;
  y.reserve(article.sentences.size());
  for (const Sentence& s : article.sentences) y.push_back(s.is_pq_source ? 1 : 0);
  return y;
}

std::vector<int> corpus_labels(const std::vector<Article>& articles) {
  std::vector<int> y;
  for (const Article& a : articles)
    for (const Sentence& s : a.sentences) y.push_back(s.is_pq_source ? 1 : 0);
  return y;
}

std::vector<std::size_t> article_offsets(const std::vector<Article>& articles) {
  std::vector<std::size_t> off{0};
  for (const Article& a : articles) off.push_back(off.back() + a.sentences.size());
  return off;
}

EvalReport evaluate_corpus(const std::vector<Article>& articles, std::span<const double> scores) {
  if (scores.size() != sentence_count(articles))
    fail(ErrorCode::mismatch, "score count " + std::to_string(scores.size()) +
                                  " differs from sentence count " +
                                  std::to_string(sentence_count(articles)));
  std::vector<ArticleEval> evals;
  std::size_t off = 0;
  for (const Article& a : articles) {
    const std::size_t n = a.sentences.size();
    evals.push_back(evaluate_article(a.id, inclusions_of(a),
                                     {scores.begin() + static_cast<std::ptrdiff_t>(off),
                                      scores.begin() + static_cast<std::ptrdiff_t>(off + n)}));
    off += n;
  }
  return make_report(std::move(evals));
}

double grouped_auc_avg(std::span<const int> labels, std::span<const double> scores,
                       std::span<const std::size_t> offsets) {
  if (labels.size() != scores.size()) fail(ErrorCode::mismatch, "labels and scores differ in length");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
    const std::size_t a = offsets[g], b = offsets[g + 1];
    if (const auto v = auc(labels.subspan(a, b - a), scores.subspan(a, b - a))) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) fail(ErrorCode::invalid_argument, "no article has both classes; AUC_avg undefined");
  return sum / static_cast<double>(n);
}

void write_report(std::ostream& out, const EvalReport& report) {
  char buf[64];
  out << "article_id,auc,n_pos,n_neg\n";
  for (const ArticleEval& a : report.articles) {
    out << a.article_id << ',';
    if (a.auc) {
      std::snprintf(buf, sizeof buf, "%.6f", *a.auc);
      out << buf;
    } else {
      out << "NA";
    }
    out << ',' << a.n_pos << ',' << a.n_neg << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.6f", report.auc_avg);
  out << "# auc_avg=" << buf << " skipped=" << report.skipped
      << " articles=" << report.articles.size() << '\n';
}

std::vector<RankedSentence> rank_by_score(std::span<const double> probabilities) {
  std::vector<RankedSentence> out;
  out.reserve(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) out.push_back({i, probabilities[i]});
  std::stable_sort(out.begin(), out.end(), [](const RankedSentence& a, const RankedSentence& b) {
    return a.probability > b.probability;
  });
  return out;
}

}  // namespace pqrank
