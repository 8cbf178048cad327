#pragma once
// Per-article AUC, its article average, and ranking reports.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pqrank/corpus.hpp"

namespace pqrank {

// Mann-Whitney AUC with half credit for ties; nullopt unless both classes
// are present. Throws Error(mismatch) on length mismatch and
// Error(invalid_argument) for non-finite predictions.
std::optional<double> auc(std::span<const int> inclusions, std::span<const double> predictions);

struct ArticleEval {
  std::string article_id;
  std::vector<int> inclusions;
  std::vector<double> predictions;
  std::optional<double> auc;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

ArticleEval evaluate_article(std::string article_id, std::vector<int> inclusions,
                             std::vector<double> predictions);

// Mean AUC over articles where it is defined; throws Error(invalid_argument)
// when none is.
double auc_avg(std::span<const ArticleEval> articles);
std::size_t skipped_count(std::span<const ArticleEval> articles);

// AUC over all sentences pooled across articles.
std::optional<double> pooled_auc(std::span<const ArticleEval> articles);

struct EvalReport {
  std::vector<ArticleEval> articles;
  double auc_avg = 0.0;
  std::size_t skipped = 0;
};

EvalReport make_report(std::vector<ArticleEval> articles);
// `scores` holds one prediction per sentence, articles in corpus order.
EvalReport evaluate_corpus(const std::vector<Article>& articles, std::span<const double> scores);

std::vector<int> inclusions_of(const Article& article);
std::vector<int> corpus_labels(const std::vector<Article>& articles);
// Sentence offset of each article plus a final end offset.
std::vector<std::size_t> article_offsets(const std::vector<Article>& articles);
// auc_avg over flat labels/scores split at `offsets`.
double grouped_auc_avg(std::span<const int> labels, std::span<const double> scores,
                       std::span<const std::size_t> offsets);

// CSV `article_id,auc,n_pos,n_neg` followed by a `# auc_avg=... skipped=...` line.
void write_report(std::ostream& out, const EvalReport& report);

struct RankedSentence {
  std::size_t index = 0;
  double probability = 0.0;
};

// Descending by probability, ties by ascending sentence index.
std::vector<RankedSentence> rank_by_score(std::span<const double> probabilities);

}  // namespace pqrank
