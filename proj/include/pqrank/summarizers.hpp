#pragma once
// Unsupervised extractive sentence scorers: TextRank, LexRank, SumBasic, KLSum.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pqrank/corpus.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/matrix.hpp"

namespace pqrank {

enum class SummarizerMethod { textrank, lexrank, sumbasic, klsum };

std::string_view method_name(SummarizerMethod m);
SummarizerMethod parse_method(std::string_view name);

// `score`: the method's native values; `rank`: (n - rank) / n with 1-based selection rank.
enum class ScoreValues { score, rank };
ScoreValues parse_score_values(std::string_view name);

struct SummarizerOptions {
  double damping = 0.85;
  double tolerance = 1e-6;  // l1 change between power iterations
  std::size_t max_iterations = 10000;
  double lexrank_threshold = 0.1;
  double kl_smoothing = 1e-3;
  ScoreValues values = ScoreValues::score;
  const WordList* stopwords = nullptr;  // null: bundled list
};

struct SentenceScores {
  std::string article_id;
  std::string method;
  std::vector<double> scores;
};

// Lowercased word tokens (punctuation dropped); content_words also drops stopwords.
std::vector<std::string> graph_words(const Sentence& s);
std::vector<std::string> content_words(const Sentence& s, const WordList& stopwords);

// Symmetric similarity matrices with a zero diagonal.
Matrix textrank_similarity(const Article& article);
Matrix lexrank_similarity(const Article& article, double threshold);

// Stationary distribution of p <- (1 - d)/n + d * M^T p where M is `weights`
// row-normalized; rows without edges pass on no mass. Result sums to 1.
std::vector<double> rank_graph(const Matrix& weights, double damping, double tolerance,
                               std::size_t max_iterations);

// Selection orders (sentence indices, first pick first).
std::vector<std::size_t> sumbasic_order(const Article& article, const WordList& stopwords);
std::vector<std::size_t> klsum_order(const Article& article, const WordList& stopwords,
                                     double smoothing);
// KL(document || summary) over the article's content words with additive smoothing.
double klsum_divergence(const Article& article, const std::vector<std::size_t>& summary,
                        const WordList& stopwords, double smoothing);

std::vector<double> order_to_scores(const std::vector<std::size_t>& order);
// Rank-derived scores of arbitrary values: descending, ties by index.
std::vector<double> rank_scores(const std::vector<double>& values);

SentenceScores textrank(const Article& article, const SummarizerOptions& options = {});
SentenceScores lexrank(const Article& article, const SummarizerOptions& options = {});
SentenceScores sumbasic(const Article& article, const SummarizerOptions& options = {});
SentenceScores klsum(const Article& article, const SummarizerOptions& options = {});
SentenceScores summarize(SummarizerMethod method, const Article& article,
                         const SummarizerOptions& options = {});

std::vector<SentenceScores> summarize_corpus(SummarizerMethod method,
                                             const std::vector<Article>& articles,
                                             const SummarizerOptions& options = {},
                                             unsigned threads = 1);

}  // namespace pqrank
