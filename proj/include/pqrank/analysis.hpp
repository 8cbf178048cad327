#pragma once
// Per-class feature histograms and single-dimension embedding probes.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqrank/classic_ml.hpp"
#include "pqrank/corpus.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/matrix.hpp"

namespace pqrank {

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double density_pos = 0.0;  // share of positive sentences in the bin
  double density_neg = 0.0;
};

// `bins` equal-width bins over the observed range of `values`; the last bin
// is closed. Each class's shares sum to 1 (a class with no samples gets 0s).
std::vector<HistogramBin> class_histograms(std::span<const double> values,
                                           std::span<const int> labels, std::size_t bins = 50);

// Histograms of one handcrafted feature over a corpus.
std::vector<HistogramBin> feature_distributions(std::string_view feature,
                                                const std::vector<Article>& articles,
                                                const Lexicons& lexicons, std::size_t bins = 50,
                                                unsigned threads = 1);

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

// Lowercase runs of ASCII letters, digits and underscores of length >= 2.
std::vector<std::string> probe_tokens(std::string_view text);

using TermWeights = std::vector<std::pair<std::string, double>>;

// Sublinear tf (1 + ln tf), smoothed idf ln((1 + n) / (1 + df)) + 1 over the
// given documents, l2-normalized rows; n-grams of 1..max_n stopword-free tokens.
std::vector<TermWeights> tfidf_documents(const std::vector<std::string>& documents,
                                         const WordList& stopwords, int max_n = 3);

struct ProbeData {
  const Matrix* embeddings = nullptr;  // one row per sentence
  std::vector<int> labels;
  std::vector<std::size_t> offsets;  // article boundaries, see article_offsets
  std::vector<std::string> texts;
};

ProbeData probe_data(const std::vector<Article>& articles, const Matrix& embeddings);

struct ProbeOptions {
  std::size_t k = 2000;
  std::size_t top_terms = 10;
  LogRegOptions logreg;
  const WordList* stopwords = nullptr;  // null: bundled list
};

struct DimensionProbe {
  std::size_t dim = 0;
  int sign = 1;
  double auc_avg = 0.0;
  std::size_t k = 0;  // band size actually used
  TermWeights top_terms;
};

// Fits a logistic regression on dimension `dim` alone, scores the test set,
// and ranks the n-grams of the top (sign > 0) or bottom (sign < 0) k test
// sentences against the middle 2k and the opposite k. Throws
// Error(invalid_argument) when the dimension is constant on the training set.
DimensionProbe probe_dimension(std::size_t dim, const ProbeData& train, const ProbeData& test,
                               const ProbeOptions& options = {});

// Probes every listed dimension, sorted by test auc_avg (descending).
std::vector<DimensionProbe> probe_dimensions(std::span<const std::size_t> dims,
                                             const ProbeData& train, const ProbeData& test,
                                             const ProbeOptions& options = {},
                                             unsigned threads = 1);

// `dim,auc_avg,sign,term,rank,weight`, one row per term.
void write_probe_csv(std::ostream& out, const std::vector<DimensionProbe>& probes);

}  // namespace pqrank
