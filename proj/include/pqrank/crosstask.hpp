#pragma once
// Scorers trained on external headline tasks, applied to article sentences
// with per-article min-max scaling.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqrank/classic_ml.hpp"
#include "pqrank/embeddings.hpp"
#include "pqrank/matrix.hpp"

namespace pqrank {

enum class TransferTask { regression, binary };

std::string_view task_name(TransferTask task);
TransferTask parse_task(std::string_view name);

struct ExternalItem {
  std::string text;
  double label = 0.0;
};

struct ExternalLabelSet {
  TransferTask task = TransferTask::regression;
  std::vector<ExternalItem> items;

  // Throws Error(format) for non-finite labels or non-0/1 binary labels.
  void validate() const;
};

// CSV with header `text,label`; fields may be double-quoted with "" escapes.
ExternalLabelSet load_external_labels(const std::filesystem::path& path, TransferTask task);

// Store key of external item i: (`article`, i).
inline constexpr std::string_view kExternalArticle = "external";
Matrix external_embeddings(const EmbeddingStore& store, std::size_t items,
                           std::string_view article = kExternalArticle);

struct TransferModel {
  TransferTask task = TransferTask::regression;
  std::vector<double> weights;  // regression only
  double bias = 0.0;            // regression only
  LinearModel classifier;       // binary only

  std::size_t dim() const;
  double predict(std::span<const double> x) const;
};

struct TransferOptions {
  double ridge = 1e-3;
  LogRegOptions logreg;
};

TransferModel train_transfer(const ExternalLabelSet& labels, const Matrix& embeddings,
                             const TransferOptions& options = {});

// Min-max scaling to [0, 1]; all 0.5 when the scores are constant.
std::vector<double> scale_per_article(std::span<const double> scores);

// Weak percentile rank of each value among `values`: share of values <= it.
std::vector<double> percentile_ranks(std::span<const double> values);

// platforms[p][i] = feedback of item i on platform p (nullopt when absent).
// Returns each item's percentile averaged over platforms with feedback;
// items without any feedback get nullopt.
std::vector<std::optional<double>> average_popularity(
    const std::vector<std::vector<std::optional<double>>>& platforms);

}  // namespace pqrank
