#pragma once
// Precomputed sentence embeddings (PQEMB1 store + TSV index) and document means.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pqrank/corpus.hpp"
#include "pqrank/errors.hpp"
#include "pqrank/matrix.hpp"

namespace pqrank {

enum class StoreFault { bad_magic, truncated, non_finite, missing_index, bad_index };

class StoreError : public Error {
 public:
  StoreError(StoreFault fault, ErrorCode code, const std::string& what)
      : Error(code, what), fault_(fault) {}
  StoreFault fault() const noexcept { return fault_; }

 private:
  StoreFault fault_;
};

using SentenceKey = std::pair<std::string, std::uint32_t>;

struct EmbeddingStore {
  std::size_t dim = 768;
  Matrix rows;
  std::map<SentenceKey, std::uint32_t> index;

  std::size_t size() const { return rows.rows; }
  std::optional<std::span<const double>> find(const std::string& article_id,
                                              std::size_t sentence) const;
  // Throws StoreError(missing_index) naming the article and sentence index.
  std::span<const double> at(const std::string& article_id, std::size_t sentence) const;
};

// Magic "PQEMB1", u32 rows, u32 dim, rows * dim little-endian float32.
void save_store(const std::filesystem::path& vectors, const std::filesystem::path& index,
                const EmbeddingStore& store);
EmbeddingStore load_store(const std::filesystem::path& vectors,
                          const std::filesystem::path& index);

// Sentences of `articles` without a store row, as (article id, index).
std::vector<SentenceKey> missing_sentences(const EmbeddingStore& store,
                                           const std::vector<Article>& articles);

struct DocEmbedding {
  std::string article_id;
  std::vector<double> vector;
};

DocEmbedding doc_embedding(const EmbeddingStore& store, const Article& article);

// Row i = embedding of the i-th sentence of the corpus (articles in order).
Matrix sentence_matrix(const EmbeddingStore& store, const std::vector<Article>& articles);
// Row i = document embedding of the article owning the i-th sentence.
Matrix document_matrix(const EmbeddingStore& store, const std::vector<Article>& articles);

// Stand-in encoder: every lowercased token gets a seeded N(0, 1) vector and a
// sentence is the mean of its token vectors (zero when it has no tokens).
std::vector<double> hashed_token_embedding(const std::vector<std::string>& tokens,
                                           std::size_t dim, std::uint64_t seed);
EmbeddingStore hashed_token_store(const std::vector<Article>& articles, std::size_t dim,
                                  std::uint64_t seed);

// hashed_token_store with `strength` added to dimension `planted` of every
// sentence containing `marker`.
EmbeddingStore planted_dimension_store(const std::vector<Article>& articles, std::size_t dim,
                                       std::size_t planted, const std::string& marker,
                                       double strength, std::uint64_t seed);

}  // namespace pqrank
