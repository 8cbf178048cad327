#include "pqrank/embeddings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "pqrank/text.hpp"

namespace pqrank {
namespace {

constexpr char kMagic[] = "PQEMB1";
constexpr std::size_t kMagicSize = 6;

static_assert(std::endian::native == std::endian::little, "PQEMB1 IO assumes a little-endian host");

[[noreturn]] void store_fail(StoreFault fault, ErrorCode code, const std::string& what) {
  throw StoreError(fault, code, what);
}

std::string key_name(const std::string& article, std::size_t sentence) {
  return "(" + article + ", " + std::to_string(sentence) + ")";
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class TokenVectors {
 public:
  TokenVectors(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  const std::vector<double>& get(const std::string& token) {
    const std::string key = to_lower(token);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::mt19937_64 rng(mix(fnv1a(key) ^ mix(seed_)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(dim_);
    for (double& x : v) x = normal(rng);
    return cache_.emplace(key, std::move(v)).first->second;
  }

  std::vector<double> sentence(const std::vector<std::string>& tokens) {
    std::vector<double> out(dim_, 0.0);
    if (tokens.empty()) return out;
    for (const std::string& t : tokens) {
      const std::vector<double>& v = get(t);
      for (std::size_t j = 0; j < dim_; ++j) out[j] += v[j];
    }
    for (double& x : out) x /= static_cast<double>(tokens.size());
    return out;
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::vector<double>> cache_;
};

}  // namespace

std::optional<std::span<const double>> EmbeddingStore::find(const std::string& article_id,
                                                            std::size_t sentence) const {
  auto it = index.find({article_id, static_cast<std::uint32_t>(sentence)});
  if (it == index.end()) return std::nullopt;
  return rows.row(it->second);
}

std::span<const double> EmbeddingStore::at(const std::string& article_id,
                                           std::size_t sentence) const {
  auto r = find(article_id, sentence);
  if (!r)
    store_fail(StoreFault::missing_index, ErrorCode::mismatch,
               "no embedding for sentence " + key_name(article_id, sentence));
  return *r;
}

void save_store(const std::filesystem::path& vectors, const std::filesystem::path& index,
                const EmbeddingStore& store) {
  if (store.rows.cols != store.dim)
    fail(ErrorCode::invalid_argument, "store matrix width differs from its dim");
  std::ofstream out(vectors, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + vectors.string());
  out.write(kMagic, kMagicSize);
  const auto n = static_cast<std::uint32_t>(store.rows.rows);
  const auto d = static_cast<std::uint32_t>(store.dim);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  std::vector<float> buf(store.dim);
  for (std::size_t i = 0; i < store.rows.rows; ++i) {
    const auto row = store.rows.row(i);
    for (std::size_t j = 0; j < store.dim; ++j) buf[j] = static_cast<float>(row[j]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) fail(ErrorCode::io, "failed writing " + vectors.string());

  std::ofstream idx(index, std::ios::binary);
  if (!idx) fail(ErrorCode::io, "cannot write " + index.string());
  for (const auto& [key, row] : store.index)
    idx << key.first << '\t' << key.second << '\t' << row << '\n';
  if (!idx) fail(ErrorCode::io, "failed writing " + index.string());
}

EmbeddingStore load_store(const std::filesystem::path& vectors,
                          const std::filesystem::path& index) {
  std::ifstream in(vectors, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open embedding store " + vectors.string());
  char magic[kMagicSize];
  if (!in.read(magic, kMagicSize))
    store_fail(StoreFault::truncated, ErrorCode::format, vectors.string() + ": truncated header");
  if (std::memcmp(magic, kMagic, kMagicSize) != 0)
    store_fail(StoreFault::bad_magic, ErrorCode::format,
               vectors.string() + ": not a PQEMB1 embedding store");
  std::uint32_t n = 0, d = 0;
  if (!in.read(reinterpret_cast<char*>(&n), 4) || !in.read(reinterpret_cast<char*>(&d), 4))
    store_fail(StoreFault::truncated, ErrorCode::format, vectors.string() + ": truncated header");
  if (d == 0) store_fail(StoreFault::bad_magic, ErrorCode::format, vectors.string() + ": dim is 0");

  EmbeddingStore store;
  store.dim = d;
  store.rows = Matrix(n, d);
  std::vector<float> buf(d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * sizeof(float))))
      store_fail(StoreFault::truncated, ErrorCode::format,
                 vectors.string() + ": truncated at row " + std::to_string(i) + " of " +
                     std::to_string(n));
    auto row = store.rows.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(buf[j]))
        store_fail(StoreFault::non_finite, ErrorCode::format,
                   vectors.string() + ": non-finite value at row " + std::to_string(i) +
                       ", dim " + std::to_string(j));
      row[j] = buf[j];
    }
  }
  if (in.peek() != std::char_traits<char>::eof())
    store_fail(StoreFault::truncated, ErrorCode::format,
               vectors.string() + ": trailing bytes after " + std::to_string(n) + " rows");

  std::ifstream idx(index);
  if (!idx) fail(ErrorCode::io, "cannot open embedding index " + index.string());
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(idx, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const std::string where = index.string() + ":" + std::to_string(lineno);
    if (t2 == std::string::npos)
      store_fail(StoreFault::bad_index, ErrorCode::format, where + ": expected 3 tab-separated fields");
    std::uint64_t sentence = 0, row = 0;
    try {
      std::size_t used = 0;
      const std::string s1 = line.substr(t1 + 1, t2 - t1 - 1);
      const std::string s2 = line.substr(t2 + 1);
      sentence = std::stoull(s1, &used);
      if (used != s1.size()) throw std::invalid_argument(s1);
      row = std::stoull(s2, &used);
      if (used != s2.size()) throw std::invalid_argument(s2);
    } catch (const std::logic_error&) {
      store_fail(StoreFault::bad_index, ErrorCode::format, where + ": malformed number");
    }
    if (row >= n)
      store_fail(StoreFault::bad_index, ErrorCode::format,
                 where + ": row " + std::to_string(row) + " out of range");
    const SentenceKey key{line.substr(0, t1), static_cast<std::uint32_t>(sentence)};
    if (!store.index.emplace(key, static_cast<std::uint32_t>(row)).second)
      store_fail(StoreFault::bad_index, ErrorCode::format,
                 where + ": duplicate entry for " + key_name(key.first, key.second));
    seen[row] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      store_fail(StoreFault::missing_index, ErrorCode::format,
                 index.string() + ": no index entry for row " + std::to_string(i));
  return store;
}

std::vector<SentenceKey> missing_sentences(const EmbeddingStore& store,
                                           const std::vector<Article>& articles) {
  std::vector<SentenceKey> missing;
  for (const Article& a : articles)
    for (std::size_t i = 0; i < a.sentences.size(); ++i)
      if (!store.find(a.id, i)) missing.emplace_back(a.id, static_cast<std::uint32_t>(i));
  return missing;
}

DocEmbedding doc_embedding(const EmbeddingStore& store, const Article& article) {
  DocEmbedding doc{article.id, std::vector<double>(store.dim, 0.0)};
  if (article.sentences.empty()) fail(ErrorCode::invalid_argument, "article " + article.id + " has no sentences");
  for (std::size_t i = 0; i < article.sentences.size(); ++i) {
    const auto row = store.at(article.id, i);
    for (std::size_t j = 0; j < store.dim; ++j) doc.vector[j] += row[j];
  }
  for (double& x : doc.vector) x /= static_cast<double>(article.sentences.size());
  return doc;
}

Matrix sentence_matrix(const EmbeddingStore& store, const std::vector<Article>& articles) {
  Matrix m(sentence_count(articles), store.dim);
  std::size_t r = 0;
  for (const Article& a : articles)
    for (std::size_t i = 0; i < a.sentences.size(); ++i, ++r) {
      const auto row = store.at(a.id, i);
      std::copy(row.begin(), row.end(), m.row(r).begin());
    }
  return m;
}

Matrix document_matrix(const EmbeddingStore& store, const std::vector<Article>& articles) {
  Matrix m(sentence_count(articles), store.dim);
  std::size_t r = 0;
  for (const Article& a : articles) {
    const DocEmbedding doc = doc_embedding(store, a);
    for (std::size_t i = 0; i < a.sentences.size(); ++i, ++r)
      std::copy(doc.vector.begin(), doc.vector.end(), m.row(r).begin());
  }
  return m;
}

std::vector<double> hashed_token_embedding(const std::vector<std::string>& tokens,
                                           std::size_t dim, std::uint64_t seed) {
  TokenVectors tv(dim, seed);
  return tv.sentence(tokens);
}

EmbeddingStore hashed_token_store(const std::vector<Article>& articles, std::size_t dim,
                                  std::uint64_t seed) {
  if (dim == 0) fail(ErrorCode::invalid_argument, "embedding dim must be positive");
  TokenVectors tv(dim, seed);
  EmbeddingStore store;
  store.dim = dim;
  store.rows = Matrix(sentence_count(articles), dim);
  std::uint32_t r = 0;
  for (const Article& a : articles)
    for (std::size_t i = 0; i < a.sentences.size(); ++i, ++r) {
      const std::vector<double> v = tv.sentence(a.sentences[i].tokens);
      std::copy(v.begin(), v.end(), store.rows.row(r).begin());
      store.index.emplace(SentenceKey{a.id, static_cast<std::uint32_t>(i)}, r);
    }
  return store;
}

EmbeddingStore planted_dimension_store(const std::vector<Article>& articles, std::size_t dim,
                                       std::size_t planted, const std::string& marker,
                                       double strength, std::uint64_t seed) {
  if (planted >= dim) fail(ErrorCode::invalid_argument, "planted dimension out of range");
  EmbeddingStore store = hashed_token_store(articles, dim, seed);
  const std::string needle = to_lower(marker);
  std::size_t r = 0;
  for (const Article& a : articles)
    for (const Sentence& s : a.sentences) {
      for (const std::string& t : s.tokens)
        if (to_lower(t) == needle) {
          store.rows(r, planted) += strength;
          break;
        }
      ++r;
    }
  return store;
}

}  // namespace pqrank
