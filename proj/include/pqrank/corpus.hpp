#pragma once
// Labeled article corpora: data model, line-delimited JSON storage,
// train/validation/test splitting and class statistics.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pqrank {

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pos_tags;
  bool is_pq_source = false;

  bool operator==(const Sentence&) const = default;
};

struct Article {
  std::string id;
  std::string source;
  std::vector<Sentence> sentences;

  bool operator==(const Article&) const = default;
};

// Tokenizes `text` with the module tokenizer; no tags, negative label.
Sentence make_sentence(std::string text, bool is_pq_source = false);

// Throws Error(format) naming the article when an invariant is broken.
void validate_article(const Article& article);

Article parse_article_line(const std::string& line);
std::string format_article_line(const Article& article);

// One article per line. Errors name the 1-based line number.
std::vector<Article> read_corpus(std::istream& in);
std::vector<Article> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<Article>& articles);
void save_corpus(const std::filesystem::path& path, const std::vector<Article>& articles);

struct CorpusSplit {
  std::vector<Article> train;
  std::vector<Article> validation;
  std::vector<Article> test;
  std::uint64_t seed = 0;
};

// Seeded shuffle, then floor(0.7n) / floor(0.1n) / remainder. Needs >= 10 articles.
CorpusSplit split_corpus(const std::vector<Article>& articles, std::uint64_t seed);

struct ClassBalance {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // negatives / positives; +infinity when there are no positives.
  double ratio = 0.0;
};

ClassBalance class_balance(const std::vector<Article>& articles);
ClassBalance class_balance(std::size_t positives, std::size_t negatives);

std::size_t sentence_count(const std::vector<Article>& articles);

}  // namespace pqrank
