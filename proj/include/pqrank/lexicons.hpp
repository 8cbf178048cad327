#pragma once
// Word-rating lexicons, word lists and the lexicon-average sentiment scorer.

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pqrank {

// Case-insensitive word -> rating table with a fallback for unknown words.
struct AffectLexicon {
  std::string name;
  std::unordered_map<std::string, double> entries;  // lowercase keys
  double default_rating = 0.0;

  double rating(std::string_view word) const;
  bool contains(std::string_view word) const;
};

struct WordList {
  std::unordered_set<std::string> words;  // lowercase

  bool contains(std::string_view word) const;
  std::size_t size() const { return words.size(); }
};

struct SentimentScores {
  double positive = 0.0;  // share of positive polarity mass, [0, 1]
  double negative = 0.0;  // share of negative polarity mass, [0, 1]
  double compound = 0.0;  // normalized sum, [-1, 1]
};

// Polarity lexicon (scores in [-4, 4]) with compound normalization
// x / sqrt(x^2 + alpha) over the summed token polarities x.
struct SentimentLexicon {
  std::unordered_map<std::string, double> entries;
  double normalization_alpha = 15.0;

  double polarity(std::string_view word) const;
  SentimentScores score(const std::vector<std::string>& tokens) const;
};

struct Lexicons {
  AffectLexicon valence;
  AffectLexicon arousal;
  AffectLexicon concreteness;
  SentimentLexicon sentiment;
  WordList easy_words;
  WordList stopwords;

  // Expects valence.csv, arousal.csv, concreteness.csv, sentiment.csv,
  // easy_words.txt and stopwords.txt in `dir`.
  static Lexicons load(const std::filesystem::path& dir);
  // Lexicons shipped with the project (PQRANK_DATA_DIR).
  static const Lexicons& bundled();
};

std::filesystem::path bundled_lexicon_dir();

// CSV with header `word,rating`. Ratings must be finite.
AffectLexicon load_affect_csv(const std::filesystem::path& path, std::string name,
                              double default_rating);
SentimentLexicon load_sentiment_csv(const std::filesystem::path& path, double alpha = 15.0);
// One word per line; blank lines and lines starting with '#' are skipped. Must be nonempty.
WordList load_word_list(const std::filesystem::path& path);

struct LexiconReport {
  std::string file;
  std::size_t entries = 0;
  std::string problem;  // empty when the file is fine
};

// Loads every expected file independently and reports per-file status.
std::vector<LexiconReport> validate_lexicon_dir(const std::filesystem::path& dir);

}  // namespace pqrank
