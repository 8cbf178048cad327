#include "pqrank/lexicons.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "pqrank/errors.hpp"
#include "pqrank/text.hpp"

namespace pqrank {
namespace {

constexpr double kDefaultValence = 5.0;
constexpr double kDefaultArousal = 4.0;
constexpr double kDefaultConcreteness = 5.0;

std::ifstream open_or_fail(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open lexicon " + path.string());
  return in;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Reads `word,rating` rows after a header line.
std::unordered_map<std::string, double> read_rating_csv(const std::filesystem::path& path) {
  std::ifstream in = open_or_fail(path);
  std::unordered_map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (to_lower(line) != "word,rating")
        fail(ErrorCode::format, path.string() + ": expected header 'word,rating'");
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      fail(ErrorCode::format, path.string() + ":" + std::to_string(line_no) + ": expected word,rating");
    double rating = 0.0;
    try {
      std::size_t used = 0;
      const std::string num = trim(line.substr(comma + 1));
      rating = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      fail(ErrorCode::format, path.string() + ":" + std::to_string(line_no) + ": bad rating");
    }
    if (!std::isfinite(rating))
      fail(ErrorCode::format, path.string() + ":" + std::to_string(line_no) + ": non-finite rating");
    out.emplace(to_lower(trim(line.substr(0, comma))), rating);
  }
  if (line_no == 0) fail(ErrorCode::format, path.string() + ": empty file (missing header)");
  return out;
}

}  // namespace

double AffectLexicon::rating(std::string_view word) const {
  auto it = entries.find(to_lower(word));
  return it == entries.end() ? default_rating : it->second;
}

bool AffectLexicon::contains(std::string_view word) const {
  return entries.count(to_lower(word)) != 0;
}

bool WordList::contains(std::string_view word) const { return words.count(to_lower(word)) != 0; }

double SentimentLexicon::polarity(std::string_view word) const {
  auto it = entries.find(to_lower(word));
  return it == entries.end() ? 0.0 : it->second;
}

SentimentScores SentimentLexicon::score(const std::vector<std::string>& tokens) const {
  double sum = 0.0;
  double pos_mass = 0.0;
  double neg_mass = 0.0;
  for (const std::string& t : tokens) {
    const double p = polarity(t);
    sum += p;
    if (p > 0)
      pos_mass += p;
    else
      neg_mass -= p;
  }
  SentimentScores s;
  const double mass = pos_mass + neg_mass;
  if (mass > 0) {
    s.positive = pos_mass / mass;
    s.negative = neg_mass / mass;
  }
  s.compound = sum / std::sqrt(sum * sum + normalization_alpha);
  return s;
}

AffectLexicon load_affect_csv(const std::filesystem::path& path, std::string name,
                              double default_rating) {
  if (!std::isfinite(default_rating))
    fail(ErrorCode::invalid_argument, "default rating must be finite");
  AffectLexicon lex;
  lex.name = std::move(name);
  lex.default_rating = default_rating;
  lex.entries = read_rating_csv(path);
  return lex;
}

SentimentLexicon load_sentiment_csv(const std::filesystem::path& path, double alpha) {
  if (!(alpha > 0)) fail(ErrorCode::invalid_argument, "sentiment alpha must be positive");
  SentimentLexicon lex;
  lex.normalization_alpha = alpha;
  lex.entries = read_rating_csv(path);
  for (const auto& [w, r] : lex.entries) {
    if (r < -4.0 || r > 4.0)
      fail(ErrorCode::format, path.string() + ": polarity of '" + w + "' outside [-4, 4]");
  }
  return lex;
}

WordList load_word_list(const std::filesystem::path& path) {
  std::ifstream in = open_or_fail(path);
  WordList list;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    list.words.insert(to_lower(line));
  }
  if (list.words.empty()) fail(ErrorCode::format, path.string() + ": word list is empty");
  return list;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
  Lexicons lex;
  lex.valence = load_affect_csv(dir / "valence.csv", "valence", kDefaultValence);
  lex.arousal = load_affect_csv(dir / "arousal.csv", "arousal", kDefaultArousal);
  lex.concreteness =
      load_affect_csv(dir / "concreteness.csv", "concreteness", kDefaultConcreteness);
  lex.sentiment = load_sentiment_csv(dir / "sentiment.csv");
  lex.easy_words = load_word_list(dir / "easy_words.txt");
  lex.stopwords = load_word_list(dir / "stopwords.txt");
  return lex;
}

std::filesystem::path bundled_lexicon_dir() {
  if (const char* env = std::getenv("PQRANK_LEXICON_DIR")) return env;
  return PQRANK_DATA_DIR;
}

const Lexicons& Lexicons::bundled() {
  static const Lexicons lex = Lexicons::load(bundled_lexicon_dir());
  return lex;
}

std::vector<LexiconReport> validate_lexicon_dir(const std::filesystem::path& dir) {
  std::vector<LexiconReport> out;
  auto check = [&](const std::string& file, const std::function<std::size_t()>& load) {
    LexiconReport r;
    r.file = file;
    try {
      r.entries = load();
    } catch (const std::exception& e) {
      r.problem = e.what();
    }
    out.push_back(std::move(r));
  };
  check("valence.csv", [&] { return load_affect_csv(dir / "valence.csv", "v", 5).entries.size(); });
  check("arousal.csv", [&] { return load_affect_csv(dir / "arousal.csv", "a", 4).entries.size(); });
  check("concreteness.csv",
        [&] { return load_affect_csv(dir / "concreteness.csv", "c", 5).entries.size(); });
  check("sentiment.csv", [&] { return load_sentiment_csv(dir / "sentiment.csv").entries.size(); });
  check("easy_words.txt", [&] { return load_word_list(dir / "easy_words.txt").size(); });
  check("stopwords.txt", [&] { return load_word_list(dir / "stopwords.txt").size(); });
  return out;
}

}  // namespace pqrank
