#include "pqrank/handcrafted.hpp"

#include <set>

#include "pqrank/errors.hpp"
#include "pqrank/parallel.hpp"
#include "pqrank/tagger.hpp"
#include "pqrank/text.hpp"

namespace pqrank {
namespace {

constexpr std::array<std::string_view, HandcraftedVector::kSize> kNames = {
    "char_length", "sentence_position", "quote_count", "flesch", "difficult_fraction",
    "pos_CD",      "pos_JJ",            "pos_MD",      "pos_NN", "pos_NNP",
    "pos_PRP",     "pos_RB",            "pos_VB",      "a_pos",  "a_neg",
    "a_compound",  "a_valence",         "a_arousal",   "a_concreteness"};

}  // namespace

std::array<double, HandcraftedVector::kSize> HandcraftedVector::values() const {
  std::array<double, kSize> v{};
  v[0] = surface.char_length;
  v[1] = surface.sentence_position;
  v[2] = surface.quote_count;
  v[3] = surface.flesch;
  v[4] = surface.difficult_fraction;
  for (std::size_t i = 0; i < pos_density.size(); ++i) v[5 + i] = pos_density[i];
  v[13] = affect.a_pos;
  v[14] = affect.a_neg;
  v[15] = affect.a_compound;
  v[16] = affect.a_valence;
  v[17] = affect.a_arousal;
  v[18] = affect.a_concreteness;
  return v;
}

const std::array<std::string_view, HandcraftedVector::kSize>& handcrafted_feature_names() {
  return kNames;
}

std::size_t handcrafted_feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return i;
  fail(ErrorCode::invalid_argument, "unknown handcrafted feature '" + std::string(name) + "'");
}

std::vector<std::size_t> handcrafted_feature_selection(std::string_view spec) {
  std::vector<std::size_t> out;
  auto range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out.push_back(i);
  };
  if (spec == "all") {
    range(0, kNames.size());
  } else if (spec == "surface") {
    range(0, 5);
  } else if (spec == "pos") {
    range(5, 13);
  } else if (spec == "affect") {
    range(13, 19);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const std::size_t comma = std::min(spec.find(',', start), spec.size());
      const std::string_view name = spec.substr(start, comma - start);
      if (!name.empty()) out.push_back(handcrafted_feature_index(name));
      start = comma + 1;
    }
  }
  if (out.empty()) fail(ErrorCode::invalid_argument, "empty feature selection");
  return out;
}

double flesch_reading_ease(std::size_t words, std::size_t syllables) {
  if (words == 0) return 206.835;
  const double w = static_cast<double>(words);
  return 206.835 - 1.015 * w - 84.6 * (static_cast<double>(syllables) / w);
}

SurfaceFeatures surface_features(const Sentence& sentence, std::size_t index,
                                 std::size_t article_len, const WordList& easy_words) {
  if (index >= article_len)
    fail(ErrorCode::invalid_argument, "sentence index outside its article");
  SurfaceFeatures f;
  const std::u32string cps = utf8_decode(sentence.text);
  f.char_length = static_cast<double>(cps.size());
  f.sentence_position =
      article_len > 1 ? static_cast<double>(index) / static_cast<double>(article_len - 1) : 0.0;
  std::size_t quotes = 0;
  for (char32_t cp : cps)
    if (is_double_quote(cp)) ++quotes;
  f.quote_count = static_cast<double>(quotes);

  std::size_t words = 0;
  std::size_t syllables = 0;
  std::set<std::string> unique;
  for (const std::string& tok : sentence.tokens) {
    if (is_punct_token(tok)) continue;
    ++words;
    syllables += static_cast<std::size_t>(count_syllables(tok));
    if (is_alphabetic_word(tok)) unique.insert(to_lower(tok));
  }
  f.flesch = flesch_reading_ease(words, syllables);
  std::size_t difficult = 0;
  for (const std::string& w : unique)
    if (w.size() >= 6 && !easy_words.contains(w)) ++difficult;
  f.difficult_fraction =
      unique.empty() ? 0.0 : static_cast<double>(difficult) / static_cast<double>(unique.size());
  return f;
}

PosDensity pos_features(const Sentence& sentence) {
  if (sentence.tokens.empty()) fail(ErrorCode::invalid_argument, "pos_features: no tokens");
  const std::vector<std::string> tags =
      sentence.pos_tags ? *sentence.pos_tags : pos_tag(sentence.tokens);
  PosDensity d{};
  for (const std::string& raw : tags) {
    const std::string tag = normalize_tag(raw);
    for (std::size_t k = 0; k < kTrackedTags.size(); ++k)
      if (kTrackedTags[k] == tag) d[k] += 1.0;
  }
  for (double& x : d) x /= static_cast<double>(tags.size());
  return d;
}

AffectFeatures affect_features(const Sentence& sentence, const Lexicons& lexicons) {
  AffectFeatures f;
  const SentimentScores s = lexicons.sentiment.score(sentence.tokens);
  f.a_pos = s.positive;
  f.a_neg = s.negative;
  f.a_compound = s.compound;

  double v = 0, a = 0, c = 0;
  std::size_t n = 0;
  for (const std::string& tok : sentence.tokens) {
    if (is_punct_token(tok) || lexicons.stopwords.contains(tok)) continue;
    v += lexicons.valence.rating(tok);
    a += lexicons.arousal.rating(tok);
    c += lexicons.concreteness.rating(tok);
    ++n;
  }
  if (n == 0) {
    f.a_valence = lexicons.valence.default_rating;
    f.a_arousal = lexicons.arousal.default_rating;
    f.a_concreteness = lexicons.concreteness.default_rating;
  } else {
    const double dn = static_cast<double>(n);
    f.a_valence = v / dn;
    f.a_arousal = a / dn;
    f.a_concreteness = c / dn;
  }
  return f;
}

std::vector<HandcraftedVector> extract_all(const Article& article, const Lexicons& lexicons) {
  validate_article(article);
  const std::size_t n = article.sentences.size();
  std::vector<HandcraftedVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& s = article.sentences[i];
    out[i].surface = surface_features(s, i, n, lexicons.easy_words);
    if (!s.tokens.empty()) out[i].pos_density = pos_features(s);
    out[i].affect = affect_features(s, lexicons);
  }
  return out;
}

Matrix extract_corpus(const std::vector<Article>& articles, const Lexicons& lexicons,
                      unsigned threads) {
  std::vector<std::size_t> offsets(articles.size() + 1, 0);
  for (std::size_t a = 0; a < articles.size(); ++a)
    offsets[a + 1] = offsets[a] + articles[a].sentences.size();
  Matrix out(offsets.back(), HandcraftedVector::kSize);
  parallel_for(articles.size(), threads, [&](std::size_t a) {
    const auto vecs = extract_all(articles[a], lexicons);
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      const auto v = vecs[i].values();
      std::copy(v.begin(), v.end(), out.row(offsets[a] + i).begin());
    }
  });
  return out;
}

}  // namespace pqrank
