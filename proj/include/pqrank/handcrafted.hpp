#pragma once
// Per-sentence handcrafted features: surface, part-of-speech densities and affect.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pqrank/corpus.hpp"
#include "pqrank/lexicons.hpp"
#include "pqrank/matrix.hpp"

namespace pqrank {

struct SurfaceFeatures {
  double char_length = 0;          // code points
  double sentence_position = 0;    // index / (article_len - 1); 0 for single-sentence articles
  double quote_count = 0;          // U+0022, U+201C, U+201D
  double flesch = 0;               // single-sentence Flesch reading ease
  double difficult_fraction = 0;   // unique words >= 6 letters and not in the easy list
};

struct AffectFeatures {
  double a_pos = 0;
  double a_neg = 0;
  double a_compound = 0;
  double a_valence = 0;
  double a_arousal = 0;
  double a_concreteness = 0;
};

// Densities over the tracked tags, in kTrackedTags order.
using PosDensity = std::array<double, 8>;

struct HandcraftedVector {
  SurfaceFeatures surface;
  PosDensity pos_density{};
  AffectFeatures affect;

  static constexpr std::size_t kSize = 19;
  std::array<double, kSize> values() const;
};

// Column names, matching HandcraftedVector::values() order.
const std::array<std::string_view, HandcraftedVector::kSize>& handcrafted_feature_names();
// Index of a named feature; throws Error(invalid_argument) for unknown names.
std::size_t handcrafted_feature_index(std::string_view name);
// Expands "all", "surface", "pos", "affect" or a comma-separated name list.
std::vector<std::size_t> handcrafted_feature_selection(std::string_view spec);

// Flesch reading ease for one sentence: 206.835 - 1.015*words - 84.6*(syllables/words).
double flesch_reading_ease(std::size_t words, std::size_t syllables);

SurfaceFeatures surface_features(const Sentence& sentence, std::size_t index,
                                 std::size_t article_len, const WordList& easy_words);
// Uses the sentence's own tags when present, else the fallback tagger.
PosDensity pos_features(const Sentence& sentence);
AffectFeatures affect_features(const Sentence& sentence, const Lexicons& lexicons);

std::vector<HandcraftedVector> extract_all(const Article& article, const Lexicons& lexicons);

// One row per sentence over the whole corpus, articles in order.
Matrix extract_corpus(const std::vector<Article>& articles, const Lexicons& lexicons,
                      unsigned threads = 1);

}  // namespace pqrank
