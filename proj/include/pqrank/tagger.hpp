#pragma once
// Fallback part-of-speech tagger over the reduced tag set the features use.
//
// Corpora should normally carry tags produced upstream. For corpora that do
// not, this tagger assigns one of CD JJ MD NN NNP PRP RB VB, or OTHER, from
// closed-class word tables, a verb/adjective lexicon and suffix rules.
// Inflected forms are folded into their family (runs/ran/running -> VB,
// plural nouns -> NN, comparatives -> JJ/RB).

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace pqrank {

inline constexpr std::array<std::string_view, 8> kTrackedTags = {"CD", "JJ", "MD", "NN",
                                                                 "NNP", "PRP", "RB", "VB"};
inline constexpr std::string_view kOtherTag = "OTHER";

// Tracked tags pass through; any other tag string becomes OTHER.
std::string normalize_tag(std::string_view tag);

std::vector<std::string> pos_tag(const std::vector<std::string>& tokens);

}  // namespace pqrank
