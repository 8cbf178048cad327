#include "pqrank/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "pqrank/text.hpp"

namespace pqrank {
namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kPronouns = {"i",      "you",     "he",       "she",     "it",         "we",
                           "they",   "me",      "him",      "her",     "us",         "them",
                           "myself", "yourself", "himself", "herself", "itself",     "ourselves",
                           "themselves", "yourselves"};

const WordSet kModals = {"can",   "could", "may",  "might", "must", "shall",
                         "should", "will", "would", "ca",   "wo",   "'ll", "'d"};

const WordSet kOther = {
    // determiners and possessives
    "the", "a", "an", "this", "that", "these", "those", "some", "any", "each", "every", "no",
    "all", "both", "either", "neither", "my", "your", "his", "its", "our", "their", "whose",
    "another", "such",
    // prepositions, particles, conjunctions
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "upon", "about",
    "over", "under", "after", "before", "during", "through", "between", "against", "around",
    "among", "without", "within", "since", "until", "across", "behind", "beyond", "toward",
    "towards", "despite", "per", "via", "like", "than", "as", "and", "or", "but", "nor", "if",
    "because", "while", "whether", "although", "though", "unless", "so", "yet",
    // wh-words, existential, misc
    "who", "whom", "what", "which", "where", "when", "why", "how", "there", "'s"};

const WordSet kAdverbs = {
    "not",   "n't",   "very",  "also",   "just",    "now",     "then",    "here",   "never",
    "always", "often", "still", "already", "too",   "again",   "even",    "ever",   "soon",
    "only",  "quite", "almost", "rather", "perhaps", "away",   "back",    "later",  "however",
    "instead", "together", "indeed", "once",  "else", "well",   "far",     "ago",    "maybe",
    "more",  "most",  "less",  "least",  "down",   "up",      "out",     "off",    "sometimes",
    "anyway", "abroad", "yesterday", "tonight", "tomorrow"};

const WordSet kVerbs = {
    "be",     "is",      "am",       "are",      "was",      "were",     "been",     "being",
    "have",   "has",     "had",      "having",   "do",       "does",     "did",      "done",
    "say",    "said",    "go",       "went",     "gone",     "get",      "got",      "gotten",
    "make",   "made",    "take",     "took",     "taken",    "see",      "saw",      "seen",
    "know",   "knew",    "known",    "think",    "thought",  "come",     "came",     "want",
    "give",   "gave",    "given",    "use",      "find",     "found",    "tell",     "told",
    "ask",    "work",    "seem",     "feel",     "felt",     "try",      "leave",    "left",
    "call",   "run",     "ran",      "keep",     "kept",     "let",      "begin",    "began",
    "begun",  "help",    "show",     "shown",    "hear",     "heard",    "play",     "move",
    "live",   "believe", "bring",    "brought",  "happen",   "write",    "wrote",    "written",
    "sit",    "sat",     "stand",    "stood",    "lose",     "lost",     "pay",      "paid",
    "meet",   "met",     "include",  "continue", "set",      "learn",    "lead",     "led",
    "understand", "understood", "watch", "follow", "stop",   "create",   "speak",    "spoke",
    "spoken", "read",    "spend",    "spent",    "grow",     "grew",     "grown",    "open",
    "walk",   "win",     "won",      "offer",    "remember", "love",     "consider", "appear",
    "buy",    "bought",  "wait",     "serve",    "die",      "send",     "sent",     "expect",
    "build",  "built",   "stay",     "fall",     "fell",     "fallen",   "cut",      "reach",
    "kill",   "remain",  "suggest",  "raise",    "pass",     "sell",     "sold",     "require",
    "decide", "pull",    "need",     "like",     "hope",     "eat",      "ate",      "eaten",
    "drink",  "drank",   "sleep",    "slept",    "fight",    "fought",   "catch",    "caught",
    "teach",  "taught",  "drive",    "drove",    "driven",   "choose",   "chose",    "chosen",
    "break",  "broke",   "broken",   "hold",     "held",     "become",   "became",   "mean",
    "meant",  "put",     "agree",    "add",      "allow",    "accept",   "announce", "argue",
    "claim",  "explain", "join",     "plan",     "provide",  "receive",  "return",   "start",
    "turn",   "warn",    "launch",   "vote",     "hire",     "fire",     "close",    "visit",
    "happened", "look",  "talk",     "listen",   "carry",    "cry",      "smile",    "laugh"};

const WordSet kAdjectives = {
    "good",   "new",     "first",   "last",     "long",     "great",    "little",   "own",
    "other",  "old",     "right",   "big",      "high",     "different", "small",   "large",
    "next",   "early",   "young",   "important", "few",     "public",   "bad",      "same",
    "able",   "best",    "better",  "sure",     "free",     "true",     "full",     "special",
    "clear",  "recent",  "certain", "strong",   "whole",    "real",     "hard",     "major",
    "possible", "late",  "happy",   "easy",     "local",    "political", "social",  "national",
    "difficult", "low",  "white",   "black",    "red",      "green",    "blue",     "second",
    "third",  "final",   "open",    "short",    "poor",     "rich",     "safe",     "huge",
    "tiny",   "hot",     "cold",    "warm",     "dark",     "bright",   "quiet",    "loud",
    "angry",  "sad",     "proud",   "afraid",   "simple",   "serious",  "private",  "common",
    "main",   "wrong",   "nice",    "fine",     "close",    "ready",    "likely",   "many",
    "much",   "several", "various", "whole",    "former",   "current",  "annual",   "entire",
    "worse",  "worst",   "greater", "greatest", "larger",   "largest",  "higher",   "highest"};

const std::unordered_set<std::string_view> kNumberWords = {
    "zero",   "one",     "two",     "three",    "four",     "five",     "six",     "seven",
    "eight",  "nine",    "ten",     "eleven",   "twelve",   "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty", "thirty", "forty",   "fifty",
    "sixty",  "seventy", "eighty",  "ninety",   "hundred",  "thousand", "million", "billion",
    "dozen"};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_numeric(std::string_view t) {
  bool digit = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c)))
      digit = true;
    else if (c != '.' && c != ',' && c != '%' && c != '-' && c != '$' && c != '/')
      return false;
  }
  return digit;
}

bool verb_form(const std::string& w) {
  if (kVerbs.count(w)) return true;
  auto stem_is_verb = [&](std::size_t cut, std::string_view add = {}) {
    if (w.size() <= cut + 1) return false;
    std::string stem = w.substr(0, w.size() - cut);
    stem += add;
    return kVerbs.count(stem) != 0;
  };
  if (ends_with(w, "ies") && stem_is_verb(3, "y")) return true;
  if (ends_with(w, "es") && stem_is_verb(2)) return true;
  if (ends_with(w, "s") && stem_is_verb(1)) return true;
  if (ends_with(w, "ied") && stem_is_verb(3, "y")) return true;
  if (ends_with(w, "ed") && (stem_is_verb(2) || stem_is_verb(1))) return true;
  if (ends_with(w, "ing") && (stem_is_verb(3) || stem_is_verb(3, "e"))) return true;
  // doubled final consonant: stopped, running
  if (ends_with(w, "ed") && w.size() > 4 && w[w.size() - 3] == w[w.size() - 4] && stem_is_verb(3))
    return true;
  if (ends_with(w, "ing") && w.size() > 5 && w[w.size() - 4] == w[w.size() - 5] &&
      stem_is_verb(4))
    return true;
  return false;
}

bool capitalized(std::string_view t) {
  return !t.empty() && std::isupper(static_cast<unsigned char>(t[0]));
}

// Tag for a lowercase word from tables and suffixes only.
std::string_view lexical_tag(const std::string& w) {
  if (kNumberWords.count(w)) return "CD";
  if (kPronouns.count(w)) return "PRP";
  if (kModals.count(w)) return "MD";
  if (kOther.count(w)) return kOtherTag;
  if (kAdverbs.count(w)) return "RB";
  if (kAdjectives.count(w)) return "JJ";
  if (verb_form(w)) return "VB";
  if (ends_with(w, "ly") && w.size() > 4) return "RB";
  for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic",
                               "est", "ent", "ant", "al"}) {
    if (ends_with(w, suf) && w.size() > suf.size() + 2) {
      // -ent/-ant/-al/-ic also end many nouns; keep the common noun endings out
      if ((suf == "ent" && ends_with(w, "ment")) || (suf == "al" && ends_with(w, "ial")))
        break;
      return "JJ";
    }
  }
  if (ends_with(w, "ing") || ends_with(w, "ed") || ends_with(w, "ize") || ends_with(w, "ise"))
    return "VB";
  return "NN";
}

}  // namespace

std::string normalize_tag(std::string_view tag) {
  for (std::string_view t : kTrackedTags)
    if (t == tag) return std::string(t);
  return std::string(kOtherTag);
}

std::vector<std::string> pos_tag(const std::vector<std::string>& tokens) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  bool sentence_start = true;
  for (const std::string& tok : tokens) {
    if (is_punct_token(tok)) {
      tags.emplace_back(kOtherTag);
      // A sentence (or quotation) opens after terminal punctuation or an opening quote.
      if (tok == "." || tok == "!" || tok == "?" || tok == "\"" || tok == "“" || tok == ":")
        sentence_start = true;
      continue;
    }
    if (is_numeric(tok)) {
      tags.emplace_back("CD");
      sentence_start = false;
      continue;
    }
    const std::string w = to_lower(tok);
    std::string_view tag = lexical_tag(w);
    if (capitalized(tok) && !sentence_start && w != "i") {
      // Capitalized mid-sentence: proper noun unless it is a closed-class word.
      if (tag == "NN" || tag == "JJ" || tag == "VB") tag = "NNP";
    } else if (capitalized(tok) && sentence_start && tag == "NN" && tok.size() > 1 &&
               std::all_of(tok.begin(), tok.end(),
                           [](char c) { return std::isupper(static_cast<unsigned char>(c)); })) {
      tag = "NNP";  // acronym
    }
    tags.emplace_back(tag);
    sentence_start = false;
  }
  return tags;
}

}  // namespace pqrank
