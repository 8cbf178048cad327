#include "pqrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "pqrank/errors.hpp"
#include "pqrank/text.hpp"

namespace pqrank {
namespace {

// Every catchy word contains at least one of z, x, q, j; no neutral word does.
const std::vector<std::string> kCatchy = {
    "amazing", "bizarre",  "jaw",      "jinx",    "blaze",    "frenzy",  "zeal",
    "quirky",  "explosive", "exquisite", "jackpot", "jolt",   "blitz",   "zany",
    "wizard",  "hazard",   "jubilant", "dazzling", "extreme", "crazy",   "quake",
    "jazz",    "buzz",     "fizz",     "zinger",  "vexing",   "jeopardy", "quest",
    "outrageous", "exotic"};

const std::vector<std::string> kNeutralCandidates = {
    "the",      "a",        "of",       "and",       "to",        "in",       "on",
    "for",      "with",     "at",       "by",        "from",      "that",     "this",
    "was",      "is",       "were",     "are",       "has",       "had",      "said",
    "city",     "council",  "report",   "people",    "year",      "week",     "local",
    "plan",     "meeting",  "school",   "street",    "market",    "water",    "road",
    "budget",   "program",  "service",  "public",    "office",    "member",   "group",
    "family",   "house",    "money",    "price",     "policy",    "health",   "study",
    "result",   "number",   "center",   "area",      "state",     "board",    "court",
    "team",     "game",     "season",   "company",   "worker",    "student",  "staff",
    "police",   "officer",  "building", "system",    "community", "minister", "party",
    "election", "data",     "survey",   "river",     "park",      "station",  "train",
    "bus",      "farm",     "field",    "level",     "rate",      "cost",     "growth",
    "change",   "issue",    "point",    "record",    "morning",   "evening",  "month",
    "region",   "county",   "village",  "province",  "hospital",  "library",  "bridge",
    "harbour",  "teacher",  "nurse",    "driver",    "farmer",    "owner",    "manager",
    "director", "agency",   "industry", "network",   "traffic",   "weather",  "power",
    "energy",   "housing",  "transit",  "funding",   "contract",  "meeting",  "hearing",
    "vote",     "option",   "detail",   "figure",    "total",     "average",  "several",
    "other",    "many",     "some",     "most",      "new",       "old",      "small",
    "large",    "early",    "late",     "recent",    "annual",    "regular",  "general",
    "will",     "would",    "could",    "should",    "may",       "might",    "also",
    "then",     "there",    "their",    "after",     "before",    "during",   "under",
    "over",     "about",    "into",     "through",   "between",   "against",  "around"};

const std::vector<std::string> kGateMarkers = {"zircon", "quasar"};

std::vector<std::string> build_neutral() {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& w : kNeutralCandidates) {
    if (w.find_first_of("zxqj") != std::string::npos) continue;
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::invalid_argument, std::string(name) + " must lie in [0, 1]");
}

}  // namespace

const std::vector<std::string>& catchy_vocabulary() { return kCatchy; }

const std::vector<std::string>& neutral_vocabulary() {
  static const std::vector<std::string> words = build_neutral();
  return words;
}

const std::vector<std::string>& gate_markers() { return kGateMarkers; }

double position_profile(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x < 0.25 ? 8.0 * x : 2.0 * (1.0 - x) / 0.75;
}

double label_probability(const SyntheticSpec& spec, double relative_position) {
  const double shape =
      (1.0 - spec.position_skew) + spec.position_skew * position_profile(relative_position);
  return std::min(1.0, spec.positive_rate * shape);
}

void validate_spec(const SyntheticSpec& spec) {
  if (!(spec.positive_rate > 0.0 && spec.positive_rate < 1.0))
    fail(ErrorCode::invalid_argument, "positive rate must lie in (0, 1)");
  check_probability(spec.quote_prob_positive, "quote_prob_positive");
  check_probability(spec.quote_prob_negative, "quote_prob_negative");
  check_probability(spec.catchy_prob_positive, "catchy_prob_positive");
  check_probability(spec.catchy_prob_negative, "catchy_prob_negative");
  check_probability(spec.position_skew, "position_skew");
  check_probability(spec.marker_prob_positive, "marker_prob_positive");
  check_probability(spec.marker_prob_negative, "marker_prob_negative");
  if (spec.articles == 0 || spec.sentences_per_article == 0)
    fail(ErrorCode::invalid_argument, "articles and sentences per article must be positive");
  if (spec.min_words < 2 || spec.max_words < spec.min_words)
    fail(ErrorCode::invalid_argument, "need 2 <= min_words <= max_words");
}

std::vector<Article> gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& neutral = neutral_vocabulary();
  const auto& catchy = catchy_vocabulary();
  auto pick = [&](const std::vector<std::string>& words) -> const std::string& {
    return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
  };

  const std::size_t n = spec.sentences_per_article;
  std::vector<Article> out;
  out.reserve(spec.articles);
  for (std::size_t a = 0; a < spec.articles; ++a) {
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", a);
    Article article;
    article.id = id;
    article.source = spec.source;

    std::vector<double> probs(n);
    std::vector<bool> labels(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double rel = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      probs[i] = label_probability(spec, rel);
      labels[i] = unif(rng) < probs[i];
      any = any || labels[i];
    }
    if (!any && spec.ensure_positive) {
      std::discrete_distribution<std::size_t> forced(probs.begin(), probs.end());
      labels[forced(rng)] = true;
    }
    const int doc_type = spec.doc_gated ? (unif(rng) < 0.5 ? 0 : 1) : 0;

    for (std::size_t i = 0; i < n; ++i) {
      const bool pos = labels[i];
      const std::size_t len =
          std::uniform_int_distribution<std::size_t>(spec.min_words, spec.max_words)(rng);
      const double catchy_p = pos ? spec.catchy_prob_positive : spec.catchy_prob_negative;
      std::vector<std::string> words;
      words.reserve(len + 2);
      for (std::size_t k = 0; k < len; ++k)
        words.push_back(unif(rng) < catchy_p ? pick(catchy) : pick(neutral));

      auto insert_word = [&](const std::string& w) {
        const std::size_t at = std::uniform_int_distribution<std::size_t>(0, words.size())(rng);
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), w);
      };
      if (!spec.marker_word.empty() &&
          unif(rng) < (pos ? spec.marker_prob_positive : spec.marker_prob_negative))
        insert_word(spec.marker_word);
      if (spec.doc_gated) insert_word(kGateMarkers[(pos ? 0 : 1) ^ doc_type]);

      if (unif(rng) < (pos ? spec.quote_prob_positive : spec.quote_prob_negative)) {
        const std::size_t start =
            std::uniform_int_distribution<std::size_t>(0, words.size() - 2)(rng);
        const std::size_t max_len = std::min<std::size_t>(5, words.size() - start);
        const std::size_t span = std::uniform_int_distribution<std::size_t>(2, max_len)(rng);
        const bool curly = unif(rng) < 0.5;
        words[start] = (curly ? "“" : "\"") + words[start];
        words[start + span - 1] += curly ? "”" : "\"";
      }

      std::string text = join(words, " ");
      for (char& c : text) {
        if (c >= 'a' && c <= 'z') {
          c = static_cast<char>(c - 'a' + 'A');
          break;
        }
        if (c != '"' && !(static_cast<unsigned char>(c) & 0x80)) break;
      }
      text += ".";
      article.sentences.push_back(make_sentence(std::move(text), pos));
    }
    out.push_back(std::move(article));
  }
  return out;
}

double bayes_log_odds(const SyntheticSpec& spec, const Article& article, std::size_t index) {
  constexpr double kCertain = 50.0;
  const std::size_t n = article.sentences.size();
  const Sentence& s = article.sentences.at(index);
  const double rel = n > 1 ? static_cast<double>(index) / static_cast<double>(n - 1) : 0.0;
  const double prior = label_probability(spec, rel);
  double log_odds = std::log(prior) - std::log1p(-prior);

  auto log_ratio = [&](bool present, double p_pos, double p_neg) {
    const double num = present ? p_pos : 1.0 - p_pos;
    const double den = present ? p_neg : 1.0 - p_neg;
    if (num == den) return 0.0;
    if (num == 0.0) return -kCertain;
    if (den == 0.0) return kCertain;
    return std::log(num) - std::log(den);
  };

  const std::unordered_set<std::string> catchy(catchy_vocabulary().begin(),
                                              catchy_vocabulary().end());
  std::size_t words = 0;
  std::size_t catchy_hits = 0;
  bool quoted = false;
  bool marker = false;
  for (const std::string& tok : s.tokens) {
    if (tok == "\"" || tok == "“" || tok == "”") {
      quoted = true;
      continue;
    }
    if (is_punct_token(tok)) continue;
    const std::string w = to_lower(tok);
    if (!spec.marker_word.empty() && w == spec.marker_word) {
      marker = true;
      continue;
    }
    if (spec.doc_gated && (w == kGateMarkers[0] || w == kGateMarkers[1])) continue;
    ++words;
    if (catchy.count(w)) ++catchy_hits;
  }
  if (spec.catchy_prob_positive != spec.catchy_prob_negative) {
    for (std::size_t k = 0; k < words; ++k)
      log_odds += log_ratio(k < catchy_hits, spec.catchy_prob_positive, spec.catchy_prob_negative);
  }
  log_odds += log_ratio(quoted, spec.quote_prob_positive, spec.quote_prob_negative);
  if (!spec.marker_word.empty())
    log_odds += log_ratio(marker, spec.marker_prob_positive, spec.marker_prob_negative);

  if (spec.doc_gated) {
    // Negatives dominate, so the article's majority marker is the negative one.
    std::size_t count[2] = {0, 0};
    int own = -1;
    for (std::size_t i = 0; i < n; ++i) {
      for (const std::string& tok : article.sentences[i].tokens) {
        const std::string w = to_lower(tok);
        for (int m = 0; m < 2; ++m) {
          if (w == kGateMarkers[m]) {
            ++count[m];
            if (i == index) own = m;
          }
        }
      }
    }
    const int negative_marker = count[1] >= count[0] ? 1 : 0;
    if (own >= 0) log_odds += own == negative_marker ? -kCertain : kCertain;
  }
  return log_odds;
}

}  // namespace pqrank
