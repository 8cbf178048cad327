#pragma once
// Synthetic corpora with planted, controllable pull-quote signals.
//
// Signals a positive sentence can carry:
//   quotes     a double-quoted span, planted with separate probabilities for
//              positives and negatives;
//   catchy     each word is drawn from a small "catchy" vocabulary with a
//              label-dependent probability (the rest from a neutral one);
//   position   label probability follows a triangular profile peaking a
//              quarter of the way through the article, mixed in with weight
//              position_skew;
//   marker     an optional fixed token inserted with label-dependent rates;
//   doc gating every sentence carries one of two gate markers; a latent
//              article type decides which marker marks positives, so the
//              marker alone is uninformative without document context.

#include <cstdint>
#include <string>
#include <vector>

#include "pqrank/corpus.hpp"

namespace pqrank {

struct SyntheticSpec {
  std::size_t articles = 100;
  std::size_t sentences_per_article = 48;
  double positive_rate = 1.0 / 27.0;
  bool ensure_positive = true;  // force one positive into articles that drew none

  std::size_t min_words = 8;
  std::size_t max_words = 20;

  double quote_prob_positive = 0.0;
  double quote_prob_negative = 0.0;
  double catchy_prob_positive = 0.0;
  double catchy_prob_negative = 0.0;
  double position_skew = 0.0;

  std::string marker_word;
  double marker_prob_positive = 0.0;
  double marker_prob_negative = 0.0;

  bool doc_gated = false;

  std::string source = "synthetic";
};

// Throws Error(invalid_argument) for rates outside their domain.
void validate_spec(const SyntheticSpec& spec);

std::vector<Article> gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

const std::vector<std::string>& catchy_vocabulary();
const std::vector<std::string>& neutral_vocabulary();
// {marker of positives in type-0 articles, marker of positives in type-1 articles}
const std::vector<std::string>& gate_markers();

// Triangular density on [0, 1] with mode 0.25 (mean 1).
double position_profile(double relative_position);
// P(positive) for a sentence at the given relative position.
double label_probability(const SyntheticSpec& spec, double relative_position);

// Posterior log-odds of positivity under the generating process; the
// Bayes-optimal scorer for corpora drawn from `spec`.
double bayes_log_odds(const SyntheticSpec& spec, const Article& article, std::size_t index);

}  // namespace pqrank
