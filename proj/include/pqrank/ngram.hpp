#pragma once
// Character- and word-level n-gram count vectors over a frequency-capped vocabulary.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pqrank/matrix.hpp"

namespace pqrank {

enum class NgramUnit { character, word };

std::string_view unit_name(NgramUnit unit);
NgramUnit parse_unit(std::string_view name);

struct NgramVocab {
  NgramUnit unit = NgramUnit::character;
  int n = 2;
  std::size_t size_cap = 1000;
  bool lowercase = true;
  std::vector<std::string> terms;  // column index -> n-gram
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return terms.size(); }
  // Rebuilds `index` from `terms`.
  void reindex();
};

// All n-grams of `text` in order of occurrence. Character n-grams run over
// code points of the (lowercased) raw text, spaces and punctuation
// included; word n-grams over tokenizer output joined by single spaces.
std::vector<std::string> extract_ngrams(std::string_view text, NgramUnit unit, int n,
                                        bool lowercase = true);

// Keeps the size_cap most frequent n-grams (total occurrences across the
// corpus); ties break lexicographically. Column index = frequency rank.
NgramVocab fit_vocab(std::span<const std::string> texts, NgramUnit unit, int n,
                     std::size_t size_cap = 1000, bool lowercase = true);

// (column, count) pairs sorted by column; out-of-vocabulary n-grams are dropped.
using SparseCounts = std::vector<std::pair<std::uint32_t, double>>;
SparseCounts vectorize(std::string_view text, const NgramVocab& vocab);
Matrix vectorize_dense(std::span<const std::string> texts, const NgramVocab& vocab);

// One n-gram per line, line number (0-based) = column. Backslash, newline,
// carriage return and tab are escaped as \\ \n \r \t.
void save_vocab_terms(const std::filesystem::path& path, const NgramVocab& vocab);
std::vector<std::string> load_vocab_terms(const std::filesystem::path& path);
std::string escape_term(std::string_view term);
std::string unescape_term(std::string_view line);

}  // namespace pqrank
