#include "pqrank/ngram.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "pqrank/errors.hpp"
#include "pqrank/text.hpp"

namespace pqrank {

std::string_view unit_name(NgramUnit unit) {
  return unit == NgramUnit::character ? "char" : "word";
}

NgramUnit parse_unit(std::string_view name) {
  if (name == "char" || name == "character") return NgramUnit::character;
  if (name == "word") return NgramUnit::word;
  fail(ErrorCode::invalid_argument, "unknown n-gram unit '" + std::string(name) + "'");
}

void NgramVocab::reindex() {
  index.clear();
  for (std::size_t i = 0; i < terms.size(); ++i) index.emplace(terms[i], static_cast<std::uint32_t>(i));
}

std::vector<std::string> extract_ngrams(std::string_view text, NgramUnit unit, int n,
                                        bool lowercase) {
  if (n < 1 || n > 3) fail(ErrorCode::invalid_argument, "n-gram order must be 1, 2 or 3");
  std::vector<std::string> out;
  const std::string folded = lowercase ? to_lower(text) : std::string(text);
  const auto un = static_cast<std::size_t>(n);
  if (unit == NgramUnit::character) {
    const std::u32string cps = utf8_decode(folded);
    if (cps.size() < un) return out;
    out.reserve(cps.size() - un + 1);
    for (std::size_t i = 0; i + un <= cps.size(); ++i)
      out.push_back(utf8_encode(std::u32string_view(cps).substr(i, un)));
  } else {
    const std::vector<std::string> toks = tokenize(folded);
    if (toks.size() < un) return out;
    for (std::size_t i = 0; i + un <= toks.size(); ++i) {
      std::string g = toks[i];
      for (std::size_t k = 1; k < un; ++k) {
        g += ' ';
        g += toks[i + k];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

NgramVocab fit_vocab(std::span<const std::string> texts, NgramUnit unit, int n,
                     std::size_t size_cap, bool lowercase) {
  if (n < 1 || n > 3) fail(ErrorCode::invalid_argument, "n-gram order must be 1, 2 or 3");
  if (texts.empty()) fail(ErrorCode::invalid_argument, "fit_vocab needs a nonempty corpus");
  std::map<std::string, std::size_t> counts;
  for (const std::string& t : texts)
    for (std::string& g : extract_ngrams(t, unit, n, lowercase)) ++counts[std::move(g)];

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > size_cap) ranked.resize(size_cap);

  NgramVocab vocab;
  vocab.unit = unit;
  vocab.n = n;
  vocab.size_cap = size_cap;
  vocab.lowercase = lowercase;
  for (auto& [term, count] : ranked) vocab.terms.push_back(term);
  vocab.reindex();
  return vocab;
}

SparseCounts vectorize(std::string_view text, const NgramVocab& vocab) {
  std::map<std::uint32_t, double> acc;
  for (const std::string& g : extract_ngrams(text, vocab.unit, vocab.n, vocab.lowercase)) {
    auto it = vocab.index.find(g);
    if (it != vocab.index.end()) acc[it->second] += 1.0;
  }
  return {acc.begin(), acc.end()};
}

Matrix vectorize_dense(std::span<const std::string> texts, const NgramVocab& vocab) {
  Matrix m(texts.size(), vocab.size());
  for (std::size_t i = 0; i < texts.size(); ++i)
    for (const auto& [col, count] : vectorize(texts[i], vocab)) m(i, col) = count;
  return m;
}

std::string escape_term(std::string_view term) {
  std::string out;
  for (char c : term) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape_term(std::string_view line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '\\' || i + 1 == line.size()) {
      out += line[i];
      continue;
    }
    const char e = line[++i];
    switch (e) {
      case 'n':
        out += '\n';
        break;
      case 'r':
        out += '\r';
        break;
      case 't':
        out += '\t';
        break;
      default:
        out += e;
    }
  }
  return out;
}

void save_vocab_terms(const std::filesystem::path& path, const NgramVocab& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write vocabulary " + path.string());
  for (const std::string& t : vocab.terms) out << escape_term(t) << '\n';
}

std::vector<std::string> load_vocab_terms(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open vocabulary " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) terms.push_back(unescape_term(line));
  return terms;
}

}  // namespace pqrank
