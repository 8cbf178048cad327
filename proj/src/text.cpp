#include "pqrank/text.hpp"

#include <cctype>

namespace pqrank {

namespace {
constexpr char32_t kReplacement = 0xFFFD;
}  // namespace

std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + extra >= s.size()) {
      out.push_back(kReplacement);
      break;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) utf8_append(out, cp);
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

bool is_double_quote(char32_t cp) { return cp == U'"' || cp == 0x201C || cp == 0x201D; }

bool is_space(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x00A0:  // no-break space
    case 0x2009:  // thin space
    case 0x200A:
    case 0x3000:
      return true;
    default:
      return false;
  }
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  switch (cp) {
    case 0x2018:  // single quotes
    case 0x2019:
    case 0x201C:  // double quotes
    case 0x201D:
    case 0x2013:  // en / em dash
    case 0x2014:
    case 0x2026:  // ellipsis
    case 0x00AB:  // guillemets
    case 0x00BB:
      return true;
    default:
      return false;
  }
}

bool is_alphabetic_word(std::string_view word) {
  if (word.empty()) return false;
  for (char c : word)
    if (!std::isalpha(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_punct_token(std::string_view token) {
  for (char32_t cp : utf8_decode(token)) {
    if (cp >= 0x80 && !is_punct(cp) && !is_space(cp)) return false;
    if (cp < 0x80 && std::isalnum(static_cast<int>(cp))) return false;
  }
  return true;
}

namespace {

void emit_chunk(std::u32string_view chunk, std::vector<std::string>& out) {
  // Split around embedded double quotes first, then peel edge punctuation.
  std::size_t start = 0;
  for (std::size_t i = 0; i <= chunk.size(); ++i) {
    if (i < chunk.size() && !is_double_quote(chunk[i])) continue;
    std::u32string_view piece = chunk.substr(start, i - start);
    std::size_t lo = 0;
    std::size_t hi = piece.size();
    while (lo < hi && is_punct(piece[lo])) {
      out.push_back(utf8_encode(piece.substr(lo, 1)));
      ++lo;
    }
    std::vector<std::string> trailing;
    while (hi > lo && is_punct(piece[hi - 1])) {
      trailing.push_back(utf8_encode(piece.substr(hi - 1, 1)));
      --hi;
    }
    if (hi > lo) out.push_back(utf8_encode(piece.substr(lo, hi - lo)));
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.push_back(*it);
    if (i < chunk.size()) out.push_back(utf8_encode(chunk.substr(i, 1)));
    start = i + 1;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  const std::u32string cps = utf8_decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j])) ++j;
    if (j > i) emit_chunk(std::u32string_view(cps).substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

int count_syllables(std::string_view word) {
  std::string w;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (w.empty()) return 1;

  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }

  const std::size_t n = w.size();
  if (groups > 1) {
    if (ends_with(w, "le") && n >= 3 && !is_vowel(w[n - 3])) {
      // consonant + "le" keeps its syllable
    } else if (ends_with(w, "ed") && n >= 3) {
      if (w[n - 3] != 't' && w[n - 3] != 'd' && !is_vowel(w[n - 3])) --groups;
    } else if (ends_with(w, "es") && n >= 3) {
      const char p = w[n - 3];
      const bool sibilant = p == 's' || p == 'x' || p == 'z' || p == 'c' || p == 'g' ||
                            ends_with(w, "ches") || ends_with(w, "shes");
      if (!sibilant && !is_vowel(p)) --groups;
    } else if (w.back() == 'e' && !is_vowel(w[n - 2])) {
      --groups;
    }
  }
  return groups < 1 ? 1 : groups;
}

}  // namespace pqrank
