#pragma once
// Text primitives shared by every feature family: UTF-8 handling,
// tokenization and syllable counting.

#include <string>
#include <string_view>
#include <vector>

namespace pqrank {

// UTF-8 <-> code points. Invalid sequences decode to U+FFFD.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
void utf8_append(std::string& out, char32_t cp);

// ASCII case folding; other code points pass through unchanged.
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

// Straight U+0022 and typographic U+201C / U+201D.
bool is_double_quote(char32_t cp);
bool is_space(char32_t cp);
bool is_punct(char32_t cp);

// True when every character is an ASCII letter (and there is at least one).
bool is_alphabetic_word(std::string_view word);
// True when the token has no letters or digits.
bool is_punct_token(std::string_view token);

// Whitespace split followed by peeling punctuation off token edges. Double
// quote characters always become tokens of their own, even mid-word.
// Deterministic, and idempotent under join-with-spaces.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Vowel-group count over the word's letters (a e i o u y) with these
// adjustments, floored at 1:
//   - trailing silent "e" is dropped, except consonant+"le" ("table");
//   - trailing "ed" is silent unless preceded by t or d ("jumped", "wanted");
//   - trailing "es" is silent unless preceded by s, x, z, c, g, or "ch"/"sh".
// Words without letters count as 1.
int count_syllables(std::string_view word);

}  // namespace pqrank
