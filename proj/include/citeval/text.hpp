#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace citeval::text {

/// One decoded code point and the byte range it occupies.
struct CodePoint {
  char32_t value;
  std::size_t offset;
  std::size_t size;
};

/// Decodes the code point starting at byte `offset`. Ill-formed bytes decode
/// to U+FFFD and consume a single byte.
CodePoint decode_at(std::string_view s, std::size_t offset);

std::vector<CodePoint> decode(std::string_view s);
std::size_t codepoint_count(std::string_view s);
std::string encode(char32_t cp);

/// Byte length of the first `n` code points of `s` (or s.size()).
std::size_t prefix_bytes(std::string_view s, std::size_t n);

bool is_space(char32_t cp);
bool is_cjk_ideograph_or_kana(char32_t cp);
bool is_latin_letter(char32_t cp);
/// CJK symbols/punctuation and full-width forms, which tokenize one per char.
bool is_cjk_punct(char32_t cp);

enum class Script { cjk, latin };

/// Majority vote between CJK and Latin letters; ties and letter-free text
/// count as CJK.
Script dominant_script(std::string_view s);

/// Non-whitespace characters for CJK-dominant text, whitespace-delimited
/// words otherwise.
std::size_t measured_length(std::string_view s);

std::size_t word_count(std::string_view s);

std::string_view trim(std::string_view s);

/// NFC-normalized, whitespace-trimmed copy.
std::string normalize_key(std::string_view s);

/// BLEU tokens: every CJK ideograph, kana, hangul syllable or CJK
/// punctuation mark is its own token; other text splits on whitespace.
std::vector<std::string> bleu_tokens(std::string_view s);

}  // namespace citeval::text
