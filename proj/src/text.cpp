#include "citeval/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "citeval/errors.hpp"

namespace citeval::text {

CodePoint decode_at(std::string_view s, std::size_t offset) {
  auto i = static_cast<int32_t>(offset);
  const auto length = static_cast<int32_t>(s.size());
  UChar32 c = 0;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, length, c);
  if (c < 0) return {U'�', offset, 1};
  return {static_cast<char32_t>(c), offset, static_cast<std::size_t>(i) - offset};
}

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    auto cp = decode_at(s, i);
    out.push_back(cp);
    i += cp.size;
  }
  return out;
}

std::size_t codepoint_count(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++n) i += decode_at(s, i).size;
  return n;
}

std::string encode(char32_t cp) {
  uint8_t buf[4];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(cp), error);
  if (error) return "\xEF\xBF\xBD";
  return std::string(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::size_t prefix_bytes(std::string_view s, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < n && i < s.size(); ++k) i += decode_at(s, i).size;
  return i;
}

bool is_space(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_cjk_ideograph_or_kana(char32_t cp) {
  UErrorCode err = U_ZERO_ERROR;
  switch (uscript_getScript(static_cast<UChar32>(cp), &err)) {
    case USCRIPT_HAN:
    case USCRIPT_HIRAGANA:
    case USCRIPT_KATAKANA:
    case USCRIPT_HANGUL:
    case USCRIPT_BOPOMOFO:
      return u_isalpha(static_cast<UChar32>(cp)) != 0 ||
             u_charType(static_cast<UChar32>(cp)) == U_OTHER_LETTER;
    default:
      return false;
  }
}

bool is_latin_letter(char32_t cp) {
  UErrorCode err = U_ZERO_ERROR;
  return uscript_getScript(static_cast<UChar32>(cp), &err) == USCRIPT_LATIN &&
         u_isalpha(static_cast<UChar32>(cp)) != 0;
}

bool is_cjk_punct(char32_t cp) {
  return (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFFEF) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) || cp == U'…' || cp == U'—' ||
         (cp >= 0x2018 && cp <= 0x201F);
}

Script dominant_script(std::string_view s) {
  std::size_t cjk = 0;
  std::size_t latin = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto cp = decode_at(s, i);
    i += cp.size;
    if (is_cjk_ideograph_or_kana(cp.value)) {
      ++cjk;
    } else if (is_latin_letter(cp.value)) {
      ++latin;
    }
  }
  return latin > cjk ? Script::latin : Script::cjk;
}

std::size_t word_count(std::string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < s.size();) {
    auto cp = decode_at(s, i);
    i += cp.size;
    if (is_space(cp.value)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words;
}

std::size_t measured_length(std::string_view s) {
  if (dominant_script(s) == Script::latin) return word_count(s);
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto cp = decode_at(s, i);
    if (!is_space(cp.value)) ++n;
    i += cp.size;
  }
  return n;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    auto cp = decode_at(s, begin);
    if (!is_space(cp.value)) break;
    begin += cp.size;
  }
  std::size_t end = begin;
  for (std::size_t i = begin; i < s.size();) {
    auto cp = decode_at(s, i);
    i += cp.size;
    if (!is_space(cp.value)) end = i;
  }
  return s.substr(begin, end - begin);
}

std::string normalize_key(std::string_view s) {
  UErrorCode err = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(err);
  if (U_FAILURE(err)) throw Error("ICU NFC normalizer unavailable");
  auto in = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString normalized = nfc->normalize(in, err);
  if (U_FAILURE(err)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return std::string(trim(out));
}

std::vector<std::string> bleu_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size();) {
    auto cp = decode_at(s, i);
    i += cp.size;
    if (is_space(cp.value)) {
      flush();
    } else if (is_cjk_ideograph_or_kana(cp.value) || is_cjk_punct(cp.value)) {
      flush();
      tokens.emplace_back(s.substr(cp.offset, cp.size));
    } else {
      current.append(s.substr(cp.offset, cp.size));
    }
  }
  flush();
  return tokens;
}

}  // namespace citeval::text
