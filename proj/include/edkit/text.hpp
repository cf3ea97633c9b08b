#pragma once

// UTF-8 helpers. All offsets exposed by the toolkit count Unicode scalar
// values, never bytes.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include <boost/locale/encoding_utf.hpp>

#include "edkit/error.hpp"

namespace edkit::text {

inline std::u32string decode(std::string_view utf8) {
  try {
    return boost::locale::conv::utf_to_utf<char32_t>(
        utf8.data(), utf8.data() + utf8.size(), boost::locale::conv::stop);
  } catch (const boost::locale::conv::conversion_error&) {
    throw DataError("invalid UTF-8 in text: \"" +
                    std::string(utf8.substr(0, 60)) + "\"");
  }
}

inline std::string encode(std::u32string_view cps) {
  return boost::locale::conv::utf_to_utf<char>(cps.data(),
                                               cps.data() + cps.size());
}

inline std::size_t length(std::string_view utf8) { return decode(utf8).size(); }

/// Substring by scalar-value offsets [start, end). Caller guarantees bounds.
inline std::string slice(std::u32string_view cps, std::size_t start,
                         std::size_t end) {
  return encode(cps.substr(start, end - start));
}

inline bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

inline bool is_punct(char32_t c) {
  if (c < 0x80) return std::ispunct(static_cast<int>(c)) != 0;
  // Latin-1 punctuation: ¡ « · » ¿
  if (c == 0xA1 || c == 0xAB || c == 0xB7 || c == 0xBB || c == 0xBF) return true;
  if (c >= 0x2010 && c <= 0x2027) return true;  // dashes, quotes, ellipsis
  if (c >= 0x2030 && c <= 0x205E) return true;
  if (c >= 0x3001 && c <= 0x3003) return true;  // CJK comma, full stop
  if (c >= 0x3008 && c <= 0x3011) return true;  // CJK brackets
  if (c >= 0xFF01 && c <= 0xFF0F) return true;  // fullwidth forms
  if (c == 0xFF1A || c == 0xFF1B || c == 0xFF1F) return true;
  return false;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

/// Strips ASCII whitespace from both ends.
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

inline bool has_whitespace(std::string_view utf8) {
  const auto cps = decode(utf8);
  return std::any_of(cps.begin(), cps.end(), is_space);
}

inline std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

inline bool iequals_ascii(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace edkit::text
