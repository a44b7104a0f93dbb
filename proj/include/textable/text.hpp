#pragma once

#include <string>
#include <string_view>
#include <vector>

// Byte-level text helpers. Text is UTF-8; only ASCII letters get case treatment,
// bytes >= 0x80 are treated as word characters.
namespace textable::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }
inline bool is_word(char c) { return is_alnum(c) || is_high(c); }

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Trimmed, lowercased copy; used for case-insensitive comparisons.
std::string casefold(std::string_view s);

/// Lowercase tokens, split on every non-word character.
std::vector<std::string> tokenize(std::string_view s);

/// Like tokenize, but also splits camelCase and acronym boundaries
/// ("departureCity" -> departure city, "HTTPServer" -> http server).
std::vector<std::string> tokenize_identifier(std::string_view s);

/// Comma-separated list with surrounding whitespace removed; empty items dropped.
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace textable::text
