#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textable {

/// The data value behind a mention.
struct CanonicalValue {
  enum class Kind { date, number, text };

  Kind kind = Kind::text;
  std::string value;  // YYYY-MM-DD | canonical decimal | trimmed text

  friend bool operator==(const CanonicalValue&, const CanonicalValue&) = default;
};

std::string_view to_string(CanonicalValue::Kind kind);
std::optional<CanonicalValue::Kind> parse_kind(std::string_view s);

/// Supported date forms (month names are English or German, case-insensitive,
/// full or abbreviated with optional '.'):
///   "October 25, 1999"  "Oct. 25th 1999"      month-name, month first
///   "25 October 1999"   "25. Oktober 1999"    month-name, day first
///   "25.10.1999"                               dotted, day first
///   "1999-10-25"                               dashed ISO, year first
///   "10/25/1999"                               slashed, month first
/// Returns YYYY-MM-DD for a valid calendar date matching one form exactly.
std::optional<std::string> parse_date(std::string_view mention);

/// A located date inside a longer text, as produced by find_dates.
struct DateMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string iso;
};

/// All non-overlapping valid date occurrences, ordered by start.
std::vector<DateMatch> find_dates(std::string_view text);

/// Canonical decimal for a number mention: grouping separators removed, '.'
/// as decimal point, no redundant zeros ("1,234.50" -> "1234.5"). German style
/// "1.234,5" is accepted when ',' is followed by exactly one or two final digits.
std::optional<std::string> parse_number(std::string_view mention);

/// Labels whose mentions normalize as dates / numbers.
bool is_date_label(std::string_view label);
bool is_number_label(std::string_view label);

/// Total: falls back to kind=text with the trimmed mention.
CanonicalValue normalize_mention(std::string_view label, std::string_view mention);

}  // namespace textable
