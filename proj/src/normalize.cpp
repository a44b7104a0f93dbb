#include "textable/normalize.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>

#include "textable/text.hpp"

namespace textable {

std::string_view to_string(CanonicalValue::Kind kind) {
  switch (kind) {
    case CanonicalValue::Kind::date: return "date";
    case CanonicalValue::Kind::number: return "number";
    case CanonicalValue::Kind::text: return "text";
  }
  return "text";
}

std::optional<CanonicalValue::Kind> parse_kind(std::string_view s) {
  if (s == "date") return CanonicalValue::Kind::date;
  if (s == "number") return CanonicalValue::Kind::number;
  if (s == "text") return CanonicalValue::Kind::text;
  return std::nullopt;
}

namespace {

// Longer names first so alternation prefers "march" over "mar".
constexpr const char* kMonthPattern =
    "(january|february|march|april|may|june|july|august|september|october|november|december|"
    "januar|februar|m\xC3\xA4rz|maerz|mai|juni|juli|oktober|dezember|"
    "sept|jan|feb|mar|apr|jun|jul|aug|sep|oct|okt|nov|dec|dez)\\.?";

struct MonthName {
  const char* name;
  int month;
};

constexpr std::array<MonthName, 35> kMonths{{
    {"january", 1},  {"february", 2}, {"march", 3},     {"april", 4},    {"may", 5},
    {"june", 6},     {"july", 7},     {"august", 8},    {"september", 9}, {"october", 10},
    {"november", 11}, {"december", 12}, {"januar", 1},  {"februar", 2},  {"m\xC3\xA4rz", 3},
    {"maerz", 3},    {"mai", 5},      {"juni", 6},      {"juli", 7},     {"oktober", 10},
    {"dezember", 12}, {"sept", 9},    {"jan", 1},       {"feb", 2},      {"mar", 3},
    {"apr", 4},      {"jun", 6},      {"jul", 7},       {"aug", 8},      {"sep", 9},
    {"oct", 10},     {"okt", 10},     {"nov", 11},      {"dec", 12},     {"dez", 12},
}};

int month_number(std::string_view raw) {
  std::string name = text::to_lower(raw);
  if (!name.empty() && name.back() == '.') name.pop_back();
  for (const auto& m : kMonths) {
    if (name == m.name) return m.month;
  }
  return 0;
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in(int y, int m) {
  static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : days[static_cast<std::size_t>(m - 1)];
}

std::optional<std::string> make_iso(int y, int m, int d) {
  if (y < 1 || y > 9999 || m < 1 || m > 12 || d < 1 || d > days_in(y, m)) return std::nullopt;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return std::string(buf);
}

enum class Form { month_day_year, day_month_year, dotted, iso, slashed };

struct DatePattern {
  Form form;
  std::regex re;
};

const std::vector<DatePattern>& date_patterns() {
  static const std::vector<DatePattern> patterns = [] {
    const auto flags = std::regex::ECMAScript | std::regex::icase;
    const std::string month = kMonthPattern;
    std::vector<DatePattern> p;
    p.push_back({Form::month_day_year,
                 std::regex("\\b" + month + "\\s+(\\d{1,2})(?:st|nd|rd|th)?,?\\s+(\\d{4})\\b", flags)});
    p.push_back({Form::day_month_year,
                 std::regex("\\b(\\d{1,2})(?:st|nd|rd|th|\\.)?\\s+(?:of\\s+)?" + month + ",?\\s+(\\d{4})\\b", flags)});
    p.push_back({Form::dotted, std::regex("\\b(\\d{1,2})\\.(\\d{1,2})\\.(\\d{4})\\b", flags)});
    p.push_back({Form::iso, std::regex("\\b(\\d{4})-(\\d{1,2})-(\\d{1,2})\\b", flags)});
    p.push_back({Form::slashed, std::regex("\\b(\\d{1,2})/(\\d{1,2})/(\\d{4})\\b", flags)});
    return p;
  }();
  return patterns;
}

template <class Match>
std::optional<std::string> date_from(Form form, const Match& m) {
  auto num = [&](int i) { return std::stoi(m[i].str()); };
  switch (form) {
    case Form::month_day_year: return make_iso(num(3), month_number(m[1].str()), num(2));
    case Form::day_month_year: return make_iso(num(3), month_number(m[2].str()), num(1));
    case Form::dotted: return make_iso(num(3), num(2), num(1));
    case Form::iso: return make_iso(num(1), num(2), num(3));
    case Form::slashed: return make_iso(num(3), num(1), num(2));
  }
  return std::nullopt;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return text::is_digit(c); });
}

// "1,234,567" style with the given separator, or plain digits.
bool grouped_digits(std::string_view s, char sep) {
  if (all_digits(s)) return true;
  auto first = s.find(sep);
  if (first == std::string_view::npos || first == 0 || first > 3) return false;
  if (!all_digits(s.substr(0, first))) return false;
  std::size_t pos = first;
  while (pos < s.size()) {
    if (s[pos] != sep || pos + 4 > s.size() || !all_digits(s.substr(pos + 1, 3))) return false;
    pos += 4;
  }
  return true;
}

std::string strip(std::string_view s, char c) {
  std::string out;
  for (char ch : s) {
    if (ch != c) out.push_back(ch);
  }
  return out;
}

std::string canonical_decimal(bool negative, std::string integer, std::string fraction) {
  auto nz = integer.find_first_not_of('0');
  integer = nz == std::string::npos ? "0" : integer.substr(nz);
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  std::string out = integer;
  if (!fraction.empty()) out += "." + fraction;
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

}  // namespace

std::optional<std::string> parse_date(std::string_view mention) {
  const std::string s(text::trim(mention));
  std::smatch m;
  for (const auto& p : date_patterns()) {
    if (std::regex_match(s, m, p.re)) {
      if (auto iso = date_from(p.form, m)) return iso;
    }
  }
  return std::nullopt;
}

std::vector<DateMatch> find_dates(std::string_view text) {
  std::vector<DateMatch> found;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  for (const auto& p : date_patterns()) {
    for (std::cregex_iterator it(begin, end, p.re), last; it != last; ++it) {
      const auto& m = *it;
      if (auto iso = date_from(p.form, m)) {
        const auto start = static_cast<std::size_t>(m.position(0));
        found.push_back({start, start + static_cast<std::size_t>(m.length(0)), std::move(*iso)});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const DateMatch& a, const DateMatch& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  std::vector<DateMatch> kept;
  for (auto& d : found) {
    if (kept.empty() || d.start >= kept.back().end) kept.push_back(std::move(d));
  }
  return kept;
}

std::optional<std::string> parse_number(std::string_view mention) {
  std::string_view s = text::trim(mention);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !text::is_digit(s.front()) || !text::is_digit(s.back())) return std::nullopt;
  if (s.find_first_not_of("0123456789,.") != std::string_view::npos) return std::nullopt;

  const auto last_comma = s.rfind(',');
  if (last_comma != std::string_view::npos) {
    const auto tail = s.substr(last_comma + 1);
    if (tail.size() <= 2 && all_digits(tail)) {
      // German style: '.' groups, ',' is the decimal mark.
      const auto head = s.substr(0, last_comma);
      if (!grouped_digits(head, '.')) return std::nullopt;
      return canonical_decimal(negative, strip(head, '.'), std::string(tail));
    }
  }
  const auto dot = s.find('.');
  if (dot != std::string_view::npos && s.find('.', dot + 1) != std::string_view::npos) return std::nullopt;
  const auto head = s.substr(0, dot == std::string_view::npos ? s.size() : dot);
  const auto tail = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (!grouped_digits(head, ',')) return std::nullopt;
  if (dot != std::string_view::npos && !all_digits(tail)) return std::nullopt;
  return canonical_decimal(negative, strip(head, ','), std::string(tail));
}

bool is_date_label(std::string_view label) { return text::to_lower(label) == "date"; }

bool is_number_label(std::string_view label) {
  const auto l = text::to_lower(label);
  return l == "number" || l == "cardinal";
}

CanonicalValue normalize_mention(std::string_view label, std::string_view mention) {
  if (is_date_label(label)) {
    if (auto iso = parse_date(mention)) return {CanonicalValue::Kind::date, std::move(*iso)};
  } else if (is_number_label(label)) {
    if (auto num = parse_number(mention)) return {CanonicalValue::Kind::number, std::move(*num)};
  }
  return {CanonicalValue::Kind::text, std::string(text::trim(mention))};
}

}  // namespace textable
