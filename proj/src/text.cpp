#include "textable/text.hpp"

namespace textable::text {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string casefold(std::string_view s) { return to_lower(trim(s)); }

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_word(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && is_word(s[j])) ++j;
    if (j > i) out.push_back(to_lower(s.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize_identifier(std::string_view s) {
  std::string spaced;
  spaced.reserve(s.size() * 2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (i > 0 && is_upper(c)) {
      const char prev = s[i - 1];
      const bool next_lower = i + 1 < s.size() && is_lower(s[i + 1]);
      if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) spaced.push_back(' ');
    }
    spaced.push_back(c);
  }
  return tokenize(spaced);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) pos = s.size();
    auto item = trim(s.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    start = pos + 1;
  }
  return out;
}

}  // namespace textable::text
