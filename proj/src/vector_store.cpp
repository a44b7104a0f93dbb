#include "textable/vector_store.hpp"

#include <charconv>
#include <cmath>
#include <optional>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/text.hpp"

namespace textable {

VectorStore::VectorStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) invalid("vector dimension must be positive");
}

void VectorStore::insert(std::string_view token, std::vector<double> vector) {
  if (vector.size() != dimension_) {
    invalid("token \"" + std::string(token) + "\" has dimension " + std::to_string(vector.size()) + ", expected " +
            std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) invalid("token \"" + std::string(token) + "\" has a non-finite component");
  }
  entries_.try_emplace(text::to_lower(token), std::move(vector));
}

const std::vector<double>* VectorStore::find(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && text::is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !text::is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_count(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

}  // namespace

VectorStore parse_vector_store(std::string_view content, const std::string& source) {
  std::optional<VectorStore> store;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const auto line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto fields = fields_of(line);
    if (fields.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    if (first && fields.size() == 2 && is_count(fields[0]) && is_count(fields[1])) {
      first = false;
      continue;  // "count dim" header
    }
    first = false;
    if (fields.size() < 2) invalid(where + "expected a token followed by at least one number");
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = parse_double(fields[i]);
      if (!v) invalid(where + "non-numeric field \"" + std::string(fields[i]) + "\"");
      values.push_back(*v);
    }
    if (!store) store.emplace(values.size());
    if (values.size() != store->dimension()) {
      invalid(where + "inconsistent dimension " + std::to_string(values.size()) + " (expected " +
              std::to_string(store->dimension()) + ")");
    }
    try {
      store->insert(fields[0], std::move(values));
    } catch (const Error& e) {
      invalid(where + e.what());
    }
  }
  if (!store || store->size() == 0) invalid(source + ": empty store");
  return std::move(*store);
}

VectorStore load_vector_store(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) invalid("vector store not found: " + path.string());
  return parse_vector_store(jsonl::read_file(path), path.string());
}

}  // namespace textable
