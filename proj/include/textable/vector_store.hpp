#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace textable {

/// Static token -> vector table standing in for a sentence/word encoder.
/// Immutable after loading; all lookups are lowercase.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dimension);

  /// Lowercases `token`; keeps the first vector for duplicate tokens.
  /// Throws invalid_input on a dimension mismatch or a non-finite entry.
  void insert(std::string_view token, std::vector<double> vector);

  const std::vector<double>* find(const std::string& token) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Plain-text word-vector format: optional "count dim" header, then
/// "token v1 v2 ... vd" per line, whitespace separated.
VectorStore load_vector_store(const std::filesystem::path& path);
VectorStore parse_vector_store(std::string_view content, const std::string& source = "<memory>");

}  // namespace textable
