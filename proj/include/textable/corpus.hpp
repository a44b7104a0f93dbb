#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace textable {

/// One topic-focused document; becomes one row of the extracted table.
struct Document {
  std::string id;
  std::string text;
};

/// Half-open byte range [start, end) of one sentence inside a document.
struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t begin, std::size_t finish) const { return start <= begin && finish <= end; }
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

class DocumentCollection {
 public:
  /// Throws invalid_input on an empty or duplicate id.
  void add(Document doc);

  const Document* find(std::string_view id) const;
  const Document& at(std::string_view id) const;
  /// File order index of a document id.
  std::size_t index_of(std::string_view id) const;

  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  auto begin() const { return docs_.begin(); }
  auto end() const { return docs_.end(); }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads line-delimited {"id": str, "text": str} records. Blank lines are skipped.
DocumentCollection load_documents(const std::filesystem::path& path);
void write_documents(const std::filesystem::path& path, const DocumentCollection& collection);

/// Rule-based sentence segmentation. A sentence ends after '.', '!' or '?' when
/// the terminator is followed by whitespace and then an uppercase letter, or by
/// end of text (possibly after trailing whitespace). Spans are trimmed of
/// surrounding whitespace; an unterminated tail is its own span.
std::vector<SentenceSpan> split_sentences(std::string_view text);

/// Index of the span containing byte offset `pos`, or spans.size() if none.
std::size_t span_containing(const std::vector<SentenceSpan>& spans, std::size_t pos);

}  // namespace textable
