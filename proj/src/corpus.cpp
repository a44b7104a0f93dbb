#include "textable/corpus.hpp"

#include <algorithm>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/text.hpp"

namespace textable {

void DocumentCollection::add(Document doc) {
  if (doc.id.empty()) invalid("document id must be non-empty");
  if (index_.contains(doc.id)) invalid("duplicate document id \"" + doc.id + "\"");
  index_.emplace(doc.id, docs_.size());
  docs_.push_back(std::move(doc));
}

const Document* DocumentCollection::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &docs_[it->second];
}

const Document& DocumentCollection::at(std::string_view id) const {
  const auto* doc = find(id);
  if (doc == nullptr) fail(ErrorKind::not_found, "unknown document \"" + std::string(id) + "\"");
  return *doc;
}

std::size_t DocumentCollection::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) fail(ErrorKind::not_found, "unknown document \"" + std::string(id) + "\"");
  return it->second;
}

DocumentCollection load_documents(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) invalid("document file not found: " + path.string());
  DocumentCollection collection;
  jsonl::for_each(path, [&](const jsonl::json& record, std::size_t) {
    collection.add(Document{jsonl::required_string(record, "id"), jsonl::required_string(record, "text")});
  });
  return collection;
}

void write_documents(const std::filesystem::path& path, const DocumentCollection& collection) {
  std::vector<jsonl::json> records;
  records.reserve(collection.size());
  for (const auto& doc : collection) records.push_back({{"id", doc.id}, {"text", doc.text}});
  jsonl::write(path, records);
}

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// True when the terminator at `pos` closes a sentence.
bool ends_sentence(std::string_view text, std::size_t pos) {
  const std::size_t next = pos + 1;
  if (next == text.size()) return true;
  if (!text::is_space(text[next])) return false;
  std::size_t k = next;
  while (k < text.size() && text::is_space(text[k])) ++k;
  return k == text.size() || text::is_upper(text[k]);
}

}  // namespace

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && text::is_space(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    std::size_t last_visible = i;
    bool closed = false;
    for (; i < n; ++i) {
      if (text::is_space(text[i])) continue;
      last_visible = i;
      if (is_terminator(text[i]) && ends_sentence(text, i)) {
        ++i;
        closed = true;
        break;
      }
    }
    spans.push_back({start, closed ? i : last_visible + 1});
  }
  return spans;
}

std::size_t span_containing(const std::vector<SentenceSpan>& spans, std::size_t pos) {
  auto it = std::upper_bound(spans.begin(), spans.end(), pos,
                             [](std::size_t p, const SentenceSpan& s) { return p < s.start; });
  if (it == spans.begin()) return spans.size();
  --it;
  return pos < it->end ? static_cast<std::size_t>(it - spans.begin()) : spans.size();
}

}  // namespace textable
