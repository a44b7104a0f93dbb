#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "textable/corpus.hpp"
#include "textable/normalize.hpp"

namespace textable {

/// A label-mention pair with the signals used for embedding.
struct Nugget {
  std::string id;  // "<document_id>#<start>-<end>#<label>"
  std::string document_id;
  std::string label;
  std::string mention;
  std::size_t start = 0;  // byte offsets into the document text
  std::size_t end = 0;
  std::string context_sentence;
  double position = 0.0;  // start / max(1, document length)
  std::optional<CanonicalValue> canonical;
};

struct ExtractorDescriptor {
  std::string name;
  std::set<std::string> labels_emitted;
};

std::string make_nugget_id(std::string_view document_id, std::size_t start, std::size_t end, std::string_view label);
double relative_position(std::size_t start, std::size_t text_length);

/// The built-in rule extractors: "date" (DATE), "number" (NUMBER), "proper" (ENTITY).
const std::vector<ExtractorDescriptor>& builtin_extractors();

/// Runs the rule extractors sentence by sentence. Overlaps are resolved by
/// priority DATE > NUMBER > ENTITY. Output is sorted by start offset.
std::vector<Nugget> extract_builtin(const Document& document, const std::vector<SentenceSpan>& spans);

/// extract_builtin over every document (in parallel), concatenated in collection order.
std::vector<Nugget> extract_collection(const DocumentCollection& collection);

/// Builds a validated nugget over `document.text[start, end)`. When `context`
/// is absent the enclosing sentence(s) from `spans` are used. Throws
/// invalid_input naming the nugget id if the span is out of range, the mention
/// disagrees with the slice, or the context does not contain the mention.
Nugget make_nugget(const Document& document, const std::vector<SentenceSpan>& spans, std::string label,
                   std::size_t start, std::size_t end, std::optional<std::string> mention = std::nullopt,
                   std::optional<std::string> context = std::nullopt);

/// Reads the line-delimited interchange format:
///   {"document_id", "label", "mention", "start", "end", "context_sentence": str|null}
std::vector<Nugget> import_interchange(const std::filesystem::path& path, const DocumentCollection& collection);

nlohmann::json to_interchange(const Nugget& nugget);
void write_interchange(const std::filesystem::path& path, std::span<const Nugget> nuggets);

}  // namespace textable
