#include "textable/extraction.hpp"

#include <algorithm>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/text.hpp"

namespace textable {

std::string make_nugget_id(std::string_view document_id, std::size_t start, std::size_t end, std::string_view label) {
  std::string id(document_id);
  id += '#';
  id += std::to_string(start);
  id += '-';
  id += std::to_string(end);
  id += '#';
  id += label;
  return id;
}

double relative_position(std::size_t start, std::size_t text_length) {
  return static_cast<double>(start) / static_cast<double>(std::max<std::size_t>(1, text_length));
}

const std::vector<ExtractorDescriptor>& builtin_extractors() {
  static const std::vector<ExtractorDescriptor> extractors{
      {"date", {"DATE"}},
      {"number", {"NUMBER"}},
      {"proper", {"ENTITY"}},
  };
  return extractors;
}

namespace {

struct Hit {
  std::size_t start;
  std::size_t end;
  const char* label;
};

bool overlaps(const Hit& a, const Hit& b) { return a.start < b.end && b.start < a.end; }

const std::regex& number_regex() {
  // English grouping, German grouping, German decimal, plain.
  static const std::regex re(
      "\\d{1,3}(?:,\\d{3})+(?:\\.\\d+)?|\\d{1,3}(?:\\.\\d{3})+,\\d{1,2}(?!\\d)|\\d+,\\d{1,2}(?!\\d)|\\d+(?:\\.\\d+)?");
  return re;
}

void find_numbers(std::string_view sentence, std::size_t base, std::vector<Hit>& out) {
  const auto* b = sentence.data();
  const auto* e = b + sentence.size();
  for (std::cregex_iterator it(b, e, number_regex()), last; it != last; ++it) {
    const auto s = static_cast<std::size_t>(it->position(0));
    const auto f = s + static_cast<std::size_t>(it->length(0));
    if (s > 0) {
      const char prev = sentence[s - 1];
      if (text::is_word(prev)) continue;
      if ((prev == ',' || prev == '.') && s > 1 && text::is_digit(sentence[s - 2])) continue;
    }
    if (f < sentence.size()) {
      const char next = sentence[f];
      if (text::is_word(next)) continue;
      if ((next == ',' || next == '.') && f + 1 < sentence.size() && text::is_digit(sentence[f + 1])) continue;
    }
    out.push_back({base + s, base + f, "NUMBER"});
  }
}

bool is_joiner(char c) { return c == '\'' || c == '-' || c == '&'; }

// Maximal runs of capitalized words; the sentence-initial word never starts a run.
void find_proper_runs(std::string_view sentence, std::size_t base, std::vector<Hit>& out) {
  struct Word {
    std::size_t start, end;
  };
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (!text::is_word(sentence[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sentence.size() &&
           (text::is_word(sentence[j]) ||
            (is_joiner(sentence[j]) && j + 1 < sentence.size() && text::is_word(sentence[j + 1])))) {
      ++j;
    }
    words.push_back({i, j});
    i = j;
  }
  auto capitalized = [&](const Word& w) { return text::is_upper(sentence[w.start]); };
  auto space_only = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to; ++k) {
      if (sentence[k] != ' ' && sentence[k] != '\t') return false;
    }
    return true;
  };
  std::size_t w = 1;  // skip the sentence-initial word
  while (w < words.size()) {
    if (!capitalized(words[w])) {
      ++w;
      continue;
    }
    std::size_t last = w;
    while (last + 1 < words.size() && capitalized(words[last + 1]) &&
           space_only(words[last].end, words[last + 1].start)) {
      ++last;
    }
    out.push_back({base + words[w].start, base + words[last].end, "ENTITY"});
    w = last + 1;
  }
}

// Adds hits from `candidates` that do not overlap anything already accepted.
void accept_disjoint(std::vector<Hit>& accepted, const std::vector<Hit>& candidates) {
  std::vector<Hit> added;
  for (const auto& c : candidates) {
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Hit& a) { return overlaps(a, c); });
    if (!clash) added.push_back(c);
  }
  accepted.insert(accepted.end(), added.begin(), added.end());
}

}  // namespace

Nugget make_nugget(const Document& document, const std::vector<SentenceSpan>& spans, std::string label,
                   std::size_t start, std::size_t end, std::optional<std::string> mention,
                   std::optional<std::string> context) {
  const std::string id = make_nugget_id(document.id, start, end, label);
  if (label.empty()) invalid("nugget " + id + ": empty label");
  if (start >= end || end > document.text.size()) {
    invalid("nugget " + id + ": span [" + std::to_string(start) + "," + std::to_string(end) +
            ") outside document of length " + std::to_string(document.text.size()));
  }
  std::string slice = document.text.substr(start, end - start);
  if (mention && *mention != slice) {
    invalid("nugget " + id + ": mention \"" + *mention + "\" does not match document text \"" + slice + "\"");
  }

  Nugget n;
  n.id = id;
  n.document_id = document.id;
  n.label = std::move(label);
  n.mention = std::move(slice);
  n.start = start;
  n.end = end;
  n.position = relative_position(start, document.text.size());
  if (context) {
    if (context->find(n.mention) == std::string::npos) {
      invalid("nugget " + id + ": context sentence does not contain the mention");
    }
    n.context_sentence = std::move(*context);
  } else {
    const auto first = span_containing(spans, start);
    const auto last = span_containing(spans, end - 1);
    const std::size_t ctx_start = first < spans.size() ? std::min(spans[first].start, start) : start;
    const std::size_t ctx_end = last < spans.size() ? std::max(spans[last].end, end) : end;
    n.context_sentence = document.text.substr(ctx_start, ctx_end - ctx_start);
  }
  n.canonical = normalize_mention(n.label, n.mention);
  return n;
}

std::vector<Nugget> extract_builtin(const Document& document, const std::vector<SentenceSpan>& spans) {
  std::vector<Nugget> nuggets;
  const std::string_view text = document.text;
  for (const auto& span : spans) {
    const auto sentence = text.substr(span.start, span.size());
    std::vector<Hit> dates;
    for (const auto& d : find_dates(sentence)) dates.push_back({span.start + d.start, span.start + d.end, "DATE"});
    std::vector<Hit> numbers;
    find_numbers(sentence, span.start, numbers);
    std::vector<Hit> proper;
    find_proper_runs(sentence, span.start, proper);

    std::vector<Hit> accepted = dates;
    accept_disjoint(accepted, numbers);
    accept_disjoint(accepted, proper);
    for (const auto& h : accepted) {
      nuggets.push_back(make_nugget(document, spans, h.label, h.start, h.end, std::nullopt,
                                    std::string(sentence)));
    }
  }
  std::sort(nuggets.begin(), nuggets.end(), [](const Nugget& a, const Nugget& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.label < b.label;
  });
  return nuggets;
}

std::vector<Nugget> extract_collection(const DocumentCollection& collection) {
  const auto& docs = collection.documents();
  std::vector<std::vector<Nugget>> per_doc(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& doc = docs[static_cast<std::size_t>(i)];
    per_doc[static_cast<std::size_t>(i)] = extract_builtin(doc, split_sentences(doc.text));
  }
  std::vector<Nugget> all;
  for (auto& v : per_doc) std::move(v.begin(), v.end(), std::back_inserter(all));
  return all;
}

std::vector<Nugget> import_interchange(const std::filesystem::path& path, const DocumentCollection& collection) {
  if (!std::filesystem::exists(path)) invalid("nugget file not found: " + path.string());
  std::vector<Nugget> nuggets;
  std::unordered_map<std::string, std::vector<SentenceSpan>> spans_cache;
  std::unordered_set<std::string> seen;
  jsonl::for_each(path, [&](const jsonl::json& record, std::size_t) {
    const auto doc_id = jsonl::required_string(record, "document_id");
    const auto* doc = collection.find(doc_id);
    if (doc == nullptr) invalid("unknown document_id \"" + doc_id + "\"");
    auto label = jsonl::required_string(record, "label");
    auto mention = jsonl::required_string(record, "mention");
    const auto start = jsonl::required_offset(record, "start");
    const auto end = jsonl::required_offset(record, "end");
    auto context = jsonl::optional_string(record, "context_sentence");
    auto it = spans_cache.find(doc_id);
    if (it == spans_cache.end()) it = spans_cache.emplace(doc_id, split_sentences(doc->text)).first;
    auto nugget = make_nugget(*doc, it->second, std::move(label), start, end, std::move(mention), std::move(context));
    if (!seen.insert(nugget.id).second) invalid("duplicate nugget " + nugget.id);
    nuggets.push_back(std::move(nugget));
  });
  return nuggets;
}

nlohmann::json to_interchange(const Nugget& nugget) {
  return {{"document_id", nugget.document_id}, {"label", nugget.label},
          {"mention", nugget.mention},         {"start", nugget.start},
          {"end", nugget.end},                 {"context_sentence", nugget.context_sentence}};
}

void write_interchange(const std::filesystem::path& path, std::span<const Nugget> nuggets) {
  std::vector<jsonl::json> records;
  records.reserve(nuggets.size());
  for (const auto& n : nuggets) records.push_back(to_interchange(n));
  jsonl::write(path, records);
}

}  // namespace textable
