#include "textable/evaluation.hpp"

#include <cstdio>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/text.hpp"

namespace textable {

namespace {

bool same_expected(const CanonicalValue& a, const CanonicalValue& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == CanonicalValue::Kind::text) return text::casefold(a.value) == text::casefold(b.value);
  return a.value == b.value;
}

}  // namespace

void GroundTruth::add(const std::string& document_id, const std::string& attribute, Annotation annotation) {
  auto& cell = cells_[{document_id, attribute}];
  if (annotation.canonical) {
    for (const auto& other : cell) {
      if (other.canonical && !same_expected(*other.canonical, *annotation.canonical)) {
        invalid("conflicting expected values for (" + document_id + ", " + attribute + "): \"" +
                other.canonical->value + "\" vs \"" + annotation.canonical->value + "\"");
      }
    }
  }
  cell.push_back(std::move(annotation));
  attributes_.insert(attribute);
}

std::span<const Annotation> GroundTruth::annotations(const std::string& document_id,
                                                     const std::string& attribute) const {
  auto it = cells_.find({document_id, attribute});
  if (it == cells_.end()) return {};
  return it->second;
}

std::size_t GroundTruth::support(const std::string& attribute) const {
  std::size_t n = 0;
  for (const auto& [key, anns] : cells_) {
    if (key.second == attribute && !anns.empty()) ++n;
  }
  return n;
}

CanonicalValue canonicalize_truth(std::string_view raw) {
  if (auto d = parse_date(raw)) return {CanonicalValue::Kind::date, *d};
  if (auto n = parse_number(raw)) return {CanonicalValue::Kind::number, *n};
  return {CanonicalValue::Kind::text, std::string(text::trim(raw))};
}

GroundTruth load_ground_truth(const std::filesystem::path& path, const DocumentCollection& collection) {
  if (!std::filesystem::exists(path)) invalid("ground-truth file not found: " + path.string());
  GroundTruth truth;
  jsonl::for_each(path, [&](const jsonl::json& record, std::size_t) {
    const auto doc_id = jsonl::required_string(record, "document_id");
    const auto attribute = jsonl::required_string(record, "attribute");
    const auto* doc = collection.find(doc_id);
    if (doc == nullptr) invalid("unknown document_id \"" + doc_id + "\"");
    Annotation a;
    a.start = jsonl::required_offset(record, "start");
    a.end = jsonl::required_offset(record, "end");
    if (a.start >= a.end || a.end > doc->text.size()) invalid("annotation span outside document " + doc_id);
    a.surface = doc->text.substr(a.start, a.end - a.start);
    if (auto raw = jsonl::optional_string(record, "canonical")) {
      a.canonical = canonicalize_truth(*raw);
      a.raw_canonical = *raw;
    }
    truth.add(doc_id, attribute, std::move(a));
  });
  return truth;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::vector<jsonl::json> records;
  for (const auto& [key, anns] : truth.cells()) {
    for (const auto& a : anns) {
      records.push_back({{"document_id", key.first},
                         {"attribute", key.second},
                         {"start", a.start},
                         {"end", a.end},
                         {"canonical", a.canonical ? jsonl::json(a.raw_canonical) : jsonl::json(nullptr)}});
    }
  }
  jsonl::write(path, records);
}

FeedbackDecision oracle_feedback(const GroundTruth& truth, const std::string& attribute, const Nugget& nugget) {
  for (const auto& a : truth.annotations(nugget.document_id, attribute)) {
    if (nugget.start < a.end && a.start < nugget.end) return FeedbackDecision::confirm;
  }
  return FeedbackDecision::reject;
}

bool cell_matches(const Cell& cell, std::span<const Annotation> annotations) {
  for (const auto& a : annotations) {
    if (a.canonical) {
      if (cell.value == *a.canonical) return true;
      if (text::casefold(cell.value.value) == text::casefold(a.canonical->value)) return true;
      if (text::casefold(cell.mention) == text::casefold(a.raw_canonical)) return true;
    } else if (cell.has_span()) {
      if (cell.start < a.end && a.start < cell.end) return true;
    } else if (text::casefold(cell.mention) == text::casefold(a.surface) ||
               text::casefold(cell.value.value) == text::casefold(a.surface)) {
      return true;
    }
  }
  return false;
}

ScoreReport score_table(const ExtractedTable& table, const GroundTruth& truth) {
  ScoreReport report;
  for (std::size_t a = 0; a < table.attributes.size(); ++a) {
    AttributeScores s;
    s.attribute = table.attributes[a];
    s.missing_from_truth = !truth.has_attribute(s.attribute);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto anns = truth.annotations(table.document_ids[r], s.attribute);
      const auto& cell = table.rows[r][a];
      if (!anns.empty()) ++s.support;
      if (cell) {
        if (!anns.empty() && cell_matches(*cell, anns)) {
          ++s.true_positives;
        } else {
          ++s.false_positives;
        }
      } else if (!anns.empty()) {
        ++s.false_negatives;
      }
    }
    const auto tp = static_cast<double>(s.true_positives);
    const auto p_den = static_cast<double>(s.true_positives + s.false_positives);
    const auto r_den = static_cast<double>(s.true_positives + s.false_negatives);
    s.precision = p_den > 0 ? tp / p_den : 0.0;
    s.recall = r_den > 0 ? tp / r_den : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    report.attributes.push_back(std::move(s));
  }
  double sum = 0.0;
  for (const auto& s : report.attributes) sum += s.f1;
  report.macro_f1 = report.attributes.empty() ? 0.0 : sum / static_cast<double>(report.attributes.size());
  return report;
}

std::string format_report(const ScoreReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %9s %9s %9s %8s\n", "attribute", "precision", "recall", "f1", "support");
  out += line;
  for (const auto& s : report.attributes) {
    std::snprintf(line, sizeof line, "%-24s %9.4f %9.4f %9.4f %8zu%s\n", s.attribute.c_str(), s.precision, s.recall,
                  s.f1, s.support, s.missing_from_truth ? "  (not in ground truth)" : "");
    out += line;
  }
  std::snprintf(line, sizeof line, "%-24s %29.4f\n", "macro avg f1", report.macro_f1);
  out += line;
  return out;
}

nlohmann::json report_to_json(const ScoreReport& report) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& s : report.attributes) {
    attrs.push_back({{"attribute", s.attribute},
                     {"precision", s.precision},
                     {"recall", s.recall},
                     {"f1", s.f1},
                     {"support", s.support},
                     {"tp", s.true_positives},
                     {"fp", s.false_positives},
                     {"fn", s.false_negatives},
                     {"missing_from_truth", s.missing_from_truth}});
  }
  return {{"attributes", attrs}, {"macro_f1", report.macro_f1}};
}

}  // namespace textable
