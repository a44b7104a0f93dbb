#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "textable/corpus.hpp"
#include "textable/extraction.hpp"
#include "textable/matching.hpp"
#include "textable/table.hpp"

namespace textable {

struct Annotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<CanonicalValue> canonical;
  std::string raw_canonical;  // as written in the file
  std::string surface;        // document text under [start, end)
};

/// Span-level annotations per (document, attribute).
class GroundTruth {
 public:
  /// Throws invalid_input if the cell already designates a different canonical value.
  void add(const std::string& document_id, const std::string& attribute, Annotation annotation);

  std::span<const Annotation> annotations(const std::string& document_id, const std::string& attribute) const;
  bool has_attribute(const std::string& attribute) const { return attributes_.contains(attribute); }
  const std::set<std::string>& attributes() const { return attributes_; }
  /// Number of annotated cells for the attribute.
  std::size_t support(const std::string& attribute) const;
  const std::map<std::pair<std::string, std::string>, std::vector<Annotation>>& cells() const { return cells_; }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<Annotation>> cells_;
  std::set<std::string> attributes_;
};

/// Date-, then number-, then text-canonical form of a ground-truth value.
CanonicalValue canonicalize_truth(std::string_view raw);

/// Line-delimited {"document_id", "attribute", "start", "end", "canonical": str|null}.
GroundTruth load_ground_truth(const std::filesystem::path& path, const DocumentCollection& collection);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);

/// Simulated user: confirm iff the nugget span overlaps an annotation of
/// (nugget's document, attribute).
FeedbackDecision oracle_feedback(const GroundTruth& truth, const std::string& attribute, const Nugget& nugget);

/// Layered cell correctness: canonical equality when the annotation carries a
/// value (text compared case-folded), otherwise span overlap. Cells without
/// offsets (read back from CSV) fall back to case-folded equality with the
/// annotated text.
bool cell_matches(const Cell& cell, std::span<const Annotation> annotations);

struct AttributeScores {
  std::string attribute;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  bool missing_from_truth = false;
};

struct ScoreReport {
  std::vector<AttributeScores> attributes;
  double macro_f1 = 0.0;
};

ScoreReport score_table(const ExtractedTable& table, const GroundTruth& truth);

std::string format_report(const ScoreReport& report);
nlohmann::json report_to_json(const ScoreReport& report);

}  // namespace textable
