#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "textable/corpus.hpp"
#include "textable/matching.hpp"
#include "textable/normalize.hpp"
#include "textable/pool.hpp"

namespace textable {

struct StaticMatch {
  std::size_t nugget = 0;
  double distance = 0.0;
};

/// Nearest-group matching for one document: d(n) = min over confirmed c of
/// dist(n, c); returns the nugget with the smallest d (ties by id) when
/// d <= tau, otherwise absent. Absent for an empty document or empty group.
std::optional<StaticMatch> static_match(const EmbeddedPool& pool, std::span<const std::size_t> confirmed,
                                        std::span<const std::size_t> document_nuggets, double tau);

struct Cell {
  std::string nugget_id;  // empty when loaded from CSV
  std::size_t start = 0;
  std::size_t end = 0;
  std::string mention;
  CanonicalValue value;
  double distance = 0.0;
  bool confirmed = false;

  bool has_span() const { return !nugget_id.empty(); }
};

/// One row per document, one column per attribute; absent cells are null.
struct ExtractedTable {
  std::vector<std::string> attributes;
  std::vector<std::string> document_ids;
  std::vector<std::vector<std::optional<Cell>>> rows;  // rows[document][attribute]

  std::optional<std::size_t> column(std::string_view attribute) const;
};

/// Fills every cell from the sessions' confirmed groups. A confirmed nugget
/// fills its own document's cell (lowest id if several); other documents use
/// static_match over nuggets not rejected for that attribute. An attribute
/// without confirmed matches yields a null column.
ExtractedTable build_table(const DocumentCollection& collection, const EmbeddedPool& pool,
                           std::span<const MatchingSession* const> sessions);

/// Header "document_id,<attributes...>", canonical values, empty null cells.
std::string table_to_csv(const ExtractedTable& table);
ExtractedTable table_from_csv(std::string_view csv);

nlohmann::json table_to_json(const ExtractedTable& table);
ExtractedTable table_from_json(const nlohmann::json& j);

}  // namespace textable
