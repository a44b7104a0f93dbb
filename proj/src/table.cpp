#include "textable/table.hpp"

#include <algorithm>
#include <limits>

#include "textable/error.hpp"
#include "textable/kernels.hpp"

namespace textable {

std::optional<std::size_t> ExtractedTable::column(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i] == attribute) return i;
  }
  return std::nullopt;
}

std::optional<StaticMatch> static_match(const EmbeddedPool& pool, std::span<const std::size_t> confirmed,
                                        std::span<const std::size_t> document_nuggets, double tau) {
  if (confirmed.empty() || document_nuggets.empty()) return std::nullopt;
  std::vector<double> nearest(document_nuggets.size());
  kernels::nearest_in_set_parallel(pool.vectors(), document_nuggets, confirmed, nearest);
  std::size_t best = 0;
  for (std::size_t i = 1; i < nearest.size(); ++i) {
    if (nearest[i] < nearest[best] ||
        (nearest[i] == nearest[best] && pool.id(document_nuggets[i]) < pool.id(document_nuggets[best]))) {
      best = i;
    }
  }
  if (!(nearest[best] <= tau)) return std::nullopt;
  return StaticMatch{document_nuggets[best], nearest[best]};
}

namespace {

Cell make_cell(const EmbeddedPool& pool, std::size_t index, double distance, bool confirmed) {
  const auto& n = pool.nugget(index);
  Cell c;
  c.nugget_id = n.id;
  c.start = n.start;
  c.end = n.end;
  c.mention = n.mention;
  c.value = n.canonical ? *n.canonical : normalize_mention(n.label, n.mention);
  c.distance = distance;
  c.confirmed = confirmed;
  return c;
}

}  // namespace

ExtractedTable build_table(const DocumentCollection& collection, const EmbeddedPool& pool,
                           std::span<const MatchingSession* const> sessions) {
  ExtractedTable table;
  for (const auto* s : sessions) table.attributes.push_back(s->attribute());
  for (const auto& doc : collection) table.document_ids.push_back(doc.id);
  table.rows.assign(collection.size(), std::vector<std::optional<Cell>>(sessions.size()));

  std::vector<std::vector<std::size_t>> groups;
  for (const auto* s : sessions) {
    auto group = s->tree().order();
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
  }

  const auto& docs = collection.documents();
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    const auto row = static_cast<std::size_t>(d);
    const auto members = pool.rows_of(docs[row].id);
    for (std::size_t a = 0; a < sessions.size(); ++a) {
      const auto& group = groups[a];
      if (group.empty()) continue;
      const auto statuses = sessions[a]->statuses();
      std::optional<std::size_t> own;
      std::vector<std::size_t> open;
      for (auto m : members) {
        if (statuses[m] == NodeStatus::confirmed && !own) own = m;
        if (statuses[m] != NodeStatus::rejected) open.push_back(m);
      }
      if (own) {
        table.rows[row][a] = make_cell(pool, *own, 0.0, true);
      } else if (auto hit = static_match(pool, group, open, sessions[a]->config().tau)) {
        table.rows[row][a] = make_cell(pool, hit->nugget, hit->distance, false);
      }
    }
  }
  return table;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    any = true;
    if (quoted) {
      if (c == '"' && i + 1 < csv.size() && csv[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) invalid("csv: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string table_to_csv(const ExtractedTable& table) {
  std::string out = "document_id";
  for (const auto& a : table.attributes) out += "," + csv_field(a);
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += csv_field(table.document_ids[r]);
    for (const auto& cell : table.rows[r]) {
      out += ',';
      if (cell) out += csv_field(cell->value.value);
    }
    out += '\n';
  }
  return out;
}

ExtractedTable table_from_csv(std::string_view csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "document_id") {
    invalid("csv: missing document_id header");
  }
  ExtractedTable table;
  table.attributes.assign(rows.front().begin() + 1, rows.front().end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != table.attributes.size() + 1) invalid("csv: row " + std::to_string(r + 1) + " has wrong width");
    table.document_ids.push_back(rows[r][0]);
    std::vector<std::optional<Cell>> cells(table.attributes.size());
    for (std::size_t a = 0; a < table.attributes.size(); ++a) {
      if (rows[r][a + 1].empty()) continue;
      Cell c;
      c.mention = rows[r][a + 1];
      c.value = {CanonicalValue::Kind::text, rows[r][a + 1]};
      cells[a] = std::move(c);
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

nlohmann::json table_to_json(const ExtractedTable& table) {
  using nlohmann::json;
  json rows = json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    json cells = json::object();
    for (std::size_t a = 0; a < table.attributes.size(); ++a) {
      const auto& cell = table.rows[r][a];
      if (!cell) {
        cells[table.attributes[a]] = nullptr;
        continue;
      }
      cells[table.attributes[a]] = {{"nugget_id", cell->nugget_id},
                                    {"start", cell->start},
                                    {"end", cell->end},
                                    {"mention", cell->mention},
                                    {"kind", to_string(cell->value.kind)},
                                    {"value", cell->value.value},
                                    {"distance", cell->distance},
                                    {"confirmed", cell->confirmed}};
    }
    rows.push_back({{"document_id", table.document_ids[r]}, {"cells", cells}});
  }
  return {{"attributes", table.attributes}, {"rows", rows}};
}

ExtractedTable table_from_json(const nlohmann::json& j) {
  try {
    ExtractedTable table;
    table.attributes = j.at("attributes").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      table.document_ids.push_back(row.at("document_id").get<std::string>());
      std::vector<std::optional<Cell>> cells(table.attributes.size());
      const auto& cj = row.at("cells");
      for (std::size_t a = 0; a < table.attributes.size(); ++a) {
        auto it = cj.find(table.attributes[a]);
        if (it == cj.end() || it->is_null()) continue;
        Cell c;
        c.nugget_id = it->at("nugget_id").get<std::string>();
        c.start = it->at("start").get<std::size_t>();
        c.end = it->at("end").get<std::size_t>();
        c.mention = it->at("mention").get<std::string>();
        auto kind = parse_kind(it->at("kind").get<std::string>());
        if (!kind) invalid("table: unknown value kind");
        c.value = {*kind, it->at("value").get<std::string>()};
        c.distance = it->at("distance").get<double>();
        c.confirmed = it->at("confirmed").get<bool>();
        cells[a] = std::move(c);
      }
      table.rows.push_back(std::move(cells));
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("table: ") + e.what());
  }
}

}  // namespace textable
