#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "textable/corpus.hpp"
#include "textable/embedding.hpp"
#include "textable/matching.hpp"
#include "textable/pool.hpp"
#include "textable/table.hpp"

namespace textable {

/// Everything needed to (re)build a matching query from files.
struct QuerySpec {
  std::filesystem::path documents;
  std::optional<std::filesystem::path> nuggets;  // interchange file; built-in extraction when absent
  std::filesystem::path vectors;
  std::optional<std::filesystem::path> label_map;
  std::vector<std::string> attributes;
  SessionConfig config;
  SignalWeights weights;

  nlohmann::json to_json() const;
  static QuerySpec from_json(const nlohmann::json& j);
};

inline constexpr int kSessionFileVersion = 1;

/// Loaded collection, embedded nugget pool and one matching session per
/// attribute. Sessions point into the pool, so a Workspace never moves.
class Workspace {
 public:
  /// Loads and embeds all inputs and starts every session. Throws
  /// invalid_input for unreadable inputs, an empty or duplicate attribute
  /// list, or an attribute name with no in-vocabulary token.
  static std::unique_ptr<Workspace> open(QuerySpec spec);
  /// Rebuilds from a session file written by session_file().
  static std::unique_ptr<Workspace> restore(const nlohmann::json& session_file);

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  /// Versioned, byte-stable snapshot of the query and every session.
  nlohmann::json session_file() const;

  const QuerySpec& spec() const { return spec_; }
  const DocumentCollection& collection() const { return collection_; }
  const EmbeddedPool& pool() const { return *pool_; }
  std::vector<MatchingSession>& sessions() { return sessions_; }
  const std::vector<MatchingSession>& sessions() const { return sessions_; }
  MatchingSession* find_session(std::string_view attribute);
  const MatchingSession* find_session(std::string_view attribute) const;

  ExtractedTable table() const;

 private:
  Workspace() = default;
  void load_inputs();
  std::vector<double> attribute_distances(const std::string& attribute) const;

  QuerySpec spec_;
  DocumentCollection collection_;
  std::unique_ptr<EmbeddedPool> pool_;
  std::unique_ptr<VectorStore> store_;
  std::vector<MatchingSession> sessions_;
};

}  // namespace textable
