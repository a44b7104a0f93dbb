#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "textable/table.hpp"
#include "textable/workspace.hpp"

namespace textable {

/// Session lifecycle behind the HTTP API. Transport-free so it can be driven
/// directly. Each session is single-writer; reads of one session share a lock
/// and see a consistent snapshot. Different sessions proceed concurrently.
class SessionService {
 public:
  /// With a state directory, every session is written to <dir>/<id>.json on
  /// open and after each feedback.
  explicit SessionService(std::optional<std::filesystem::path> state_dir = std::nullopt);

  /// Request: {"documents", "nuggets"?, "vectors", "label_map"?, "attributes", "config"?, "weights"?}.
  /// Returns the session handle.
  nlohmann::json open_session(const nlohmann::json& request);
  nlohmann::json handle(const std::string& session_id) const;
  /// {"done": false, "nugget_id", "mention", "context_sentence", "highlight": [s, e],
  ///  "document_id", "label", "distance", "kind": "root"|"expansion"}
  /// or {"done": true, "reason": "threshold"|"budget"|"no_root"}.
  nlohmann::json next_candidate(const std::string& session_id, const std::string& attribute) const;
  /// Body: {"nugget_id", "decision": "confirm"|"reject"}. Returns the attribute state.
  nlohmann::json submit_feedback(const std::string& session_id, const std::string& attribute,
                                 const nlohmann::json& body);
  /// Static matching over current confirmations; requires one attribute done.
  ExtractedTable get_table(const std::string& session_id) const;

  /// Loads every session file in the state directory; returns how many.
  std::size_t load_persisted();

 private:
  struct Entry {
    mutable std::shared_mutex mutex;
    std::unique_ptr<Workspace> workspace;
  };

  std::shared_ptr<Entry> entry(const std::string& session_id) const;
  void persist(const std::string& session_id, const Workspace& ws) const;
  static nlohmann::json attribute_state(const MatchingSession& s);
  static nlohmann::json handle_of(const std::string& session_id, const Workspace& ws);

  std::optional<std::filesystem::path> state_dir_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace textable
