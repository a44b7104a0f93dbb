#pragma once

#include <json.hpp>

#include "textable/matching.hpp"

namespace textable {

/// tau = +inf is written as null.
nlohmann::json config_to_json(const SessionConfig& config);
/// Missing fields keep their defaults; throws invalid_input on bad values.
SessionConfig config_from_json(const nlohmann::json& j);

/// Session state keyed by nugget id (config excluded; it lives with the query).
nlohmann::json session_to_json(const MatchingSession& session);
SessionState session_state_from_json(const nlohmann::json& j, const SessionConfig& config, const MetricSpace& space);

}  // namespace textable
