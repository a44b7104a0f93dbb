#include "textable/session_io.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "textable/error.hpp"

namespace textable {

using nlohmann::json;

json config_to_json(const SessionConfig& c) {
  return {{"k", c.k},
          {"confirm_threshold", c.confirm_threshold},
          {"budget", c.budget},
          {"q0", c.q0},
          {"tau", std::isinf(c.tau) ? json(nullptr) : json(c.tau)},
          {"seed", c.seed}};
}

namespace {

template <class T>
void read_field(const json& j, const char* name, T& out) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    invalid(std::string("config field \"") + name + "\" has the wrong type");
  }
}

std::size_t index_of(const std::map<std::string, std::size_t>& ids, const json& id) {
  if (!id.is_string()) invalid("session file: nugget ids must be strings");
  auto it = ids.find(id.get<std::string>());
  if (it == ids.end()) invalid("session file references unknown nugget " + id.get<std::string>());
  return it->second;
}

}  // namespace

SessionConfig config_from_json(const json& j) {
  SessionConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) invalid("config must be an object");
  read_field(j, "k", c.k);
  read_field(j, "confirm_threshold", c.confirm_threshold);
  read_field(j, "budget", c.budget);
  read_field(j, "q0", c.q0);
  read_field(j, "tau", c.tau);
  read_field(j, "seed", c.seed);
  c.validate();
  return c;
}

json session_to_json(const MatchingSession& session) {
  const auto& s = session.state();
  const auto& space = session.space();
  json statuses = json::object();
  for (std::size_t i = 0; i < s.statuses.size(); ++i) {
    if (s.statuses[i] != NodeStatus::unexplored) statuses[space.id(i)] = to_string(s.statuses[i]);
  }
  json nodes = json::array();
  for (auto n : s.tree.order()) {
    const auto& node = s.tree.node(n);
    json children = json::array();
    for (auto c : node.children) children.push_back(space.id(c));
    nodes.push_back({{"id", space.id(n)},
                     {"parent", node.parent ? json(space.id(*node.parent)) : json(nullptr)},
                     {"children", children},
                     {"expanded", node.expanded}});
  }
  json roots = json::array();
  for (auto r : s.tree.roots()) roots.push_back(space.id(r));
  json queue = json::array();
  for (auto q : s.queue) queue.push_back(space.id(q));
  json pending = json::array();
  for (const auto& o : s.pending) {
    pending.push_back({{"id", space.id(o.nugget)},
                       {"parent", o.parent ? json(space.id(*o.parent)) : json(nullptr)},
                       {"distance", o.distance}});
  }
  std::ostringstream rng;
  rng << s.rng;
  return {{"attribute", s.attribute},
          {"phase", to_string(s.phase)},
          {"done_reason", to_string(s.done_reason)},
          {"interactions_used", s.interactions_used},
          {"root_rounds", s.root_rounds},
          {"statuses", statuses},
          {"tree", {{"roots", roots}, {"nodes", nodes}}},
          {"queue", queue},
          {"pending", pending},
          {"rng", rng.str()}};
}

SessionState session_state_from_json(const json& j, const SessionConfig& config, const MetricSpace& space) {
  try {
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < space.size(); ++i) ids.emplace(space.id(i), i);

    SessionState s;
    s.config = config;
    s.attribute = j.at("attribute").get<std::string>();
    auto phase = parse_phase(j.at("phase").get<std::string>());
    auto reason = parse_done_reason(j.at("done_reason").get<std::string>());
    if (!phase || !reason) invalid("session file: bad phase or done_reason");
    s.phase = *phase;
    s.done_reason = *reason;
    s.interactions_used = j.at("interactions_used").get<std::size_t>();
    s.root_rounds = j.at("root_rounds").get<std::size_t>();
    s.statuses.assign(space.size(), NodeStatus::unexplored);
    for (const auto& [id, status] : j.at("statuses").items()) {
      auto st = parse_node_status(status.get<std::string>());
      if (!st) invalid("session file: bad status for " + id);
      s.statuses[index_of(ids, json(id))] = *st;
    }
    const auto& tree = j.at("tree");
    for (const auto& node : tree.at("nodes")) {
      const auto n = index_of(ids, node.at("id"));
      if (node.at("parent").is_null()) {
        s.tree.add_root(n);
      } else {
        s.tree.add_child(index_of(ids, node.at("parent")), n);
      }
      if (node.at("expanded").get<bool>()) s.tree.mark_expanded(n);
    }
    for (const auto& q : j.at("queue")) s.queue.push_back(index_of(ids, q));
    for (const auto& p : j.at("pending")) {
      Offer o;
      o.nugget = index_of(ids, p.at("id"));
      if (!p.at("parent").is_null()) o.parent = index_of(ids, p.at("parent"));
      o.distance = p.at("distance").get<double>();
      s.pending.push_back(o);
    }
    std::istringstream rng(j.at("rng").get<std::string>());
    rng >> s.rng;
    if (!rng) invalid("session file: bad rng state");
    if (s.interactions_used > config.budget) invalid("session file: interactions exceed budget");
    return s;
  } catch (const json::exception& e) {
    invalid(std::string("session file: ") + e.what());
  }
}

}  // namespace textable
