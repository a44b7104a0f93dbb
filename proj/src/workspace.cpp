#include "textable/workspace.hpp"

#include <set>

#include "textable/error.hpp"
#include "textable/session_io.hpp"

namespace textable {

using nlohmann::json;

namespace {

json optional_path(const std::optional<std::filesystem::path>& p) { return p ? json(p->string()) : json(nullptr); }

std::optional<std::filesystem::path> read_optional_path(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) invalid(std::string("\"") + key + "\" must be a path string");
  return std::filesystem::path(it->get<std::string>());
}

std::filesystem::path read_path(const json& j, const char* key) {
  auto p = read_optional_path(j, key);
  if (!p) invalid(std::string("missing \"") + key + "\"");
  return *p;
}

}  // namespace

json QuerySpec::to_json() const {
  return {{"documents", documents.string()},
          {"nuggets", optional_path(nuggets)},
          {"vectors", vectors.string()},
          {"label_map", optional_path(label_map)},
          {"attributes", attributes},
          {"config", config_to_json(config)},
          {"weights",
           {{"label", weights.label},
            {"mention", weights.mention},
            {"context", weights.context},
            {"position", weights.position}}}};
}

QuerySpec QuerySpec::from_json(const json& j) {
  if (!j.is_object()) invalid("request must be a JSON object");
  QuerySpec spec;
  spec.documents = read_path(j, "documents");
  spec.nuggets = read_optional_path(j, "nuggets");
  spec.vectors = read_path(j, "vectors");
  spec.label_map = read_optional_path(j, "label_map");
  auto attrs = j.find("attributes");
  if (attrs == j.end() || !attrs->is_array()) invalid("\"attributes\" must be an array of names");
  for (const auto& a : *attrs) {
    if (!a.is_string()) invalid("\"attributes\" must be an array of names");
    spec.attributes.push_back(a.get<std::string>());
  }
  if (auto c = j.find("config"); c != j.end()) spec.config = config_from_json(*c);
  if (auto w = j.find("weights"); w != j.end() && !w->is_null()) {
    try {
      spec.weights.label = w->value("label", spec.weights.label);
      spec.weights.mention = w->value("mention", spec.weights.mention);
      spec.weights.context = w->value("context", spec.weights.context);
      spec.weights.position = w->value("position", spec.weights.position);
    } catch (const json::exception&) {
      invalid("weights must be numbers");
    }
  }
  return spec;
}

void Workspace::load_inputs() {
  spec_.config.validate();
  spec_.weights.validate();
  if (spec_.attributes.empty()) invalid("at least one attribute is required");
  std::set<std::string> seen;
  for (const auto& a : spec_.attributes) {
    if (a.empty()) invalid("attribute names must be non-empty");
    if (!seen.insert(a).second) invalid("duplicate attribute \"" + a + "\"");
  }
  collection_ = load_documents(spec_.documents);
  auto nuggets = spec_.nuggets ? import_interchange(*spec_.nuggets, collection_) : extract_collection(collection_);
  store_ = std::make_unique<VectorStore>(load_vector_store(spec_.vectors));
  const auto labels = spec_.label_map ? load_label_map(*spec_.label_map) : LabelMap::defaults();
  pool_ = std::make_unique<EmbeddedPool>(EmbeddedPool::build(std::move(nuggets), *store_, labels, spec_.weights));
}

std::vector<double> Workspace::attribute_distances(const std::string& attribute) const {
  auto e = embed_attribute(attribute, *store_, spec_.weights);
  if (!e) invalid("attribute \"" + attribute + "\" has no in-vocabulary token");
  return pool_->distances_to(*e);
}

std::unique_ptr<Workspace> Workspace::open(QuerySpec spec) {
  std::unique_ptr<Workspace> ws(new Workspace());
  ws->spec_ = std::move(spec);
  ws->load_inputs();
  ws->sessions_.reserve(ws->spec_.attributes.size());
  for (const auto& a : ws->spec_.attributes) {
    ws->sessions_.emplace_back(*ws->pool_, a, ws->attribute_distances(a), ws->spec_.config);
  }
  return ws;
}

std::unique_ptr<Workspace> Workspace::restore(const json& file) {
  if (!file.is_object() || file.value("format", "") != "textable-session") invalid("not a session file");
  if (file.value("version", 0) != kSessionFileVersion) {
    invalid("unsupported session file version " + std::to_string(file.value("version", 0)));
  }
  std::unique_ptr<Workspace> ws(new Workspace());
  ws->spec_ = QuerySpec::from_json(file.at("query"));
  ws->load_inputs();
  const auto& states = file.at("sessions");
  if (!states.is_array() || states.size() != ws->spec_.attributes.size()) invalid("session count mismatch");
  ws->sessions_.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto state = session_state_from_json(states[i], ws->spec_.config, *ws->pool_);
    if (state.attribute != ws->spec_.attributes[i]) invalid("session order does not match attributes");
    auto distances = ws->attribute_distances(state.attribute);
    ws->sessions_.emplace_back(*ws->pool_, std::move(distances), std::move(state));
  }
  return ws;
}

json Workspace::session_file() const {
  json sessions = json::array();
  for (const auto& s : sessions_) sessions.push_back(session_to_json(s));
  return {{"format", "textable-session"},
          {"version", kSessionFileVersion},
          {"query", spec_.to_json()},
          {"diagnostics",
           {{"total_nuggets", pool_->diagnostics().total_nuggets},
            {"excluded_oov", pool_->diagnostics().excluded_oov}}},
          {"sessions", sessions}};
}

MatchingSession* Workspace::find_session(std::string_view attribute) {
  for (auto& s : sessions_) {
    if (s.attribute() == attribute) return &s;
  }
  return nullptr;
}

const MatchingSession* Workspace::find_session(std::string_view attribute) const {
  for (const auto& s : sessions_) {
    if (s.attribute() == attribute) return &s;
  }
  return nullptr;
}

ExtractedTable Workspace::table() const {
  std::vector<const MatchingSession*> ptrs;
  for (const auto& s : sessions_) ptrs.push_back(&s);
  return build_table(collection_, *pool_, ptrs);
}

}  // namespace textable
