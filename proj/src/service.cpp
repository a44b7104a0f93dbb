#include "textable/service.hpp"

#include <algorithm>
#include <mutex>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"

namespace textable {

using nlohmann::json;

SessionService::SessionService(std::optional<std::filesystem::path> state_dir) : state_dir_(std::move(state_dir)) {
  if (state_dir_) std::filesystem::create_directories(*state_dir_);
}

namespace {

// Offset of the mention inside its context sentence. Located through the
// document so a mention repeated earlier in the sentence is not picked.
std::size_t highlight_start(const DocumentCollection& docs, const Nugget& n) {
  if (const auto* doc = docs.find(n.document_id); doc != nullptr && !n.context_sentence.empty()) {
    const auto at = doc->text.rfind(n.context_sentence, n.start);
    if (at != std::string::npos && n.end <= at + n.context_sentence.size()) return n.start - at;
  }
  const auto at = n.context_sentence.find(n.mention);
  return at == std::string::npos ? 0 : at;
}

}  // namespace

json SessionService::attribute_state(const MatchingSession& s) {
  return {{"name", s.attribute()},
          {"phase", to_string(s.phase())},
          {"done_reason", s.phase() == Phase::done ? json(to_string(s.done_reason())) : json(nullptr)},
          {"interactions_used", s.interactions_used()},
          {"budget", s.config().budget},
          {"confirmed", s.confirmed_count()},
          {"threshold", s.config().confirm_threshold}};
}

json SessionService::handle_of(const std::string& session_id, const Workspace& ws) {
  json attrs = json::array();
  for (const auto& s : ws.sessions()) attrs.push_back(attribute_state(s));
  return {{"session_id", session_id},
          {"attributes", attrs},
          {"documents", ws.collection().size()},
          {"nuggets", ws.pool().size()},
          {"excluded_oov", ws.pool().diagnostics().excluded_oov}};
}

std::shared_ptr<SessionService::Entry> SessionService::entry(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) fail(ErrorKind::not_found, "unknown session \"" + session_id + "\"");
  return it->second;
}

void SessionService::persist(const std::string& session_id, const Workspace& ws) const {
  if (!state_dir_) return;
  const auto target = *state_dir_ / (session_id + ".json");
  const auto tmp = *state_dir_ / (session_id + ".json.tmp");
  jsonl::write_file(tmp, ws.session_file().dump(2) + "\n");
  std::filesystem::rename(tmp, target);
}

json SessionService::open_session(const json& request) {
  auto ws = Workspace::open(QuerySpec::from_json(request));
  auto e = std::make_shared<Entry>();
  e->workspace = std::move(ws);
  std::string id;
  {
    std::unique_lock lock(sessions_mutex_);
    id = "s" + std::to_string(next_id_++);
    sessions_.emplace(id, e);
  }
  std::unique_lock guard(e->mutex);
  persist(id, *e->workspace);
  return handle_of(id, *e->workspace);
}

json SessionService::handle(const std::string& session_id) const {
  auto e = entry(session_id);
  std::shared_lock guard(e->mutex);
  return handle_of(session_id, *e->workspace);
}

json SessionService::next_candidate(const std::string& session_id, const std::string& attribute) const {
  auto e = entry(session_id);
  std::shared_lock guard(e->mutex);
  const auto* s = e->workspace->find_session(attribute);
  if (s == nullptr) fail(ErrorKind::not_found, "unknown attribute \"" + attribute + "\"");
  const Offer* offer = s->current();
  if (offer == nullptr) return {{"done", true}, {"reason", to_string(s->done_reason())}};
  const auto& n = e->workspace->pool().nugget(offer->nugget);
  const auto hs = highlight_start(e->workspace->collection(), n);
  return {{"done", false},
          {"attribute", attribute},
          {"nugget_id", n.id},
          {"mention", n.mention},
          {"context_sentence", n.context_sentence},
          {"highlight", {hs, hs + n.mention.size()}},
          {"document_id", n.document_id},
          {"label", n.label},
          {"distance", offer->distance},
          {"kind", offer->parent ? "expansion" : "root"},
          {"interactions_used", s->interactions_used()},
          {"confirmed", s->confirmed_count()}};
}

json SessionService::submit_feedback(const std::string& session_id, const std::string& attribute, const json& body) {
  auto e = entry(session_id);
  std::unique_lock guard(e->mutex);
  auto* s = e->workspace->find_session(attribute);
  if (s == nullptr) fail(ErrorKind::not_found, "unknown attribute \"" + attribute + "\"");
  if (!body.is_object() || !body.contains("nugget_id") || !body["nugget_id"].is_string() ||
      !body.contains("decision") || !body["decision"].is_string()) {
    invalid("body must be {\"nugget_id\": str, \"decision\": \"confirm\"|\"reject\"}");
  }
  const auto decision = parse_decision(body["decision"].get<std::string>());
  if (!decision) invalid("decision must be \"confirm\" or \"reject\"");
  if (s->phase() == Phase::done) fail(ErrorKind::conflict, "session complete");
  const auto nugget_id = body["nugget_id"].get<std::string>();
  const auto index = e->workspace->pool().find(nugget_id);
  const Offer* offer = s->current();
  if (!index || offer == nullptr || offer->nugget != *index) {
    fail(ErrorKind::conflict, "stale candidate: \"" + nugget_id + "\" is not the current candidate");
  }
  s->submit(*index, *decision);
  persist(session_id, *e->workspace);
  return attribute_state(*s);
}

ExtractedTable SessionService::get_table(const std::string& session_id) const {
  auto e = entry(session_id);
  std::shared_lock guard(e->mutex);
  const auto& sessions = e->workspace->sessions();
  const bool any_done = std::any_of(sessions.begin(), sessions.end(),
                                    [](const MatchingSession& s) { return s.phase() == Phase::done; });
  if (!any_done) fail(ErrorKind::precondition, "no attribute has finished matching yet");
  return e->workspace->table();
}

std::size_t SessionService::load_persisted() {
  if (!state_dir_) return 0;
  std::size_t loaded = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(*state_dir_)) {
    if (f.path().extension() == ".json") files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const auto id = path.stem().string();
    auto e = std::make_shared<Entry>();
    e->workspace = Workspace::restore(json::parse(jsonl::read_file(path)));
    std::unique_lock lock(sessions_mutex_);
    sessions_[id] = std::move(e);
    if (id.size() > 1 && id[0] == 's' && id.find_first_not_of("0123456789", 1) == std::string::npos) {
      next_id_ = std::max(next_id_, static_cast<std::size_t>(std::stoull(id.substr(1))) + 1);
    }
    ++loaded;
  }
  return loaded;
}

}  // namespace textable
