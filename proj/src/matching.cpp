#include "textable/matching.hpp"

#include <algorithm>
#include <cmath>

#include "textable/error.hpp"
#include "textable/kernels.hpp"

namespace textable {

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::unexplored: return "unexplored";
    case NodeStatus::candidate: return "candidate";
    case NodeStatus::confirmed: return "confirmed";
    case NodeStatus::rejected: return "rejected";
  }
  return "unexplored";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::root_search: return "root_search";
    case Phase::expanding: return "expanding";
    case Phase::done: return "done";
  }
  return "done";
}

std::string_view to_string(DoneReason r) {
  switch (r) {
    case DoneReason::none: return "none";
    case DoneReason::threshold: return "threshold";
    case DoneReason::budget: return "budget";
    case DoneReason::no_root: return "no_root";
  }
  return "none";
}

std::string_view to_string(FeedbackDecision d) { return d == FeedbackDecision::confirm ? "confirm" : "reject"; }

std::optional<NodeStatus> parse_node_status(std::string_view s) {
  for (auto v : {NodeStatus::unexplored, NodeStatus::candidate, NodeStatus::confirmed, NodeStatus::rejected}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Phase> parse_phase(std::string_view s) {
  for (auto v : {Phase::root_search, Phase::expanding, Phase::done}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<DoneReason> parse_done_reason(std::string_view s) {
  for (auto v : {DoneReason::none, DoneReason::threshold, DoneReason::budget, DoneReason::no_root}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<FeedbackDecision> parse_decision(std::string_view s) {
  if (s == "confirm") return FeedbackDecision::confirm;
  if (s == "reject") return FeedbackDecision::reject;
  return std::nullopt;
}

void SessionConfig::validate() const {
  if (k < 1) invalid("k must be at least 1");
  if (budget < 1) invalid("budget must be at least 1");
  if (confirm_threshold < 1) invalid("confirm threshold must be at least 1");
  if (!(q0 > 0.0 && q0 <= 1.0)) invalid("q0 must lie in (0, 1]");
  if (!(tau > 0.0)) invalid("tau must be positive");
}

double root_quantile(double q0, std::size_t round) {
  return std::min(1.0, std::ldexp(q0, static_cast<int>(std::min<std::size_t>(round, 1024))));
}

std::uint64_t attribute_seed(std::uint64_t seed, std::string_view attribute) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : attribute) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t floor = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= floor) return r % n;
  }
}

void SearchTree::add_root(std::size_t nugget) {
  if (contains(nugget)) invalid("nugget already in tree");
  nodes_.emplace(nugget, TreeNode{nugget, std::nullopt, {}, false});
  roots_.push_back(nugget);
  order_.push_back(nugget);
}

void SearchTree::add_child(std::size_t parent, std::size_t nugget) {
  auto it = nodes_.find(parent);
  if (it == nodes_.end()) invalid("parent not in tree");
  if (contains(nugget)) invalid("nugget already in tree");
  it->second.children.push_back(nugget);
  nodes_.emplace(nugget, TreeNode{nugget, parent, {}, false});
  order_.push_back(nugget);
}

void SearchTree::mark_expanded(std::size_t nugget) {
  auto it = nodes_.find(nugget);
  if (it == nodes_.end()) invalid("node not in tree");
  it->second.expanded = true;
}

const TreeNode& SearchTree::node(std::size_t nugget) const {
  auto it = nodes_.find(nugget);
  if (it == nodes_.end()) invalid("node not in tree");
  return it->second;
}

std::vector<std::size_t> SearchTree::expanded() const {
  std::vector<std::size_t> out;
  for (auto n : order_) {
    if (nodes_.at(n).expanded) out.push_back(n);
  }
  return out;
}

namespace {

struct ConstraintScope {
  std::vector<std::size_t> expanded_others;
  std::vector<std::size_t> tree_others;
  std::optional<double> parent_distance;

  kernels::SuccessorQuery query(std::size_t x) const { return {x, parent_distance, expanded_others, tree_others}; }
};

ConstraintScope scope_for(const SearchTree& tree, std::size_t x, const MetricSpace& space) {
  ConstraintScope scope;
  const auto& node = tree.node(x);
  if (node.parent) scope.parent_distance = space.distance(x, *node.parent);
  for (auto n : tree.order()) {
    if (n == x) continue;
    scope.tree_others.push_back(n);
    if (tree.node(n).expanded) scope.expanded_others.push_back(n);
  }
  return scope;
}

}  // namespace

std::vector<std::size_t> candidate_successors(const SearchTree& tree, std::span<const NodeStatus> statuses,
                                              std::size_t x, const MetricSpace& space) {
  const auto scope = scope_for(tree, x, space);
  std::vector<std::uint8_t> eligible(statuses.size());
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    eligible[i] = statuses[i] == NodeStatus::unexplored || statuses[i] == NodeStatus::candidate;
  }
  std::vector<std::uint8_t> mask(statuses.size());
  auto dist = [&space](std::size_t a, std::size_t b) { return space.distance(a, b); };
  kernels::successor_mask_parallel(eligible, scope.query(x), dist, mask);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(i);
  }
  return out;
}

bool satisfies_successor_constraints(const SearchTree& tree, std::size_t x, std::size_t c,
                                     const MetricSpace& space) {
  const auto scope = scope_for(tree, x, space);
  return kernels::is_successor(c, scope.query(x),
                               [&space](std::size_t a, std::size_t b) { return space.distance(a, b); });
}

std::vector<std::size_t> select_candidates(std::span<const std::size_t> candidates, std::size_t x, std::size_t k,
                                           const MetricSpace& space) {
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(candidates.size());
  for (auto c : candidates) ranked.emplace_back(space.distance(c, x), c);
  const auto take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                    [&space](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return space.id(a.second) < space.id(b.second);
                    });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(ranked[i].second);
  return out;
}

MatchingSession::MatchingSession(const MetricSpace& space, std::string attribute,
                                 std::vector<double> attribute_distances, SessionConfig config)
    : space_(&space), attribute_distances_(std::move(attribute_distances)) {
  config.validate();
  if (attribute.empty()) invalid("attribute name must be non-empty");
  if (attribute_distances_.size() != space.size()) invalid("one attribute distance per pool member required");
  s_.rng.seed(attribute_seed(config.seed, attribute));
  s_.attribute = std::move(attribute);
  s_.config = config;
  s_.statuses.assign(space.size(), NodeStatus::unexplored);
  advance();
}

MatchingSession::MatchingSession(const MetricSpace& space, std::vector<double> attribute_distances,
                                 SessionState state)
    : space_(&space), attribute_distances_(std::move(attribute_distances)), s_(std::move(state)) {
  s_.config.validate();
  if (attribute_distances_.size() != space.size() || s_.statuses.size() != space.size()) {
    invalid("session state does not match the nugget pool");
  }
}

double MatchingSession::current_quantile() const {
  if (s_.phase != Phase::root_search || s_.root_rounds == 0) return 0.0;
  return root_quantile(s_.config.q0, s_.root_rounds - 1);
}

void MatchingSession::submit(std::size_t nugget, FeedbackDecision decision) {
  if (s_.phase == Phase::done) fail(ErrorKind::conflict, "session complete");
  if (s_.interactions_used >= s_.config.budget) fail(ErrorKind::conflict, "budget exhausted");
  const Offer* offer = current();
  if (offer == nullptr || offer->nugget != nugget) {
    fail(ErrorKind::conflict, "nugget " + (nugget < space_->size() ? space_->id(nugget) : std::to_string(nugget)) +
                                  " is not the current candidate");
  }
  const Offer answered = *offer;
  s_.pending.pop_front();
  ++s_.interactions_used;

  if (decision == FeedbackDecision::confirm) {
    s_.statuses[nugget] = NodeStatus::confirmed;
    if (answered.parent) {
      s_.tree.add_child(*answered.parent, nugget);
    } else {
      s_.tree.add_root(nugget);
      s_.root_rounds = 0;
      drop_pending();  // the rest of this root round is not shown
    }
    s_.queue.push_back(nugget);
  } else {
    s_.statuses[nugget] = NodeStatus::rejected;
  }

  if (s_.tree.size() >= s_.config.confirm_threshold) {
    finish(DoneReason::threshold);
  } else if (s_.interactions_used >= s_.config.budget) {
    finish(DoneReason::budget);
  } else {
    advance();
  }
}

void MatchingSession::advance() {
  while (s_.phase != Phase::done) {
    // Earlier confirmations in the same batch can invalidate later candidates.
    while (!s_.pending.empty()) {
      const auto& front = s_.pending.front();
      if (!front.parent || satisfies_successor_constraints(s_.tree, *front.parent, front.nugget, *space_)) return;
      if (s_.statuses[front.nugget] == NodeStatus::candidate) s_.statuses[front.nugget] = NodeStatus::unexplored;
      s_.pending.pop_front();
    }
    if (s_.interactions_used >= s_.config.budget) {
      finish(DoneReason::budget);
      return;
    }
    if (!s_.queue.empty()) {
      s_.phase = Phase::expanding;
      expand_next();
      continue;
    }
    s_.phase = Phase::root_search;
    if (!start_root_round()) {
      finish(DoneReason::no_root);
      return;
    }
  }
}

void MatchingSession::expand_next() {
  const auto x = s_.queue.front();
  s_.queue.pop_front();
  auto candidates = candidate_successors(s_.tree, s_.statuses, x, *space_);
  // Nuggets already waiting in the offer queue are not offered twice.
  std::erase_if(candidates, [this](std::size_t c) { return s_.statuses[c] != NodeStatus::unexplored; });
  const auto chosen = select_candidates(candidates, x, s_.config.k, *space_);
  s_.tree.mark_expanded(x);
  for (auto c : chosen) {
    s_.statuses[c] = NodeStatus::candidate;
    s_.pending.push_back({c, x, space_->distance(c, x)});
  }
}

bool MatchingSession::start_root_round() {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < s_.statuses.size(); ++i) {
    if (s_.statuses[i] == NodeStatus::unexplored) eligible.push_back(i);
  }
  if (eligible.empty()) return false;
  std::sort(eligible.begin(), eligible.end(), [this](std::size_t a, std::size_t b) {
    const double da = attribute_distances_[a];
    const double db = attribute_distances_[b];
    if (da != db) return da < db;
    return space_->id(a) < space_->id(b);
  });
  const double q = root_quantile(s_.config.q0, s_.root_rounds);
  const auto m = static_cast<double>(eligible.size());
  auto nearest = static_cast<std::size_t>(std::ceil(q * m - 1e-9));
  nearest = std::clamp<std::size_t>(nearest, 1, eligible.size());
  eligible.resize(nearest);

  const auto draws = std::min(s_.config.k, eligible.size());
  for (std::size_t i = 0; i < draws; ++i) {
    const auto j = i + static_cast<std::size_t>(draw_below(s_.rng, eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
    const auto c = eligible[i];
    s_.statuses[c] = NodeStatus::candidate;
    s_.pending.push_back({c, std::nullopt, attribute_distances_[c]});
  }
  ++s_.root_rounds;
  return true;
}

void MatchingSession::drop_pending() {
  for (const auto& o : s_.pending) s_.statuses[o.nugget] = NodeStatus::unexplored;
  s_.pending.clear();
}

void MatchingSession::finish(DoneReason reason) {
  drop_pending();
  s_.phase = Phase::done;
  s_.done_reason = reason;
}

std::optional<std::size_t> find_root(MatchingSession& session, const FeedbackSource& feedback) {
  if (session.phase() == Phase::done) return std::nullopt;
  if (session.phase() != Phase::root_search) fail(ErrorKind::precondition, "session is not searching for a root");
  const auto roots_before = session.tree().roots().size();
  while (session.phase() == Phase::root_search && session.tree().roots().size() == roots_before) {
    const Offer* offer = session.current();
    if (offer == nullptr) break;
    const Offer shown = *offer;
    session.submit(shown.nugget, feedback(session, shown));
  }
  if (session.tree().roots().size() > roots_before) return session.tree().roots().back();
  return std::nullopt;
}

void run_matching(MatchingSession& session, const FeedbackSource& feedback) {
  while (const Offer* offer = session.current()) {
    const Offer shown = *offer;
    session.submit(shown.nugget, feedback(session, shown));
  }
}

}  // namespace textable
