#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textable/pool.hpp"

namespace textable {

enum class NodeStatus : std::uint8_t { unexplored, candidate, confirmed, rejected };
enum class Phase { root_search, expanding, done };
enum class DoneReason { none, threshold, budget, no_root };
enum class FeedbackDecision { confirm, reject };

std::string_view to_string(NodeStatus s);
std::string_view to_string(Phase p);
std::string_view to_string(DoneReason r);
std::string_view to_string(FeedbackDecision d);
std::optional<NodeStatus> parse_node_status(std::string_view s);
std::optional<Phase> parse_phase(std::string_view s);
std::optional<DoneReason> parse_done_reason(std::string_view s);
std::optional<FeedbackDecision> parse_decision(std::string_view s);

struct SessionConfig {
  std::size_t k = 2;                   // tree degree / candidates per expansion
  std::size_t confirm_threshold = 10;  // confirmed matches that end feedback
  std::size_t budget = 25;             // feedback interactions per attribute
  double q0 = 0.05;                    // first root-sampling quantile
  double tau = std::numeric_limits<double>::infinity();  // static-match cutoff
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

/// Quantile of distance-ranked nuggets sampled in root-search round `round`:
/// min(q0 * 2^round, 1).
double root_quantile(double q0, std::size_t round);

/// Per-attribute RNG seed derived from the query seed.
std::uint64_t attribute_seed(std::uint64_t seed, std::string_view attribute);

/// Uniform integer in [0, n) by rejection, independent of the standard
/// library's distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n);

struct TreeNode {
  std::size_t nugget = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  bool expanded = false;
};

/// Forest of confirmed matches (one tree per root found). Nodes are keyed by
/// pool index.
class SearchTree {
 public:
  void add_root(std::size_t nugget);
  void add_child(std::size_t parent, std::size_t nugget);
  void mark_expanded(std::size_t nugget);

  bool contains(std::size_t nugget) const { return nodes_.contains(nugget); }
  const TreeNode& node(std::size_t nugget) const;
  const std::vector<std::size_t>& roots() const { return roots_; }
  /// Every node in insertion order.
  const std::vector<std::size_t>& order() const { return order_; }
  std::vector<std::size_t> expanded() const;
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::size_t, TreeNode> nodes_;
};

/// A nugget shown to the user. Root-search samples have no parent and carry
/// their distance to the attribute; expansion candidates carry their distance
/// to the node being expanded.
struct Offer {
  std::size_t nugget = 0;
  std::optional<std::size_t> parent;
  double distance = 0.0;

  friend bool operator==(const Offer&, const Offer&) = default;
};

/// Complete mutable state of one attribute's matching loop; plain data so it
/// can be persisted and restored.
struct SessionState {
  std::string attribute;
  SessionConfig config;
  std::vector<NodeStatus> statuses;  // indexed by pool position
  SearchTree tree;
  std::deque<std::size_t> queue;   // confirmed, not yet expanded (FIFO)
  std::deque<Offer> pending;       // offers not yet answered; front is current
  std::size_t interactions_used = 0;
  std::size_t root_rounds = 0;     // rounds started in the current root search
  Phase phase = Phase::root_search;
  DoneReason done_reason = DoneReason::none;
  std::mt19937_64 rng;
};

/// One attribute's interactive loop: root sampling with a widening quantile,
/// explore-away expansion, one offer at a time.
class MatchingSession {
 public:
  /// `attribute_distances[i]` is the distance of pool member i to the
  /// attribute embedding. Prepares the first offer.
  MatchingSession(const MetricSpace& space, std::string attribute, std::vector<double> attribute_distances,
                  SessionConfig config);
  /// Resumes a persisted state as-is.
  MatchingSession(const MetricSpace& space, std::vector<double> attribute_distances, SessionState state);

  /// The offer awaiting feedback; null once the session is done.
  const Offer* current() const { return s_.pending.empty() ? nullptr : &s_.pending.front(); }

  /// Applies feedback for the current offer and prepares the next one.
  /// Throws conflict if the session is done or `nugget` is not the current offer.
  void submit(std::size_t nugget, FeedbackDecision decision);

  const std::string& attribute() const { return s_.attribute; }
  const SessionConfig& config() const { return s_.config; }
  Phase phase() const { return s_.phase; }
  DoneReason done_reason() const { return s_.done_reason; }
  std::size_t interactions_used() const { return s_.interactions_used; }
  std::size_t confirmed_count() const { return s_.tree.size(); }
  const SearchTree& tree() const { return s_.tree; }
  std::span<const NodeStatus> statuses() const { return s_.statuses; }
  NodeStatus status(std::size_t nugget) const { return s_.statuses[nugget]; }
  const std::deque<std::size_t>& queue() const { return s_.queue; }
  const SessionState& state() const { return s_; }
  const MetricSpace& space() const { return *space_; }
  double attribute_distance(std::size_t nugget) const { return attribute_distances_[nugget]; }
  /// Sampling quantile of the active root-search round (0 when none is active).
  double current_quantile() const;

 private:
  void advance();
  void expand_next();
  bool start_root_round();
  void finish(DoneReason reason);
  void drop_pending();

  const MetricSpace* space_;
  std::vector<double> attribute_distances_;
  SessionState s_;
};

using FeedbackSource = std::function<FeedbackDecision(const MatchingSession&, const Offer&)>;

/// Every non-confirmed, non-rejected nugget c with
///  (1) dist(c, x) < dist(c, e) for every other expanded node e, and
///  (2) min over tree nodes t != x of dist(c, t) > dist(x, parent(x)),
/// constraint (2) being vacuous when x is a root. Ascending index order.
std::vector<std::size_t> candidate_successors(const SearchTree& tree, std::span<const NodeStatus> statuses,
                                              std::size_t x, const MetricSpace& space);

/// Constraints (1) and (2) for a single nugget against the current tree.
bool satisfies_successor_constraints(const SearchTree& tree, std::size_t x, std::size_t c, const MetricSpace& space);

/// The (at most) k candidates closest to x; ties by ascending nugget id.
std::vector<std::size_t> select_candidates(std::span<const std::size_t> candidates, std::size_t x, std::size_t k,
                                           const MetricSpace& space);

/// Drives root search until a root is confirmed or the session ends.
/// Absent for a finished session; throws precondition while expanding.
std::optional<std::size_t> find_root(MatchingSession& session, const FeedbackSource& feedback);

/// Runs the loop to completion.
void run_matching(MatchingSession& session, const FeedbackSource& feedback);

}  // namespace textable
