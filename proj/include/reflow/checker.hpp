#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflow/engine.hpp"

namespace reflow {

inline constexpr std::uint64_t kDefaultMaxStates = 10'000'000;

/// Exploration ran into the configured state cap. Deliberately not a verdict:
/// callers must surface it as a resource error.
class StateLimitExceeded : public std::runtime_error {
 public:
  explicit StateLimitExceeded(std::uint64_t limit)
      : std::runtime_error("state budget exceeded: " + std::to_string(limit) + " states"),
        limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_ = 0;
};

struct LtsStats {
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
  std::uint32_t max_depth = 0;
  bool acyclic = false;
};

/// The reachable LTS, exhaustively explored breadth-first. State index 0 is
/// the initial state; indices follow BFS discovery order, so depths are
/// non-decreasing and the first state matching a predicate is one of minimum
/// depth. Edges are grouped by source state.
struct Lts {
  struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    TransitionLabel label;
  };

  std::vector<GlobalState> states;
  std::vector<std::uint64_t> digests;
  std::vector<std::uint32_t> depth;
  std::vector<std::uint32_t> parent;  // BFS tree; kNoParent for the root
  std::vector<TransitionLabel> parent_label;
  std::vector<Edge> edges;
  std::vector<std::uint64_t> first_edge;  // per state; edges[first_edge[i]..first_edge[i+1])
  std::vector<std::uint32_t> terminal;    // states with no enabled label
  LtsStats stats;

  static constexpr std::uint32_t kNoParent = 0xffffffff;
};

/// BFS from the initial state over enabled/apply, deduplicating by the
/// canonical state encoding. Throws StateLimitExceeded past max_states.
Lts explore(const System& sys, std::uint64_t max_states = kDefaultMaxStates);

enum class PropertyId : std::uint8_t { R1, R2, R3, R4, DeadlockFree };

const char* to_string(PropertyId id);
std::optional<PropertyId> property_from_string(const std::string& s);

struct CheckReport {
  PropertyId property = PropertyId::R1;
  bool holds = false;
  std::optional<ExecutionTrace> counterexample;  // shortest, flattened; present iff !holds
  LtsStats stats;
};

/// Verdicts over the explored LTS:
///   R1 — no reachable state saw a forced rejection.
///   R2 — no old-accepted order completed outside C1's language.
///   R3 — no new-accepted order completed outside C2's language.
///   R4 — the LTS is acyclic and every terminal state is RunningNew.
///   DeadlockFree — every terminal state is RunningNew with no in-flight
///   orders and no arrivals left.
CheckReport check(const System& sys, const Lts& lts, PropertyId property);

/// BFS-tree path from the initial state to `target_state`, flattened through
/// apply so emitted labels and per-event digests are included.
ExecutionTrace replay_path(const System& sys, const Lts& lts, std::uint32_t target_state);

/// Shortest path to a state satisfying `pred`, or nullopt if none is
/// reachable.
std::optional<ExecutionTrace> shortest_counterexample(
    const System& sys, const Lts& lts, const std::function<bool(const GlobalState&)>& pred);

/// GraphViz digraph of the full LTS: one node per state (named by digest),
/// one edge per transition.
std::string to_dot(const System& sys, const Lts& lts);

}  // namespace reflow
