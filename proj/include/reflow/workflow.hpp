#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace reflow {

/// Symbolic identifiers. Activity and configuration names are case-sensitive
/// tokens of at most 64 characters, matching [A-Za-z0-9_.-]+.
using ActivityId = std::string;
using ConfigId = std::string;
using OutcomeLabel = std::string;

/// An order's completed activities, in completion order. Fork and Join nodes
/// route tokens silently and never appear in traces.
using Trace = std::vector<ActivityId>;

enum class ActivityKind : std::uint8_t { Task, Decision, Fork, Join, Final };

const char* to_string(ActivityKind kind);
std::optional<ActivityKind> activity_kind_from_string(const std::string& s);

/// One outgoing edge. `outcome` is nonempty exactly for Decision successors.
struct Successor {
  ActivityId target;
  OutcomeLabel outcome;

  friend bool operator==(const Successor&, const Successor&) = default;
};

struct Activity {
  ActivityId id;
  ActivityKind kind = ActivityKind::Task;
  std::vector<Successor> successors;

  friend bool operator==(const Activity&, const Activity&) = default;
};

/// A directed acyclic activity graph; the unit that reconfiguration replaces.
struct Configuration {
  ConfigId id;
  ActivityId entry;
  std::vector<Activity> activities;

  const Activity* find(const ActivityId& id) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind : std::uint8_t {
  Unreachable,
  Cycle,
  DeadEnd,
  BadArity,
  DuplicateOutcome,
  UnbalancedFork,
  // Referential-integrity kinds; a graph with any of these cannot play the
  // token game at all.
  DuplicateId,
  BadId,
  UnknownSuccessor,
  MissingEntry,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  ActivityId activity;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

/// Checks every Configuration invariant. Returns an empty list iff the
/// configuration is well-formed. Violations come out in phases (integrity,
/// arity, outcome labels, reachability, cycles, dead ends, fork balance),
/// sorted by activity name within each phase. Later phases are skipped when
/// an earlier one fails in a way that makes them meaningless: a cyclic graph
/// reports the cycle but not dead ends or fork imbalance.
std::vector<Violation> validate_configuration(const Configuration& cfg);

// ---------------------------------------------------------------------------
// Graph queries

/// Successor set of `a`: the single successor for Task/Join, the successor
/// matching `outcome` for a Decision, every branch head for a Fork, empty for
/// Final. Throws std::invalid_argument for an unknown activity, a missing or
/// unknown outcome on a Decision, or an outcome supplied for a non-Decision.
std::set<ActivityId> successors(const Configuration& cfg, const ActivityId& a,
                                const std::optional<OutcomeLabel>& outcome = std::nullopt);

// ---------------------------------------------------------------------------
// Compiled form
//
// Index-based tables for the token game. The exploration machinery runs over
// these instead of string ids; activity index 0..n-1 follows the order of
// Configuration::activities.

class CompiledConfig {
 public:
  static constexpr std::uint16_t kNoActivity = 0xffff;

  /// Compiles a configuration that passed validate_configuration. Throws
  /// std::invalid_argument if any violation remains.
  static CompiledConfig compile(const Configuration& cfg);

  /// Compiles any configuration whose ids resolve (entry exists, successors
  /// known, no duplicate ids). Token weights are filled only when the graph
  /// is acyclic. Returns nullopt when the graph cannot play the token game.
  static std::optional<CompiledConfig> compile_lenient(const Configuration& cfg);

  const ConfigId& id() const { return id_; }
  std::uint16_t entry() const { return entry_; }
  std::uint16_t size() const { return static_cast<std::uint16_t>(kind_.size()); }

  ActivityKind kind(std::uint16_t a) const { return kind_[a]; }
  const std::vector<std::uint16_t>& succ(std::uint16_t a) const { return succ_[a]; }
  const std::vector<OutcomeLabel>& outcomes(std::uint16_t a) const { return outcome_[a]; }
  std::uint16_t indegree(std::uint16_t a) const { return indegree_[a]; }
  const std::string& name(std::uint16_t a) const { return names_[a]; }
  std::uint16_t index_of(const std::string& name) const;  // kNoActivity if absent

  /// Remaining recorded firings attributable to one token resting at `a`,
  /// maximized over Decision outcomes. Strictly decreases on every recorded
  /// firing, which is what makes engine executions well-founded. Zero-filled
  /// for cyclic graphs compiled leniently.
  std::uint32_t weight(std::uint16_t a) const { return weight_[a]; }
  bool has_weights() const { return has_weights_; }

  /// Places a token at `a` and resolves routing nodes: a Fork splits the
  /// token across its branches, a Join that has collected tokens from all of
  /// its incoming branches consumes them and forwards one token. `marking`
  /// stays sorted.
  void place_token(std::vector<std::uint16_t>& marking, std::uint16_t a) const;

  /// Fires activity `a` from `marking`: consumes one token at `a` and places
  /// tokens at the chosen successors. `succ_choice` selects the Decision
  /// outcome (index into succ(a)); it is ignored for Task and Final. Returns
  /// false (marking untouched) when `a` holds no token or is a routing node.
  bool fire(std::vector<std::uint16_t>& marking, std::uint16_t a, std::size_t succ_choice) const;

 private:
  CompiledConfig() = default;

  ConfigId id_;
  std::uint16_t entry_ = 0;
  bool has_weights_ = false;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint16_t> index_;
  std::vector<ActivityKind> kind_;
  std::vector<std::vector<std::uint16_t>> succ_;
  std::vector<std::vector<OutcomeLabel>> outcome_;
  std::vector<std::uint16_t> indegree_;
  std::vector<std::uint32_t> weight_;
};

// ---------------------------------------------------------------------------
// Trace language

/// True iff `trace` is a complete run of the token game on `cfg`: one token
/// starts at the entry, each step consumes a token at that activity and
/// produces tokens at its successors (any Decision outcome permitted; a Fork
/// splits, a Join waits for all of its branches), and the run ends with every
/// token consumed at a Final activity. Malformed configurations accept
/// nothing.
bool conforms(const Trace& trace, const Configuration& cfg);

/// conforms() over an already-compiled configuration.
bool conforms(const Trace& trace, const CompiledConfig& cc);

/// All complete runs of the token game of length <= max_len, in lexicographic
/// order. Serves as the independent language oracle for conforms(); the
/// enumeration is written against the token-game rules directly and shares no
/// replay machinery with it.
std::vector<Trace> enumerate_traces(const Configuration& cfg, std::size_t max_len);

}  // namespace reflow
