#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reflow/workflow.hpp"

namespace reflow {

/// The two graphs of a reconfiguration. Graph ids used throughout the engine:
/// 0 = old configuration, 1 = new configuration.
struct WorkflowSpec {
  Configuration old_cfg;
  Configuration new_cfg;

  friend bool operator==(const WorkflowSpec&, const WorkflowSpec&) = default;
};

inline constexpr std::uint8_t kOldCfg = 0;
inline constexpr std::uint8_t kNewCfg = 1;

enum class StrategyKind : std::uint8_t { Abort, SuspendResume, Overlap };

const char* to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(const std::string& s);

/// reconfig_steps models the duration of the reconfiguration interval as a
/// count of discrete internal actions. Abort is near-instantaneous and
/// requires reconfig_steps = 0.
struct ReconfigurationStrategy {
  StrategyKind variant = StrategyKind::Abort;
  std::uint32_t reconfig_steps = 0;

  friend bool operator==(const ReconfigurationStrategy&, const ReconfigurationStrategy&) = default;
};

/// When StartReconfig becomes enabled: in any RunningOld state (nullopt), or
/// only once at least `after_n_accepts` orders have been accepted. The trigger
/// gates enabledness; it never forces the reconfiguration to start.
struct ReconfigTrigger {
  std::optional<std::uint32_t> after_n_accepts;

  bool nondeterministic() const { return !after_n_accepts.has_value(); }

  friend bool operator==(const ReconfigTrigger&, const ReconfigTrigger&) = default;
};

/// A bounded checking instance: the arrival budget is what makes exhaustive
/// exploration finite.
struct Scenario {
  std::uint32_t arrival_budget = 0;
  ReconfigurationStrategy strategy;
  ReconfigTrigger reconfig_trigger;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Phase : std::uint8_t { RunningOld = 0, Reconfiguring = 1, RunningNew = 2 };

const char* to_string(Phase phase);

struct EngineMode {
  Phase phase = Phase::RunningOld;
  std::uint32_t steps_remaining = 0;  // meaningful only while Reconfiguring

  friend bool operator==(const EngineMode&, const EngineMode&) = default;
};

/// One in-flight order. `tokens` are positions (activity indices, sorted) on
/// the graph named by `executes_on`; `trace` is the sequence of activities the
/// order has fired so far, as indices into the same graph. `executes_on`
/// equals `accepted_under` except under deliberate fault injection.
struct Order {
  std::uint32_t serial = 0;
  std::uint8_t accepted_under = kOldCfg;
  std::uint8_t executes_on = kOldCfg;
  bool suspended = false;
  std::vector<std::uint16_t> tokens;
  std::vector<std::uint16_t> trace;

  friend bool operator==(const Order&, const Order&) = default;
};

/// Monotone verdict flags: once set they stay set in every successor state,
/// which makes the corresponding requirements safety properties. Conformance
/// is tracked per accepting configuration so that violations by old-accepted
/// and new-accepted orders remain distinguishable.
struct Flags {
  bool forced_rejection_seen = false;
  bool conformance_violation_old = false;
  bool conformance_violation_new = false;

  friend bool operator==(const Flags&, const Flags&) = default;
};

struct GlobalState {
  EngineMode mode;
  std::uint32_t arrivals_remaining = 0;
  std::uint32_t next_order_serial = 0;
  Flags flags;
  std::vector<Order> in_flight;  // sorted by serial

  friend bool operator==(const GlobalState&, const GlobalState&) = default;
};

// ---------------------------------------------------------------------------
// Transition labels

enum class LabelKind : std::uint8_t {
  Accept = 0,
  Step = 1,
  Complete = 2,
  BusinessReject = 3,
  StartReconfig = 4,
  ReconfigStep = 5,
  CompleteReconfig = 6,
  AbortOrder = 7,
  Suspend = 8,
  Resume = 9,
};

const char* to_string(LabelKind kind);

inline constexpr std::uint8_t kNoOutcome = 0xff;

/// Value-comparable label. `cfg` is the graph id the label's activity names
/// resolve on: accepted_under for Accept, executes_on for the order actions.
/// `outcome` is the Decision successor index for Step/BusinessReject on a
/// Decision. The total order (kind, order, act, outcome, cfg) fixes the
/// deterministic exploration order.
struct TransitionLabel {
  LabelKind kind = LabelKind::Accept;
  std::uint8_t cfg = kOldCfg;
  std::uint32_t order = 0;
  std::uint16_t act = CompiledConfig::kNoActivity;
  std::uint8_t outcome = kNoOutcome;

  friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
  friend bool operator<(const TransitionLabel& a, const TransitionLabel& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.order != b.order) return a.order < b.order;
    if (a.act != b.act) return a.act < b.act;
    if (a.outcome != b.outcome) return a.outcome < b.outcome;
    return a.cfg < b.cfg;
  }
};

bool is_order_scoped(LabelKind kind);

/// One line of an execution trace: a label and the digest of the state after
/// the atomic event the label belongs to. Labels emitted inside an atomic
/// event (AbortOrder, Suspend, Resume) share their event's post-state digest.
struct TraceLine {
  TransitionLabel label;
  std::uint64_t digest = 0;

  friend bool operator==(const TraceLine&, const TraceLine&) = default;
};

using ExecutionTrace = std::vector<TraceLine>;

std::string digest_hex(std::uint64_t digest);

// ---------------------------------------------------------------------------
// Simulation policies

struct RandomPolicy {
  std::uint64_t seed = 0;
};

/// Picks enabled(state)[choices[i]] at step i and stops after the script is
/// exhausted or no label is enabled.
struct ScriptPolicy {
  std::vector<std::size_t> choices;
};

using RunPolicy = std::variant<RandomPolicy, ScriptPolicy>;

/// Deliberate defect hooks for exercising the checker's failure paths. None
/// is the production semantics. AcceptNewOrdersOnOldGraph mis-wires
/// acceptance after the switchover: orders keep accepted_under = new but
/// execute on the old graph, so their completed traces are judged against the
/// wrong language. Never reachable from the CLI.
enum class InjectedFault : std::uint8_t { None, AcceptNewOrdersOnOldGraph };

// ---------------------------------------------------------------------------
// System

/// The small-step interleaving semantics of in-flight orders plus one
/// reconfiguration process. Pure: enabled/apply depend only on their
/// arguments; all mutation happens on copies.
class System {
 public:
  /// Validates both configurations and the scenario. Throws
  /// std::invalid_argument on any violation (including Abort with
  /// reconfig_steps > 0).
  System(WorkflowSpec spec, Scenario scenario, InjectedFault fault = InjectedFault::None);

  const WorkflowSpec& spec() const { return spec_; }
  const Scenario& scenario() const { return scenario_; }
  const CompiledConfig& config(std::uint8_t graph) const { return compiled_[graph]; }

  GlobalState initial_state() const;

  /// All labels permitted by the strategy semantics in `s`, sorted by the
  /// label total order. Empty exactly for terminal states.
  std::vector<TransitionLabel> enabled(const GlobalState& s) const;

  /// Deterministic successor under one atomic event. Labels the event emits
  /// as side effects (AbortOrder/Suspend/Resume, in ascending serial order)
  /// are appended to *emitted when it is non-null. Throws
  /// std::invalid_argument when `label` is not enabled in `s`.
  GlobalState apply(const GlobalState& s, const TransitionLabel& label,
                    std::vector<TransitionLabel>* emitted = nullptr) const;

  /// Canonical byte encoding: equal states encode equally and vice versa.
  /// Orders appear sorted by serial, tokens sorted by index.
  std::vector<std::uint8_t> encode(const GlobalState& s) const;

  /// FNV-1a 64 over encode(s).
  std::uint64_t digest(const GlobalState& s) const;

  /// Strictly decreases (lexicographically) on every transition:
  /// (arrivals_remaining, phase rank with RunningOld highest, steps_remaining,
  /// total remaining token weight). Witnesses acyclicity of the LTS.
  std::array<std::uint64_t, 4> measure(const GlobalState& s) const;

  std::string label_to_string(const TransitionLabel& label) const;

  /// Follows enabled/apply from the initial state until no label is enabled
  /// (or a script runs out), flattening each event into trace lines. Throws
  /// std::out_of_range on a script index past the enabled set.
  ExecutionTrace run(const RunPolicy& policy) const;

  /// One line per trace entry: `<index> <label> <digest-hex16>`.
  std::string trace_to_text(const ExecutionTrace& trace) const;

 private:
  void order_actions(const GlobalState& s, const Order& order,
                     std::vector<TransitionLabel>& out) const;
  bool start_trigger_satisfied(const GlobalState& s) const;
  GlobalState accept_order(const GlobalState& s, std::uint8_t under) const;
  void complete_order(GlobalState& s, std::size_t order_pos) const;

  WorkflowSpec spec_;
  Scenario scenario_;
  InjectedFault fault_;
  std::vector<CompiledConfig> compiled_;  // [kOldCfg], [kNewCfg]
};

}  // namespace reflow
