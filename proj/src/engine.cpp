#include "reflow/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace reflow {

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Abort: return "abort";
    case StrategyKind::SuspendResume: return "suspend_resume";
    case StrategyKind::Overlap: return "overlap";
  }
  return "?";
}

std::optional<StrategyKind> strategy_from_string(const std::string& s) {
  if (s == "abort") return StrategyKind::Abort;
  if (s == "suspend_resume") return StrategyKind::SuspendResume;
  if (s == "overlap") return StrategyKind::Overlap;
  return std::nullopt;
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::RunningOld: return "RunningOld";
    case Phase::Reconfiguring: return "Reconfiguring";
    case Phase::RunningNew: return "RunningNew";
  }
  return "?";
}

const char* to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::Accept: return "Accept";
    case LabelKind::Step: return "Step";
    case LabelKind::Complete: return "Complete";
    case LabelKind::BusinessReject: return "BusinessReject";
    case LabelKind::StartReconfig: return "StartReconfig";
    case LabelKind::ReconfigStep: return "ReconfigStep";
    case LabelKind::CompleteReconfig: return "CompleteReconfig";
    case LabelKind::AbortOrder: return "AbortOrder";
    case LabelKind::Suspend: return "Suspend";
    case LabelKind::Resume: return "Resume";
  }
  return "?";
}

bool is_order_scoped(LabelKind kind) {
  switch (kind) {
    case LabelKind::StartReconfig:
    case LabelKind::ReconfigStep:
    case LabelKind::CompleteReconfig:
      return false;
    default:
      return true;
  }
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

// ---------------------------------------------------------------------------
// System

System::System(WorkflowSpec spec, Scenario scenario, InjectedFault fault)
    : spec_(std::move(spec)), scenario_(scenario), fault_(fault) {
  compiled_.push_back(CompiledConfig::compile(spec_.old_cfg));
  compiled_.push_back(CompiledConfig::compile(spec_.new_cfg));
  if (scenario_.strategy.variant == StrategyKind::Abort && scenario_.strategy.reconfig_steps != 0) {
    throw std::invalid_argument("strategy abort requires reconfig_steps = 0");
  }
}

GlobalState System::initial_state() const {
  GlobalState s;
  s.mode = {Phase::RunningOld, 0};
  s.arrivals_remaining = scenario_.arrival_budget;
  s.next_order_serial = 0;
  return s;
}

bool System::start_trigger_satisfied(const GlobalState& s) const {
  const ReconfigTrigger& trigger = scenario_.reconfig_trigger;
  return trigger.nondeterministic() || s.next_order_serial >= *trigger.after_n_accepts;
}

void System::order_actions(const GlobalState& s, const Order& order,
                           std::vector<TransitionLabel>& out) const {
  (void)s;
  if (order.suspended) return;
  const CompiledConfig& cc = compiled_[order.executes_on];
  std::uint16_t prev = CompiledConfig::kNoActivity;
  for (std::uint16_t a : order.tokens) {
    if (a == prev) continue;  // one action per position, however many tokens rest there
    prev = a;
    switch (cc.kind(a)) {
      case ActivityKind::Task:
        out.push_back({LabelKind::Step, order.executes_on, order.serial, a, kNoOutcome});
        break;
      case ActivityKind::Decision:
        for (std::size_t i = 0; i < cc.outcomes(a).size(); ++i) {
          LabelKind kind =
              cc.outcomes(a)[i] == "reject" ? LabelKind::BusinessReject : LabelKind::Step;
          out.push_back({kind, order.executes_on, order.serial, a, static_cast<std::uint8_t>(i)});
        }
        break;
      case ActivityKind::Final:
        if (order.tokens.size() == 1) {
          out.push_back({LabelKind::Complete, order.executes_on, order.serial, a, kNoOutcome});
        } else {
          // A final on one branch of a still-active fork: consumes its token
          // without completing the order. Valid graphs never reach this.
          out.push_back({LabelKind::Step, order.executes_on, order.serial, a, kNoOutcome});
        }
        break;
      case ActivityKind::Join:
        break;  // waiting for sibling branches
      case ActivityKind::Fork:
        break;  // never rests; place_token resolves forks eagerly
    }
  }
}

std::vector<TransitionLabel> System::enabled(const GlobalState& s) const {
  std::vector<TransitionLabel> out;
  const StrategyKind strat = scenario_.strategy.variant;
  switch (s.mode.phase) {
    case Phase::RunningOld: {
      if (s.arrivals_remaining > 0) {
        out.push_back({LabelKind::Accept, kOldCfg, s.next_order_serial,
                       CompiledConfig::kNoActivity, kNoOutcome});
      }
      for (const Order& o : s.in_flight) order_actions(s, o, out);
      if (start_trigger_satisfied(s)) {
        out.push_back({LabelKind::StartReconfig, 0, 0, CompiledConfig::kNoActivity, kNoOutcome});
      }
      break;
    }
    case Phase::Reconfiguring: {
      if (strat == StrategyKind::SuspendResume) {
        // Quiescence: nothing moves but the reconfiguration itself.
        LabelKind kind = s.mode.steps_remaining > 0 ? LabelKind::ReconfigStep
                                                    : LabelKind::CompleteReconfig;
        out.push_back({kind, 0, 0, CompiledConfig::kNoActivity, kNoOutcome});
        break;
      }
      // Overlap: old-mode work, new arrivals, and the reconfiguration all
      // proceed concurrently.
      if (s.mode.steps_remaining > 0) {
        out.push_back({LabelKind::ReconfigStep, 0, 0, CompiledConfig::kNoActivity, kNoOutcome});
      }
      if (s.arrivals_remaining > 0) {
        out.push_back({LabelKind::Accept, kNewCfg, s.next_order_serial,
                       CompiledConfig::kNoActivity, kNoOutcome});
      }
      for (const Order& o : s.in_flight) order_actions(s, o, out);
      bool old_drained = std::none_of(s.in_flight.begin(), s.in_flight.end(), [](const Order& o) {
        return o.accepted_under == kOldCfg;
      });
      if (s.mode.steps_remaining == 0 && old_drained) {
        out.push_back(
            {LabelKind::CompleteReconfig, 0, 0, CompiledConfig::kNoActivity, kNoOutcome});
      }
      break;
    }
    case Phase::RunningNew: {
      if (s.arrivals_remaining > 0) {
        out.push_back({LabelKind::Accept, kNewCfg, s.next_order_serial,
                       CompiledConfig::kNoActivity, kNoOutcome});
      }
      for (const Order& o : s.in_flight) order_actions(s, o, out);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GlobalState System::accept_order(const GlobalState& s, std::uint8_t under) const {
  GlobalState t = s;
  t.arrivals_remaining -= 1;
  Order o;
  o.serial = t.next_order_serial++;
  o.accepted_under = under;
  o.executes_on = under;
  if (fault_ == InjectedFault::AcceptNewOrdersOnOldGraph && under == kNewCfg) {
    o.executes_on = kOldCfg;
  }
  const CompiledConfig& cc = compiled_[o.executes_on];
  cc.place_token(o.tokens, cc.entry());
  t.in_flight.push_back(std::move(o));  // serials ascend, so the vector stays sorted
  return t;
}

void System::complete_order(GlobalState& s, std::size_t order_pos) const {
  const Order& o = s.in_flight[order_pos];
  Trace names;
  names.reserve(o.trace.size());
  const CompiledConfig& ran_on = compiled_[o.executes_on];
  for (std::uint16_t a : o.trace) names.push_back(ran_on.name(a));
  if (!conforms(names, compiled_[o.accepted_under])) {
    if (o.accepted_under == kOldCfg) {
      s.flags.conformance_violation_old = true;
    } else {
      s.flags.conformance_violation_new = true;
    }
  }
  s.in_flight.erase(s.in_flight.begin() + static_cast<std::ptrdiff_t>(order_pos));
}

GlobalState System::apply(const GlobalState& s, const TransitionLabel& label,
                          std::vector<TransitionLabel>* emitted) const {
  // Guarding by membership keeps apply and enabled incapable of drifting
  // apart; the exploration state spaces here are small enough to pay for it.
  std::vector<TransitionLabel> en = enabled(s);
  if (!std::binary_search(en.begin(), en.end(), label)) {
    throw std::invalid_argument("label not enabled: " + label_to_string(label));
  }

  auto order_pos = [&](const GlobalState& t) {
    auto it = std::lower_bound(
        t.in_flight.begin(), t.in_flight.end(), label.order,
        [](const Order& o, std::uint32_t serial) { return o.serial < serial; });
    return static_cast<std::size_t>(it - t.in_flight.begin());
  };

  switch (label.kind) {
    case LabelKind::Accept:
      return accept_order(s, label.cfg);

    case LabelKind::Step:
    case LabelKind::BusinessReject: {
      GlobalState t = s;
      Order& o = t.in_flight[order_pos(t)];
      const CompiledConfig& cc = compiled_[o.executes_on];
      std::size_t choice = label.outcome == kNoOutcome ? 0 : label.outcome;
      cc.fire(o.tokens, label.act, choice);
      o.trace.push_back(label.act);
      return t;
    }

    case LabelKind::Complete: {
      GlobalState t = s;
      std::size_t pos = order_pos(t);
      Order& o = t.in_flight[pos];
      compiled_[o.executes_on].fire(o.tokens, label.act, 0);
      o.trace.push_back(label.act);
      complete_order(t, pos);
      return t;
    }

    case LabelKind::StartReconfig: {
      GlobalState t = s;
      switch (scenario_.strategy.variant) {
        case StrategyKind::Abort:
          // Near-instantaneous switch: in-flight orders are casualties.
          t.mode = {Phase::RunningNew, 0};
          for (const Order& o : t.in_flight) {
            if (emitted != nullptr) {
              emitted->push_back({LabelKind::AbortOrder, o.executes_on, o.serial,
                                  CompiledConfig::kNoActivity, kNoOutcome});
            }
            t.flags.forced_rejection_seen = true;
          }
          t.in_flight.clear();
          break;
        case StrategyKind::SuspendResume:
          t.mode = {Phase::Reconfiguring, scenario_.strategy.reconfig_steps};
          for (Order& o : t.in_flight) {
            o.suspended = true;
            if (emitted != nullptr) {
              emitted->push_back({LabelKind::Suspend, o.executes_on, o.serial,
                                  CompiledConfig::kNoActivity, kNoOutcome});
            }
          }
          break;
        case StrategyKind::Overlap:
          t.mode = {Phase::Reconfiguring, scenario_.strategy.reconfig_steps};
          break;
      }
      return t;
    }

    case LabelKind::ReconfigStep: {
      GlobalState t = s;
      t.mode.steps_remaining -= 1;
      return t;
    }

    case LabelKind::CompleteReconfig: {
      GlobalState t = s;
      t.mode = {Phase::RunningNew, 0};
      for (Order& o : t.in_flight) {
        if (o.suspended) {
          o.suspended = false;
          if (emitted != nullptr) {
            emitted->push_back({LabelKind::Resume, o.executes_on, o.serial,
                                CompiledConfig::kNoActivity, kNoOutcome});
          }
        }
      }
      return t;
    }

    case LabelKind::AbortOrder:
    case LabelKind::Suspend:
    case LabelKind::Resume:
      break;  // emitted inside atomic events, never applied directly
  }
  throw std::invalid_argument("label cannot be applied directly: " + label_to_string(label));
}

// ---------------------------------------------------------------------------
// Canonical encoding

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

}  // namespace

std::vector<std::uint8_t> System::encode(const GlobalState& s) const {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(s.mode.phase));
  put_u32(out, s.mode.steps_remaining);
  put_u32(out, s.arrivals_remaining);
  put_u32(out, s.next_order_serial);
  out.push_back(static_cast<std::uint8_t>((s.flags.forced_rejection_seen ? 1 : 0) |
                                          (s.flags.conformance_violation_old ? 2 : 0) |
                                          (s.flags.conformance_violation_new ? 4 : 0)));
  put_u32(out, static_cast<std::uint32_t>(s.in_flight.size()));
  for (const Order& o : s.in_flight) {
    put_u32(out, o.serial);
    out.push_back(o.accepted_under);
    out.push_back(o.executes_on);
    out.push_back(o.suspended ? 1 : 0);
    put_u16(out, static_cast<std::uint16_t>(o.tokens.size()));
    for (std::uint16_t a : o.tokens) put_u16(out, a);
    put_u16(out, static_cast<std::uint16_t>(o.trace.size()));
    for (std::uint16_t a : o.trace) put_u16(out, a);
  }
  return out;
}

std::uint64_t System::digest(const GlobalState& s) const {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : encode(s)) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::array<std::uint64_t, 4> System::measure(const GlobalState& s) const {
  std::uint64_t phase_rank = 0;
  switch (s.mode.phase) {
    case Phase::RunningOld: phase_rank = 2; break;
    case Phase::Reconfiguring: phase_rank = 1; break;
    case Phase::RunningNew: phase_rank = 0; break;
  }
  std::uint64_t weight = 0;
  for (const Order& o : s.in_flight) {
    const CompiledConfig& cc = compiled_[o.executes_on];
    for (std::uint16_t a : o.tokens) weight += cc.weight(a);
  }
  return {s.arrivals_remaining, phase_rank, s.mode.steps_remaining, weight};
}

std::string System::label_to_string(const TransitionLabel& label) const {
  std::string serial = std::to_string(label.order);
  switch (label.kind) {
    case LabelKind::Accept:
      return "Accept(" + serial + "," + compiled_[label.cfg].id() + ")";
    case LabelKind::Step: {
      const CompiledConfig& cc = compiled_[label.cfg];
      std::string text = "Step(" + serial + "," + cc.name(label.act);
      if (label.outcome != kNoOutcome) text += ":" + cc.outcomes(label.act)[label.outcome];
      return text + ")";
    }
    case LabelKind::BusinessReject:
      return "BusinessReject(" + serial + "," + compiled_[label.cfg].name(label.act) + ")";
    case LabelKind::Complete:
      return "Complete(" + serial + ")";
    case LabelKind::StartReconfig:
      return "StartReconfig";
    case LabelKind::ReconfigStep:
      return "ReconfigStep";
    case LabelKind::CompleteReconfig:
      return "CompleteReconfig";
    case LabelKind::AbortOrder:
      return "AbortOrder(" + serial + ")";
    case LabelKind::Suspend:
      return "Suspend(" + serial + ")";
    case LabelKind::Resume:
      return "Resume(" + serial + ")";
  }
  return "?";
}

ExecutionTrace System::run(const RunPolicy& policy) const {
  ExecutionTrace out;
  GlobalState s = initial_state();
  std::mt19937_64 rng(std::holds_alternative<RandomPolicy>(policy)
                          ? std::get<RandomPolicy>(policy).seed
                          : 0);
  std::size_t script_pos = 0;
  while (true) {
    std::vector<TransitionLabel> en = enabled(s);
    if (en.empty()) break;
    std::size_t pick = 0;
    if (std::holds_alternative<RandomPolicy>(policy)) {
      pick = std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng);
    } else {
      const ScriptPolicy& script = std::get<ScriptPolicy>(policy);
      if (script_pos == script.choices.size()) break;
      pick = script.choices[script_pos++];
      if (pick >= en.size()) {
        throw std::out_of_range("script index " + std::to_string(pick) +
                                " out of range (enabled: " + std::to_string(en.size()) + ")");
      }
    }
    std::vector<TransitionLabel> emitted;
    s = apply(s, en[pick], &emitted);
    std::uint64_t d = digest(s);
    out.push_back({en[pick], d});
    for (const TransitionLabel& e : emitted) out.push_back({e, d});
  }
  return out;
}

std::string System::trace_to_text(const ExecutionTrace& trace) const {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i);
    out += ' ';
    out += label_to_string(trace[i].label);
    out += ' ';
    out += digest_hex(trace[i].digest);
    out += '\n';
  }
  return out;
}

}  // namespace reflow
