#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "reflow/casestudy.hpp"
#include "reflow/engine.hpp"

using namespace reflow;

namespace {

Scenario scenario_of(const std::string& name) {
  for (const auto& [n, sc] : default_scenarios()) {
    if (n == name) return sc;
  }
  REQUIRE(false);
  return {};
}

// First enabled label matching kind (and, when given, activity name / order).
TransitionLabel pick(const System& sys, const GlobalState& s, LabelKind kind,
                     const std::string& act_name = "", int order = -1) {
  for (const TransitionLabel& l : sys.enabled(s)) {
    if (l.kind != kind) continue;
    if (order >= 0 && l.order != static_cast<std::uint32_t>(order)) continue;
    if (!act_name.empty() && sys.config(l.cfg).name(l.act) != act_name) continue;
    return l;
  }
  REQUIRE_MESSAGE(false, "no enabled label of kind ", to_string(kind), " ", act_name);
  return {};
}

GlobalState replay_primaries(const System& sys, const ExecutionTrace& trace) {
  GlobalState s = sys.initial_state();
  for (const TraceLine& line : trace) {
    LabelKind k = line.label.kind;
    if (k == LabelKind::AbortOrder || k == LabelKind::Suspend || k == LabelKind::Resume) continue;
    s = sys.apply(s, line.label);
    CHECK(sys.digest(s) == line.digest);
  }
  return s;
}

}  // namespace

TEST_CASE("initial_state: budgets and flags") {
  System sys(casestudy_spec(), scenario_of("suspend"));
  GlobalState s = sys.initial_state();
  CHECK(s.mode.phase == Phase::RunningOld);
  CHECK(s.arrivals_remaining == 2);
  CHECK(s.next_order_serial == 0);
  CHECK(s.in_flight.empty());
  CHECK(s.flags == Flags{});

  Scenario wide = scenario_of("suspend");
  wide.arrival_budget = 3;
  System sys3(casestudy_spec(), wide);
  CHECK(sys3.initial_state().arrivals_remaining == 3);
}

TEST_CASE("constructor rejects invalid configurations and scenarios") {
  Scenario sc = scenario_of("abort");
  sc.strategy.reconfig_steps = 1;
  CHECK_THROWS_AS(System(casestudy_spec(), sc), std::invalid_argument);

  WorkflowSpec broken = casestudy_spec();
  broken.new_cfg.activities[2].successors[0].target = "Nowhere";
  CHECK_THROWS_AS(System(broken, scenario_of("suspend")), std::invalid_argument);
}

TEST_CASE("enabled: budget 0 leaves only StartReconfig") {
  Scenario sc = scenario_of("suspend");
  sc.arrival_budget = 0;
  System sys(casestudy_spec(), sc);
  std::vector<TransitionLabel> en = sys.enabled(sys.initial_state());
  REQUIRE(en.size() == 1);
  CHECK(en[0].kind == LabelKind::StartReconfig);
}

TEST_CASE("enabled: suspension quiesces everything but the reconfiguration") {
  System sys(casestudy_spec(), scenario_of("suspend"));
  GlobalState s = sys.initial_state();
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  std::vector<TransitionLabel> emitted;
  s = sys.apply(s, pick(sys, s, LabelKind::StartReconfig), &emitted);
  REQUIRE(emitted.size() == 1);
  CHECK(emitted[0].kind == LabelKind::Suspend);
  CHECK(emitted[0].order == 0);
  REQUIRE(s.in_flight.size() == 1);
  CHECK(s.in_flight[0].suspended);
  CHECK(s.mode.phase == Phase::Reconfiguring);
  CHECK(s.mode.steps_remaining == 2);

  std::vector<TransitionLabel> en = sys.enabled(s);
  REQUIRE(en.size() == 1);
  CHECK(en[0].kind == LabelKind::ReconfigStep);

  s = sys.apply(s, en[0]);
  s = sys.apply(s, pick(sys, s, LabelKind::ReconfigStep));
  en = sys.enabled(s);
  REQUIRE(en.size() == 1);
  CHECK(en[0].kind == LabelKind::CompleteReconfig);

  emitted.clear();
  s = sys.apply(s, en[0], &emitted);
  REQUIRE(emitted.size() == 1);
  CHECK(emitted[0].kind == LabelKind::Resume);
  CHECK(s.mode.phase == Phase::RunningNew);
  REQUIRE(s.in_flight.size() == 1);
  CHECK(!s.in_flight[0].suspended);
  // The resumed order finishes on its original graph.
  CHECK(s.in_flight[0].executes_on == kOldCfg);
  TransitionLabel step = pick(sys, s, LabelKind::Step, "OrderReceipt", 0);
  CHECK(step.cfg == kOldCfg);
}

TEST_CASE("enabled: overlap runs old orders, new accepts and reconfig steps together") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  GlobalState s = sys.initial_state();
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  s = sys.apply(s, pick(sys, s, LabelKind::StartReconfig));
  CHECK(s.mode.phase == Phase::Reconfiguring);

  std::vector<TransitionLabel> en = sys.enabled(s);
  bool has_old_step = false, has_accept_new = false, has_reconfig_step = false;
  for (const TransitionLabel& l : en) {
    if (l.kind == LabelKind::Step && l.cfg == kOldCfg && l.order == 0) has_old_step = true;
    if (l.kind == LabelKind::Accept && l.cfg == kNewCfg) has_accept_new = true;
    if (l.kind == LabelKind::ReconfigStep) has_reconfig_step = true;
  }
  CHECK(has_old_step);
  CHECK(has_accept_new);
  CHECK(has_reconfig_step);
  CHECK(std::is_sorted(en.begin(), en.end()));

  // CompleteReconfig waits for both the step budget and the old-order drain.
  CHECK(std::none_of(en.begin(), en.end(), [](const TransitionLabel& l) {
    return l.kind == LabelKind::CompleteReconfig;
  }));
}

TEST_CASE("apply: abort switches in one step and records the forced rejection") {
  System sys(casestudy_spec(), scenario_of("abort"));
  GlobalState s = sys.initial_state();

  // Trigger is after_n_accepts = 1: StartReconfig is not yet enabled.
  for (const TransitionLabel& l : sys.enabled(s)) CHECK(l.kind != LabelKind::StartReconfig);

  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  CHECK(s.arrivals_remaining == 1);
  std::vector<TransitionLabel> emitted;
  GlobalState t = sys.apply(s, pick(sys, s, LabelKind::StartReconfig), &emitted);
  CHECK(t.mode.phase == Phase::RunningNew);
  CHECK(t.in_flight.empty());
  CHECK(t.flags.forced_rejection_seen);
  REQUIRE(emitted.size() == 1);
  CHECK(emitted[0].kind == LabelKind::AbortOrder);
  CHECK(emitted[0].order == 0);

  // With nothing in flight the switch aborts nothing and sets no flag.
  GlobalState drained = s;
  while (!drained.in_flight.empty()) {
    std::vector<TransitionLabel> en = sys.enabled(drained);
    auto it = std::find_if(en.begin(), en.end(), [](const TransitionLabel& l) {
      return is_order_scoped(l.kind) && l.kind != LabelKind::Accept;
    });
    REQUIRE(it != en.end());
    drained = sys.apply(drained, *it);
  }
  emitted.clear();
  GlobalState u = sys.apply(drained, pick(sys, drained, LabelKind::StartReconfig), &emitted);
  CHECK(emitted.empty());
  CHECK(!u.flags.forced_rejection_seen);
  CHECK(u.mode.phase == Phase::RunningNew);
}

TEST_CASE("apply: business rejection is not a forced rejection") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  GlobalState s = sys.initial_state();
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  s = sys.apply(s, pick(sys, s, LabelKind::Step, "OrderReceipt"));
  TransitionLabel reject = pick(sys, s, LabelKind::BusinessReject, "Evaluation");
  CHECK(sys.config(reject.cfg).outcomes(reject.act)[reject.outcome] == "reject");
  s = sys.apply(s, reject);
  CHECK(!s.flags.forced_rejection_seen);
  REQUIRE(s.in_flight.size() == 1);
  // Rejected orders still drain through Close.
  TransitionLabel complete = pick(sys, s, LabelKind::Complete, "", 0);
  s = sys.apply(s, complete);
  CHECK(s.in_flight.empty());
  CHECK(!s.flags.conformance_violation_old);
  CHECK(!s.flags.conformance_violation_new);
}

TEST_CASE("apply: steps on different orders commute") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  GlobalState s = sys.initial_state();
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  REQUIRE(s.in_flight.size() == 2);

  TransitionLabel a = pick(sys, s, LabelKind::Step, "OrderReceipt", 0);
  TransitionLabel b = pick(sys, s, LabelKind::Step, "OrderReceipt", 1);
  GlobalState ab = sys.apply(sys.apply(s, a), b);
  GlobalState ba = sys.apply(sys.apply(s, b), a);
  CHECK(ab == ba);
  CHECK(sys.encode(ab) == sys.encode(ba));
}

TEST_CASE("apply: rejects labels that are not enabled") {
  System sys(casestudy_spec(), scenario_of("suspend"));
  GlobalState s = sys.initial_state();
  TransitionLabel bogus{LabelKind::Complete, kOldCfg, 7, 0, kNoOutcome};
  CHECK_THROWS_AS((void)sys.apply(s, bogus), std::invalid_argument);
  TransitionLabel emitted_only{LabelKind::Suspend, kOldCfg, 0, CompiledConfig::kNoActivity,
                               kNoOutcome};
  CHECK_THROWS_AS((void)sys.apply(s, emitted_only), std::invalid_argument);
}

TEST_CASE("run: forced chain at budget 0") {
  Scenario sc = scenario_of("suspend");
  sc.arrival_budget = 0;
  System sys(casestudy_spec(), sc);
  ExecutionTrace trace = sys.run(RandomPolicy{7});
  REQUIRE(trace.size() == 2 + sc.strategy.reconfig_steps);
  CHECK(trace[0].label.kind == LabelKind::StartReconfig);
  CHECK(trace[1].label.kind == LabelKind::ReconfigStep);
  CHECK(trace[2].label.kind == LabelKind::ReconfigStep);
  CHECK(trace[3].label.kind == LabelKind::CompleteReconfig);

  std::string text = sys.trace_to_text(trace);
  CHECK(text.find("0 StartReconfig ") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("run: deterministic under a fixed seed, scripted runs check bounds") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  ExecutionTrace a = sys.run(RandomPolicy{42});
  ExecutionTrace b = sys.run(RandomPolicy{42});
  CHECK(a == b);
  CHECK(sys.trace_to_text(a) == sys.trace_to_text(b));

  CHECK_THROWS_AS((void)sys.run(ScriptPolicy{{99}}), std::out_of_range);
  ExecutionTrace scripted = sys.run(ScriptPolicy{{0, 0}});
  CHECK(scripted.size() == 2);
}

TEST_CASE("run: random executions keep the global invariants") {
  for (const auto& [name, sc] : default_scenarios()) {
    System sys(casestudy_spec(), sc);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      GlobalState s = sys.initial_state();
      ExecutionTrace trace = sys.run(RandomPolicy{seed});
      std::array<std::uint64_t, 4> m = sys.measure(s);
      Phase phase = s.mode.phase;
      std::uint32_t reconfig_count = 0;
      for (const TraceLine& line : trace) {
        LabelKind k = line.label.kind;
        if (k == LabelKind::AbortOrder || k == LabelKind::Suspend || k == LabelKind::Resume) {
          continue;
        }
        GlobalState t = sys.apply(s, line.label);

        // Measure strictly decreases on every transition.
        std::array<std::uint64_t, 4> mt = sys.measure(t);
        CHECK(mt < m);

        // Phase is monotone, and StartReconfig happens at most once.
        CHECK(static_cast<int>(t.mode.phase) >= static_cast<int>(phase));
        if (k == LabelKind::StartReconfig) reconfig_count++;

        // No preemption: only the labelled order's tokens and trace change.
        for (const Order& before : s.in_flight) {
          if (is_order_scoped(k) && before.serial == line.label.order) continue;
          auto it = std::find_if(t.in_flight.begin(), t.in_flight.end(), [&](const Order& o) {
            return o.serial == before.serial;
          });
          if (k == LabelKind::StartReconfig &&
              sys.scenario().strategy.variant == StrategyKind::Abort) {
            CHECK(it == t.in_flight.end());
            continue;
          }
          REQUIRE(it != t.in_flight.end());
          CHECK(it->tokens == before.tokens);
          CHECK(it->trace == before.trace);
          CHECK(it->accepted_under == before.accepted_under);
        }

        // Acceptance partition: pre-switch accepts run old, later ones new.
        if (k == LabelKind::Accept) {
          std::uint8_t expect = s.mode.phase == Phase::RunningOld ? kOldCfg : kNewCfg;
          CHECK(t.in_flight.back().accepted_under == expect);
        }

        // Monotone flags.
        CHECK((!s.flags.forced_rejection_seen || t.flags.forced_rejection_seen));
        CHECK((!s.flags.conformance_violation_old || t.flags.conformance_violation_old));
        CHECK((!s.flags.conformance_violation_new || t.flags.conformance_violation_new));

        s = t;
        m = mt;
        phase = t.mode.phase;
      }
      CHECK(reconfig_count <= 1);
      CHECK(sys.enabled(s).empty());
      // The production semantics never violates conformance.
      CHECK(!s.flags.conformance_violation_old);
      CHECK(!s.flags.conformance_violation_new);
    }
  }
}

TEST_CASE("run: overlap reaches RunningNew terminals across 1000 seeds") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GlobalState final_state = replay_primaries(sys, sys.run(RandomPolicy{seed}));
    CHECK(sys.enabled(final_state).empty());
    CHECK(final_state.mode.phase == Phase::RunningNew);
    CHECK(final_state.in_flight.empty());
    CHECK(final_state.arrivals_remaining == 0);
  }
}

TEST_CASE("fault injection: post-switch accepts run the old graph") {
  System sys(casestudy_spec(), scenario_of("overlap"), InjectedFault::AcceptNewOrdersOnOldGraph);
  GlobalState s = sys.initial_state();
  s = sys.apply(s, pick(sys, s, LabelKind::StartReconfig));
  s = sys.apply(s, pick(sys, s, LabelKind::Accept));
  REQUIRE(s.in_flight.size() == 1);
  CHECK(s.in_flight[0].accepted_under == kNewCfg);
  CHECK(s.in_flight[0].executes_on == kOldCfg);

  // Completing such an order on the accept path trips the new-side flag.
  while (!s.in_flight.empty()) {
    std::vector<TransitionLabel> en = sys.enabled(s);
    auto it = std::find_if(en.begin(), en.end(), [&](const TransitionLabel& l) {
      if (l.kind == LabelKind::Step && l.outcome != kNoOutcome) {
        return sys.config(l.cfg).outcomes(l.act)[l.outcome] == "accept";
      }
      return l.kind == LabelKind::Step || l.kind == LabelKind::Complete;
    });
    REQUIRE(it != en.end());
    s = sys.apply(s, *it);
  }
  CHECK(s.flags.conformance_violation_new);
  CHECK(!s.flags.conformance_violation_old);
}

TEST_CASE("encoding: canonical bytes separate distinct states") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  GlobalState s = sys.initial_state();
  GlobalState t = sys.apply(s, pick(sys, s, LabelKind::Accept));
  CHECK(sys.encode(s) == sys.encode(sys.initial_state()));
  CHECK(sys.encode(s) != sys.encode(t));
  CHECK(sys.digest(s) != sys.digest(t));
  CHECK(digest_hex(sys.digest(s)).size() == 16);
}

TEST_CASE("labels: rendering") {
  System sys(casestudy_spec(), scenario_of("overlap"));
  GlobalState s = sys.initial_state();
  TransitionLabel accept = pick(sys, s, LabelKind::Accept);
  CHECK(sys.label_to_string(accept) == "Accept(0,C1)");
  s = sys.apply(s, accept);
  CHECK(sys.label_to_string(pick(sys, s, LabelKind::Step, "OrderReceipt")) ==
        "Step(0,OrderReceipt)");
  s = sys.apply(s, pick(sys, s, LabelKind::Step, "OrderReceipt"));
  CHECK(sys.label_to_string(pick(sys, s, LabelKind::Step, "Evaluation")) ==
        "Step(0,Evaluation:accept)");
  CHECK(sys.label_to_string(pick(sys, s, LabelKind::BusinessReject, "Evaluation")) ==
        "BusinessReject(0,Evaluation)");
  CHECK(sys.label_to_string(pick(sys, s, LabelKind::StartReconfig)) == "StartReconfig");
}
