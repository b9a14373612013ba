#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "reflow/casestudy.hpp"
#include "reflow/checker.hpp"
#include "json.hpp"
#include "reflow/textio.hpp"

using namespace reflow;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string data_file(const std::string& name) {
  return std::string(REFLOW_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("round trips: configurations are stable byte for byte") {
  for (const Configuration& cfg : {config1(), config2()}) {
    std::string text = configuration_to_json(cfg);
    Configuration back = configuration_from_json(text);
    CHECK(back == cfg);
    CHECK(configuration_to_json(back) == text);
    CHECK(text.back() == '\n');
  }
}

TEST_CASE("round trips: workflow spec and scenarios") {
  std::string spec_text = workflow_spec_to_json(casestudy_spec());
  WorkflowSpec spec = workflow_spec_from_json(spec_text);
  CHECK(spec == casestudy_spec());
  CHECK(workflow_spec_to_json(spec) == spec_text);

  for (const auto& [name, sc] : default_scenarios()) {
    CAPTURE(name);
    std::string text = scenario_to_json(sc);
    Scenario back = scenario_from_json(text);
    CHECK(back == sc);
    CHECK(scenario_to_json(back) == text);
  }
}

TEST_CASE("data files: shipped documents match the built-ins byte for byte") {
  CHECK(slurp(data_file("c1.json")) == configuration_to_json(config1()));
  CHECK(slurp(data_file("c2.json")) == configuration_to_json(config2()));
  CHECK(slurp(data_file("casestudy.json")) == workflow_spec_to_json(casestudy_spec()));
  for (const auto& [name, sc] : default_scenarios()) {
    CHECK(slurp(data_file(name + ".json")) == scenario_to_json(sc));
  }
}

TEST_CASE("shape: decision successors carry their outcome labels") {
  std::string text = configuration_to_json(config1());
  auto doc = nlohmann::json::parse(text);
  CHECK(doc["id"] == "C1");
  CHECK(doc["entry"] == "OrderReceipt");
  bool saw_decision = false;
  for (const auto& act : doc["activities"]) {
    if (act["kind"] == "Decision") {
      saw_decision = true;
      for (const auto& succ : act["successors"]) {
        CHECK(succ.is_object());
        CHECK(succ.size() == 1);
      }
    } else {
      for (const auto& succ : act["successors"]) CHECK(succ.is_string());
    }
  }
  CHECK(saw_decision);
}

TEST_CASE("parse errors name the offending field") {
  auto message_of = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const ParseError& e) {
      return e.what();
    }
    REQUIRE(false);
    return {};
  };

  std::string no_entry = R"({"id": "X", "activities": []})";
  CHECK(message_of([&] { (void)configuration_from_json(no_entry); }).find("entry") !=
        std::string::npos);

  std::string bad_kind =
      R"({"id": "X", "entry": "A",
          "activities": [{"id": "A", "kind": "loop", "successors": []}]})";
  CHECK(message_of([&] { (void)configuration_from_json(bad_kind); })
            .find("activities[0].kind") != std::string::npos);

  std::string bad_variant =
      R"({"arrival_budget": 1,
          "strategy": {"variant": "hotswap", "reconfig_steps": 0},
          "reconfig_trigger": "nondeterministic"})";
  CHECK(message_of([&] { (void)scenario_from_json(bad_variant); }).find("strategy.variant") !=
        std::string::npos);

  CHECK_THROWS_AS((void)configuration_from_json("{not json"), ParseError);
  CHECK_THROWS_AS((void)workflow_spec_from_json(R"({"old": {}})"), ParseError);
  CHECK_THROWS_AS((void)read_text_file("/nonexistent/nowhere.json"), ParseError);
}

TEST_CASE("scenario triggers: both spellings parse") {
  Scenario nondet = scenario_from_json(R"({
    "arrival_budget": 3,
    "strategy": {"variant": "overlap", "reconfig_steps": 1},
    "reconfig_trigger": "nondeterministic"
  })");
  CHECK(!nondet.reconfig_trigger.after_n_accepts.has_value());
  CHECK(nondet.arrival_budget == 3);
  CHECK(nondet.strategy.variant == StrategyKind::Overlap);
  CHECK(nondet.strategy.reconfig_steps == 1);

  Scenario counted = scenario_from_json(R"({
    "arrival_budget": 2,
    "strategy": {"variant": "abort", "reconfig_steps": 0},
    "reconfig_trigger": {"after_n_accepts": 1}
  })");
  CHECK(counted.reconfig_trigger.after_n_accepts == 1);
  CHECK(counted.strategy.variant == StrategyKind::Abort);
}

TEST_CASE("built-ins resolve before paths") {
  CHECK(builtin_configuration("C1").has_value());
  CHECK(builtin_configuration("C2")->id == "C2");
  CHECK(!builtin_configuration("C3").has_value());
  CHECK(builtin_workflow_spec("casestudy").has_value());
  CHECK(!builtin_workflow_spec("C1").has_value());
  CHECK(builtin_scenario("abort")->strategy.variant == StrategyKind::Abort);
  CHECK(builtin_scenario("suspend")->strategy.variant == StrategyKind::SuspendResume);
  CHECK(builtin_scenario("overlap")->strategy.variant == StrategyKind::Overlap);
  CHECK(!builtin_scenario("casestudy").has_value());

  CHECK(load_configuration("C1") == config1());
  CHECK(load_configuration(data_file("c2.json")) == config2());
  CHECK(load_scenario("suspend") == builtin_scenario("suspend"));
  CHECK_THROWS_AS((void)load_scenario("missing-scenario"), ParseError);
}

TEST_CASE("check reports serialize with stats and counterexamples") {
  System sys(casestudy_spec(), *builtin_scenario("abort"));
  Lts lts = explore(sys);
  std::vector<CheckReport> reports = {check(sys, lts, PropertyId::R1),
                                      check(sys, lts, PropertyId::R4)};
  auto doc = nlohmann::json::parse(check_reports_to_json(sys, reports));
  REQUIRE(doc["reports"].size() == 2);

  const auto& r1 = doc["reports"][0];
  CHECK(r1["property"] == "R1");
  CHECK(r1["holds"] == false);
  CHECK(r1["states"] == lts.stats.states);
  CHECK(r1["transitions"] == lts.stats.transitions);
  CHECK(r1["acyclic"] == true);
  REQUIRE(r1["counterexample"].is_array());
  REQUIRE(r1["counterexample"].size() == 3);
  CHECK(r1["counterexample"][0]["label"] == "Accept(0,C1)");
  CHECK(r1["counterexample"][2]["label"] == "AbortOrder(0)");
  CHECK(r1["counterexample"][2]["digest"].is_string());

  const auto& r4 = doc["reports"][1];
  CHECK(r4["property"] == "R4");
  CHECK(r4["holds"] == true);
  CHECK(r4["counterexample"].is_null());
}
