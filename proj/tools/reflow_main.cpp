// reflow: validate, simulate, and model-check dynamic workflow
// reconfiguration scenarios.
//
// Exit codes: 0 = requested properties hold (or no violations), 1 = property
// or well-formedness violation, 2 = usage/input error, 3 = resource budget
// exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reflow/casestudy.hpp"
#include "reflow/checker.hpp"
#include "reflow/engine.hpp"
#include "reflow/textio.hpp"
#include "reflow/workflow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

void write_file_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw reflow::ParseError("cannot write file: " + path);
  out << content;
}

// A document argument may name a built-in ("casestudy", "C1", "C2") or a
// file holding either a {old, new} workflow spec or a single configuration.
std::vector<reflow::Configuration> load_configurations_for_validate(const std::string& arg) {
  if (auto spec = reflow::builtin_workflow_spec(arg)) return {spec->old_cfg, spec->new_cfg};
  if (auto cfg = reflow::builtin_configuration(arg)) return {*cfg};
  std::string text = reflow::read_text_file(arg);
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("old") && doc.contains("new")) {
    reflow::WorkflowSpec spec = reflow::workflow_spec_from_json(text);
    return {spec.old_cfg, spec.new_cfg};
  }
  return {reflow::configuration_from_json(text)};
}

int cmd_validate(const std::string& document) {
  bool any = false;
  for (const reflow::Configuration& cfg : load_configurations_for_validate(document)) {
    for (const reflow::Violation& v : reflow::validate_configuration(cfg)) {
      std::cout << "VIOLATION " << reflow::to_string(v.kind) << " " << v.activity << "\n";
      any = true;
    }
  }
  return any ? kExitViolation : kExitOk;
}

int cmd_simulate(const std::string& document, const std::string& scenario_arg, std::uint64_t seed,
                 const std::string& trace_path) {
  reflow::WorkflowSpec spec = reflow::load_workflow_spec(document);
  reflow::Scenario scenario = reflow::load_scenario(scenario_arg);
  reflow::System sys(spec, scenario);
  reflow::ExecutionTrace trace = sys.run(reflow::RandomPolicy{seed});
  std::string text = sys.trace_to_text(trace);
  if (trace_path.empty()) {
    std::cout << text;
  } else {
    write_file_or_throw(trace_path, text);
  }
  return kExitOk;
}

int cmd_check(const std::string& document, const std::string& scenario_arg,
              const std::string& properties_csv, const std::string& dot_path,
              const std::string& json_path, std::uint64_t max_states, bool verbose) {
  std::vector<reflow::PropertyId> properties;
  std::stringstream csv(properties_csv);
  std::string item;
  while (std::getline(csv, item, ',')) {
    if (item.empty()) continue;
    auto id = reflow::property_from_string(item);
    if (!id.has_value()) throw reflow::ParseError("unknown property: " + item);
    properties.push_back(*id);
  }
  if (properties.empty()) throw reflow::ParseError("no properties requested");

  reflow::WorkflowSpec spec = reflow::load_workflow_spec(document);
  reflow::Scenario scenario = reflow::load_scenario(scenario_arg);
  reflow::System sys(spec, scenario);
  reflow::Lts lts = reflow::explore(sys, max_states);

  bool all_hold = true;
  std::vector<reflow::CheckReport> reports;
  for (reflow::PropertyId id : properties) {
    reflow::CheckReport report = reflow::check(sys, lts, id);
    std::cout << reflow::to_string(id) << " " << (report.holds ? "HOLDS" : "FAILS")
              << " states=" << report.stats.states << " transitions=" << report.stats.transitions
              << "\n";
    if (!report.holds && report.counterexample.has_value()) {
      std::cout << "counterexample:\n";
      for (const reflow::TraceLine& line : *report.counterexample) {
        std::cout << "  " << sys.label_to_string(line.label);
        if (verbose) std::cout << " " << reflow::digest_hex(line.digest);
        std::cout << "\n";
      }
    }
    all_hold = all_hold && report.holds;
    reports.push_back(std::move(report));
  }

  if (!dot_path.empty()) write_file_or_throw(dot_path, reflow::to_dot(sys, lts));
  if (!json_path.empty()) {
    write_file_or_throw(json_path, reflow::check_reports_to_json(sys, reports));
  }
  return all_hold ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable model and explicit-state checker for dynamic workflow reconfiguration"};
  app.require_subcommand(1);

  std::string val_document;
  CLI::App* validate = app.add_subcommand(
      "validate", "Report well-formedness violations of a configuration or workflow document");
  validate->add_option("document", val_document, "built-in name (C1, C2, casestudy) or file path")
      ->required();

  std::string sim_document;
  std::string sim_scenario;
  std::string sim_trace_path;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one random execution and print or save its trace");
  simulate->add_option("document", sim_document, "built-in name (casestudy) or workflow file path")
      ->required();
  simulate->add_option("--scenario", sim_scenario, "built-in name (abort, suspend, overlap) or file path")
      ->required();
  simulate->add_option("--seed", sim_seed, "random seed (default 0)");
  simulate->add_option("--trace", sim_trace_path, "write the trace to this file instead of stdout");

  std::string chk_document;
  std::string chk_scenario;
  std::string chk_properties = "R1,R2,R3,R4";
  std::string chk_dot_path;
  std::string chk_json_path;
  std::uint64_t chk_max_states = reflow::kDefaultMaxStates;
  bool chk_verbose = false;
  CLI::App* check = app.add_subcommand(
      "check", "Exhaustively explore the scenario and verify the requested properties");
  check->add_option("document", chk_document, "built-in name (casestudy) or workflow file path")
      ->required();
  check->add_option("--scenario", chk_scenario, "built-in name (abort, suspend, overlap) or file path")
      ->required();
  check->add_option("--properties", chk_properties,
                    "comma-separated subset of R1,R2,R3,R4,deadlock (default R1,R2,R3,R4)");
  check->add_option("--dot", chk_dot_path, "export the explored LTS as a GraphViz digraph");
  check->add_option("--json", chk_json_path, "write a machine-readable report");
  check->add_option("--max-states", chk_max_states, "state budget for exploration (default 10^7)");
  check->add_flag("--verbose", chk_verbose, "include state digests in counterexamples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(val_document);
    if (simulate->parsed()) return cmd_simulate(sim_document, sim_scenario, sim_seed, sim_trace_path);
    return cmd_check(chk_document, chk_scenario, chk_properties, chk_dot_path, chk_json_path,
                     chk_max_states, chk_verbose);
  } catch (const reflow::StateLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
