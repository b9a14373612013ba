#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflow/checker.hpp"
#include "reflow/engine.hpp"
#include "reflow/workflow.hpp"

namespace reflow {

/// Raised for unreadable or malformed input documents. Messages name the
/// offending line (syntax) or field path (shape), e.g. "activities[2].kind".
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document formats (JSON):
//
// Configuration:   {"id", "entry", "activities": [{"id", "kind", "successors"}]}
//                  where successors is a list of target names, except for
//                  Decision activities, which list single-pair objects
//                  {outcome: target} in outcome order.
// Workflow spec:   {"old": <configuration>, "new": <configuration>}
// Scenario:        {"arrival_budget", "strategy": {"variant", "reconfig_steps"},
//                   "reconfig_trigger": "nondeterministic" | {"after_n_accepts": n}}
//
// Serialization is canonical: two-space indentation, insertion-ordered keys,
// one trailing newline. Parsing a serialized document and serializing the
// result reproduces it byte for byte.

Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& cfg);

WorkflowSpec workflow_spec_from_json(const std::string& text);
std::string workflow_spec_to_json(const WorkflowSpec& spec);

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& scenario);

/// Machine-readable form of one or more check reports, including stats and
/// flattened counterexample lines.
std::string check_reports_to_json(const System& sys, const std::vector<CheckReport>& reports);

// Built-in names. These resolve before filesystem paths everywhere a document
// can be named: configurations "C1"/"C2", workflow spec "casestudy", scenarios
// "abort"/"suspend"/"overlap".
std::optional<Configuration> builtin_configuration(const std::string& name);
std::optional<WorkflowSpec> builtin_workflow_spec(const std::string& name);
std::optional<Scenario> builtin_scenario(const std::string& name);

/// Load by built-in name or path. Throws ParseError (unreadable or malformed).
Configuration load_configuration(const std::string& name_or_path);
WorkflowSpec load_workflow_spec(const std::string& name_or_path);
Scenario load_scenario(const std::string& name_or_path);

/// Whole-file read. Throws ParseError when the file cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace reflow
