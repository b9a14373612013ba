#include "reflow/textio.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reflow/casestudy.hpp"

namespace reflow {

using json = nlohmann::ordered_json;

namespace {

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());  // nlohmann messages carry line and column
  }
}

const json& require(const json& obj, const std::string& field, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(path + "." + field + ": missing field");
  return *it;
}

std::string require_string(const json& obj, const std::string& field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_string()) throw ParseError(path + "." + field + ": expected a string");
  return v.get<std::string>();
}

std::uint32_t require_count(const json& obj, const std::string& field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_number_unsigned()) {
    throw ParseError(path + "." + field + ": expected a non-negative integer");
  }
  std::uint64_t n = v.get<std::uint64_t>();
  if (n > 0xffffffffull) throw ParseError(path + "." + field + ": out of range");
  return static_cast<std::uint32_t>(n);
}

Activity activity_from_json(const json& j, const std::string& path) {
  Activity a;
  a.id = require_string(j, "id", path);
  std::string kind = require_string(j, "kind", path);
  std::optional<ActivityKind> parsed = activity_kind_from_string(kind);
  if (!parsed.has_value()) throw ParseError(path + ".kind: unknown kind '" + kind + "'");
  a.kind = *parsed;
  const json& succ = require(j, "successors", path);
  if (!succ.is_array()) throw ParseError(path + ".successors: expected a list");
  for (std::size_t i = 0; i < succ.size(); ++i) {
    const json& s = succ[i];
    std::string spath = path + ".successors[" + std::to_string(i) + "]";
    if (s.is_string()) {
      a.successors.push_back({s.get<std::string>(), ""});
    } else if (s.is_object() && s.size() == 1) {
      auto it = s.begin();
      if (!it.value().is_string()) throw ParseError(spath + ": expected {outcome: target}");
      a.successors.push_back({it.value().get<std::string>(), it.key()});
    } else {
      throw ParseError(spath + ": expected a target name or one {outcome: target} pair");
    }
  }
  return a;
}

Configuration configuration_from_value(const json& j, const std::string& path) {
  Configuration cfg;
  cfg.id = require_string(j, "id", path);
  cfg.entry = require_string(j, "entry", path);
  const json& acts = require(j, "activities", path);
  if (!acts.is_array()) throw ParseError(path + ".activities: expected a list");
  for (std::size_t i = 0; i < acts.size(); ++i) {
    cfg.activities.push_back(
        activity_from_json(acts[i], path + ".activities[" + std::to_string(i) + "]"));
  }
  return cfg;
}

json configuration_to_value(const Configuration& cfg) {
  json j = json::object();
  j["id"] = cfg.id;
  j["entry"] = cfg.entry;
  json acts = json::array();
  for (const Activity& a : cfg.activities) {
    json ja = json::object();
    ja["id"] = a.id;
    ja["kind"] = to_string(a.kind);
    json succ = json::array();
    for (const Successor& s : a.successors) {
      if (s.outcome.empty()) {
        succ.push_back(s.target);
      } else {
        json pair = json::object();
        pair[s.outcome] = s.target;
        succ.push_back(std::move(pair));
      }
    }
    ja["successors"] = std::move(succ);
    acts.push_back(std::move(ja));
  }
  j["activities"] = std::move(acts);
  return j;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

Scenario scenario_from_value(const json& j, const std::string& path) {
  Scenario sc;
  sc.arrival_budget = require_count(j, "arrival_budget", path);
  const json& strat = require(j, "strategy", path);
  std::string variant = require_string(strat, "variant", path + ".strategy");
  std::optional<StrategyKind> kind = strategy_from_string(variant);
  if (!kind.has_value()) {
    throw ParseError(path + ".strategy.variant: unknown strategy '" + variant + "'");
  }
  sc.strategy.variant = *kind;
  sc.strategy.reconfig_steps = require_count(strat, "reconfig_steps", path + ".strategy");
  const json& trigger = require(j, "reconfig_trigger", path);
  if (trigger.is_string() && trigger.get<std::string>() == "nondeterministic") {
    sc.reconfig_trigger.after_n_accepts = std::nullopt;
  } else if (trigger.is_object() && trigger.size() == 1 && trigger.contains("after_n_accepts")) {
    sc.reconfig_trigger.after_n_accepts = require_count(trigger, "after_n_accepts", path + ".reconfig_trigger");
  } else {
    throw ParseError(path +
                     ".reconfig_trigger: expected \"nondeterministic\" or {after_n_accepts: n}");
  }
  return sc;
}

}  // namespace

Configuration configuration_from_json(const std::string& text) {
  return configuration_from_value(parse_document(text), "configuration");
}

std::string configuration_to_json(const Configuration& cfg) {
  return dump_canonical(configuration_to_value(cfg));
}

WorkflowSpec workflow_spec_from_json(const std::string& text) {
  json j = parse_document(text);
  WorkflowSpec spec;
  spec.old_cfg = configuration_from_value(require(j, "old", "spec"), "spec.old");
  spec.new_cfg = configuration_from_value(require(j, "new", "spec"), "spec.new");
  return spec;
}

std::string workflow_spec_to_json(const WorkflowSpec& spec) {
  json j = json::object();
  j["old"] = configuration_to_value(spec.old_cfg);
  j["new"] = configuration_to_value(spec.new_cfg);
  return dump_canonical(j);
}

Scenario scenario_from_json(const std::string& text) {
  return scenario_from_value(parse_document(text), "scenario");
}

std::string scenario_to_json(const Scenario& scenario) {
  json j = json::object();
  j["arrival_budget"] = scenario.arrival_budget;
  json strat = json::object();
  strat["variant"] = to_string(scenario.strategy.variant);
  strat["reconfig_steps"] = scenario.strategy.reconfig_steps;
  j["strategy"] = std::move(strat);
  if (scenario.reconfig_trigger.nondeterministic()) {
    j["reconfig_trigger"] = "nondeterministic";
  } else {
    json trigger = json::object();
    trigger["after_n_accepts"] = *scenario.reconfig_trigger.after_n_accepts;
    j["reconfig_trigger"] = std::move(trigger);
  }
  return dump_canonical(j);
}

std::string check_reports_to_json(const System& sys, const std::vector<CheckReport>& reports) {
  json out = json::object();
  json list = json::array();
  for (const CheckReport& r : reports) {
    json jr = json::object();
    jr["property"] = to_string(r.property);
    jr["holds"] = r.holds;
    jr["states"] = r.stats.states;
    jr["transitions"] = r.stats.transitions;
    jr["max_depth"] = r.stats.max_depth;
    jr["acyclic"] = r.stats.acyclic;
    if (r.counterexample.has_value()) {
      json cx = json::array();
      for (const TraceLine& line : *r.counterexample) {
        json jl = json::object();
        jl["label"] = sys.label_to_string(line.label);
        jl["digest"] = digest_hex(line.digest);
        cx.push_back(std::move(jl));
      }
      jr["counterexample"] = std::move(cx);
    } else {
      jr["counterexample"] = nullptr;
    }
    list.push_back(std::move(jr));
  }
  out["reports"] = std::move(list);
  return dump_canonical(out);
}

std::optional<Configuration> builtin_configuration(const std::string& name) {
  if (name == "C1") return config1();
  if (name == "C2") return config2();
  return std::nullopt;
}

std::optional<WorkflowSpec> builtin_workflow_spec(const std::string& name) {
  if (name == "casestudy") return casestudy_spec();
  return std::nullopt;
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  for (const auto& [scenario_name, scenario] : default_scenarios()) {
    if (scenario_name == name) return scenario;
  }
  return std::nullopt;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Configuration load_configuration(const std::string& name_or_path) {
  if (std::optional<Configuration> builtin = builtin_configuration(name_or_path)) return *builtin;
  return configuration_from_json(read_text_file(name_or_path));
}

WorkflowSpec load_workflow_spec(const std::string& name_or_path) {
  if (std::optional<WorkflowSpec> builtin = builtin_workflow_spec(name_or_path)) return *builtin;
  return workflow_spec_from_json(read_text_file(name_or_path));
}

Scenario load_scenario(const std::string& name_or_path) {
  if (std::optional<Scenario> builtin = builtin_scenario(name_or_path)) return *builtin;
  return scenario_from_json(read_text_file(name_or_path));
}

}  // namespace reflow
