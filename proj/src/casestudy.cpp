#include "reflow/casestudy.hpp"

namespace reflow {

Configuration config1() {
  Configuration cfg;
  cfg.id = "C1";
  cfg.entry = "OrderReceipt";
  cfg.activities = {
      {"OrderReceipt", ActivityKind::Task, {{"Evaluation", ""}}},
      {"Evaluation", ActivityKind::Decision, {{"Close", "reject"}, {"Shipping", "accept"}}},
      {"Shipping", ActivityKind::Task, {{"Billing", ""}}},
      {"Billing", ActivityKind::Task, {{"Archiving", ""}}},
      {"Archiving", ActivityKind::Task, {{"Close", ""}}},
      {"Close", ActivityKind::Final, {}},
  };
  return cfg;
}

Configuration config2() {
  Configuration cfg;
  cfg.id = "C2";
  cfg.entry = "OrderReceipt";
  cfg.activities = {
      {"OrderReceipt", ActivityKind::Task, {{"Evaluation", ""}}},
      {"Evaluation", ActivityKind::Decision, {{"Close", "reject"}, {"Billing", "accept"}}},
      {"Billing", ActivityKind::Task, {{"PayAndShip", ""}}},
      {"PayAndShip", ActivityKind::Fork, {{"Shipping", ""}, {"NotifyCustomer", ""}}},
      {"Shipping", ActivityKind::Task, {{"Sync", ""}}},
      {"NotifyCustomer", ActivityKind::Task, {{"Sync", ""}}},
      {"Sync", ActivityKind::Join, {{"Archiving", ""}}},
      {"Archiving", ActivityKind::Task, {{"Close", ""}}},
      {"Close", ActivityKind::Final, {}},
  };
  return cfg;
}

WorkflowSpec casestudy_spec() { return {config1(), config2()}; }

std::vector<std::pair<std::string, Scenario>> default_scenarios() {
  Scenario abort;
  abort.arrival_budget = 2;
  abort.strategy = {StrategyKind::Abort, 0};
  abort.reconfig_trigger.after_n_accepts = 1;

  Scenario suspend;
  suspend.arrival_budget = 2;
  suspend.strategy = {StrategyKind::SuspendResume, 2};

  Scenario overlap;
  overlap.arrival_budget = 2;
  overlap.strategy = {StrategyKind::Overlap, 2};

  return {{"abort", abort}, {"suspend", suspend}, {"overlap", overlap}};
}

}  // namespace reflow
