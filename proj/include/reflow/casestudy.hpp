#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reflow/engine.hpp"
#include "reflow/workflow.hpp"

namespace reflow {

/// The built-in order-processing case study. The two graphs are stand-ins
/// reconstructed from the scenario's prose description (the original activity
/// lists are not public); they are chosen so the two languages share only the
/// reject path, which keeps the conformance checks discriminating.

/// C1: OrderReceipt → Evaluation ⟨reject → Close;
///                                accept → Shipping → Billing → Archiving → Close⟩
Configuration config1();

/// C2: OrderReceipt → Evaluation ⟨reject → Close;
///                                accept → Billing → PayAndShip(fork)
///                                  → [Shipping ∥ NotifyCustomer] → Sync(join)
///                                  → Archiving → Close⟩
/// Billing moves ahead of Shipping (the business purpose of the change) and
/// the fork exercises intra-order interleaving.
Configuration config2();

/// {old: C1, new: C2}.
WorkflowSpec casestudy_spec();

/// One scenario per strategy, smallest parameters that exhibit two orders
/// overlapping two configurations:
///   abort    {budget 2, Abort,              after_n_accepts = 1}
///   suspend  {budget 2, SuspendResume(k=2), nondeterministic}
///   overlap  {budget 2, Overlap(k=2),       nondeterministic}
std::vector<std::pair<std::string, Scenario>> default_scenarios();

}  // namespace reflow
