#include "reflow/checker.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace reflow {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

// Iterative three-color DFS over the explored edges; true iff no back edge.
bool dfs_acyclic(const Lts& lts) {
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(lts.states.size(), White);
  struct Frame {
    std::uint32_t node;
    std::uint64_t next_edge;
  };
  std::vector<Frame> stack;
  for (std::uint32_t root = 0; root < lts.states.size(); ++root) {
    if (color[root] != White) continue;
    color[root] = Grey;
    stack.push_back({root, lts.first_edge[root]});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next_edge < lts.first_edge[f.node + 1]) {
        std::uint32_t to = lts.edges[f.next_edge++].to;
        if (color[to] == Grey) return false;
        if (color[to] == White) {
          color[to] = Grey;
          stack.push_back({to, lts.first_edge[to]});
        }
      } else {
        color[f.node] = Black;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace

Lts explore(const System& sys, std::uint64_t max_states) {
  Lts lts;
  std::unordered_map<std::string, std::uint32_t> seen;  // canonical encoding -> index

  auto intern = [&](GlobalState&& s) {
    std::vector<std::uint8_t> enc = sys.encode(s);
    std::string key(enc.begin(), enc.end());
    auto [it, fresh] = seen.emplace(std::move(key), static_cast<std::uint32_t>(lts.states.size()));
    if (fresh) {
      if (lts.states.size() == max_states) throw StateLimitExceeded(max_states);
      lts.states.push_back(std::move(s));
      lts.digests.push_back(fnv1a(it->first));
      lts.depth.push_back(0);
      lts.parent.push_back(Lts::kNoParent);
      lts.parent_label.emplace_back();
    }
    return std::make_pair(it->second, fresh);
  };

  intern(sys.initial_state());
  // BFS pops states in index order, which lets first_edge be filled in place.
  std::deque<std::uint32_t> frontier{0};
  while (!frontier.empty()) {
    std::uint32_t u = frontier.front();
    frontier.pop_front();
    lts.first_edge.push_back(lts.edges.size());
    GlobalState cur = lts.states[u];  // copy: states may reallocate below
    std::vector<TransitionLabel> en = sys.enabled(cur);
    if (en.empty()) lts.terminal.push_back(u);
    for (const TransitionLabel& label : en) {
      auto [v, fresh] = intern(sys.apply(cur, label));
      if (fresh) {
        lts.depth[v] = lts.depth[u] + 1;
        lts.parent[v] = u;
        lts.parent_label[v] = label;
        frontier.push_back(v);
      }
      lts.edges.push_back({u, v, label});
    }
  }
  lts.first_edge.push_back(lts.edges.size());

  lts.stats.states = lts.states.size();
  lts.stats.transitions = lts.edges.size();
  lts.stats.max_depth = lts.depth.empty() ? 0 : *std::max_element(lts.depth.begin(), lts.depth.end());
  lts.stats.acyclic = dfs_acyclic(lts);
  return lts;
}

const char* to_string(PropertyId id) {
  switch (id) {
    case PropertyId::R1: return "R1";
    case PropertyId::R2: return "R2";
    case PropertyId::R3: return "R3";
    case PropertyId::R4: return "R4";
    case PropertyId::DeadlockFree: return "deadlock";
  }
  return "?";
}

std::optional<PropertyId> property_from_string(const std::string& s) {
  if (s == "R1") return PropertyId::R1;
  if (s == "R2") return PropertyId::R2;
  if (s == "R3") return PropertyId::R3;
  if (s == "R4") return PropertyId::R4;
  if (s == "deadlock" || s == "DeadlockFree") return PropertyId::DeadlockFree;
  return std::nullopt;
}

ExecutionTrace replay_path(const System& sys, const Lts& lts, std::uint32_t target_state) {
  std::vector<TransitionLabel> labels;
  for (std::uint32_t u = target_state; lts.parent[u] != Lts::kNoParent; u = lts.parent[u]) {
    labels.push_back(lts.parent_label[u]);
  }
  std::reverse(labels.begin(), labels.end());

  ExecutionTrace out;
  GlobalState s = sys.initial_state();
  for (const TransitionLabel& label : labels) {
    std::vector<TransitionLabel> emitted;
    s = sys.apply(s, label, &emitted);
    std::uint64_t d = sys.digest(s);
    out.push_back({label, d});
    for (const TransitionLabel& e : emitted) out.push_back({e, d});
  }
  return out;
}

std::optional<ExecutionTrace> shortest_counterexample(
    const System& sys, const Lts& lts, const std::function<bool(const GlobalState&)>& pred) {
  // Index order is BFS discovery order; the first match has minimum depth.
  for (std::uint32_t i = 0; i < lts.states.size(); ++i) {
    if (pred(lts.states[i])) return replay_path(sys, lts, i);
  }
  return std::nullopt;
}

CheckReport check(const System& sys, const Lts& lts, PropertyId property) {
  CheckReport report;
  report.property = property;
  report.stats = lts.stats;

  auto state_violation = [&](const std::function<bool(const GlobalState&)>& bad) {
    std::optional<ExecutionTrace> cx = shortest_counterexample(sys, lts, bad);
    report.holds = !cx.has_value();
    report.counterexample = std::move(cx);
  };

  switch (property) {
    case PropertyId::R1:
      state_violation([](const GlobalState& s) { return s.flags.forced_rejection_seen; });
      break;
    case PropertyId::R2:
      state_violation([](const GlobalState& s) { return s.flags.conformance_violation_old; });
      break;
    case PropertyId::R3:
      state_violation([](const GlobalState& s) { return s.flags.conformance_violation_new; });
      break;
    case PropertyId::R4: {
      if (!lts.stats.acyclic) {
        // Cannot happen while the measure argument stands; report the first
        // state on some cycle as a best-effort witness.
        report.holds = false;
        report.counterexample = ExecutionTrace{};
        break;
      }
      report.holds = true;
      for (std::uint32_t t : lts.terminal) {
        if (lts.states[t].mode.phase != Phase::RunningNew) {
          report.holds = false;
          report.counterexample = replay_path(sys, lts, t);
          break;
        }
      }
      break;
    }
    case PropertyId::DeadlockFree: {
      report.holds = true;
      for (std::uint32_t t : lts.terminal) {
        const GlobalState& s = lts.states[t];
        bool clean = s.mode.phase == Phase::RunningNew && s.in_flight.empty() &&
                     s.arrivals_remaining == 0;
        if (!clean) {
          report.holds = false;
          report.counterexample = replay_path(sys, lts, t);
          break;
        }
      }
      break;
    }
  }
  return report;
}

std::string to_dot(const System& sys, const Lts& lts) {
  // Node names are indices so the node count always equals the state count;
  // the displayed label is the state digest.
  std::string out = "digraph lts {\n";
  for (std::uint32_t i = 0; i < lts.states.size(); ++i) {
    out += "  s" + std::to_string(i) + " [label=\"" + digest_hex(lts.digests[i]) + "\"];\n";
  }
  for (const Lts::Edge& e : lts.edges) {
    out += "  s" + std::to_string(e.from) + " -> s" + std::to_string(e.to) + " [label=\"" +
           sys.label_to_string(e.label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace reflow
