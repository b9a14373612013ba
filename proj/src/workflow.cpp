#include "reflow/workflow.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <stdexcept>

namespace reflow {

namespace {

bool is_id_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '.' || c == '-';
}

bool is_well_formed_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), is_id_char);
}

}  // namespace

const char* to_string(ActivityKind kind) {
  switch (kind) {
    case ActivityKind::Task: return "Task";
    case ActivityKind::Decision: return "Decision";
    case ActivityKind::Fork: return "Fork";
    case ActivityKind::Join: return "Join";
    case ActivityKind::Final: return "Final";
  }
  return "?";
}

std::optional<ActivityKind> activity_kind_from_string(const std::string& s) {
  if (s == "Task") return ActivityKind::Task;
  if (s == "Decision") return ActivityKind::Decision;
  if (s == "Fork") return ActivityKind::Fork;
  if (s == "Join") return ActivityKind::Join;
  if (s == "Final") return ActivityKind::Final;
  return std::nullopt;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Unreachable: return "unreachable";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::DeadEnd: return "dead-end";
    case ViolationKind::BadArity: return "bad-arity";
    case ViolationKind::DuplicateOutcome: return "duplicate-outcome";
    case ViolationKind::UnbalancedFork: return "unbalanced-fork";
    case ViolationKind::DuplicateId: return "duplicate-id";
    case ViolationKind::BadId: return "bad-id";
    case ViolationKind::UnknownSuccessor: return "unknown-successor";
    case ViolationKind::MissingEntry: return "missing-entry";
  }
  return "?";
}

std::string to_string(const Violation& v) {
  return std::string(to_string(v.kind)) + "@" + v.activity;
}

const Activity* Configuration::find(const ActivityId& activity_id) const {
  for (const Activity& a : activities) {
    if (a.id == activity_id) return &a;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Graph {
  // Index tables over Configuration::activities; built only when ids resolve.
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;
  std::size_t entry = 0;
};

void sort_by_activity(std::vector<Violation>& v, std::size_t from) {
  std::sort(v.begin() + static_cast<std::ptrdiff_t>(from), v.end(),
            [](const Violation& a, const Violation& b) {
              if (a.activity != b.activity) return a.activity < b.activity;
              return a.kind < b.kind;
            });
}

// Local shape checks: successor counts per kind, outcome labelling.
void check_arity(const Configuration& cfg, std::vector<Violation>& out) {
  std::size_t mark = out.size();
  for (const Activity& a : cfg.activities) {
    bool bad = false;
    switch (a.kind) {
      case ActivityKind::Task:
      case ActivityKind::Join:
        bad = a.successors.size() != 1;
        break;
      case ActivityKind::Decision:
        bad = a.successors.size() < 2;
        break;
      case ActivityKind::Fork:
        bad = a.successors.size() < 2;
        break;
      case ActivityKind::Final:
        bad = !a.successors.empty();
        break;
    }
    for (const Successor& s : a.successors) {
      if (a.kind == ActivityKind::Decision) {
        if (s.outcome.empty()) bad = true;
      } else if (!s.outcome.empty()) {
        bad = true;
      }
    }
    if (bad) out.push_back({ViolationKind::BadArity, a.id});

    if (a.kind == ActivityKind::Decision) {
      std::set<OutcomeLabel> seen;
      bool dup = false;
      for (const Successor& s : a.successors) {
        if (!s.outcome.empty() && !seen.insert(s.outcome).second) dup = true;
      }
      if (dup) out.push_back({ViolationKind::DuplicateOutcome, a.id});
    }
  }
  sort_by_activity(out, mark);
}

std::vector<bool> reachable_from_entry(const Graph& g) {
  std::vector<bool> seen(g.succ.size(), false);
  std::deque<std::size_t> queue{g.entry};
  seen[g.entry] = true;
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t next : g.succ[cur]) {
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  return seen;
}

// Reports one violation per cycle, naming the lexicographically smallest
// activity of each strongly connected component that contains a cycle.
void check_cycles(const Configuration& cfg, const Graph& g, std::vector<Violation>& out) {
  std::size_t n = g.succ.size();
  // Tarjan, iterative.
  std::vector<std::uint32_t> idx(n, 0), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::uint32_t counter = 1;
  std::size_t mark = out.size();

  struct Frame {
    std::size_t node;
    std::size_t child = 0;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (idx[root] != 0) continue;
    std::vector<Frame> frames{{root}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < g.succ[f.node].size()) {
        std::size_t next = g.succ[f.node][f.child++];
        if (idx[next] == 0) {
          idx[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          frames.push_back({next});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], idx[next]);
        }
      } else {
        if (low[f.node] == idx[f.node]) {
          std::vector<std::size_t> scc;
          while (true) {
            std::size_t v = stack.back();
            stack.pop_back();
            on_stack[v] = false;
            scc.push_back(v);
            if (v == f.node) break;
          }
          bool self_loop = false;
          for (std::size_t next : g.succ[f.node]) {
            if (next == f.node) self_loop = true;
          }
          if (scc.size() > 1 || self_loop) {
            const std::string* smallest = &cfg.activities[scc[0]].id;
            for (std::size_t v : scc) {
              if (cfg.activities[v].id < *smallest) smallest = &cfg.activities[v].id;
            }
            out.push_back({ViolationKind::Cycle, *smallest});
          }
        }
        std::size_t done = f.node;
        frames.pop_back();
        if (!frames.empty()) {
          low[frames.back().node] = std::min(low[frames.back().node], low[done]);
        }
      }
    }
  }
  sort_by_activity(out, mark);
}

void check_dead_ends(const Configuration& cfg, const Graph& g, std::vector<Violation>& out) {
  std::size_t n = g.succ.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t next : g.succ[a]) pred[next].push_back(a);
  }
  std::vector<bool> reaches_final(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t a = 0; a < n; ++a) {
    if (cfg.activities[a].kind == ActivityKind::Final) {
      reaches_final[a] = true;
      queue.push_back(a);
    }
  }
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t p : pred[cur]) {
      if (!reaches_final[p]) {
        reaches_final[p] = true;
        queue.push_back(p);
      }
    }
  }
  std::size_t mark = out.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!reaches_final[a]) out.push_back({ViolationKind::DeadEnd, cfg.activities[a].id});
  }
  sort_by_activity(out, mark);
}

// Fork/join balance, checked by exhausting the reachable markings of the raw
// token game (forks and joins fire as explicit silent moves here). Flags:
//   - a non-Join activity holding two or more tokens (branches re-converged
//     without a join),
//   - a Join holding more tokens than its in-degree,
//   - a stuck nonempty marking (a starved join).
// Requires an acyclic graph with clean arities; anomalous markings are not
// expanded, which keeps the search space small.
void check_fork_balance(const Configuration& cfg, const Graph& g, std::vector<Violation>& out) {
  constexpr std::size_t kMarkingCap = 1u << 20;
  std::size_t n = g.succ.size();
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t next : g.succ[a]) indeg[next]++;
  }

  using Marking = std::vector<std::uint32_t>;  // token count per activity
  std::set<Marking> seen;
  std::deque<Marking> queue;
  Marking init(n, 0);
  init[g.entry] = 1;
  seen.insert(init);
  queue.push_back(init);
  std::set<std::string> flagged;

  while (!queue.empty() && seen.size() < kMarkingCap) {
    Marking m = queue.front();
    queue.pop_front();

    bool anomalous = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (m[a] == 0) continue;
      bool is_join = cfg.activities[a].kind == ActivityKind::Join;
      if ((!is_join && m[a] >= 2) || (is_join && m[a] > indeg[a])) {
        flagged.insert(cfg.activities[a].id);
        anomalous = true;
      }
    }
    if (anomalous) continue;

    bool any_move = false;
    bool nonempty = false;
    auto push_child = [&](Marking&& child) {
      any_move = true;
      if (seen.insert(child).second) queue.push_back(std::move(child));
    };
    for (std::size_t a = 0; a < n; ++a) {
      if (m[a] == 0) continue;
      nonempty = true;
      const Activity& act = cfg.activities[a];
      switch (act.kind) {
        case ActivityKind::Task: {
          Marking child = m;
          child[a]--;
          child[g.succ[a][0]]++;
          push_child(std::move(child));
          break;
        }
        case ActivityKind::Final: {
          Marking child = m;
          child[a]--;
          push_child(std::move(child));
          break;
        }
        case ActivityKind::Decision: {
          for (std::size_t target : g.succ[a]) {
            Marking child = m;
            child[a]--;
            child[target]++;
            push_child(std::move(child));
          }
          break;
        }
        case ActivityKind::Fork: {
          Marking child = m;
          child[a]--;
          for (std::size_t target : g.succ[a]) child[target]++;
          push_child(std::move(child));
          break;
        }
        case ActivityKind::Join: {
          if (m[a] == indeg[a] && indeg[a] > 0) {
            Marking child = m;
            child[a] = 0;
            child[g.succ[a][0]]++;
            push_child(std::move(child));
          }
          break;
        }
      }
    }
    if (nonempty && !any_move) {
      // Starved: blame the smallest-named activity still holding tokens.
      const std::string* smallest = nullptr;
      for (std::size_t a = 0; a < n; ++a) {
        if (m[a] > 0 && (smallest == nullptr || cfg.activities[a].id < *smallest)) {
          smallest = &cfg.activities[a].id;
        }
      }
      if (smallest != nullptr) flagged.insert(*smallest);
    }
  }

  for (const std::string& id : flagged) {
    out.push_back({ViolationKind::UnbalancedFork, id});
  }
}

}  // namespace

std::vector<Violation> validate_configuration(const Configuration& cfg) {
  std::vector<Violation> out;

  // Integrity: everything downstream needs resolvable ids.
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cfg.activities.size(); ++i) {
    const Activity& a = cfg.activities[i];
    if (!is_well_formed_id(a.id)) out.push_back({ViolationKind::BadId, a.id});
    if (!index.emplace(a.id, i).second) out.push_back({ViolationKind::DuplicateId, a.id});
  }
  sort_by_activity(out, 0);
  std::size_t mark = out.size();
  for (const Activity& a : cfg.activities) {
    bool dangling = false;
    for (const Successor& s : a.successors) {
      if (index.find(s.target) == index.end()) dangling = true;
    }
    if (dangling) out.push_back({ViolationKind::UnknownSuccessor, a.id});
  }
  sort_by_activity(out, mark);
  if (index.find(cfg.entry) == index.end()) {
    out.push_back({ViolationKind::MissingEntry, cfg.entry});
  }
  bool integral = out.empty();

  check_arity(cfg, out);
  if (!integral) return out;

  Graph g;
  g.index = index;
  g.entry = index.at(cfg.entry);
  g.succ.resize(cfg.activities.size());
  for (std::size_t i = 0; i < cfg.activities.size(); ++i) {
    for (const Successor& s : cfg.activities[i].successors) {
      g.succ[i].push_back(index.at(s.target));
    }
  }

  std::size_t before_reach = out.size();
  std::vector<bool> reachable = reachable_from_entry(g);
  for (std::size_t a = 0; a < g.succ.size(); ++a) {
    if (!reachable[a]) out.push_back({ViolationKind::Unreachable, cfg.activities[a].id});
  }
  sort_by_activity(out, before_reach);

  std::size_t before_cycles = out.size();
  check_cycles(cfg, g, out);
  bool acyclic = out.size() == before_cycles;
  if (!acyclic) return out;  // dead ends and fork balance presume a DAG

  check_dead_ends(cfg, g, out);
  if (out.empty()) check_fork_balance(cfg, g, out);
  return out;
}

// ---------------------------------------------------------------------------
// Graph queries

std::set<ActivityId> successors(const Configuration& cfg, const ActivityId& a,
                                const std::optional<OutcomeLabel>& outcome) {
  const Activity* act = cfg.find(a);
  if (act == nullptr) {
    throw std::invalid_argument("unknown activity '" + a + "' in configuration '" + cfg.id + "'");
  }
  if (act->kind == ActivityKind::Decision) {
    if (!outcome.has_value()) {
      throw std::invalid_argument("decision '" + a + "' requires an outcome label");
    }
    for (const Successor& s : act->successors) {
      if (s.outcome == *outcome) return {s.target};
    }
    throw std::invalid_argument("unknown outcome '" + *outcome + "' for decision '" + a + "'");
  }
  if (outcome.has_value()) {
    throw std::invalid_argument("outcome label supplied for non-decision activity '" + a + "'");
  }
  if (act->kind == ActivityKind::Final) return {};
  std::set<ActivityId> result;
  for (const Successor& s : act->successors) result.insert(s.target);
  return result;
}

// ---------------------------------------------------------------------------
// CompiledConfig

std::optional<CompiledConfig> CompiledConfig::compile_lenient(const Configuration& cfg) {
  CompiledConfig cc;
  cc.id_ = cfg.id;
  std::size_t n = cfg.activities.size();
  if (n == 0 || n > kNoActivity) return std::nullopt;
  cc.names_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Activity& a = cfg.activities[i];
    if (!cc.index_.emplace(a.id, static_cast<std::uint16_t>(i)).second) return std::nullopt;
    cc.names_.push_back(a.id);
    cc.kind_.push_back(a.kind);
  }
  auto entry_it = cc.index_.find(cfg.entry);
  if (entry_it == cc.index_.end()) return std::nullopt;
  cc.entry_ = entry_it->second;

  cc.succ_.resize(n);
  cc.outcome_.resize(n);
  cc.indegree_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Successor& s : cfg.activities[i].successors) {
      auto it = cc.index_.find(s.target);
      if (it == cc.index_.end()) return std::nullopt;
      cc.succ_[i].push_back(it->second);
      cc.outcome_[i].push_back(s.outcome);
      cc.indegree_[it->second]++;
    }
  }

  // Kahn topological order; weights only make sense on a DAG.
  std::vector<std::uint16_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint16_t t : cc.succ_[i]) pending[t]++;
  }
  std::vector<std::uint16_t> topo;
  topo.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) topo.push_back(static_cast<std::uint16_t>(i));
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (std::uint16_t t : cc.succ_[topo[head]]) {
      if (--pending[t] == 0) topo.push_back(t);
    }
  }
  cc.weight_.assign(n, 0);
  if (topo.size() == n) {
    cc.has_weights_ = true;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      std::uint16_t a = *it;
      switch (cc.kind_[a]) {
        case ActivityKind::Final:
          cc.weight_[a] = 1;
          break;
        case ActivityKind::Task:
          cc.weight_[a] = 1 + (cc.succ_[a].empty() ? 0 : cc.weight_[cc.succ_[a][0]]);
          break;
        case ActivityKind::Decision: {
          std::uint32_t best = 0;
          for (std::uint16_t t : cc.succ_[a]) best = std::max(best, cc.weight_[t]);
          cc.weight_[a] = 1 + best;
          break;
        }
        case ActivityKind::Fork: {
          std::uint32_t sum = 0;
          for (std::uint16_t t : cc.succ_[a]) sum += cc.weight_[t];
          cc.weight_[a] = sum;
          break;
        }
        case ActivityKind::Join:
          cc.weight_[a] = cc.succ_[a].empty() ? 0 : cc.weight_[cc.succ_[a][0]];
          break;
      }
    }
  }
  return cc;
}

CompiledConfig CompiledConfig::compile(const Configuration& cfg) {
  std::vector<Violation> violations = validate_configuration(cfg);
  if (!violations.empty()) {
    throw std::invalid_argument("configuration '" + cfg.id +
                                "' is not well-formed: " + to_string(violations.front()));
  }
  std::optional<CompiledConfig> cc = compile_lenient(cfg);
  if (!cc.has_value()) {
    throw std::invalid_argument("configuration '" + cfg.id + "' cannot be compiled");
  }
  return std::move(*cc);
}

std::uint16_t CompiledConfig::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? kNoActivity : it->second;
}

void CompiledConfig::place_token(std::vector<std::uint16_t>& marking, std::uint16_t a) const {
  switch (kind_[a]) {
    case ActivityKind::Fork:
      for (std::uint16_t t : succ_[a]) place_token(marking, t);
      return;
    case ActivityKind::Join: {
      auto pos = std::upper_bound(marking.begin(), marking.end(), a);
      marking.insert(pos, a);
      std::size_t count = 0;
      for (std::uint16_t tok : marking) {
        if (tok == a) count++;
      }
      if (indegree_[a] > 0 && count == indegree_[a]) {
        auto range_begin = std::lower_bound(marking.begin(), marking.end(), a);
        marking.erase(range_begin, range_begin + static_cast<std::ptrdiff_t>(count));
        if (!succ_[a].empty()) place_token(marking, succ_[a][0]);
      }
      return;
    }
    default: {
      auto pos = std::upper_bound(marking.begin(), marking.end(), a);
      marking.insert(pos, a);
      return;
    }
  }
}

bool CompiledConfig::fire(std::vector<std::uint16_t>& marking, std::uint16_t a,
                          std::size_t succ_choice) const {
  if (kind_[a] == ActivityKind::Fork || kind_[a] == ActivityKind::Join) return false;
  auto pos = std::lower_bound(marking.begin(), marking.end(), a);
  if (pos == marking.end() || *pos != a) return false;
  marking.erase(pos);
  switch (kind_[a]) {
    case ActivityKind::Task:
      if (!succ_[a].empty()) place_token(marking, succ_[a][0]);
      break;
    case ActivityKind::Decision:
      if (succ_choice < succ_[a].size()) place_token(marking, succ_[a][succ_choice]);
      break;
    default:
      break;  // Final consumes
  }
  return true;
}

// ---------------------------------------------------------------------------
// Trace language

namespace {

bool replay_step(const CompiledConfig& cc, const Trace& trace, std::size_t i,
                 std::vector<std::uint16_t>& marking) {
  if (i == trace.size()) return marking.empty();
  std::uint16_t a = cc.index_of(trace[i]);
  if (a == CompiledConfig::kNoActivity) return false;
  ActivityKind kind = cc.kind(a);
  if (kind == ActivityKind::Fork || kind == ActivityKind::Join) return false;
  if (kind == ActivityKind::Decision) {
    // Any outcome is permitted; try each distinct target.
    std::set<std::uint16_t> tried;
    for (std::size_t choice = 0; choice < cc.succ(a).size(); ++choice) {
      if (!tried.insert(cc.succ(a)[choice]).second) continue;
      std::vector<std::uint16_t> next = marking;
      if (!cc.fire(next, a, choice)) return false;
      if (replay_step(cc, trace, i + 1, next)) return true;
    }
    return false;
  }
  std::vector<std::uint16_t> next = marking;
  if (!cc.fire(next, a, 0)) return false;
  return replay_step(cc, trace, i + 1, next);
}

}  // namespace

bool conforms(const Trace& trace, const CompiledConfig& cc) {
  std::vector<std::uint16_t> marking;
  cc.place_token(marking, cc.entry());
  return replay_step(cc, trace, 0, marking);
}

bool conforms(const Trace& trace, const Configuration& cfg) {
  std::optional<CompiledConfig> cc = CompiledConfig::compile_lenient(cfg);
  if (!cc.has_value()) return false;
  return conforms(trace, *cc);
}

// The enumeration below is the oracle for conforms() and is deliberately
// written against the token-game rules from scratch: count-array markings and
// an explicit saturation loop instead of the sorted-token machinery above.
namespace {

struct Enumerator {
  const Configuration& cfg;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::size_t> indeg;
  std::vector<std::size_t> by_name;  // activity indices sorted by id
  std::size_t max_len;
  std::set<Trace> result;

  explicit Enumerator(const Configuration& c, std::size_t cap) : cfg(c), max_len(cap) {}

  bool build() {
    std::size_t n = cfg.activities.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!index.emplace(cfg.activities[i].id, i).second) return false;
    }
    succ.resize(n);
    indeg.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Successor& s : cfg.activities[i].successors) {
        auto it = index.find(s.target);
        if (it == index.end()) return false;
        succ[i].push_back(it->second);
        indeg[it->second]++;
      }
    }
    if (index.find(cfg.entry) == index.end()) return false;
    by_name.resize(n);
    for (std::size_t i = 0; i < n; ++i) by_name[i] = i;
    std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
      return cfg.activities[a].id < cfg.activities[b].id;
    });
    return true;
  }

  // Runs silent fork splits and join merges to fixpoint. Returns false if the
  // loop fails to settle (possible only on malformed graphs).
  bool settle(std::vector<std::uint32_t>& m) const {
    std::size_t guard = 4 * (m.size() + 1) * (m.size() + 1);
    bool changed = true;
    while (changed) {
      if (guard-- == 0) return false;
      changed = false;
      for (std::size_t a = 0; a < m.size(); ++a) {
        if (m[a] == 0) continue;
        if (cfg.activities[a].kind == ActivityKind::Fork) {
          m[a]--;
          for (std::size_t t : succ[a]) m[t]++;
          changed = true;
        } else if (cfg.activities[a].kind == ActivityKind::Join && indeg[a] > 0 &&
                   m[a] >= indeg[a]) {
          m[a] -= static_cast<std::uint32_t>(indeg[a]);
          for (std::size_t t : succ[a]) m[t]++;
          changed = true;
        }
      }
    }
    return true;
  }

  void walk(const std::vector<std::uint32_t>& m, Trace& prefix) {
    if (std::all_of(m.begin(), m.end(), [](std::uint32_t c) { return c == 0; })) {
      result.insert(prefix);
      return;
    }
    if (prefix.size() >= max_len) return;
    for (std::size_t a : by_name) {
      if (m[a] == 0) continue;
      const Activity& act = cfg.activities[a];
      switch (act.kind) {
        case ActivityKind::Task:
        case ActivityKind::Final: {
          std::vector<std::uint32_t> child = m;
          child[a]--;
          if (act.kind == ActivityKind::Task) {
            for (std::size_t t : succ[a]) child[t]++;
          }
          if (!settle(child)) continue;
          prefix.push_back(act.id);
          walk(child, prefix);
          prefix.pop_back();
          break;
        }
        case ActivityKind::Decision: {
          std::set<std::size_t> seen_targets;
          for (std::size_t t : succ[a]) {
            if (!seen_targets.insert(t).second) continue;
            std::vector<std::uint32_t> child = m;
            child[a]--;
            child[t]++;
            if (!settle(child)) continue;
            prefix.push_back(act.id);
            walk(child, prefix);
            prefix.pop_back();
          }
          break;
        }
        default:
          break;  // routing nodes move only inside settle()
      }
    }
  }
};

}  // namespace

std::vector<Trace> enumerate_traces(const Configuration& cfg, std::size_t max_len) {
  Enumerator e(cfg, max_len);
  if (!e.build()) return {};
  std::vector<std::uint32_t> init(cfg.activities.size(), 0);
  init[e.index.at(cfg.entry)] = 1;
  if (!e.settle(init)) return {};
  Trace prefix;
  e.walk(init, prefix);
  return {e.result.begin(), e.result.end()};
}

}  // namespace reflow
