#pragma once

#include <cstdint>
#include <vector>

#include "reflow/engine.hpp"

namespace reflow::testing {

/// Verdicts computed without the checker: no BFS, no dedup by canonical
/// encoding, no monotone state flags. Evidence is read off edges and
/// completions directly while walking the execution tree through
/// enabled/apply.
struct OracleVerdicts {
  bool r1 = true;
  bool r2 = true;
  bool r3 = true;
  bool r4 = true;
  bool deadlock_free = true;

  friend bool operator==(const OracleVerdicts&, const OracleVerdicts&) = default;
};

/// Path-equivalent evaluation of the execution tree by structural recursion
/// with suffix sharing (memoized on the oracle's own textual state key, which
/// excludes the flags): the verdicts equal those of materializing every
/// maximal path, but shared suffixes are walked once. A cycle, should one
/// ever exist, is detected by the on-stack set and fails r4.
OracleVerdicts oracle_verdicts(const System& sys);

/// Literal materialization of every maximal label path, for small instances.
/// Truncates (and says so) past max_paths or max_depth.
struct PathSet {
  std::vector<std::vector<TransitionLabel>> paths;
  bool truncated = false;
};
PathSet all_maximal_paths(const System& sys, std::size_t max_paths, std::size_t max_depth = 512);

/// Verdicts from replaying materialized paths one by one.
OracleVerdicts verdicts_from_paths(const System& sys, const PathSet& paths);

}  // namespace reflow::testing
