#ifndef CONROUTE_SOLVER_HPP
#define CONROUTE_SOLVER_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "conroute/model.hpp"

namespace conroute {

struct SolveConfig {
  double gap = 1e-4;             // relative optimality gap target (0.01%)
  int64_t node_limit = 1'000'000'000;
  int64_t time_limit_ms = 86'400'000;
  enum class Branching : uint8_t { MostFractional } branching = Branching::MostFractional;
  int workers = 1;
  void validate() const;  // throws std::runtime_error on nonsense
};

struct SolveStats {
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  double wall_ms = 0.0;
  std::vector<std::pair<int64_t, int64_t>> incumbents;  // (node, objective)
  double final_bound = 0.0;  // parcel-deciminutes
  bool limit_hit = false;
};

// Branch-and-bound over the LP relaxation.  Nodes solve a reduced relaxation
// with container counts substituted out (they cost nothing and sit at
// flow/q at any relaxation optimum); integral route choices round counts up
// and are accepted when every capacity row holds, otherwise the offending
// container arc is branched floor/ceil.  Route branching fixes the most
// fractional choice to or away from its path.  Best-bound selection with
// depth-first plunging; deterministic for workers == 1.  Terminates at the
// relative gap target; on a node/time limit returns the incumbent with
// limit_hit set.  Progress (when `progress` is given) streams one
// "node, bound, incumbent, gap, time" line per processed node.
Solution solve_ip(const IPModel& model, const SolveConfig& cfg, SolveStats* stats = nullptr,
                  std::ostream* progress = nullptr);

// Oracle for tiny instances: enumerates every route assignment (product of
// per-commodity path counts must stay within 1e6), rounds container counts
// up, keeps capacity-feasible assignments and returns the cheapest, ties
// broken by lexicographic assignment vector.  Throws when the bound is
// exceeded or nothing is feasible.
Solution solve_exhaustive(const IPModel& model);

}  // namespace conroute

#endif
