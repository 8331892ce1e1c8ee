#ifndef CONROUTE_SIMPLEX_HPP
#define CONROUTE_SIMPLEX_HPP

#include <cstdint>
#include <vector>

#include "conroute/lp.hpp"

namespace conroute {

// Per-column simplex status, covering structural columns followed by one
// slack column per row (total lp.cols.size() + lp.rows.size() entries).
enum class VStat : uint8_t { NbLower, NbUpper, NbFree, Basic };

struct SimplexOptions {
  double feas_tol = 1e-6;
  double opt_tol = 1e-7;
  int64_t iter_limit = 50'000'000;
};

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;      // structural column values when Optimal
  double objective = 0.0;
  int64_t iterations = 0;
  std::vector<VStat> vstat;   // basis snapshot usable as a warm start
  // Row duals y = c_B B^{-1} at the optimum (empty otherwise).  With the
  // internal +1 slack convention a binding <= row has y <= 0 and a binding
  // >= row has y >= 0; equality rows are unrestricted.
  std::vector<double> row_duals;
};

// Bounded-variable primal simplex with a dense explicit basis inverse.
// Phase 1 minimizes total bound infeasibility from any starting basis, so a
// cold start (all-slack basis) and a warm start (prior vstat) share one code
// path.  Equality rows carry fixed slacks that double as artificials.
// Deterministic: Dantzig pricing with lowest-index tie-breaking, switching
// to Bland's rule during degenerate stretches.  Throws std::runtime_error
// on iteration limit or numerical breakdown.
SimplexResult simplex_solve(const LinearProgram& lp, const SimplexOptions& opt = {},
                            const std::vector<VStat>* warm = nullptr);

}  // namespace conroute

#endif
