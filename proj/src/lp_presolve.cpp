#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "conroute/lp.hpp"
#include "conroute/simplex.hpp"

namespace conroute {

namespace {

using Sense = LinearProgram::Sense;

// One absorbed penalty row  x - u <= rhs  (u a nonnegative costed singleton):
// the partner column is split into a cheap segment [lower, rhs] and an extra
// segment [0, upper - rhs] priced at cost + penalty.  extra == -1 when the
// row could never bind (or the penalty is free) and no split was needed.
struct Split {
  int xcol = -1;
  int extra = -1;
  int ucol = -1;
  double rhs = 0.0;
};

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) { parent[a] = parent[parent[a]]; a = parent[a]; }
    return a;
  }
  void unite(int a, int b) {
    a = find(a); b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller index becomes the root, for determinism
  }
};

SimplexOptions engine_options(const SolveLpOptions& opt) {
  return {opt.feas_tol, opt.opt_tol, opt.iter_limit};
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolveLpOptions& opt) {
  const int n0 = static_cast<int>(lp.cols.size());
  const int m0 = static_cast<int>(lp.rows.size());

  std::vector<int> support(n0, 0);
  for (const auto& row : lp.rows) {
    for (auto [j, a] : row.coeffs) {
      if (a != 0.0) ++support[j];
    }
  }

  // Extended column set: originals (bounds possibly tightened) plus split
  // extras.  An extra inherits its partner's coefficients in every kept row.
  std::vector<LinearProgram::Column> cols(lp.cols);
  std::vector<std::vector<int>> extras_of(n0);
  std::vector<char> col_dead(n0, 0);   // absorbed penalty columns, value rebuilt later
  std::vector<char> split_done(n0, 0);
  std::vector<char> row_dropped(m0, 0);
  std::vector<Split> splits;

  // --- Penalty-slack absorption: rows of the exact shape x - u <= rhs where
  // u is a nonnegative singleton with nonnegative cost.  The row is replaced
  // by a bound plus a second, penalty-priced segment of x.
  for (int r = 0; r < m0; ++r) {
    const auto& row = lp.rows[r];
    if (row.sense != Sense::Le || row.coeffs.size() != 2) continue;
    int uj = -1, xj = -1;
    for (int k = 0; k < 2 && uj < 0; ++k) {
      int j1 = row.coeffs[k].first;
      double a1 = row.coeffs[k].second;
      int j2 = row.coeffs[1 - k].first;
      double a2 = row.coeffs[1 - k].second;
      if (a1 == -1.0 && a2 == 1.0 && j1 != j2 && support[j1] == 1 && !col_dead[j1] &&
          lp.cols[j1].cost >= 0.0 && lp.cols[j1].lower == 0.0 &&
          !std::isfinite(lp.cols[j1].upper)) {
        uj = j1;
        xj = j2;
      }
    }
    if (uj < 0) continue;
    if (col_dead[xj] || split_done[xj]) continue;
    double rhs = row.rhs;
    if (rhs < 0.0 || cols[xj].lower > rhs + 1e-12) continue;
    col_dead[uj] = 1;
    row_dropped[r] = 1;
    if (cols[xj].upper <= rhs + 1e-12 || lp.cols[uj].cost == 0.0) {
      splits.push_back({xj, -1, uj, rhs});
      continue;
    }
    split_done[xj] = 1;
    int e = static_cast<int>(cols.size());
    cols.push_back({0.0, cols[xj].upper - rhs, cols[xj].cost + lp.cols[uj].cost});
    cols[xj].upper = rhs;
    extras_of[xj].push_back(e);
    splits.push_back({xj, e, uj, rhs});
  }

  // --- Soft rows: <= rows containing a nonnegative costed singleton with a
  // negative coefficient (an overflow absorber).  Dropping them and pinning
  // the absorber to zero is a relaxation; if the relaxed optimum satisfies
  // them anyway, it is optimal for the full problem.
  std::vector<char> row_soft(m0, 0);
  bool any_soft = false;
  for (int r = 0; r < m0; ++r) {
    if (row_dropped[r]) continue;
    const auto& row = lp.rows[r];
    if (row.sense != Sense::Le) continue;
    for (auto [j, a] : row.coeffs) {
      if (a < 0.0 && support[j] == 1 && !col_dead[j] && lp.cols[j].cost > 0.0 &&
          lp.cols[j].lower == 0.0 && !std::isfinite(lp.cols[j].upper)) {
        row_soft[r] = 1;
        any_soft = true;
        break;
      }
    }
  }

  const int ncols = static_cast<int>(cols.size());

  // Column support over kept rows (extras included), used to spot columns
  // that end up in no row at all.
  std::vector<int> kept_support(ncols, 0);
  std::vector<int> hard_support(ncols, 0);
  for (int r = 0; r < m0; ++r) {
    if (row_dropped[r]) continue;
    for (auto [j, a] : lp.rows[r].coeffs) {
      if (a == 0.0 || col_dead[j]) continue;
      ++kept_support[j];
      if (!row_soft[r]) ++hard_support[j];
      for (int e : extras_of[j]) {
        ++kept_support[e];
        if (!row_soft[r]) ++hard_support[e];
      }
    }
  }

  // --- Connected components of columns linked through hard (non-soft) rows.
  DisjointSet dsu(ncols);
  for (int r = 0; r < m0; ++r) {
    if (row_dropped[r] || row_soft[r]) continue;
    int first = -1;
    for (auto [j, a] : lp.rows[r].coeffs) {
      if (a == 0.0 || col_dead[j]) continue;
      if (first < 0) first = j;
      dsu.unite(first, j);
      for (int e : extras_of[j]) dsu.unite(first, e);
    }
  }
  std::vector<int> comp_root;
  {
    std::vector<char> seen(ncols, 0);
    for (int j = 0; j < ncols; ++j) {
      if (j < n0 && col_dead[j]) continue;
      if (hard_support[j] == 0) continue;
      int root = dsu.find(j);
      if (!seen[root]) { seen[root] = 1; comp_root.push_back(root); }
    }
  }

  std::vector<double> val(ncols, 0.0);
  int64_t iterations = 0;
  bool need_monolithic = comp_root.size() <= 1;

  auto assign_rowless = [&](int j) -> bool {
    // A column in no kept hard row: best bound by cost sign; soft rows it may
    // appear in are validated by the certificate below.
    const auto& col = cols[j];
    double v;
    if (col.cost > 0.0) v = col.lower;
    else if (col.cost < 0.0) v = col.upper;
    else v = std::isfinite(col.lower) ? col.lower : (std::isfinite(col.upper) ? col.upper : 0.0);
    if (!std::isfinite(v)) return false;
    val[j] = v;
    return true;
  };

  if (!need_monolithic) {
    // Solve each hard-linked block independently.
    bool fallback = false;
    for (int root : comp_root) {
      std::vector<int> members;
      for (int j = 0; j < ncols; ++j) {
        if (j < n0 && col_dead[j]) continue;
        if (hard_support[j] == 0) continue;
        if (dsu.find(j) == root) members.push_back(j);
      }
      std::vector<int> local(ncols, -1);
      LinearProgram sub;
      for (int j : members) {
        local[j] = sub.add_col(cols[j].lower, cols[j].upper, cols[j].cost);
      }
      for (int r = 0; r < m0; ++r) {
        if (row_dropped[r] || row_soft[r]) continue;
        const auto& row = lp.rows[r];
        int live = -1;
        for (auto [j, a] : row.coeffs) {
          if (a != 0.0 && !col_dead[j]) { live = j; break; }
        }
        if (live < 0) {
          // Constant row: feasible iff 0 satisfies it.
          bool ok = (row.sense == Sense::Le && row.rhs >= -opt.feas_tol) ||
                    (row.sense == Sense::Ge && row.rhs <= opt.feas_tol) ||
                    (row.sense == Sense::Eq && std::abs(row.rhs) <= opt.feas_tol);
          if (!ok) {
            LpSolution out;
            out.status = LpStatus::Infeasible;
            out.iterations = iterations;
            return out;
          }
          continue;
        }
        if (dsu.find(live) != root) continue;
        std::vector<std::pair<int, double>> cf;
        for (auto [j, a] : row.coeffs) {
          if (a == 0.0 || col_dead[j]) continue;
          cf.push_back({local[j], a});
          for (int e : extras_of[j]) cf.push_back({local[e], a});
        }
        sub.add_row(std::move(cf), row.sense, row.rhs);
      }
      if (static_cast<int>(sub.rows.size()) > opt.max_dense_rows) {
        std::ostringstream os;
        os << "solve_lp: block with " << sub.rows.size()
           << " rows exceeds the dense-basis limit of " << opt.max_dense_rows;
        throw std::runtime_error(os.str());
      }
      SimplexResult res = simplex_solve(sub, engine_options(opt));
      iterations += res.iterations;
      if (res.status == LpStatus::Infeasible) {
        LpSolution out;
        out.status = LpStatus::Infeasible;
        out.iterations = iterations;
        return out;
      }
      if (res.status == LpStatus::Unbounded) { fallback = true; break; }
      for (int j : members) val[j] = res.x[local[j]];
    }
    if (!fallback) {
      for (int j = 0; j < ncols; ++j) {
        if (j < n0 && col_dead[j]) continue;
        if (hard_support[j] != 0) continue;
        if (!assign_rowless(j)) { fallback = true; break; }
      }
    }
    if (!fallback && any_soft) {
      // Certificate: the relaxed optimum must satisfy every soft row.
      for (int r = 0; r < m0 && !fallback; ++r) {
        if (row_dropped[r] || !row_soft[r]) continue;
        double lhs = 0.0;
        for (auto [j, a] : lp.rows[r].coeffs) {
          if (a == 0.0 || col_dead[j]) continue;
          lhs += a * val[j];
          for (int e : extras_of[j]) lhs += a * val[e];
        }
        if (lhs > lp.rows[r].rhs + opt.feas_tol) fallback = true;
      }
    }
    need_monolithic = false;
    if (fallback) need_monolithic = true;
  }

  if (need_monolithic) {
    LinearProgram mono;
    std::vector<int> local(ncols, -1);
    for (int j = 0; j < ncols; ++j) {
      if (j < n0 && col_dead[j]) continue;
      local[j] = mono.add_col(cols[j].lower, cols[j].upper, cols[j].cost);
    }
    for (int r = 0; r < m0; ++r) {
      if (row_dropped[r]) continue;
      const auto& row = lp.rows[r];
      std::vector<std::pair<int, double>> cf;
      for (auto [j, a] : row.coeffs) {
        if (a == 0.0 || col_dead[j]) continue;
        cf.push_back({local[j], a});
        for (int e : extras_of[j]) cf.push_back({local[e], a});
      }
      mono.add_row(std::move(cf), row.sense, row.rhs);
    }
    if (static_cast<int>(mono.rows.size()) > opt.max_dense_rows) {
      std::ostringstream os;
      os << "solve_lp: problem with " << mono.rows.size()
         << " coupled rows exceeds the dense-basis limit of " << opt.max_dense_rows
         << "; no exact reduction applies";
      throw std::runtime_error(os.str());
    }
    SimplexResult res = simplex_solve(mono, engine_options(opt));
    iterations += res.iterations;
    if (res.status != LpStatus::Optimal) {
      LpSolution out;
      out.status = res.status;
      out.iterations = iterations;
      return out;
    }
    for (int j = 0; j < ncols; ++j) {
      if (local[j] >= 0) val[j] = res.x[local[j]];
    }
  }

  // --- Postsolve: rebuild split partners and absorbed penalty columns.
  LpSolution out;
  out.status = LpStatus::Optimal;
  out.iterations = iterations;
  out.x.assign(n0, 0.0);
  for (int j = 0; j < n0; ++j) {
    if (col_dead[j]) continue;  // filled from its split below
    double v = val[j];
    for (int e : extras_of[j]) v += val[e];
    out.x[j] = v;
  }
  for (const auto& s : splits) {
    out.x[s.ucol] = std::max(0.0, out.x[s.xcol] - s.rhs);
  }
  double obj = 0.0;
  for (int j = 0; j < n0; ++j) obj += lp.cols[j].cost * out.x[j];
  out.objective = obj;

  double worst = max_violation(lp, out.x);
  if (worst > opt.feas_tol * 100.0) {
    std::ostringstream os;
    os << "solve_lp: reconstructed solution violates constraints by " << worst;
    throw std::runtime_error(os.str());
  }
  return out;
}

}  // namespace conroute
