#include "conroute/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace conroute {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (size_t j = 0; j < lp.cols.size(); ++j) {
    const auto& c = lp.cols[j];
    double v = x[j];
    if (std::isfinite(c.lower)) worst = std::max(worst, c.lower - v);
    if (std::isfinite(c.upper)) worst = std::max(worst, v - c.upper);
  }
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (auto [j, a] : row.coeffs) lhs += a * x[j];
    switch (row.sense) {
      case LinearProgram::Sense::Le: worst = std::max(worst, lhs - row.rhs); break;
      case LinearProgram::Sense::Ge: worst = std::max(worst, row.rhs - lhs); break;
      case LinearProgram::Sense::Eq: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenStep = 1e-10;
constexpr int kBlandTrigger = 64;
constexpr int kRefreshEvery = 256;

// Equality-form core: structural columns followed by one slack per row, so
// that A x_struct + s = b with the slack's bounds encoding the row sense.
struct Core {
  int m = 0;     // rows
  int n = 0;     // structural columns
  int ntot = 0;  // n + m
  std::vector<std::vector<std::pair<int, double>>> col;  // sparse columns
  std::vector<double> lo, up, cost, b;
};

Core build_core(const LinearProgram& lp) {
  Core c;
  c.m = static_cast<int>(lp.rows.size());
  c.n = static_cast<int>(lp.cols.size());
  c.ntot = c.n + c.m;
  c.col.resize(c.ntot);
  c.lo.resize(c.ntot);
  c.up.resize(c.ntot);
  c.cost.assign(c.ntot, 0.0);
  c.b.resize(c.m);
  for (int j = 0; j < c.n; ++j) {
    const auto& col = lp.cols[j];
    if (col.lower > col.upper + 1e-12) throw std::runtime_error("lp: column with lower bound above upper bound");
    c.lo[j] = col.lower;
    c.up[j] = col.upper;
    c.cost[j] = col.cost;
  }
  for (int i = 0; i < c.m; ++i) {
    const auto& row = lp.rows[i];
    for (auto [j, a] : row.coeffs) {
      if (j < 0 || j >= c.n) throw std::runtime_error("lp: row references a column out of range");
      if (a != 0.0) c.col[j].push_back({i, a});
    }
    c.b[i] = row.rhs;
    int s = c.n + i;
    c.col[s].push_back({i, 1.0});
    switch (row.sense) {
      case LinearProgram::Sense::Le: c.lo[s] = 0.0; c.up[s] = kInfinity; break;
      case LinearProgram::Sense::Ge: c.lo[s] = -kInfinity; c.up[s] = 0.0; break;
      case LinearProgram::Sense::Eq: c.lo[s] = 0.0; c.up[s] = 0.0; break;
    }
  }
  return c;
}

class Engine {
 public:
  Engine(const Core& c, const SimplexOptions& opt) : c_(c), opt_(opt) {}

  SimplexResult run(const std::vector<VStat>* warm) {
    if (warm != nullptr && try_warm_start(*warm)) {
      // warm basis loaded
    } else {
      cold_start();
    }
    if (!run_phase(/*phase2=*/false)) {
      return finish(LpStatus::Infeasible);
    }
    bool bounded = run_phase(/*phase2=*/true);
    return finish(bounded ? LpStatus::Optimal : LpStatus::Unbounded);
  }

 private:
  const Core& c_;
  SimplexOptions opt_;
  std::vector<double> binv_;   // m*m row-major basis inverse
  std::vector<int> basic_;     // row -> column
  std::vector<int> row_of_;    // column -> row when basic, else -1
  std::vector<VStat> vstat_;   // column -> status
  std::vector<double> xval_;   // column -> value
  std::vector<double> alpha_;  // scratch: B^{-1} a_j
  std::vector<double> y_;      // scratch: pricing duals
  int64_t iters_ = 0;
  int pivots_since_refresh_ = 0;
  bool bland_ = false;
  int degen_run_ = 0;

  [[noreturn]] void breakdown(const std::string& what) const {
    std::ostringstream os;
    os << "simplex: numerical breakdown (" << what << "; rows=" << c_.m
       << " cols=" << c_.n << " iterations=" << iters_ << ")";
    throw std::runtime_error(os.str());
  }

  double nb_value(int j) const {
    switch (vstat_[j]) {
      case VStat::NbLower: return c_.lo[j];
      case VStat::NbUpper: return c_.up[j];
      default: return 0.0;
    }
  }

  void cold_start() {
    basic_.resize(c_.m);
    row_of_.assign(c_.ntot, -1);
    vstat_.assign(c_.ntot, VStat::NbLower);
    xval_.assign(c_.ntot, 0.0);
    for (int j = 0; j < c_.ntot; ++j) {
      if (std::isfinite(c_.lo[j])) vstat_[j] = VStat::NbLower;
      else if (std::isfinite(c_.up[j])) vstat_[j] = VStat::NbUpper;
      else vstat_[j] = VStat::NbFree;
      xval_[j] = nb_value(j);
    }
    binv_.assign(static_cast<size_t>(c_.m) * c_.m, 0.0);
    for (int i = 0; i < c_.m; ++i) {
      int s = c_.n + i;
      basic_[i] = s;
      row_of_[s] = i;
      vstat_[s] = VStat::Basic;
      binv_[static_cast<size_t>(i) * c_.m + i] = 1.0;
    }
    recompute_basics();
  }

  bool try_warm_start(const std::vector<VStat>& warm) {
    if (static_cast<int>(warm.size()) != c_.ntot) return false;
    std::vector<int> basis;
    basis.reserve(c_.m);
    for (int j = 0; j < c_.ntot; ++j) {
      if (warm[j] == VStat::Basic) basis.push_back(j);
    }
    if (static_cast<int>(basis.size()) != c_.m) return false;
    basic_ = basis;
    row_of_.assign(c_.ntot, -1);
    vstat_ = warm;
    xval_.assign(c_.ntot, 0.0);
    for (int i = 0; i < c_.m; ++i) row_of_[basic_[i]] = i;
    for (int j = 0; j < c_.ntot; ++j) {
      if (vstat_[j] == VStat::Basic) continue;
      // Normalize statuses that do not match the bound structure.
      if (vstat_[j] == VStat::NbLower && !std::isfinite(c_.lo[j]))
        vstat_[j] = std::isfinite(c_.up[j]) ? VStat::NbUpper : VStat::NbFree;
      if (vstat_[j] == VStat::NbUpper && !std::isfinite(c_.up[j]))
        vstat_[j] = std::isfinite(c_.lo[j]) ? VStat::NbLower : VStat::NbFree;
      xval_[j] = nb_value(j);
    }
    if (!refactorize()) return false;
    recompute_basics();
    return true;
  }

  // Rebuilds binv_ from the current basis columns via Gauss-Jordan with
  // partial pivoting.  Returns false when the basis matrix is singular.
  bool refactorize() {
    int m = c_.m;
    std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
    std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) {
      for (auto [i, a] : c_.col[basic_[k]]) mat[static_cast<size_t>(i) * m + k] = a;
      inv[static_cast<size_t>(k) * m + k] = 1.0;
    }
    for (int k = 0; k < m; ++k) {
      int prow = -1;
      double best = 1e-11;
      for (int i = k; i < m; ++i) {
        double v = std::abs(mat[static_cast<size_t>(i) * m + k]);
        if (v > best) { best = v; prow = i; }
      }
      if (prow < 0) return false;
      if (prow != k) {
        for (int j2 = 0; j2 < m; ++j2) {
          std::swap(mat[static_cast<size_t>(prow) * m + j2], mat[static_cast<size_t>(k) * m + j2]);
          std::swap(inv[static_cast<size_t>(prow) * m + j2], inv[static_cast<size_t>(k) * m + j2]);
        }
      }
      double piv = mat[static_cast<size_t>(k) * m + k];
      double ipiv = 1.0 / piv;
      for (int j2 = 0; j2 < m; ++j2) {
        mat[static_cast<size_t>(k) * m + j2] *= ipiv;
        inv[static_cast<size_t>(k) * m + j2] *= ipiv;
      }
      for (int i = 0; i < m; ++i) {
        if (i == k) continue;
        double f = mat[static_cast<size_t>(i) * m + k];
        if (f == 0.0) continue;
        for (int j2 = 0; j2 < m; ++j2) {
          mat[static_cast<size_t>(i) * m + j2] -= f * mat[static_cast<size_t>(k) * m + j2];
          inv[static_cast<size_t>(i) * m + j2] -= f * inv[static_cast<size_t>(k) * m + j2];
        }
      }
    }
    binv_ = std::move(inv);
    pivots_since_refresh_ = 0;
    return true;
  }

  // Recomputes basic values from nonbasic values: x_B = B^{-1} (b - N x_N).
  void recompute_basics() {
    int m = c_.m;
    std::vector<double> rhs(c_.b);
    for (int j = 0; j < c_.ntot; ++j) {
      if (vstat_[j] == VStat::Basic) continue;
      double v = xval_[j];
      if (v == 0.0) continue;
      for (auto [i, a] : c_.col[j]) rhs[i] -= a * v;
    }
    for (int i = 0; i < m; ++i) {
      const double* row = binv_.data() + static_cast<size_t>(i) * m;
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += row[k] * rhs[k];
      xval_[basic_[i]] = acc;
    }
  }

  void ftran(int j) {
    int m = c_.m;
    alpha_.assign(m, 0.0);
    for (auto [i, a] : c_.col[j]) {
      if (a == 0.0) continue;
      const size_t off = static_cast<size_t>(i);
      for (int r = 0; r < m; ++r) alpha_[r] += binv_[static_cast<size_t>(r) * m + off] * a;
    }
  }

  // y such that y_t = sum_i sigma_i * binv[i][t].
  void btran(const std::vector<double>& sigma) {
    int m = c_.m;
    y_.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double s = sigma[i];
      if (s == 0.0) continue;
      const double* row = binv_.data() + static_cast<size_t>(i) * m;
      for (int t = 0; t < m; ++t) y_[t] += s * row[t];
    }
  }

  double infeasibility() const {
    double phi = 0.0;
    for (int i = 0; i < c_.m; ++i) {
      int v = basic_[i];
      if (xval_[v] < c_.lo[v]) phi += c_.lo[v] - xval_[v];
      else if (xval_[v] > c_.up[v]) phi += xval_[v] - c_.up[v];
    }
    return phi;
  }

  // One phase of the primal simplex.  phase2=false minimizes total bound
  // infeasibility of the basics; phase2=true minimizes cost from a feasible
  // basis.  Returns false for "infeasible" (phase 1) / "unbounded" (phase 2).
  bool run_phase(bool phase2) {
    int m = c_.m;
    std::vector<double> sigma(m);
    for (;;) {
      if (iters_ >= opt_.iter_limit) throw std::runtime_error("simplex: iteration limit reached");

      bool any_infeasible = false;
      for (int i = 0; i < m; ++i) {
        int v = basic_[i];
        if (phase2) {
          sigma[i] = c_.cost[v];
        } else {
          if (xval_[v] < c_.lo[v] - opt_.feas_tol) { sigma[i] = -1.0; any_infeasible = true; }
          else if (xval_[v] > c_.up[v] + opt_.feas_tol) { sigma[i] = 1.0; any_infeasible = true; }
          else sigma[i] = 0.0;
        }
      }
      if (!phase2 && !any_infeasible) return true;  // primal feasible
      btran(sigma);

      // Pricing: pick the entering column and its direction.
      int enter = -1;
      double enter_dir = 0.0;
      double best_score = opt_.opt_tol;
      for (int j = 0; j < c_.ntot; ++j) {
        VStat st = vstat_[j];
        if (st == VStat::Basic) continue;
        if (c_.lo[j] == c_.up[j]) continue;  // fixed columns never enter
        double d = phase2 ? c_.cost[j] : 0.0;
        for (auto [i, a] : c_.col[j]) d -= y_[i] * a;
        // Tiny cost-relative slack keeps rounding noise on huge-penalty
        // columns from masquerading as improving directions.
        double tol = opt_.opt_tol + 1e-12 * std::abs(c_.cost[j]);
        double score = 0.0;
        double dir = 0.0;
        if (st == VStat::NbLower) {
          if (d < -tol) { score = -d; dir = 1.0; }
        } else if (st == VStat::NbUpper) {
          if (d > tol) { score = d; dir = -1.0; }
        } else {  // NbFree
          if (std::abs(d) > tol) { score = std::abs(d); dir = d > 0 ? -1.0 : 1.0; }
        }
        if (dir == 0.0) continue;
        if (bland_) { enter = j; enter_dir = dir; break; }
        if (score > best_score) { best_score = score; enter = j; enter_dir = dir; }
      }
      if (enter < 0) {
        if (phase2) return true;                         // optimal
        return infeasibility() <= opt_.feas_tol * 10.0;  // stalled: feasible only if Phi tiny
      }

      ftran(enter);
      double t = enter_dir;

      // Ratio test over blocking events.  The bound at which the blocking
      // basic exits is decided here, before the step perturbs its value.
      double limit = kInfinity;
      int block_row = -1;        // -1 with finite limit => entering bound flip
      double block_pivot = 0.0;
      bool block_at_upper = false;
      double span = c_.up[enter] - c_.lo[enter];
      if (std::isfinite(span)) limit = span;
      for (int i = 0; i < m; ++i) {
        double a = alpha_[i];
        if (std::abs(a) < kPivotTol) continue;
        double rate = -a * t;  // change of this basic per unit step
        int v = basic_[i];
        double xv = xval_[v];
        double cand = kInfinity;
        bool at_upper = false;
        if (!phase2 && xv < c_.lo[v] - opt_.feas_tol) {
          if (rate > 0) cand = (c_.lo[v] - xv) / rate;   // regains feasibility, exits at lower
          else continue;                                  // grows more infeasible; priced in
        } else if (!phase2 && xv > c_.up[v] + opt_.feas_tol) {
          if (rate < 0) { cand = (xv - c_.up[v]) / (-rate); at_upper = true; }
          else continue;
        } else if (rate > 0) {
          if (!std::isfinite(c_.up[v])) continue;
          cand = std::max(0.0, (c_.up[v] - xv) / rate);
          at_upper = true;
        } else {
          if (!std::isfinite(c_.lo[v])) continue;
          cand = std::max(0.0, (xv - c_.lo[v]) / (-rate));
        }
        if (cand < limit - 1e-9 ||
            (cand < limit + 1e-9 && block_row >= 0 &&
             (bland_ ? basic_[i] < basic_[block_row] : std::abs(a) > std::abs(block_pivot))) ||
            (cand < limit + 1e-9 && block_row < 0 && cand < limit)) {
          limit = std::min(limit, cand);
          block_row = i;
          block_pivot = a;
          block_at_upper = at_upper;
        }
      }

      if (!std::isfinite(limit)) {
        if (phase2) return false;  // unbounded ray
        breakdown("phase-1 step unbounded");
      }

      // Apply the step.
      double step = std::max(0.0, limit);
      xval_[enter] += t * step;
      if (step > 0) {
        for (int i = 0; i < m; ++i) {
          if (alpha_[i] == 0.0) continue;
          xval_[basic_[i]] -= alpha_[i] * t * step;
        }
      }

      if (block_row < 0) {
        // Bound flip: snap exactly to the opposite bound.
        vstat_[enter] = t > 0 ? VStat::NbUpper : VStat::NbLower;
        xval_[enter] = nb_value(enter);
      } else {
        if (std::abs(block_pivot) < kPivotTol) breakdown("pivot element too small");
        int leave = basic_[block_row];
        vstat_[leave] = block_at_upper ? VStat::NbUpper : VStat::NbLower;
        xval_[leave] = nb_value(leave);
        row_of_[leave] = -1;
        basic_[block_row] = enter;
        row_of_[enter] = block_row;
        vstat_[enter] = VStat::Basic;
        update_binv(block_row, block_pivot);
        if (++pivots_since_refresh_ >= kRefreshEvery) {
          if (!refactorize()) breakdown("basis became singular");
          recompute_basics();
        }
      }

      ++iters_;
      if (step < kDegenStep) {
        if (++degen_run_ > kBlandTrigger) bland_ = true;
      } else {
        degen_run_ = 0;
        bland_ = false;
      }
    }
  }

  // Rank-one basis inverse update for a pivot on (row r, entering column
  // already ftran'ed into alpha_).
  void update_binv(int r, double pivot) {
    int m = c_.m;
    double* prow = binv_.data() + static_cast<size_t>(r) * m;
    double ipiv = 1.0 / pivot;
    for (int t = 0; t < m; ++t) prow[t] *= ipiv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      double f = alpha_[i];
      if (f == 0.0) continue;
      double* irow = binv_.data() + static_cast<size_t>(i) * m;
      for (int t = 0; t < m; ++t) irow[t] -= f * prow[t];
    }
  }

  SimplexResult finish(LpStatus status) {
    SimplexResult res;
    res.status = status;
    res.iterations = iters_;
    res.vstat = vstat_;
    if (status == LpStatus::Optimal) {
      if (!refactorize()) breakdown("basis became singular at optimum");
      recompute_basics();
      res.x.assign(xval_.begin(), xval_.begin() + c_.n);
      double obj = 0.0;
      for (int j = 0; j < c_.n; ++j) obj += c_.cost[j] * res.x[j];
      res.objective = obj;
      verify();
      // Row duals y = c_B B^{-1} from the refreshed basis.
      res.row_duals.assign(static_cast<size_t>(c_.m), 0.0);
      for (int i = 0; i < c_.m; ++i) {
        double cb = c_.cost[basic_[static_cast<size_t>(i)]];
        if (cb == 0.0) continue;
        const double* row = binv_.data() + static_cast<size_t>(i) * static_cast<size_t>(c_.m);
        for (int t = 0; t < c_.m; ++t) res.row_duals[static_cast<size_t>(t)] += cb * row[t];
      }
    }
    return res;
  }

  void verify() const {
    double worst = 0.0;
    for (int j = 0; j < c_.ntot; ++j) {
      double v = xval_[j];
      if (std::isfinite(c_.lo[j])) worst = std::max(worst, c_.lo[j] - v);
      if (std::isfinite(c_.up[j])) worst = std::max(worst, v - c_.up[j]);
    }
    std::vector<double> resid(c_.b);
    for (int j = 0; j < c_.ntot; ++j) {
      double v = xval_[j];
      if (v == 0.0) continue;
      for (auto [i, a] : c_.col[j]) resid[i] -= a * v;
    }
    for (int i = 0; i < c_.m; ++i) worst = std::max(worst, std::abs(resid[i]));
    if (worst > opt_.feas_tol * 100.0) {
      std::ostringstream os;
      os << "solution violates constraints by " << worst;
      breakdown(os.str());
    }
  }
};

}  // namespace

SimplexResult simplex_solve(const LinearProgram& lp, const SimplexOptions& opt,
                            const std::vector<VStat>* warm) {
  // Row-free LPs reduce to independent column minimization.
  if (lp.rows.empty()) {
    SimplexResult res;
    res.vstat.resize(lp.cols.size());
    res.x.resize(lp.cols.size());
    for (size_t j = 0; j < lp.cols.size(); ++j) {
      const auto& col = lp.cols[j];
      double v;
      if (col.cost > 0) v = col.lower;
      else if (col.cost < 0) v = col.upper;
      else v = std::isfinite(col.lower) ? col.lower : (std::isfinite(col.upper) ? col.upper : 0.0);
      if (!std::isfinite(v)) {
        if (col.lower > col.upper) { res.status = LpStatus::Infeasible; return res; }
        res.status = LpStatus::Unbounded;
        return res;
      }
      if (col.lower > col.upper + 1e-12) { res.status = LpStatus::Infeasible; return res; }
      res.x[j] = v;
      res.vstat[j] = (v == col.lower) ? VStat::NbLower : VStat::NbUpper;
      res.objective += col.cost * v;
    }
    res.status = LpStatus::Optimal;
    return res;
  }
  Core core = build_core(lp);
  Engine eng(core, opt);
  return eng.run(warm);
}

}  // namespace conroute
