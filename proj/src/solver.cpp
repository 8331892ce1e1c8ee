#include "conroute/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "conroute/simplex.hpp"

namespace conroute {

namespace {

constexpr int64_t kNoIncumbent = std::numeric_limits<int64_t>::max();

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// Working form of the model.  Container counts cost nothing and appear only
// in <= rows, so any relaxation optimum rests them at flow/q; the node
// relaxation therefore carries route columns only, with the container terms
// substituted out of the capacity rows.  Rows that cannot bind even with
// every commodity's count rounded up are dropped once, globally; branched
// count pins never exceed ceil(arc flow / q), which that worst case covers,
// so dropped rows stay satisfied in every subtree.
// ---------------------------------------------------------------------------

struct WorkingForm {
  LinearProgram base;                        // route columns + kept rows
  std::map<int, int> row_of_xdock;           // hub -> base row
  std::map<int, int> row_of_vehicle;         // physical arc -> base row
  std::vector<std::vector<int>> users_of_y;  // y -> route columns using it
  std::vector<int64_t> y_count_cap;          // y -> sum_k ceil(q_k / q)
};

WorkingForm make_working_form(const IPModel& model) {
  WorkingForm w;
  const int64_t q = model.container_parcels;
  const int X = static_cast<int>(model.x.size());

  for (const auto& v : model.x) w.base.add_col(0.0, 1.0, static_cast<double>(v.cost_pdmin));

  w.users_of_y.resize(model.y.size());
  for (int i = 0; i < X; ++i)
    for (int j : model.x[static_cast<size_t>(i)].container_arcs)
      w.users_of_y[static_cast<size_t>(j)].push_back(i);

  w.y_count_cap.resize(model.y.size(), 0);
  for (size_t j = 0; j < model.y.size(); ++j) {
    std::set<int> ks;
    for (int i : w.users_of_y[j]) ks.insert(model.x[static_cast<size_t>(i)].commodity);
    for (int k : ks)
      w.y_count_cap[j] += ceil_div(model.commodity_quantity[static_cast<size_t>(k)], q);
  }

  // Candidate capacity rows grouped by subject, plus each one's worst-case
  // load: every commodity that can touch the subject does, counts rounded up.
  std::map<int, std::set<int>> sort_ks, xdock_ks, arc_ks;
  std::map<int, std::vector<int>> sort_cols, xdock_cols, arc_cols;
  for (int i = 0; i < X; ++i) {
    const auto& v = model.x[static_cast<size_t>(i)];
    for (int h : v.sort_hubs) {
      sort_ks[h].insert(v.commodity);
      sort_cols[h].push_back(i);
    }
    for (int h : v.xdock_hubs) {
      xdock_ks[h].insert(v.commodity);
      xdock_cols[h].push_back(i);
    }
    for (int a : v.arcs) {
      arc_ks[a].insert(v.commodity);
      arc_cols[a].push_back(i);
    }
  }
  auto quantity = [&](int k) { return model.commodity_quantity[static_cast<size_t>(k)]; };

  std::map<int, int64_t> sort_cap, xdock_cap, vehicle_cap;
  for (size_t r = 0; r < model.rows.size(); ++r) {
    const auto& info = model.rows[r];
    const int64_t rhs = std::llround(model.lp.rows[r].rhs);
    if (info.kind == IPModel::RowKind::SortCap) sort_cap[info.subject] = rhs;
    if (info.kind == IPModel::RowKind::CrossdockCap) xdock_cap[info.subject] = rhs;
    if (info.kind == IPModel::RowKind::VehicleCap) vehicle_cap[info.subject] = rhs;
  }

  for (const auto& [hub, cols] : sort_cols) {
    int64_t worst = 0;
    for (int k : sort_ks[hub]) worst += quantity(k);
    const int64_t rhs = sort_cap.at(hub);
    if (worst <= rhs) continue;
    std::vector<std::pair<int, double>> coeffs;
    for (int i : cols)
      coeffs.push_back({i, static_cast<double>(model.x[static_cast<size_t>(i)].quantity)});
    w.base.add_row(std::move(coeffs), LinearProgram::Sense::Le, static_cast<double>(rhs));
  }
  for (const auto& [hub, cols] : xdock_cols) {
    int64_t worst = 0;
    for (int k : xdock_ks[hub]) worst += ceil_div(quantity(k), q);
    const int64_t rhs = xdock_cap.at(hub);
    if (worst <= rhs) continue;
    std::vector<std::pair<int, double>> coeffs;
    for (int i : cols)
      coeffs.push_back({i, static_cast<double>(model.x[static_cast<size_t>(i)].quantity) /
                               static_cast<double>(q)});
    w.row_of_xdock[hub] = static_cast<int>(w.base.rows.size());
    w.base.add_row(std::move(coeffs), LinearProgram::Sense::Le, static_cast<double>(rhs));
  }
  for (const auto& [arc, cols] : arc_cols) {
    int64_t worst = 0;
    for (int k : arc_ks[arc]) worst += ceil_div(quantity(k), q);
    const int64_t rhs = vehicle_cap.at(arc);
    if (worst <= rhs) continue;
    std::vector<std::pair<int, double>> coeffs;
    for (int i : cols)
      coeffs.push_back({i, static_cast<double>(model.x[static_cast<size_t>(i)].quantity) /
                               static_cast<double>(q)});
    w.row_of_vehicle[arc] = static_cast<int>(w.base.rows.size());
    w.base.add_row(std::move(coeffs), LinearProgram::Sense::Le, static_cast<double>(rhs));
  }
  for (const auto& cols : model.commodity_x) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i : cols) coeffs.push_back({i, 1.0});
    w.base.add_row(std::move(coeffs), LinearProgram::Sense::Eq, 1.0);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Branching bookkeeping: a node is its chain of decisions back to the root.
// ---------------------------------------------------------------------------

struct Delta {
  enum class Kind : uint8_t { FixTo, FixAway, CountFloor, CountCeil } kind;
  int subject = -1;   // route column or container-arc index
  int64_t value = 0;  // floor or ceil container count
};

struct Chain {
  Delta d;
  std::shared_ptr<const Chain> up;
};

struct BnbNode {
  std::shared_ptr<const Chain> chain;
  int64_t bound = 0;  // inherited lower bound, parcel-deciminutes
  int64_t id = 0;     // creation order; queue ties resolve by it
  std::shared_ptr<const std::vector<VStat>> warm;  // parent's final basis
  int warm_cols = 0, warm_rows = 0;                // shape that basis belongs to
};

struct BnbNodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;  // rbegin() = smallest bound, then oldest node
  }
};

std::vector<Delta> chain_to_root(const std::shared_ptr<const Chain>& chain) {
  std::vector<Delta> ds;
  for (const Chain* c = chain.get(); c; c = c->up.get()) ds.push_back(c->d);
  std::reverse(ds.begin(), ds.end());
  return ds;
}

// Node relaxation: base copy, route fixings, one extra row per floored count
// (arc flow <= q x floor), and per ceiled arc an explicit bounded count
// column that replaces the arc's substituted share in the kept capacity rows
// plus a link row tying it to the arc's flow.  Count columns appear in
// first-occurrence order and rows are appended in chain order, so a child's
// layout always extends its parent's and the parent's basis stays a valid
// warm start.  A repeated ceil on the same arc only raises the column's
// lower bound.
LinearProgram build_node_lp(const IPModel& model, const WorkingForm& w,
                            const std::vector<Delta>& deltas) {
  LinearProgram lp = w.base;
  const int64_t q = model.container_parcels;
  std::map<int, int64_t> ceil_of;  // container arc -> strongest ceil
  std::vector<int> ceil_order;     // first-occurrence order along the chain
  for (const auto& d : deltas) {
    if (d.kind != Delta::Kind::CountCeil) continue;
    auto it = ceil_of.find(d.subject);
    if (it == ceil_of.end()) {
      ceil_of.emplace(d.subject, d.value);
      ceil_order.push_back(d.subject);
    } else {
      it->second = std::max(it->second, d.value);
    }
  }
  std::map<int, int> col_of_ceil;
  for (int j : ceil_order) {
    const int64_t lb = ceil_of.at(j);
    const int64_t ub = std::max(lb, w.y_count_cap[static_cast<size_t>(j)]);
    col_of_ceil[j] = lp.add_col(static_cast<double>(lb), static_cast<double>(ub), 0.0);
  }

  std::set<int> emitted;  // ceiled arcs whose surgery + link row are in place
  for (const auto& d : deltas) {
    switch (d.kind) {
      case Delta::Kind::FixTo: {
        const auto& v = model.x[static_cast<size_t>(d.subject)];
        for (int i : model.commodity_x[static_cast<size_t>(v.commodity)]) {
          lp.cols[static_cast<size_t>(i)].lower = 0.0;
          lp.cols[static_cast<size_t>(i)].upper = 0.0;
        }
        lp.cols[static_cast<size_t>(d.subject)].lower = 1.0;
        lp.cols[static_cast<size_t>(d.subject)].upper = 1.0;
        break;
      }
      case Delta::Kind::FixAway:
        lp.cols[static_cast<size_t>(d.subject)].lower = 0.0;
        lp.cols[static_cast<size_t>(d.subject)].upper = 0.0;
        break;
      case Delta::Kind::CountFloor: {
        std::vector<std::pair<int, double>> coeffs;
        for (int i : w.users_of_y[static_cast<size_t>(d.subject)])
          coeffs.push_back({i, static_cast<double>(model.x[static_cast<size_t>(i)].quantity)});
        lp.add_row(std::move(coeffs), LinearProgram::Sense::Le,
                   static_cast<double>(q * d.value));
        break;
      }
      case Delta::Kind::CountCeil: {
        if (!emitted.insert(d.subject).second) break;  // bound already raised
        const int j = d.subject;
        const int col = col_of_ceil.at(j);
        auto detach = [&](int row) {
          auto& coeffs = lp.rows[static_cast<size_t>(row)].coeffs;
          for (int i : w.users_of_y[static_cast<size_t>(j)]) {
            const double share = static_cast<double>(model.x[static_cast<size_t>(i)].quantity) /
                                 static_cast<double>(q);
            for (auto& term : coeffs) {
              if (term.first == i) {
                term.second -= share;
                break;
              }
            }
          }
          coeffs.erase(std::remove_if(coeffs.begin(), coeffs.end(),
                                      [](const std::pair<int, double>& t) {
                                        return std::fabs(t.second) < 1e-12;
                                      }),
                       coeffs.end());
          coeffs.push_back({col, 1.0});
        };
        const auto& cv = model.y[static_cast<size_t>(j)];
        for (int h : cv.xdock_hubs) {
          auto it = w.row_of_xdock.find(h);
          if (it != w.row_of_xdock.end()) detach(it->second);
        }
        for (int a : cv.physical_arcs) {
          auto it = w.row_of_vehicle.find(a);
          if (it != w.row_of_vehicle.end()) detach(it->second);
        }
        std::vector<std::pair<int, double>> link;
        for (int i : w.users_of_y[static_cast<size_t>(j)])
          link.push_back({i, static_cast<double>(model.x[static_cast<size_t>(i)].quantity)});
        link.push_back({col, -static_cast<double>(q)});
        lp.add_row(std::move(link), LinearProgram::Sense::Le, 0.0);
        break;
      }
    }
  }
  return lp;
}

// Exact integer evaluation of an integral route assignment: container counts
// rounded up (respecting ceil-branched pins), then every capacity row of the
// faithful model re-checked in int64.  On a violation the branch target is
// the most fractional member count of the first violated row, skipping arcs
// already pinned at or above their rounded-up count (branching them again
// would not move the relaxation).  A violated row always has an eligible
// member: members that are pinned or divisible contribute no more than their
// relaxation share, which the node LP keeps within the row's capacity, and
// rows dropped by the worst-case test can never be violated because pins
// never exceed ceil(arc flow / q).
struct LeafCheck {
  bool feasible = false;
  int branch_container = -1;
  int64_t branch_floor = 0;  // floor(flow / q) of the branch target
  std::vector<int64_t> counts;
};

LeafCheck check_leaf(const IPModel& model, const std::vector<int64_t>& xi,
                     const std::vector<Delta>& deltas) {
  LeafCheck out;
  const int64_t q = model.container_parcels;
  std::vector<int64_t> flow(model.y.size(), 0);
  for (size_t i = 0; i < model.x.size(); ++i) {
    if (!xi[i]) continue;
    for (int j : model.x[i].container_arcs) flow[static_cast<size_t>(j)] += model.x[i].quantity;
  }
  std::map<int, int64_t> pin;
  for (const auto& d : deltas)
    if (d.kind == Delta::Kind::CountCeil) {
      auto [it, fresh] = pin.try_emplace(d.subject, d.value);
      if (!fresh) it->second = std::max(it->second, d.value);
    }
  out.counts.assign(model.y.size(), 0);
  for (size_t j = 0; j < model.y.size(); ++j)
    if (flow[j] > 0) out.counts[j] = ceil_div(flow[j], q);
  for (const auto& [j, value] : pin)
    out.counts[static_cast<size_t>(j)] = std::max(out.counts[static_cast<size_t>(j)], value);

  for (size_t r = 0; r < model.rows.size(); ++r) {
    const auto& info = model.rows[r];
    int64_t lhs = 0;
    std::vector<int> members;
    switch (info.kind) {
      case IPModel::RowKind::SortCap:
        for (size_t i = 0; i < model.x.size(); ++i)
          if (xi[i] && std::count(model.x[i].sort_hubs.begin(), model.x[i].sort_hubs.end(),
                                  info.subject))
            lhs += model.x[i].quantity;
        break;
      case IPModel::RowKind::CrossdockCap:
        for (size_t j = 0; j < model.y.size(); ++j)
          if (out.counts[j] && std::count(model.y[j].xdock_hubs.begin(),
                                          model.y[j].xdock_hubs.end(), info.subject)) {
            lhs += out.counts[j];
            members.push_back(static_cast<int>(j));
          }
        break;
      case IPModel::RowKind::VehicleCap:
        for (size_t j = 0; j < model.y.size(); ++j)
          if (out.counts[j] && std::count(model.y[j].physical_arcs.begin(),
                                          model.y[j].physical_arcs.end(), info.subject)) {
            lhs += out.counts[j];
            members.push_back(static_cast<int>(j));
          }
        break;
      default:
        continue;
    }
    if (lhs <= std::llround(model.lp.rows[r].rhs)) continue;
    double best = 0.0;
    for (int j : members) {
      const int64_t f = flow[static_cast<size_t>(j)];
      const int64_t rem = f % q;
      if (rem == 0) continue;
      auto it = pin.find(j);
      if (it != pin.end() && it->second >= ceil_div(f, q)) continue;  // already resolved
      const double fract =
          static_cast<double>(std::min(rem, q - rem)) / static_cast<double>(q);
      if (fract > best) {
        best = fract;
        out.branch_container = j;
        out.branch_floor = f / q;
      }
    }
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  return out;
}

Solution make_solution(const IPModel& model, const std::vector<int64_t>& xi,
                       const std::vector<int64_t>& counts) {
  Solution s;
  s.x.resize(model.x.size());
  s.y.assign(counts.begin(), counts.end());
  s.chosen.assign(model.commodity_x.size(), -1);
  for (size_t i = 0; i < model.x.size(); ++i) {
    s.x[i] = static_cast<double>(xi[i]);
    if (!xi[i]) continue;
    const auto& v = model.x[i];
    s.chosen[static_cast<size_t>(v.commodity)] = static_cast<int>(i);
    s.objective_pdmin += v.cost_pdmin;
    s.totals.transport_dmin += v.quantity * v.transit.transport_dmin;
    s.totals.wait_dmin += v.quantity * v.transit.wait_dmin;
    s.totals.sort_dmin += v.quantity * v.transit.sort_dmin;
    s.totals.crossdock_dmin += v.quantity * v.transit.crossdock_dmin;
  }
  return s;
}

// Capacity right-hand sides keyed by row subject; -1 marks an uncapped
// subject (no row in the model).
struct GreedyTables {
  std::vector<int64_t> sort_rhs, xdock_rhs, veh_rhs;
};

GreedyTables make_greedy_tables(const IPModel& model) {
  GreedyTables t;
  auto put = [](std::vector<int64_t>& v, int subject, int64_t rhs) {
    if (subject < 0) return;
    if (static_cast<size_t>(subject) >= v.size()) v.resize(static_cast<size_t>(subject) + 1, -1);
    v[static_cast<size_t>(subject)] = rhs;
  };
  for (size_t r = 0; r < model.rows.size(); ++r) {
    const auto& info = model.rows[r];
    const int64_t rhs = std::llround(model.lp.rows[r].rhs);
    switch (info.kind) {
      case IPModel::RowKind::SortCap:
        put(t.sort_rhs, info.subject, rhs);
        break;
      case IPModel::RowKind::CrossdockCap:
        put(t.xdock_rhs, info.subject, rhs);
        break;
      case IPModel::RowKind::VehicleCap:
        put(t.veh_rhs, info.subject, rhs);
        break;
      default:
        break;
    }
  }
  return t;
}

// Rounding heuristic: per commodity, take route variants in relaxation-value
// order (or, without a relaxation, dearest-first, which favours sorting and
// therefore pools flow onto shared single-leg container arcs) and keep the
// first whose exact integer loads still fit every capacity. Produces a full
// assignment or nothing. Deterministic.
bool greedy_round(const IPModel& model, const GreedyTables& t, const std::vector<double>* lpx,
                  std::vector<int64_t>& xi_out) {
  const int64_t q = model.container_parcels;
  auto cap = [](const std::vector<int64_t>& v, int s) {
    return s >= 0 && static_cast<size_t>(s) < v.size() ? v[static_cast<size_t>(s)] : int64_t{-1};
  };
  std::vector<int64_t> flow(model.y.size(), 0);
  std::vector<int64_t> sort_load(t.sort_rhs.size(), 0);
  std::vector<int64_t> xdock_cnt(t.xdock_rhs.size(), 0);
  std::vector<int64_t> veh_cnt(t.veh_rhs.size(), 0);
  std::vector<int> picks;
  picks.reserve(model.commodity_x.size());
  std::vector<int> order;

  auto try_place = [&](size_t c) {
    order.assign(model.commodity_x[c].begin(), model.commodity_x[c].end());
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (lpx) {
        const double va = (*lpx)[static_cast<size_t>(a)];
        const double vb = (*lpx)[static_cast<size_t>(b)];
        if (va != vb) return va > vb;
        const int64_t ca = model.x[static_cast<size_t>(a)].cost_pdmin;
        const int64_t cb = model.x[static_cast<size_t>(b)].cost_pdmin;
        if (ca != cb) return ca < cb;
      } else {
        const int64_t ca = model.x[static_cast<size_t>(a)].cost_pdmin;
        const int64_t cb = model.x[static_cast<size_t>(b)].cost_pdmin;
        if (ca != cb) return ca > cb;
      }
      return a < b;
    });
    for (int i : order) {
      const auto& v = model.x[static_cast<size_t>(i)];
      bool fits = true;
      for (int h : v.sort_hubs) {
        const int64_t rhs = cap(t.sort_rhs, h);
        if (rhs >= 0 && sort_load[static_cast<size_t>(h)] + v.quantity > rhs) {
          fits = false;
          break;
        }
      }
      for (size_t ai = 0; fits && ai < v.container_arcs.size(); ++ai) {
        const int j = v.container_arcs[ai];
        const int64_t dc =
            ceil_div(flow[static_cast<size_t>(j)] + v.quantity, q) -
            ceil_div(flow[static_cast<size_t>(j)], q);
        if (dc == 0) continue;
        const auto& ca = model.y[static_cast<size_t>(j)];
        for (int h : ca.xdock_hubs) {
          const int64_t rhs = cap(t.xdock_rhs, h);
          if (rhs >= 0 && xdock_cnt[static_cast<size_t>(h)] + dc > rhs) {
            fits = false;
            break;
          }
        }
        for (size_t pi = 0; fits && pi < ca.physical_arcs.size(); ++pi) {
          const int a = ca.physical_arcs[pi];
          const int64_t rhs = cap(t.veh_rhs, a);
          if (rhs >= 0 && veh_cnt[static_cast<size_t>(a)] + dc > rhs) {
            fits = false;
            break;
          }
        }
      }
      if (!fits) continue;
      for (int h : v.sort_hubs)
        if (static_cast<size_t>(h) < sort_load.size()) sort_load[static_cast<size_t>(h)] += v.quantity;
      for (int j : v.container_arcs) {
        const int64_t dc = ceil_div(flow[static_cast<size_t>(j)] + v.quantity, q) -
                           ceil_div(flow[static_cast<size_t>(j)], q);
        flow[static_cast<size_t>(j)] += v.quantity;
        if (dc == 0) continue;
        const auto& ca = model.y[static_cast<size_t>(j)];
        for (int h : ca.xdock_hubs)
          if (static_cast<size_t>(h) < xdock_cnt.size()) xdock_cnt[static_cast<size_t>(h)] += dc;
        for (int a : ca.physical_arcs)
          if (static_cast<size_t>(a) < veh_cnt.size()) veh_cnt[static_cast<size_t>(a)] += dc;
      }
      return i;
    }
    return -1;
  };

  // First pass in commodity order; capacity-blocked commodities get a second
  // chance at the end, where flow placed after them has often grown a shared
  // single-leg pool enough that joining it no longer needs a new container.
  std::vector<size_t> deferred;
  for (size_t c = 0; c < model.commodity_x.size(); ++c) {
    const int i = try_place(c);
    if (i >= 0)
      picks.push_back(i);
    else
      deferred.push_back(c);
  }
  for (size_t c : deferred) {
    const int i = try_place(c);
    if (i < 0) return false;
    picks.push_back(i);
  }
  xi_out.assign(model.x.size(), 0);
  for (int i : picks) xi_out[static_cast<size_t>(i)] = 1;
  return true;
}

// One-switch polish: sweep the commodities in index order and move a single
// commodity to a cheaper variant whenever the exact integer loads of the
// remaining assignment still fit every capacity. Loads telescope under
// removal (final counts depend only on total flow), so each test is local.
// Strict improvement plus integer costs terminates; the sweep cap is a belt.
void polish_assignment(const IPModel& model, const GreedyTables& t, std::vector<int64_t>& xi) {
  const int64_t q = model.container_parcels;
  auto cap = [](const std::vector<int64_t>& v, int s) {
    return s >= 0 && static_cast<size_t>(s) < v.size() ? v[static_cast<size_t>(s)] : int64_t{-1};
  };
  std::vector<int64_t> flow(model.y.size(), 0);
  std::vector<int64_t> sort_load(t.sort_rhs.size(), 0);
  std::vector<int64_t> xdock_cnt(t.xdock_rhs.size(), 0);
  std::vector<int64_t> veh_cnt(t.veh_rhs.size(), 0);

  // dir = +1 adds column i's loads, dir = -1 removes them.
  auto apply = [&](int i, int dir) {
    const auto& v = model.x[static_cast<size_t>(i)];
    for (int h : v.sort_hubs)
      if (static_cast<size_t>(h) < sort_load.size())
        sort_load[static_cast<size_t>(h)] += dir * v.quantity;
    for (int j : v.container_arcs) {
      const int64_t before = ceil_div(flow[static_cast<size_t>(j)], q);
      flow[static_cast<size_t>(j)] += dir * v.quantity;
      const int64_t after = ceil_div(flow[static_cast<size_t>(j)], q);
      const int64_t dc = after - before;
      if (dc == 0) continue;
      const auto& ca = model.y[static_cast<size_t>(j)];
      for (int h : ca.xdock_hubs)
        if (static_cast<size_t>(h) < xdock_cnt.size()) xdock_cnt[static_cast<size_t>(h)] += dc;
      for (int a : ca.physical_arcs)
        if (static_cast<size_t>(a) < veh_cnt.size()) veh_cnt[static_cast<size_t>(a)] += dc;
    }
  };
  auto fits = [&](int i) {
    const auto& v = model.x[static_cast<size_t>(i)];
    for (int h : v.sort_hubs) {
      const int64_t rhs = cap(t.sort_rhs, h);
      if (rhs >= 0 && sort_load[static_cast<size_t>(h)] + v.quantity > rhs) return false;
    }
    for (int j : v.container_arcs) {
      const int64_t dc = ceil_div(flow[static_cast<size_t>(j)] + v.quantity, q) -
                         ceil_div(flow[static_cast<size_t>(j)], q);
      if (dc == 0) continue;
      const auto& ca = model.y[static_cast<size_t>(j)];
      for (int h : ca.xdock_hubs) {
        const int64_t rhs = cap(t.xdock_rhs, h);
        if (rhs >= 0 && xdock_cnt[static_cast<size_t>(h)] + dc > rhs) return false;
      }
      for (int a : ca.physical_arcs) {
        const int64_t rhs = cap(t.veh_rhs, a);
        if (rhs >= 0 && veh_cnt[static_cast<size_t>(a)] + dc > rhs) return false;
      }
    }
    return true;
  };

  std::vector<int> pick(model.commodity_x.size(), -1);
  for (size_t c = 0; c < model.commodity_x.size(); ++c)
    for (int i : model.commodity_x[c])
      if (xi[static_cast<size_t>(i)]) pick[c] = i;
  for (int i : pick)
    if (i >= 0) apply(i, +1);

  std::vector<int> order;
  bool improved = true;
  for (int sweep = 0; improved && sweep < 16; ++sweep) {
    improved = false;
    for (size_t c = 0; c < model.commodity_x.size(); ++c) {
      const int cur = pick[c];
      if (cur < 0) continue;
      order.assign(model.commodity_x[c].begin(), model.commodity_x[c].end());
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int64_t ca = model.x[static_cast<size_t>(a)].cost_pdmin;
        const int64_t cb = model.x[static_cast<size_t>(b)].cost_pdmin;
        if (ca != cb) return ca < cb;
        return a < b;
      });
      apply(cur, -1);
      int best = cur;
      for (int i : order) {
        if (model.x[static_cast<size_t>(i)].cost_pdmin >=
            model.x[static_cast<size_t>(cur)].cost_pdmin)
          break;  // ascending order: nothing cheaper remains
        if (fits(i)) {
          best = i;
          break;
        }
      }
      apply(best, +1);
      if (best != cur) {
        xi[static_cast<size_t>(cur)] = 0;
        xi[static_cast<size_t>(best)] = 1;
        pick[c] = best;
        improved = true;
      }
    }
  }
}

}  // namespace

void SolveConfig::validate() const {
  if (!(gap >= 0.0)) throw std::runtime_error("solve config: gap must be >= 0");
  if (node_limit < 1) throw std::runtime_error("solve config: node limit must be >= 1");
  if (time_limit_ms < 1) throw std::runtime_error("solve config: time limit must be >= 1");
  if (workers < 1 || workers > 256)
    throw std::runtime_error("solve config: workers must be in [1, 256]");
}

Solution solve_ip(const IPModel& model, const SolveConfig& cfg, SolveStats* stats,
                  std::ostream* progress) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const WorkingForm w = make_working_form(model);
  const GreedyTables gtables = make_greedy_tables(model);
  const int X = static_cast<int>(model.x.size());

  // Container arcs whose count consumes a kept capacity row; only these can
  // carry an integer rounding penalty worth branching on.
  std::vector<char> y_capacitated(model.y.size(), 0);
  for (size_t j = 0; j < model.y.size(); ++j) {
    const auto& cv = model.y[j];
    bool capped = false;
    for (int h : cv.xdock_hubs)
      if (w.row_of_xdock.count(h)) {
        capped = true;
        break;
      }
    for (size_t ai = 0; !capped && ai < cv.physical_arcs.size(); ++ai)
      if (w.row_of_vehicle.count(cv.physical_arcs[ai])) capped = true;
    y_capacitated[j] = capped ? 1 : 0;
  }

  std::mutex mu;
  std::condition_variable cv;
  std::multiset<BnbNode, BnbNodeOrder> open;
  std::multiset<int64_t> active_bounds;  // bounds of nodes being processed
  int64_t next_id = 0;
  int64_t incumbent_obj = kNoIncumbent;
  std::vector<int64_t> incumbent_x, incumbent_counts;
  SolveStats st;
  bool stop = false;
  std::string failure;

  auto elapsed_ms = [&]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  // Callers hold the lock for these two.
  auto global_bound = [&]() {
    int64_t b = incumbent_obj;
    if (!open.empty()) b = std::min(b, open.rbegin()->bound);
    if (!active_bounds.empty()) b = std::min(b, *active_bounds.begin());
    return b;
  };
  auto gap_of = [](int64_t inc, int64_t bound) {
    if (inc == kNoIncumbent) return std::numeric_limits<double>::infinity();
    return static_cast<double>(inc - bound) / std::max<double>(1.0, static_cast<double>(inc));
  };

  // Every incumbent candidate goes through the same gate: one-switch polish,
  // an exact global feasibility check, then a locked strict-improvement
  // update recorded against the current node count.
  auto try_incumbent = [&](std::vector<int64_t> xi) {
    polish_assignment(model, gtables, xi);
    const LeafCheck leaf = check_leaf(model, xi, {});
    if (!leaf.feasible) return;
    int64_t obj = 0;
    for (size_t i = 0; i < xi.size(); ++i)
      if (xi[i]) obj += model.x[i].cost_pdmin;
    std::lock_guard<std::mutex> lock(mu);
    if (obj < incumbent_obj) {
      incumbent_obj = obj;
      incumbent_x = std::move(xi);
      incumbent_counts = leaf.counts;
      st.incumbents.push_back({st.nodes, obj});
    }
  };

  // Seed the incumbent before the search starts: the dearest-first rounding
  // pass maximises sorting, and sorted flow pools onto shared single-leg
  // container arcs, so it is the assignment most likely to fit tight vehicle
  // rows (the polish then walks it back toward cheaper variants that fit).
  // Any incumbent lets the tree prune from the first node on.
  {
    std::vector<int64_t> sxi;
    if (greedy_round(model, gtables, nullptr, sxi)) try_incumbent(std::move(sxi));
  }

  {
    std::lock_guard<std::mutex> lock(mu);
    open.insert(BnbNode{nullptr, 0, next_id++, nullptr, 0, 0});
  }

  auto worker = [&]() {
    SimplexOptions sopt;
    for (;;) {
      BnbNode node;
      int64_t active_val = 0;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return stop || !open.empty() || active_bounds.empty(); });
        if (stop) return;
        if (open.empty()) {
          cv.notify_all();  // everything is drained; wake the other sleepers
          return;
        }
        node = *open.rbegin();
        open.erase(std::prev(open.end()));
        if (incumbent_obj != kNoIncumbent && node.bound >= incumbent_obj) {
          if (open.empty() && active_bounds.empty()) cv.notify_all();
          continue;
        }
        if (st.nodes >= cfg.node_limit || elapsed_ms() >= cfg.time_limit_ms) {
          st.limit_hit = true;
          stop = true;
          cv.notify_all();
          return;
        }
        active_val = node.bound;
        active_bounds.insert(active_val);
      }

      // Plunge: follow one child chain depth-first until this node closes.
      bool diving = true;
      while (diving) {
        diving = false;
        std::vector<Delta> deltas = chain_to_root(node.chain);
        LinearProgram lp = build_node_lp(model, w, deltas);
        std::vector<VStat> warm_storage;
        const std::vector<VStat>* warm = nullptr;
        if (node.warm && node.warm_cols <= static_cast<int>(lp.cols.size()) &&
            node.warm_rows <= static_cast<int>(lp.rows.size())) {
          // Parent structurals, then new structurals at their lower bound,
          // then parent slacks, then new row slacks basic.
          warm_storage.assign(node.warm->begin(), node.warm->begin() + node.warm_cols);
          warm_storage.resize(lp.cols.size(), VStat::NbLower);
          warm_storage.insert(warm_storage.end(), node.warm->begin() + node.warm_cols,
                              node.warm->end());
          warm_storage.resize(lp.cols.size() + lp.rows.size(), VStat::Basic);
          warm = &warm_storage;
        }
        SimplexResult res;
        try {
          res = simplex_solve(lp, sopt, warm);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mu);
          failure = std::string("node relaxation failed: ") + e.what();
          stop = true;
          cv.notify_all();
          break;
        }

        int64_t node_bound = node.bound;
        if (res.status == LpStatus::Optimal) {
          // Integer objective strengthening with a safety margin
          // proportional to the objective, covering relaxation round-off.
          node_bound = std::max(
              node_bound, static_cast<int64_t>(std::ceil(
                              res.objective - 1e-6 * std::max(1.0, std::fabs(res.objective)))));
        }
        bool prune_now = false;
        {
          std::lock_guard<std::mutex> lock(mu);
          ++st.nodes;
          st.lp_iterations += res.iterations;
          if (res.status == LpStatus::Optimal) {
            active_bounds.erase(active_bounds.find(active_val));
            active_val = node_bound;
            active_bounds.insert(active_val);
          }
          if (progress) {
            const int64_t gb = global_bound();
            (*progress) << st.nodes << ", " << gb << ", "
                        << (incumbent_obj == kNoIncumbent ? -1 : incumbent_obj) << ", "
                        << gap_of(incumbent_obj, gb) << ", " << elapsed_ms() << "\n";
          }
          prune_now = incumbent_obj != kNoIncumbent && node_bound >= incumbent_obj;
        }
        if (res.status != LpStatus::Optimal) break;  // infeasible subtree
        if (prune_now) break;

        // Integrality of the route choice.
        int frac_col = -1;
        double frac_best = -1.0;
        std::vector<int64_t> xi(model.x.size(), 0);
        for (int i = 0; i < X; ++i) {
          const double v = res.x[static_cast<size_t>(i)];
          const double f = std::min(v, 1.0 - v);
          if (f > 1e-6 && f > frac_best) {
            frac_best = f;
            frac_col = i;
          }
          xi[static_cast<size_t>(i)] = std::llround(v);
        }

        // Try to round the relaxation into a full feasible assignment; good
        // incumbents are what prune the tree. On x-integral nodes this acts
        // as a repair pass: each commodity keeps its relaxation choice when
        // the exact loads fit and takes the cheapest fitting variant
        // otherwise. Feasible leaves book their assignment directly instead.
        auto round_into_incumbent = [&]() {
          std::vector<int64_t> gxi;
          if (greedy_round(model, gtables, &res.x, gxi)) try_incumbent(std::move(gxi));
        };
        if (frac_col >= 0) round_into_incumbent();

        // Prefer a container-count dichotomy when the relaxation leaves some
        // capacitated arc's implied count meaningfully fractional: forcing
        // the count up books a whole container's capacity, capping it
        // reroutes the flow, and either side moves a bound that fixing one
        // route choice barely touches. The chain's pins keep every such
        // branch a strict tightening of the arc's count interval.
        int cnt_arc = -1;
        int64_t cnt_floor = 0;
        bool cnt_ceil_first = false;
        if (frac_col >= 0) {
          std::map<int, int64_t> ceil_min, floor_max;
          for (const auto& d : deltas) {
            if (d.kind == Delta::Kind::CountCeil) {
              auto [it, fresh] = ceil_min.try_emplace(d.subject, d.value);
              if (!fresh) it->second = std::max(it->second, d.value);
            } else if (d.kind == Delta::Kind::CountFloor) {
              auto [it, fresh] = floor_max.try_emplace(d.subject, d.value);
              if (!fresh) it->second = std::min(it->second, d.value);
            }
          }
          double cnt_score = 0.02;  // below this the dichotomy is not worth it
          for (size_t j = 0; j < model.y.size(); ++j) {
            if (!y_capacitated[j]) continue;
            double lf = 0.0;
            for (int i : w.users_of_y[j])
              lf += static_cast<double>(model.x[static_cast<size_t>(i)].quantity) *
                    res.x[static_cast<size_t>(i)];
            const double implied = lf / static_cast<double>(model.container_parcels);
            const auto f = static_cast<int64_t>(std::floor(implied + 1e-9));
            const double fr = implied - static_cast<double>(f);
            const double score = std::min(fr, 1.0 - fr);
            if (score <= cnt_score) continue;
            const auto itc = ceil_min.find(static_cast<int>(j));
            if (itc != ceil_min.end() && f < itc->second) continue;  // penalty already booked
            const auto itf = floor_max.find(static_cast<int>(j));
            if (itf != floor_max.end() && f + 1 > itf->second) continue;  // capped at the floor
            cnt_score = score;
            cnt_arc = static_cast<int>(j);
            cnt_floor = f;
            cnt_ceil_first = fr >= 0.5;
          }
        }

        BnbNode child_a, child_b;
        bool have_children = false;
        if (frac_col < 0) {
          LeafCheck leaf = check_leaf(model, xi, deltas);
          if (leaf.feasible) {
            // Feasible under the node's pins implies feasible globally
            // (counts only shrink without them), so the incumbent gate can
            // polish the assignment free of the subtree's restrictions.
            try_incumbent(std::move(xi));
            break;  // leaf closed
          }
          round_into_incumbent();  // repair the violating assignment
          if (leaf.branch_container < 0) {
            std::lock_guard<std::mutex> lock(mu);
            failure = "solve: violated capacity row offers no branch target";
            stop = true;
            cv.notify_all();
            break;
          }
          // Count dichotomy: the arc runs at most floor(flow/q) containers
          // or at least one more.
          const int64_t fl = leaf.branch_floor;
          auto chain_floor = std::make_shared<Chain>(
              Chain{{Delta::Kind::CountFloor, leaf.branch_container, fl}, node.chain});
          auto chain_ceil = std::make_shared<Chain>(
              Chain{{Delta::Kind::CountCeil, leaf.branch_container, fl + 1}, node.chain});
          auto warm_ptr = std::make_shared<const std::vector<VStat>>(std::move(res.vstat));
          std::lock_guard<std::mutex> lock(mu);
          child_a = BnbNode{chain_floor, node_bound, next_id++, warm_ptr,
                         static_cast<int>(lp.cols.size()), static_cast<int>(lp.rows.size())};
          child_b = BnbNode{chain_ceil, node_bound, next_id++, warm_ptr,
                         static_cast<int>(lp.cols.size()), static_cast<int>(lp.rows.size())};
          have_children = true;
        } else if (cnt_arc >= 0) {
          // Count dichotomy mid-tree, diving toward the side the implied
          // count leans to.
          auto chain_floor = std::make_shared<Chain>(
              Chain{{Delta::Kind::CountFloor, cnt_arc, cnt_floor}, node.chain});
          auto chain_ceil = std::make_shared<Chain>(
              Chain{{Delta::Kind::CountCeil, cnt_arc, cnt_floor + 1}, node.chain});
          auto warm_ptr = std::make_shared<const std::vector<VStat>>(std::move(res.vstat));
          std::lock_guard<std::mutex> lock(mu);
          BnbNode fl{chain_floor, node_bound, next_id++, warm_ptr,
                     static_cast<int>(lp.cols.size()), static_cast<int>(lp.rows.size())};
          BnbNode ce{chain_ceil, node_bound, next_id++, warm_ptr,
                     static_cast<int>(lp.cols.size()), static_cast<int>(lp.rows.size())};
          child_a = cnt_ceil_first ? ce : fl;
          child_b = cnt_ceil_first ? fl : ce;
          have_children = true;
        } else {
          // Route branching, diving toward the side the relaxation leans to.
          const bool to_first = res.x[static_cast<size_t>(frac_col)] >= 0.5;
          auto chain_to =
              std::make_shared<Chain>(Chain{{Delta::Kind::FixTo, frac_col, 0}, node.chain});
          auto chain_away =
              std::make_shared<Chain>(Chain{{Delta::Kind::FixAway, frac_col, 0}, node.chain});
          auto warm_ptr = std::make_shared<const std::vector<VStat>>(std::move(res.vstat));
          std::lock_guard<std::mutex> lock(mu);
          BnbNode to{chain_to, node_bound, next_id++, warm_ptr, static_cast<int>(lp.cols.size()),
                  static_cast<int>(lp.rows.size())};
          BnbNode away{chain_away, node_bound, next_id++, warm_ptr,
                    static_cast<int>(lp.cols.size()), static_cast<int>(lp.rows.size())};
          child_a = to_first ? to : away;
          child_b = to_first ? away : to;
          have_children = true;
        }

        if (have_children) {
          std::lock_guard<std::mutex> lock(mu);
          open.insert(child_b);
          cv.notify_one();
          node = child_a;
          diving = true;
        }

        {
          std::lock_guard<std::mutex> lock(mu);
          if (st.nodes >= cfg.node_limit || elapsed_ms() >= cfg.time_limit_ms) {
            st.limit_hit = true;
            stop = true;
          } else if (incumbent_obj != kNoIncumbent &&
                     gap_of(incumbent_obj, std::min(global_bound(), node_bound)) <= cfg.gap) {
            stop = true;
          }
          if (stop) {
            cv.notify_all();
            break;
          }
        }
      }

      {
        std::lock_guard<std::mutex> lock(mu);
        active_bounds.erase(active_bounds.find(active_val));
        if (incumbent_obj != kNoIncumbent && gap_of(incumbent_obj, global_bound()) <= cfg.gap)
          stop = true;
        cv.notify_all();
      }
      if (stop) return;
    }
  };

  if (cfg.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(cfg.workers));
    for (int t = 0; t < cfg.workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::lock_guard<std::mutex> lock(mu);
  st.wall_ms = elapsed_ms();
  if (failure.empty() && incumbent_obj != kNoIncumbent) {
    const int64_t gb = global_bound();
    Solution sol = make_solution(model, incumbent_x, incumbent_counts);
    sol.bound_pdmin = static_cast<double>(gb);
    sol.gap = std::max(0.0, gap_of(incumbent_obj, gb));
    st.final_bound = sol.bound_pdmin;
    if (stats) *stats = st;
    return sol;
  }
  if (stats) *stats = st;  // the counters are honest even when we throw
  if (!failure.empty()) throw std::runtime_error(failure);
  if (st.limit_hit)
    throw std::runtime_error("solve: limit hit before any feasible assignment was found");
  throw std::runtime_error("solve: the model is infeasible");
}

Solution solve_exhaustive(const IPModel& model) {
  const size_t K = model.commodity_x.size();
  double combos = 1.0;
  for (const auto& cols : model.commodity_x) combos *= static_cast<double>(cols.size());
  if (combos > 1e6)
    throw std::runtime_error("exhaustive solve: assignment space exceeds the 1e6 bound");

  const int64_t q = model.container_parcels;
  std::vector<int> pick(K, -1);
  std::vector<int64_t> flow(model.y.size(), 0);
  std::vector<int> best_pick;
  int64_t best_obj = kNoIncumbent;

  // Exact load checks against the faithful rows at each leaf.
  auto leaf_feasible = [&]() {
    std::vector<int64_t> counts(model.y.size(), 0);
    for (size_t j = 0; j < flow.size(); ++j)
      if (flow[j] > 0) counts[j] = ceil_div(flow[j], q);
    for (size_t r = 0; r < model.rows.size(); ++r) {
      const auto& info = model.rows[r];
      int64_t lhs = 0;
      switch (info.kind) {
        case IPModel::RowKind::SortCap:
          for (size_t c = 0; c < K; ++c) {
            const auto& v = model.x[static_cast<size_t>(pick[c])];
            if (std::count(v.sort_hubs.begin(), v.sort_hubs.end(), info.subject))
              lhs += v.quantity;
          }
          break;
        case IPModel::RowKind::CrossdockCap:
          for (size_t j = 0; j < model.y.size(); ++j)
            if (counts[j] && std::count(model.y[j].xdock_hubs.begin(),
                                        model.y[j].xdock_hubs.end(), info.subject))
              lhs += counts[j];
          break;
        case IPModel::RowKind::VehicleCap:
          for (size_t j = 0; j < model.y.size(); ++j)
            if (counts[j] && std::count(model.y[j].physical_arcs.begin(),
                                        model.y[j].physical_arcs.end(), info.subject))
              lhs += counts[j];
          break;
        default:
          continue;
      }
      if (lhs > std::llround(model.lp.rows[r].rhs)) return false;
    }
    return true;
  };

  std::function<void(size_t, int64_t)> go = [&](size_t c, int64_t obj) {
    if (best_obj != kNoIncumbent && obj >= best_obj) return;  // costs only grow
    if (c == K) {
      if (leaf_feasible()) {
        best_obj = obj;
        best_pick.assign(pick.begin(), pick.end());
      }
      return;
    }
    for (int i : model.commodity_x[c]) {
      const auto& v = model.x[static_cast<size_t>(i)];
      pick[c] = i;
      for (int j : v.container_arcs) flow[static_cast<size_t>(j)] += v.quantity;
      go(c + 1, obj + v.cost_pdmin);
      for (int j : v.container_arcs) flow[static_cast<size_t>(j)] -= v.quantity;
      pick[c] = -1;
    }
  };
  go(0, 0);

  if (best_obj == kNoIncumbent)
    throw std::runtime_error("exhaustive solve: no capacity-feasible assignment exists");
  std::vector<int64_t> xi(model.x.size(), 0);
  std::vector<int64_t> flows(model.y.size(), 0);
  for (size_t c = 0; c < K; ++c) {
    xi[static_cast<size_t>(best_pick[c])] = 1;
    const auto& v = model.x[static_cast<size_t>(best_pick[c])];
    for (int j : v.container_arcs) flows[static_cast<size_t>(j)] += v.quantity;
  }
  std::vector<int64_t> counts(model.y.size(), 0);
  for (size_t j = 0; j < flows.size(); ++j)
    if (flows[j] > 0) counts[j] = ceil_div(flows[j], q);
  Solution sol = make_solution(model, xi, counts);
  sol.bound_pdmin = static_cast<double>(sol.objective_pdmin);
  sol.gap = 0.0;
  return sol;
}

}  // namespace conroute
