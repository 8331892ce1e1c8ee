#include "conroute/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "conroute/simplex.hpp"

namespace conroute {
namespace {

// Ceiling with a small guard so values that are integral up to accumulated
// float noise (e.g. 650.0000001 or 649.9999999) land on the intended integer.
int64_t ceil_guard(double v) {
  if (v <= 1e-9) return 0;
  return static_cast<int64_t>(std::ceil(v - 1e-6));
}

int min_vehicle_capacity() {
  static const ArcClass kAll[] = {
      ArcClass::UzAh, ArcClass::UzLh, ArcClass::UzGh, ArcClass::UzRh, ArcClass::AhAh,
      ArcClass::AhLh, ArcClass::AhGh, ArcClass::AhRh, ArcClass::LhLh, ArcClass::LhGh,
      ArcClass::LhRh, ArcClass::GhGh, ArcClass::GhRh, ArcClass::RhRh,
  };
  int mn = std::numeric_limits<int>::max();
  for (ArcClass c : kAll) mn = std::min(mn, vehicle_capacity_parcels(c));
  return mn;
}

// Breadth-first reachability check per distinct origin; throws naming the
// first commodity whose destination cannot be reached.
void check_routable(const Network& net, const std::vector<Commodity>& commodities) {
  std::map<int, std::vector<size_t>> by_origin;
  for (size_t i = 0; i < commodities.size(); ++i) by_origin[commodities[i].origin].push_back(i);
  std::vector<char> seen;
  std::vector<int> queue;
  for (const auto& [origin, members] : by_origin) {
    seen.assign(net.nodes.size(), 0);
    queue.clear();
    queue.push_back(origin);
    seen[static_cast<size_t>(origin)] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
      for (int a : net.out_arcs[static_cast<size_t>(queue[head])]) {
        int to = net.arcs[static_cast<size_t>(a)].head;
        if (!seen[static_cast<size_t>(to)]) {
          seen[static_cast<size_t>(to)] = 1;
          queue.push_back(to);
        }
      }
    }
    for (size_t idx : members) {
      const Commodity& k = commodities[idx];
      if (!seen[static_cast<size_t>(k.destination)]) {
        std::ostringstream os;
        os << "capacity outline: commodity " << k.id << " has no route from "
           << net.node(k.origin).id << " to " << net.node(k.destination).id;
        throw std::runtime_error(os.str());
      }
    }
  }
}

std::vector<int> hub_node_list(const Network& net) {
  std::vector<int> hubs;
  for (size_t n = 0; n < net.nodes.size(); ++n)
    if (is_hub(net.nodes[n].kind)) hubs.push_back(static_cast<int>(n));
  return hubs;
}

// ---------------------------------------------------------------------------
// Per-commodity pricing block: a min-cost flow of q_k units where every
// physical arc is split into a cheap segment of size gamma*q_k and a
// penalized remainder, plus an optional per-head-node surcharge.  Solved by
// successive shortest augmenting paths with node potentials.
// ---------------------------------------------------------------------------

struct BlockFlow {
  std::vector<std::pair<int, double>> arc_flow;  // (arc, parcels/hour), ascending
  double true_cost = 0.0;    // transport plus penalty on over-threshold flow
  double priced_cost = 0.0;  // true_cost plus surcharge on hub inflow
};

class BlockSolver {
 public:
  BlockSolver(const Network& net, double penalty, double gamma)
      : net_(net), penalty_(penalty), gamma_(gamma) {
    int n = static_cast<int>(net.nodes.size());
    adj_.resize(static_cast<size_t>(n));
    edges_.reserve(net.arcs.size() * 4);
    for (size_t a = 0; a < net.arcs.size(); ++a) {
      const PhysicalArc& arc = net.arcs[a];
      for (int seg = 0; seg < 2; ++seg) {
        int fwd = static_cast<int>(edges_.size());
        edges_.push_back({arc.head, 0.0, 0.0, 0.0});
        edges_.push_back({arc.tail, 0.0, 0.0, 0.0});
        adj_[static_cast<size_t>(arc.tail)].push_back(fwd);
        adj_[static_cast<size_t>(arc.head)].push_back(fwd + 1);
      }
    }
    dist_.resize(static_cast<size_t>(n));
    pot_.resize(static_cast<size_t>(n));
    parent_.resize(static_cast<size_t>(n));
  }

  // surcharge is indexed by node; entries for non-hub nodes must be zero.
  BlockFlow solve(const Commodity& k, const std::vector<double>& surcharge) {
    BlockFlow out;
    if (k.origin == k.destination || k.quantity == 0) return out;
    const double q = static_cast<double>(k.quantity);
    const double cheap_cap = gamma_ * q;
    for (size_t a = 0; a < net_.arcs.size(); ++a) {
      const PhysicalArc& arc = net_.arcs[a];
      double base = arc.transport_time_min + surcharge[static_cast<size_t>(arc.head)];
      Edge& f0 = edges_[a * 4];
      Edge& f1 = edges_[a * 4 + 2];
      f0.cap = cheap_cap;
      f0.cost = base;
      f1.cap = q - cheap_cap;
      f1.cost = base + penalty_;
      f0.flow = f1.flow = 0.0;
      edges_[a * 4 + 1] = {arc.tail, 0.0, -f0.cost, 0.0};
      edges_[a * 4 + 3] = {arc.tail, 0.0, -f1.cost, 0.0};
    }
    std::fill(pot_.begin(), pot_.end(), 0.0);

    double remaining = q;
    const double kInf = std::numeric_limits<double>::infinity();
    while (remaining > 1e-9) {
      // Dijkstra on reduced costs from the origin until the target settles.
      std::fill(dist_.begin(), dist_.end(), kInf);
      std::fill(parent_.begin(), parent_.end(), -1);
      dist_[static_cast<size_t>(k.origin)] = 0.0;
      std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                          std::greater<>>
          pq;
      pq.push({0.0, k.origin});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist_[static_cast<size_t>(u)] + 1e-15) continue;
        if (u == k.destination) break;
        for (int e : adj_[static_cast<size_t>(u)]) {
          const Edge& ed = edges_[static_cast<size_t>(e)];
          if (ed.cap - ed.flow <= 1e-9) continue;
          double rc = ed.cost + pot_[static_cast<size_t>(u)] - pot_[static_cast<size_t>(ed.to)];
          double nd = d + std::max(rc, 0.0);
          if (nd < dist_[static_cast<size_t>(ed.to)]) {
            dist_[static_cast<size_t>(ed.to)] = nd;
            parent_[static_cast<size_t>(ed.to)] = e;
            pq.push({nd, ed.to});
          }
        }
      }
      double reach = dist_[static_cast<size_t>(k.destination)];
      if (!(reach < kInf)) {
        std::ostringstream os;
        os << "capacity outline: commodity " << k.id << " has no route from "
           << net_.node(k.origin).id << " to " << net_.node(k.destination).id;
        throw std::runtime_error(os.str());
      }
      for (size_t n = 0; n < pot_.size(); ++n) pot_[n] += std::min(dist_[n], reach);
      // Bottleneck along the parent chain, capped by the remaining demand.
      double step = remaining;
      for (int v = k.destination; v != k.origin;) {
        const Edge& ed = edges_[static_cast<size_t>(parent_[static_cast<size_t>(v)])];
        step = std::min(step, ed.cap - ed.flow);
        v = edges_[static_cast<size_t>(parent_[static_cast<size_t>(v)] ^ 1)].to;
      }
      for (int v = k.destination; v != k.origin;) {
        int e = parent_[static_cast<size_t>(v)];
        edges_[static_cast<size_t>(e)].flow += step;
        edges_[static_cast<size_t>(e ^ 1)].flow -= step;
        v = edges_[static_cast<size_t>(e ^ 1)].to;
      }
      remaining -= step;
      ++augmentations_;
    }

    for (size_t a = 0; a < net_.arcs.size(); ++a) {
      double f0 = edges_[a * 4].flow;
      double f1 = edges_[a * 4 + 2].flow;
      double x = f0 + f1;
      if (x <= 1e-9) continue;
      const PhysicalArc& arc = net_.arcs[a];
      out.arc_flow.push_back({static_cast<int>(a), x});
      out.true_cost += arc.transport_time_min * x + penalty_ * f1;
      out.priced_cost += surcharge[static_cast<size_t>(arc.head)] * x;
    }
    out.priced_cost += out.true_cost;
    return out;
  }

  int64_t augmentations() const { return augmentations_; }

 private:
  struct Edge {
    int to = 0;
    double cap = 0.0;
    double cost = 0.0;
    double flow = 0.0;
  };
  const Network& net_;
  double penalty_;
  double gamma_;
  std::vector<Edge> edges_;  // arc a: [4a]=seg0 fwd, [4a+1]=seg0 bwd, [4a+2], [4a+3]
  std::vector<std::vector<int>> adj_;
  std::vector<double> dist_, pot_;
  std::vector<int> parent_;
  int64_t augmentations_ = 0;
};

}  // namespace

double PlannerParams::initial_limit_for(NodeKind k) const {
  switch (k) {
    case NodeKind::AccessHub: return initial_sort_limit[0];
    case NodeKind::LocalHub: return initial_sort_limit[1];
    case NodeKind::GatewayHub: return initial_sort_limit[2];
    case NodeKind::RegionalHub: return initial_sort_limit[3];
    default: throw std::runtime_error("initial sort limit requested for a non-hub node");
  }
}

void PlannerParams::validate() const {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::runtime_error("planner params: gamma must lie strictly between 0 and 1");
  if (!(rho > 1.0)) throw std::runtime_error("planner params: rho must exceed 1");
  if (!(delta > 0.0)) throw std::runtime_error("planner params: delta must be positive");
  if (!(big_m_factor >= 1e6))
    throw std::runtime_error("planner params: penalty factor must be at least 1e6");
  if (container_size_parcels < 1)
    throw std::runtime_error("planner params: container size must be at least 1 parcel");
  if (container_size_parcels > min_vehicle_capacity()) {
    std::ostringstream os;
    os << "planner params: container size " << container_size_parcels
       << " does not fit in the smallest vehicle (" << min_vehicle_capacity() << " parcels)";
    throw std::runtime_error(os.str());
  }
  for (double lim : initial_sort_limit)
    if (lim < 0.0) throw std::runtime_error("planner params: initial sort limits must be >= 0");
}

double big_m(const Network& net, const PlannerParams& params) {
  double worst = 1.0;
  for (const PhysicalArc& a : net.arcs) worst = std::max(worst, a.transport_time_min);
  return params.big_m_factor * worst;
}

int64_t wait_dmin_for(int64_t departures_per_hour) {
  if (departures_per_hour <= 0)
    throw std::runtime_error("wait time undefined for zero departures");
  return static_cast<int64_t>(std::llround(300.0 / static_cast<double>(departures_per_hour)));
}

void CapacityPlan::validate(const Network& net) const {
  if (hubs.size() != net.nodes.size() || arcs.size() != net.arcs.size())
    throw std::runtime_error("capacity plan: size mismatch with network");
  for (size_t n = 0; n < hubs.size(); ++n) {
    const HubCapacity& h = hubs[n];
    if (h.sort_parcels_per_hour < 0 || h.crossdock_containers_per_hour < 0)
      throw std::runtime_error("capacity plan: negative hub capacity");
    if (!is_hub(net.nodes[n].kind) &&
        (h.sort_parcels_per_hour != 0 || h.crossdock_containers_per_hour != 0))
      throw std::runtime_error("capacity plan: zone carries hub capacity");
    if ((h.sort_parcels_per_hour == 0) != (h.crossdock_containers_per_hour == 0))
      throw std::runtime_error("capacity plan: sort and crossdock capacity must prune together");
  }
  for (size_t a = 0; a < arcs.size(); ++a) {
    const ArcService& s = arcs[a];
    if (s.departures_per_hour < 0) throw std::runtime_error("capacity plan: negative departures");
    int64_t want = s.departures_per_hour > 0 ? wait_dmin_for(s.departures_per_hour) : 0;
    if (s.wait_dmin != want)
      throw std::runtime_error("capacity plan: wait time inconsistent with departures");
  }
}

McmcnfLp build_mcmcnf(const Network& net, const std::vector<Commodity>& commodities,
                      const PlannerParams& params) {
  params.validate();
  check_routable(net, commodities);
  McmcnfLp model;
  model.num_arcs = static_cast<int>(net.arcs.size());
  model.num_commodities = static_cast<int>(commodities.size());
  model.hub_nodes = hub_node_list(net);
  model.penalty = big_m(net, params);

  const int A = model.num_arcs;
  LinearProgram& lp = model.lp;
  lp.cols.reserve(static_cast<size_t>(2 * A) * commodities.size() + model.hub_nodes.size());
  for (const Commodity& k : commodities) {
    double q = static_cast<double>(k.quantity);
    for (int a = 0; a < A; ++a)
      lp.add_col(0.0, q, net.arcs[static_cast<size_t>(a)].transport_time_min);
    for (int a = 0; a < A; ++a) lp.add_col(0.0, kInfinity, model.penalty);
  }
  for (size_t h = 0; h < model.hub_nodes.size(); ++h) lp.add_col(0.0, kInfinity, model.penalty);

  // Flow conservation per commodity and node.
  for (int k = 0; k < model.num_commodities; ++k) {
    const Commodity& com = commodities[static_cast<size_t>(k)];
    for (size_t n = 0; n < net.nodes.size(); ++n) {
      std::vector<std::pair<int, double>> coeffs;
      coeffs.reserve(net.out_arcs[n].size() + net.in_arcs[n].size());
      for (int a : net.out_arcs[n]) coeffs.push_back({model.x_var(k, a), 1.0});
      for (int a : net.in_arcs[n]) coeffs.push_back({model.x_var(k, a), -1.0});
      double rhs = 0.0;
      if (static_cast<int>(n) == com.origin) rhs += static_cast<double>(com.quantity);
      if (static_cast<int>(n) == com.destination) rhs -= static_cast<double>(com.quantity);
      lp.add_row(std::move(coeffs), LinearProgram::Sense::Eq, rhs);
    }
  }
  // Per-arc split threshold with penalized overflow.
  for (int k = 0; k < model.num_commodities; ++k) {
    double thresh = params.gamma * static_cast<double>(commodities[static_cast<size_t>(k)].quantity);
    for (int a = 0; a < A; ++a)
      lp.add_row({{model.x_var(k, a), 1.0}, {model.u_var(k, a), -1.0}},
                 LinearProgram::Sense::Le, thresh);
  }
  // Hub inbound throughput against the draft limits, with penalized overflow.
  for (size_t h = 0; h < model.hub_nodes.size(); ++h) {
    int n = model.hub_nodes[h];
    std::vector<std::pair<int, double>> coeffs;
    for (int k = 0; k < model.num_commodities; ++k)
      for (int a : net.in_arcs[static_cast<size_t>(n)]) coeffs.push_back({model.x_var(k, a), 1.0});
    coeffs.push_back({model.v_var(static_cast<int>(h)), -1.0});
    lp.add_row(std::move(coeffs), LinearProgram::Sense::Le,
               params.initial_limit_for(net.nodes[static_cast<size_t>(n)].kind));
  }
  return model;
}

namespace {

void accumulate_inflow(const Network& net, const std::vector<double>& arc_flow,
                       std::vector<double>& inflow) {
  inflow.assign(net.nodes.size(), 0.0);
  for (size_t n = 0; n < net.nodes.size(); ++n)
    for (int a : net.in_arcs[n]) inflow[n] += arc_flow[static_cast<size_t>(a)];
}

}  // namespace

FlowOutline outline_from_lp(const McmcnfLp& model, const LpSolution& sol, const Network& net) {
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("flow outline: LP did not reach an optimum");
  FlowOutline out;
  out.arc_flow.assign(static_cast<size_t>(model.num_arcs), 0.0);
  for (int k = 0; k < model.num_commodities; ++k)
    for (int a = 0; a < model.num_arcs; ++a)
      out.arc_flow[static_cast<size_t>(a)] += sol.x[static_cast<size_t>(model.x_var(k, a))];
  accumulate_inflow(net, out.arc_flow, out.hub_inflow);
  out.objective = sol.objective;
  out.lower_bound = sol.objective;
  out.iterations = sol.iterations;
  return out;
}

FlowOutline solve_mcmcnf(const Network& net, const std::vector<Commodity>& commodities,
                         const PlannerParams& params) {
  params.validate();
  check_routable(net, commodities);
  FlowOutline out;
  out.arc_flow.assign(net.arcs.size(), 0.0);
  out.hub_inflow.assign(net.nodes.size(), 0.0);
  if (commodities.empty()) return out;

  const double penalty = big_m(net, params);
  const std::vector<int> hub_nodes = hub_node_list(net);
  const int H = static_cast<int>(hub_nodes.size());
  const int K = static_cast<int>(commodities.size());
  BlockSolver blocks(net, penalty, params.gamma);

  std::vector<double> surcharge(net.nodes.size(), 0.0);
  std::vector<BlockFlow> best(commodities.size());
  for (int k = 0; k < K; ++k)
    best[static_cast<size_t>(k)] = blocks.solve(commodities[static_cast<size_t>(k)], surcharge);

  auto limit_of = [&](int h) {
    return params.initial_limit_for(net.nodes[static_cast<size_t>(hub_nodes[static_cast<size_t>(h)])].kind);
  };

  // Aggregate the uncoupled optimum; if no draft limit overflows it is the
  // exact optimum of the full outline (the throughput rows are slack).
  for (int k = 0; k < K; ++k)
    for (auto [a, f] : best[static_cast<size_t>(k)].arc_flow) out.arc_flow[static_cast<size_t>(a)] += f;
  accumulate_inflow(net, out.arc_flow, out.hub_inflow);
  bool overloaded = false;
  for (int h = 0; h < H && !overloaded; ++h)
    overloaded = out.hub_inflow[static_cast<size_t>(hub_nodes[static_cast<size_t>(h)])] >
                 limit_of(h) + 1e-6;
  if (!overloaded) {
    for (const BlockFlow& bf : best) out.objective += bf.true_cost;
    out.lower_bound = out.objective;
    out.iterations = blocks.augmentations();
    return out;
  }

  // Draft limits overload: coordinate the blocks through the throughput rows
  // by column generation on a small shared master.
  struct MasterColumn {
    int commodity = 0;
    std::vector<std::pair<int, double>> arc_flow;
  };
  LinearProgram master;
  std::vector<MasterColumn> cols;  // structural columns after the overflow block
  for (int h = 0; h < H; ++h) master.add_col(0.0, kInfinity, penalty);  // overflow v_h
  for (int h = 0; h < H; ++h)
    master.add_row({{h, -1.0}}, LinearProgram::Sense::Le, limit_of(h));
  for (int k = 0; k < K; ++k) master.add_row({}, LinearProgram::Sense::Eq, 1.0);

  std::vector<int> hub_pos(net.nodes.size(), -1);
  for (int h = 0; h < H; ++h) hub_pos[static_cast<size_t>(hub_nodes[static_cast<size_t>(h)])] = h;

  auto add_column = [&](int k, const BlockFlow& bf) {
    int col = master.add_col(0.0, 1.0, bf.true_cost);
    std::map<int, double> inflow;
    for (auto [a, f] : bf.arc_flow) {
      int head = net.arcs[static_cast<size_t>(a)].head;
      if (hub_pos[static_cast<size_t>(head)] >= 0) inflow[hub_pos[static_cast<size_t>(head)]] += f;
    }
    for (auto [h, f] : inflow) master.rows[static_cast<size_t>(h)].coeffs.push_back({col, f});
    master.rows[static_cast<size_t>(H + k)].coeffs.push_back({col, 1.0});
    cols.push_back({k, bf.arc_flow});
    return col;
  };
  std::vector<int> first_col(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) first_col[static_cast<size_t>(k)] = add_column(k, best[static_cast<size_t>(k)]);

  // Warm basis: each commodity's first column plus every throughput slack.
  auto initial_warm = [&]() {
    std::vector<VStat> w(master.cols.size() + master.rows.size(), VStat::NbLower);
    for (int k = 0; k < K; ++k) w[static_cast<size_t>(first_col[static_cast<size_t>(k)])] = VStat::Basic;
    for (int h = 0; h < H; ++h) w[master.cols.size() + static_cast<size_t>(h)] = VStat::Basic;
    return w;
  };

  SimplexOptions mopt;
  constexpr int kMaxRounds = 600;
  double best_lb = -kInfinity;
  std::vector<VStat> warm = initial_warm();
  SimplexResult mres;
  int64_t pricing_iters = 0;
  bool proven = false;
  for (int round = 0; round < kMaxRounds && !proven; ++round) {
    mres = simplex_solve(master, mopt, &warm);
    if (mres.status != LpStatus::Optimal)
      throw std::runtime_error("capacity outline: coordination master failed to solve");
    pricing_iters += mres.iterations;

    for (size_t n = 0; n < surcharge.size(); ++n) surcharge[n] = 0.0;
    for (int h = 0; h < H; ++h)
      surcharge[static_cast<size_t>(hub_nodes[static_cast<size_t>(h)])] =
          std::max(0.0, -mres.row_duals[static_cast<size_t>(h)]);

    double lb = 0.0;
    for (int h = 0; h < H; ++h)
      lb -= surcharge[static_cast<size_t>(hub_nodes[static_cast<size_t>(h)])] * limit_of(h);
    bool improved = false;
    std::vector<std::pair<int, BlockFlow>> fresh;
    for (int k = 0; k < K; ++k) {
      BlockFlow bf = blocks.solve(commodities[static_cast<size_t>(k)], surcharge);
      lb += bf.priced_cost;
      double convexity_dual = mres.row_duals[static_cast<size_t>(H + k)];
      if (bf.priced_cost < convexity_dual - 1e-7 * (1.0 + std::abs(convexity_dual))) {
        fresh.push_back({k, std::move(bf)});
        improved = true;
      }
    }
    best_lb = std::max(best_lb, lb);

    if (!improved) {
      best_lb = std::max(best_lb, mres.objective);
      proven = true;
      break;
    }
    if (mres.objective - best_lb <= 1e-9 * std::max(1.0, std::abs(mres.objective))) {
      proven = true;
      break;
    }
    // Extend the master and the warm basis with the new columns.
    size_t old_cols = master.cols.size();
    for (auto& [k, bf] : fresh) add_column(k, bf);
    std::vector<VStat> next(master.cols.size() + master.rows.size(), VStat::NbLower);
    for (size_t j = 0; j < old_cols; ++j) next[j] = mres.vstat[j];
    for (size_t i = 0; i < master.rows.size(); ++i)
      next[master.cols.size() + i] = mres.vstat[old_cols + i];
    warm = std::move(next);
  }
  if (!proven)
    throw std::runtime_error("capacity outline: price coordination did not converge");

  // Recover per-commodity flows from the master weights and re-derive the
  // exact objective from them.
  std::vector<std::map<int, double>> flow_of(commodities.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    double w = mres.x[static_cast<size_t>(H) + c];
    if (w <= 1e-12) continue;
    auto& acc = flow_of[static_cast<size_t>(cols[c].commodity)];
    for (auto [a, f] : cols[c].arc_flow) acc[a] += w * f;
  }
  std::fill(out.arc_flow.begin(), out.arc_flow.end(), 0.0);
  double objective = 0.0;
  for (int k = 0; k < K; ++k) {
    double thresh = params.gamma * static_cast<double>(commodities[static_cast<size_t>(k)].quantity);
    for (auto [a, f] : flow_of[static_cast<size_t>(k)]) {
      out.arc_flow[static_cast<size_t>(a)] += f;
      objective += net.arcs[static_cast<size_t>(a)].transport_time_min * f +
                   penalty * std::max(0.0, f - thresh);
    }
  }
  accumulate_inflow(net, out.arc_flow, out.hub_inflow);
  for (int h = 0; h < H; ++h)
    objective += penalty * std::max(0.0, out.hub_inflow[static_cast<size_t>(
                                             hub_nodes[static_cast<size_t>(h)])] -
                                             limit_of(h));
  out.objective = objective;
  out.lower_bound = std::min(best_lb, objective);
  out.iterations = blocks.augmentations() + pricing_iters;
  return out;
}

CapacityPlan derive_capacities(const FlowOutline& outline, const Network& net,
                               const PlannerParams& params) {
  params.validate();
  if (outline.arc_flow.size() != net.arcs.size())
    throw std::runtime_error("capacity derivation: outline does not match network");
  CapacityPlan plan;
  plan.hubs.resize(net.nodes.size());
  plan.arcs.resize(net.arcs.size());

  std::vector<double> inflow = outline.hub_inflow;
  if (inflow.size() != net.nodes.size()) accumulate_inflow(net, outline.arc_flow, inflow);

  for (size_t n = 0; n < net.nodes.size(); ++n) {
    if (!is_hub(net.nodes[n].kind)) continue;
    int64_t sort = ceil_guard(params.rho * inflow[n]);
    plan.hubs[n].sort_parcels_per_hour = sort;
    plan.hubs[n].crossdock_containers_per_hour =
        ceil_guard(params.delta * static_cast<double>(sort) /
                   static_cast<double>(params.container_size_parcels));
  }
  for (size_t a = 0; a < net.arcs.size(); ++a) {
    const PhysicalArc& arc = net.arcs[a];
    int64_t d = ceil_guard(params.rho * outline.arc_flow[a] /
                           static_cast<double>(arc.vehicle_capacity_parcels));
    plan.arcs[a].departures_per_hour = d;
    plan.arcs[a].wait_dmin = d > 0 ? wait_dmin_for(d) : 0;
  }
  return plan;
}

}  // namespace conroute
