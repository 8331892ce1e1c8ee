#ifndef CONROUTE_CAPACITY_HPP
#define CONROUTE_CAPACITY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "conroute/demand.hpp"
#include "conroute/lp.hpp"
#include "conroute/network.hpp"

namespace conroute {

// Tuning knobs for the capacity-planning flow outline.
struct PlannerParams {
  double gamma = 0.5;          // per-arc split threshold as a fraction of q_k
  double rho = 1.3;            // capacity headroom over projected flow
  double delta = 4.0;          // crossdock-to-sort capacity ratio
  double big_m_factor = 1e6;   // penalty = factor * max transport minutes
  int container_size_parcels = 40;  // q
  // Draft hub sort limits (parcels/hour) that steer the outline: AH, LH, GH, RH.
  std::array<double, 4> initial_sort_limit{500.0, 2000.0, 6000.0, 6000.0};

  double initial_limit_for(NodeKind k) const;
  // Throws std::runtime_error unless 0 < gamma < 1, rho > 1, delta > 0,
  // big_m_factor >= 1e6, and 1 <= q <= the smallest vehicle capacity (so a
  // container always fits in one vehicle).
  void validate() const;
};

// Penalty coefficient: big_m_factor times the largest transport time.
double big_m(const Network& net, const PlannerParams& params);

// Deciminutes of expected wait for d departures/hour: round(60/(2d) * 10).
int64_t wait_dmin_for(int64_t departures_per_hour);

// Planned capacities: hub entries are indexed by node, arc entries by arc.
struct CapacityPlan {
  struct HubCapacity {
    int64_t sort_parcels_per_hour = 0;       // l^S
    int64_t crossdock_containers_per_hour = 0;  // l^X
  };
  struct ArcService {
    int64_t departures_per_hour = 0;  // d_a
    int64_t wait_dmin = 0;            // c^W in deciminutes, 0 when pruned
  };
  std::vector<HubCapacity> hubs;
  std::vector<ArcService> arcs;

  bool hub_pruned(int node) const { return hubs[static_cast<size_t>(node)].sort_parcels_per_hour == 0; }
  bool arc_pruned(int arc) const { return arcs[static_cast<size_t>(arc)].departures_per_hour == 0; }
  double wait_min(int arc) const { return static_cast<double>(arcs[static_cast<size_t>(arc)].wait_dmin) / 10.0; }

  // Structural checks: sizes match the network, values nonnegative, zones
  // carry no hub capacity, and wait times follow from departure counts.
  void validate(const Network& net) const;
};

// Flow-outline LP (continuous): route every commodity, penalizing per-arc
// flow beyond gamma*q_k and hub inflow beyond the draft sort limits.
struct McmcnfLp {
  LinearProgram lp;
  int num_arcs = 0;
  int num_commodities = 0;
  std::vector<int> hub_nodes;  // node index per overflow column, ordered
  double penalty = 0.0;

  int x_var(int k, int a) const { return k * 2 * num_arcs + a; }
  int u_var(int k, int a) const { return k * 2 * num_arcs + num_arcs + a; }
  int v_var(int hub_pos) const {
    return 2 * num_arcs * num_commodities + hub_pos;
  }
};

// Builds the full LP; intended for modest instances and for cross-checking
// the scalable solver.  Throws when a commodity's endpoints are disconnected.
McmcnfLp build_mcmcnf(const Network& net, const std::vector<Commodity>& commodities,
                      const PlannerParams& params);

// Aggregate view of an outline solution: everything capacity derivation needs.
struct FlowOutline {
  std::vector<double> arc_flow;    // per physical arc, summed over commodities
  std::vector<double> hub_inflow;  // per node, inbound flow (hubs meaningful)
  double objective = 0.0;          // transport + penalty terms
  double lower_bound = 0.0;        // proof bound; equals objective when exact
  int64_t iterations = 0;          // pivots / pricing rounds spent
};

// Aggregates a solved LP back into flows.
FlowOutline outline_from_lp(const McmcnfLp& model, const LpSolution& sol, const Network& net);

// Scalable exact solve: per-commodity min-cost flows, then price-coordinated
// column generation over the hub-throughput rows when draft limits overload.
// Matches the LP optimum; throws on disconnected commodities or stalling.
FlowOutline solve_mcmcnf(const Network& net, const std::vector<Commodity>& commodities,
                         const PlannerParams& params);

// Capacity derivation from projected flows: per hub, sort = ceil(rho * inbound),
// crossdock = ceil(delta * sort / q); per arc, departures = ceil(rho * flow /
// vehicle parcels) and the implied wait.  Zero-flow elements stay pruned.
CapacityPlan derive_capacities(const FlowOutline& outline, const Network& net,
                               const PlannerParams& params);

}  // namespace conroute

#endif
