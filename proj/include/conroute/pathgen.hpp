#ifndef CONROUTE_PATHGEN_HPP
#define CONROUTE_PATHGEN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conroute/capacity.hpp"
#include "conroute/demand.hpp"
#include "conroute/network.hpp"

namespace conroute {

// Quantizes a minutes value to integer deciminutes.  All path timing below is
// integer-exact so downstream objective comparisons never drift.
int64_t to_dmin(double minutes);

struct PathLimits {
  int max_intermediate = 7;     // intermediate hubs allowed on a physical path
  double max_deviation = 0.05;  // relative excess over the shortest length
  int max_paths = 20;           // physical paths kept per commodity
  int max_xdock_per_arc = 4;    // crossdock terminals inside one container arc
  void validate() const;        // throws std::runtime_error on nonsense
};

// A route through the physical network: origin, intermediate hubs only,
// destination.  Length counts transport plus waiting time.
struct PhysicalPath {
  std::string commodity;
  std::vector<int> nodes;   // node indices; zones appear only at the ends
  std::vector<int> arcs;    // arcs[i] joins nodes[i] -> nodes[i+1]
  int64_t length_dmin = 0;  // transport + wait, deciminutes
  int intermediate_count() const { return static_cast<int>(nodes.size()) - 2; }
};

// A loaded container travels sealed from its tail hub to its head hub; every
// hub strictly between them crossdocks the container instead of sorting its
// parcels.
struct ContainerArc {
  std::string id;                  // hub ids joined with '>'
  std::vector<int> hubs;           // tail, crossdock hubs, head (node indices)
  std::vector<int> physical_arcs;  // contiguous chain from tail to head
  int64_t capacity_parcels = 0;
  int xdock_count() const { return static_cast<int>(hubs.size()) - 2; }
};

// Container arcs are shared across paths and commodities; the registry hands
// out one index per distinct hub sequence (first-encounter order).
struct ContainerArcRegistry {
  std::vector<ContainerArc> arcs;
  std::map<std::vector<int>, int> by_hub_seq;
  int intern(const Network& net, const std::vector<int>& hub_seq,
             const std::vector<int>& physical_arcs, int64_t capacity_parcels);
};

struct TransitBreakdown {
  int64_t transport_dmin = 0;
  int64_t wait_dmin = 0;
  int64_t sort_dmin = 0;
  int64_t crossdock_dmin = 0;
  int64_t total_dmin() const { return transport_dmin + wait_dmin + sort_dmin + crossdock_dmin; }
};

// One way to ship a commodity: a physical path plus the decision, per
// intermediate hub, to sort or crossdock — encoded as an ordered sequence of
// container arcs that partitions the physical arcs exactly.  Endpoints never
// sort.
struct ContainerizedPath {
  std::string commodity;
  std::vector<int> nodes;
  std::vector<int> arcs;
  std::vector<int> container_arcs;  // registry indices, in order
  std::vector<int> sort_hubs;       // intermediate hubs that open the container
  std::vector<int> xdock_hubs;      // intermediate hubs it passes through sealed
  TransitBreakdown transit;
};

// All physical paths for the commodity whose length stays within
// (1 + max_deviation) x the shortest admissible length, using at most
// max_intermediate intermediate hubs, over arcs the plan actually services.
// Sorted by (length, lexicographic node-id sequence), truncated to max_paths;
// the shortest path is always first.  Throws when origin and destination are
// not connected, naming the commodity.
std::vector<PhysicalPath> enumerate_physical_paths(const Network& net, const Commodity& k,
                                                   const CapacityPlan& plan,
                                                   const PathLimits& limits);

// Expands a physical path into every containerized variant whose container
// arcs hold at most max_xdock_per_arc crossdock terminals each.  New container
// arcs are interned into the registry; transit fields are left zeroed (see
// transit_time).  With S legs and max_xdock_per_arc >= S-1 this yields
// 2^(S-1) variants over S(S+1)/2 distinct container arcs.
std::vector<ContainerizedPath> generate_container_paths(const PhysicalPath& p,
                                                        int max_xdock_per_arc,
                                                        int64_t capacity_parcels,
                                                        const Network& net,
                                                        ContainerArcRegistry& registry);

// Door-to-door time: transport + wait on every arc, sorting at sort hubs,
// crossdocking at crossdock hubs.  Throws if the plan prunes an arc on the
// path.
TransitBreakdown transit_time(const ContainerizedPath& cp, const Network& net,
                              const CapacityPlan& plan);

// Keeps the variants meeting the commodity's service promise.  Throws when
// the promise is unassigned or nothing survives, naming the commodity.
std::vector<ContainerizedPath> filter_feasible(std::vector<ContainerizedPath> paths,
                                               const Commodity& k);

// Best achievable door-to-door time: the fully sorted variant of the shortest
// physical path.
int64_t min_doable_dmin(const Network& net, const Commodity& k, const CapacityPlan& plan,
                        const PathLimits& limits);

struct PathSet {
  ContainerArcRegistry registry;
  std::vector<std::vector<ContainerizedPath>> paths;  // aligned with the commodity list
};

// Full pipeline per commodity: enumerate, expand, time, filter.  Promises
// must be assigned beforehand.
PathSet build_path_set(const Network& net, const std::vector<Commodity>& ks,
                       const CapacityPlan& plan, const PathLimits& limits,
                       int64_t container_parcels);

}  // namespace conroute

#endif
