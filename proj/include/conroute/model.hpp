#ifndef CONROUTE_MODEL_HPP
#define CONROUTE_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "conroute/capacity.hpp"
#include "conroute/demand.hpp"
#include "conroute/lp.hpp"
#include "conroute/network.hpp"
#include "conroute/pathgen.hpp"

namespace conroute {

// Joint routing-and-consolidation integer program.  Columns: one binary
// route-choice variable per commodity x containerized path, then one integer
// container-count variable per container arc.  `lp` is the faithful
// continuous relaxation (x in [0,1], y >= 0); the metadata alongside it keeps
// every cost and constraint reproducible in exact integer arithmetic.
struct IPModel {
  enum class RowKind : char {
    CrossdockCap,   // containers crossdocking at a hub per hour
    SortCap,        // parcels sorted at a hub per hour
    ContainerLink,  // parcels on a container arc fit the containers counted
    VehicleCap,     // containers on a physical arc fit the scheduled vehicles
    Assignment      // each commodity ships on exactly one path
  };
  struct RowInfo {
    RowKind kind;
    int subject;  // hub node / hub node / y index / physical arc / commodity
  };
  struct PathVar {
    int commodity = 0;  // index into the commodity list
    int path = 0;       // index into paths[commodity]
    int64_t quantity = 0;
    TransitBreakdown transit;
    int64_t cost_pdmin = 0;           // quantity x total transit, parcel-deciminutes
    std::vector<int> container_arcs;  // y indices, in path order
    std::vector<int> sort_hubs;
    std::vector<int> xdock_hubs;
    std::vector<int> arcs;  // physical arcs
  };
  struct ContainerVar {
    std::string id;
    int registry_index = 0;
    std::vector<int> xdock_hubs;     // hubs strictly inside the arc
    std::vector<int> physical_arcs;  // contiguous chain
  };

  LinearProgram lp;
  std::vector<PathVar> x;
  std::vector<ContainerVar> y;
  std::vector<RowInfo> rows;                 // aligned with lp.rows
  std::vector<std::vector<int>> commodity_x;  // per commodity: its x columns
  std::vector<std::string> commodity_ids;
  std::vector<int64_t> commodity_quantity;
  int64_t container_parcels = 0;  // q
  int64_t vehicle_containers(const Network& net, int arc) const;  // Q for one arc

  int x_col(int i) const { return i; }
  int y_col(int j) const { return static_cast<int>(x.size()) + j; }
};

// A (candidate) answer to the IP.  `x` and `y` are the raw assignment so that
// infeasible or fractional candidates can be expressed and validated; for
// integral solutions `chosen` holds the picked x column per commodity.
struct Solution {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<int> chosen;          // -1 when not uniquely determined
  int64_t objective_pdmin = 0;      // sum of q_k x transit, parcel-deciminutes
  TransitBreakdown totals;          // flow-weighted decomposition, parcel-deciminutes
  double bound_pdmin = 0.0;         // best proven lower bound
  double gap = 0.0;                 // (objective - bound) / objective
};

// Assembles the joint program: minimize total weighted transit subject to crossdock
// capacity, sort capacity, container counting, vehicle capacity and
// one-path-per-commodity rows.  Vehicle capacity in containers is derived per
// arc as floor(vehicle parcels / q).  Throws when a commodity has no path or
// the path set disagrees with q.
IPModel build_ip(const Network& net, const CapacityPlan& plan, const std::vector<Commodity>& ks,
                 const PathSet& set, int64_t container_parcels);

// Same model restricted to fully sorted variants: consolidation disabled,
// every intermediate hub sorts, crossdock rows become vacuous.
IPModel build_baseline_ip(const Network& net, const CapacityPlan& plan,
                          const std::vector<Commodity>& ks, const PathSet& set,
                          int64_t container_parcels);

struct Violation {
  IPModel::RowKind kind;
  int subject;
  std::string detail;
};

struct ViolationReport {
  std::vector<Violation> items;
  bool ok() const { return items.empty(); }
  std::string to_string() const;
};

// Re-checks a candidate against the model in exact integer arithmetic:
// integrality, one path per commodity, every capacity row, and the objective
// recomputed from path metadata.  Violations are data, not errors.
ViolationReport validate(const IPModel& model, const Solution& sol);

// Plain-text LP-format export (minimize; rows; bounds; integrality markers)
// for cross-checking against external tools.
std::string to_lp_format(const IPModel& model);

}  // namespace conroute

#endif
