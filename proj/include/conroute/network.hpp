#ifndef CONROUTE_NETWORK_HPP
#define CONROUTE_NETWORK_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace conroute {

struct Point {
  double x = 0.0;  // km
  double y = 0.0;  // km
};

// City-to-hub distances are rectilinear (street grid).
double rectilinear_distance(const Point& a, const Point& b);

enum class NodeKind : uint8_t { Zone, AccessHub, LocalHub, GatewayHub, RegionalHub };

const char* to_string(NodeKind k);
bool is_hub(NodeKind k);

// Symmetric tail/head class of a physical arc; determines speed bands and
// vehicle size.  Only the pairs listed here may appear in a generated network.
enum class ArcClass : uint8_t {
  UzAh, UzLh, UzGh, UzRh,
  AhAh, AhLh, AhGh, AhRh,
  LhLh, LhGh, LhRh,
  GhGh, GhRh,
  RhRh,
};

const char* to_string(ArcClass c);
ArcClass arc_class_of(NodeKind a, NodeKind b);

// Speed for the class at the given distance.  Bands are 0-10 km, 10-20 km and
// beyond 20 km; a boundary distance belongs to the lower band (10 km rides at
// the 0-10 speed).
double band_speed_kmh(ArcClass c, double distance_km);

// Vehicle size in parcels for arcs of this class.
int vehicle_capacity_parcels(ArcClass c);

// Transport time in minutes: 60 * distance / speed.  Throws on distance <= 0.
double travel_time_min(ArcClass c, double distance_km);

struct GridSpec {
  int zones_per_side = 16;       // unit zones per city side
  double zone_size_km = 2.0;     // side length of one unit zone
  int zones_per_cell_side = 4;   // unit zones per local-cell side
  int cells_per_area_side = 2;   // local cells per urban-area side
  int embedding_factor = 3;      // embedding square side / city side (odd)

  double city_span_km() const { return zones_per_side * zone_size_km; }
  int cells_per_side() const { return zones_per_side / zones_per_cell_side; }
  int areas_per_side() const { return cells_per_side() / cells_per_area_side; }
  void validate() const;  // throws std::runtime_error on inconsistency
};

// Hub placement style: central hubs per tile (HS) versus hubs on shared tile
// corners (HC1 dense / HC2 sparse access tier).
enum class LinkStructure : uint8_t { HS, HC1, HC2 };
// Which intermediate tiers exist.
enum class HubStructure : uint8_t { Default, NoLH, NoGH };

const char* to_string(LinkStructure s);
const char* to_string(HubStructure s);
LinkStructure link_structure_from_string(const std::string& s);
HubStructure hub_structure_from_string(const std::string& s);

// Per-parcel sort and per-container crossdock handling minutes by hub kind.
struct HubTimeConfig {
  double sort_min[4] = {8.0, 16.0, 24.0, 24.0};  // AH, LH, GH, RH
  double crossdock_ratio = 0.25;                 // crossdock = ratio * sort
  double sort_for(NodeKind k) const;
  double crossdock_for(NodeKind k) const;
  void validate() const;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Zone;
  Point pos;
  double sort_time_min = 0.0;       // c^S, per parcel (hubs only)
  double crossdock_time_min = 0.0;  // c^X, per container (hubs only)
};

struct PhysicalArc {
  std::string id;  // "<tail>-><head>"
  int tail = -1;
  int head = -1;
  ArcClass cls = ArcClass::UzAh;
  double distance_km = 0.0;
  double transport_time_min = 0.0;  // c^T
  int vehicle_capacity_parcels = 0;
};

struct Network {
  GridSpec grid;
  LinkStructure links = LinkStructure::HS;
  HubStructure tiers = HubStructure::Default;
  std::vector<Node> nodes;  // zones first, then hubs, construction order
  std::vector<PhysicalArc> arcs;
  std::vector<std::vector<int>> out_arcs;  // per node
  std::vector<std::vector<int>> in_arcs;   // per node
  int zone_count = 0;

  const Node& node(int i) const { return nodes[static_cast<size_t>(i)]; }
  int node_index(const std::string& id) const;  // throws if unknown
  int count_kind(NodeKind k) const;

  // Quadrant of the city the node center falls in: 0=SW, 1=SE, 2=NW, 3=NE.
  int quadrant_of(int node) const;
};

Network build_network(const GridSpec& grid, LinkStructure links, HubStructure tiers,
                      const HubTimeConfig& times = HubTimeConfig{});

}  // namespace conroute

#endif
