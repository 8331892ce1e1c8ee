#include "conroute/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace conroute {

double rectilinear_distance(const Point& a, const Point& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Zone: return "UnitZone";
    case NodeKind::AccessHub: return "AccessHub";
    case NodeKind::LocalHub: return "LocalHub";
    case NodeKind::GatewayHub: return "GatewayHub";
    case NodeKind::RegionalHub: return "RegionalHub";
  }
  return "?";
}

bool is_hub(NodeKind k) { return k != NodeKind::Zone; }

const char* to_string(ArcClass c) {
  switch (c) {
    case ArcClass::UzAh: return "UZ:AH";
    case ArcClass::UzLh: return "UZ:LH";
    case ArcClass::UzGh: return "UZ:GH";
    case ArcClass::UzRh: return "UZ:RH";
    case ArcClass::AhAh: return "AH:AH";
    case ArcClass::AhLh: return "AH:LH";
    case ArcClass::AhGh: return "AH:GH";
    case ArcClass::AhRh: return "AH:RH";
    case ArcClass::LhLh: return "LH:LH";
    case ArcClass::LhGh: return "LH:GH";
    case ArcClass::LhRh: return "LH:RH";
    case ArcClass::GhGh: return "GH:GH";
    case ArcClass::GhRh: return "GH:RH";
    case ArcClass::RhRh: return "RH:RH";
  }
  return "?";
}

namespace {

int tier_rank(NodeKind k) {
  switch (k) {
    case NodeKind::Zone: return 0;
    case NodeKind::AccessHub: return 1;
    case NodeKind::LocalHub: return 2;
    case NodeKind::GatewayHub: return 3;
    case NodeKind::RegionalHub: return 4;
  }
  return -1;
}

}  // namespace

ArcClass arc_class_of(NodeKind a, NodeKind b) {
  if (tier_rank(a) > tier_rank(b)) std::swap(a, b);
  if (a == NodeKind::Zone) {
    switch (b) {
      case NodeKind::AccessHub: return ArcClass::UzAh;
      case NodeKind::LocalHub: return ArcClass::UzLh;
      case NodeKind::GatewayHub: return ArcClass::UzGh;
      case NodeKind::RegionalHub: return ArcClass::UzRh;
      default: break;
    }
    throw std::runtime_error("arc_class_of: zone-to-zone arcs are not defined");
  }
  if (a == NodeKind::AccessHub) {
    switch (b) {
      case NodeKind::AccessHub: return ArcClass::AhAh;
      case NodeKind::LocalHub: return ArcClass::AhLh;
      case NodeKind::GatewayHub: return ArcClass::AhGh;
      default: return ArcClass::AhRh;
    }
  }
  if (a == NodeKind::LocalHub) {
    switch (b) {
      case NodeKind::LocalHub: return ArcClass::LhLh;
      case NodeKind::GatewayHub: return ArcClass::LhGh;
      default: return ArcClass::LhRh;
    }
  }
  if (a == NodeKind::GatewayHub)
    return b == NodeKind::GatewayHub ? ArcClass::GhGh : ArcClass::GhRh;
  return ArcClass::RhRh;
}

namespace {

// Speeds in km/h for the 0-10 / 10-20 / >20 km bands, and vehicle sizes in
// parcels, by arc class.
struct ClassParams {
  double speed[3];
  int capacity;
};

const ClassParams& class_params(ArcClass c) {
  static const ClassParams uz{{12, 12, 12}, 60};
  static const ClassParams ah{{20, 30, 45}, 300};
  static const ClassParams lh{{30, 40, 55}, 1000};
  static const ClassParams gh{{50, 60, 65}, 3500};
  static const ClassParams rh{{70, 80, 100}, 3500};
  switch (c) {
    case ArcClass::UzAh:
    case ArcClass::UzLh:
    case ArcClass::UzGh:
    case ArcClass::UzRh: return uz;
    case ArcClass::AhAh:
    case ArcClass::AhLh:
    case ArcClass::AhGh:
    case ArcClass::AhRh: return ah;
    case ArcClass::LhLh:
    case ArcClass::LhGh:
    case ArcClass::LhRh: return lh;
    case ArcClass::GhGh:
    case ArcClass::GhRh: return gh;
    case ArcClass::RhRh: return rh;
  }
  throw std::runtime_error("class_params: unknown arc class");
}

}  // namespace

double band_speed_kmh(ArcClass c, double distance_km) {
  if (distance_km <= 0.0) throw std::runtime_error("band_speed_kmh: distance must be positive");
  const ClassParams& p = class_params(c);
  if (distance_km <= 10.0) return p.speed[0];
  if (distance_km <= 20.0) return p.speed[1];
  return p.speed[2];
}

int vehicle_capacity_parcels(ArcClass c) { return class_params(c).capacity; }

double travel_time_min(ArcClass c, double distance_km) {
  return 60.0 * distance_km / band_speed_kmh(c, distance_km);
}

void GridSpec::validate() const {
  if (zones_per_side < 2) throw std::runtime_error("GridSpec: zones_per_side must be >= 2");
  if (zone_size_km <= 0) throw std::runtime_error("GridSpec: zone_size_km must be positive");
  if (zones_per_cell_side < 1 || cells_per_area_side < 1)
    throw std::runtime_error("GridSpec: cell/area subdivisions must be >= 1");
  if (zones_per_side % zones_per_cell_side != 0)
    throw std::runtime_error("GridSpec: zones_per_side must be divisible by zones_per_cell_side");
  if ((zones_per_side / zones_per_cell_side) % cells_per_area_side != 0)
    throw std::runtime_error("GridSpec: cells per side must be divisible by cells_per_area_side");
  if (embedding_factor < 1) throw std::runtime_error("GridSpec: embedding_factor must be >= 1");
}

const char* to_string(LinkStructure s) {
  switch (s) {
    case LinkStructure::HS: return "HS";
    case LinkStructure::HC1: return "HC1";
    case LinkStructure::HC2: return "HC2";
  }
  return "?";
}

const char* to_string(HubStructure s) {
  switch (s) {
    case HubStructure::Default: return "Default";
    case HubStructure::NoLH: return "noLH";
    case HubStructure::NoGH: return "noGH";
  }
  return "?";
}

LinkStructure link_structure_from_string(const std::string& s) {
  if (s == "HS") return LinkStructure::HS;
  if (s == "HC1") return LinkStructure::HC1;
  if (s == "HC2") return LinkStructure::HC2;
  throw std::runtime_error("unknown link structure: " + s);
}

HubStructure hub_structure_from_string(const std::string& s) {
  if (s == "Default") return HubStructure::Default;
  if (s == "noLH" || s == "NoLH") return HubStructure::NoLH;
  if (s == "noGH" || s == "NoGH") return HubStructure::NoGH;
  throw std::runtime_error("unknown hub structure: " + s);
}

double HubTimeConfig::sort_for(NodeKind k) const {
  switch (k) {
    case NodeKind::AccessHub: return sort_min[0];
    case NodeKind::LocalHub: return sort_min[1];
    case NodeKind::GatewayHub: return sort_min[2];
    case NodeKind::RegionalHub: return sort_min[3];
    default: throw std::runtime_error("HubTimeConfig: zones have no sort time");
  }
}

double HubTimeConfig::crossdock_for(NodeKind k) const { return crossdock_ratio * sort_for(k); }

void HubTimeConfig::validate() const {
  for (double v : sort_min)
    if (v <= 0) throw std::runtime_error("HubTimeConfig: sort times must be positive");
  if (crossdock_ratio <= 0 || crossdock_ratio > 1)
    throw std::runtime_error("HubTimeConfig: crossdock_ratio must be in (0,1]");
}

int Network::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  throw std::runtime_error("Network: unknown node id " + id);
}

int Network::count_kind(NodeKind k) const {
  int n = 0;
  for (const Node& nd : nodes)
    if (nd.kind == k) ++n;
  return n;
}

int Network::quadrant_of(int node) const {
  double mid = grid.city_span_km() / 2.0;
  const Point& p = nodes[static_cast<size_t>(node)].pos;
  int q = 0;
  if (p.x >= mid) q += 1;
  if (p.y >= mid) q += 2;
  return q;
}

namespace {

class Builder {
 public:
  Builder(const GridSpec& grid, LinkStructure links, HubStructure tiers,
          const HubTimeConfig& times)
      : times_(times) {
    net_.grid = grid;
    net_.links = links;
    net_.tiers = tiers;
  }

  Network build() {
    const GridSpec& g = net_.grid;
    g.validate();
    times_.validate();
    if (net_.links == LinkStructure::HC2 && g.zones_per_side % 2 != 0)
      throw std::runtime_error("build_network: HC2 requires an even zones_per_side");

    make_zones();
    make_hubs();
    make_links();

    net_.out_arcs.assign(net_.nodes.size(), {});
    net_.in_arcs.assign(net_.nodes.size(), {});
    for (size_t a = 0; a < net_.arcs.size(); ++a) {
      net_.out_arcs[static_cast<size_t>(net_.arcs[a].tail)].push_back(static_cast<int>(a));
      net_.in_arcs[static_cast<size_t>(net_.arcs[a].head)].push_back(static_cast<int>(a));
    }
    return std::move(net_);
  }

 private:
  Network net_;
  HubTimeConfig times_;
  std::vector<int> zone_idx_, ah_idx_, lh_idx_, gh_idx_, rh_idx_;
  int ah_per_side_ = 0, lh_per_side_ = 0, gh_per_side_ = 0;  // lattice extents
  std::set<std::pair<int, int>> seen_;

  static std::string grid_id(const char* prefix, int i, int j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%02d_%02d", prefix, i, j);
    return buf;
  }

  int add_node(std::string id, NodeKind kind, Point pos) {
    Node n;
    n.id = std::move(id);
    n.kind = kind;
    n.pos = pos;
    if (is_hub(kind)) {
      n.sort_time_min = times_.sort_for(kind);
      n.crossdock_time_min = times_.crossdock_for(kind);
    }
    net_.nodes.push_back(std::move(n));
    return static_cast<int>(net_.nodes.size()) - 1;
  }

  // Adds the directed arc pair between i and j, skipping self-loops,
  // colocated nodes and duplicates.
  void link(int i, int j) {
    if (i == j) return;
    const Node& a = net_.nodes[static_cast<size_t>(i)];
    const Node& b = net_.nodes[static_cast<size_t>(j)];
    double dist = rectilinear_distance(a.pos, b.pos);
    if (dist <= 0.0) return;
    add_arc(i, j, dist);
    add_arc(j, i, dist);
  }

  // Expected rectilinear distance from a uniformly distributed point of the
  // zone to p.  First-mile trips aggregate pickups across the whole zone, so
  // the center-to-hub distance (zero for a hub at the zone center) would
  // misstate them; the expectation also equals the center-to-hub distance
  // for a hub on a zone corner, keeping corner layouts unchanged.
  double zone_distance(int zone_node, const Point& p) const {
    const double s = net_.grid.zone_size_km;
    const Point& c = net_.nodes[static_cast<size_t>(zone_node)].pos;
    auto axis = [s](double center, double h) {
      double a = center - s / 2.0;
      if (h <= a) return (a - h) + s / 2.0;
      if (h >= a + s) return (h - a - s) + s / 2.0;
      double l = h - a, r = a + s - h;
      return (l * l + r * r) / (2.0 * s);
    };
    return axis(c.x, p.x) + axis(c.y, p.y);
  }

  // Links a zone to one of its serving access hubs using the expected
  // first-mile distance.
  void link_zone(int z, int hub) {
    double dist = zone_distance(z, net_.nodes[static_cast<size_t>(hub)].pos);
    add_arc(z, hub, dist);
    add_arc(hub, z, dist);
  }

  void add_arc(int tail, int head, double dist) {
    if (!seen_.insert({tail, head}).second) return;
    const Node& a = net_.nodes[static_cast<size_t>(tail)];
    const Node& b = net_.nodes[static_cast<size_t>(head)];
    PhysicalArc arc;
    arc.id = a.id + "->" + b.id;
    arc.tail = tail;
    arc.head = head;
    arc.cls = arc_class_of(a.kind, b.kind);
    arc.distance_km = dist;
    arc.transport_time_min = travel_time_min(arc.cls, dist);
    arc.vehicle_capacity_parcels = vehicle_capacity_parcels(arc.cls);
    net_.arcs.push_back(std::move(arc));
  }

  void make_zones() {
    const GridSpec& g = net_.grid;
    const double s = g.zone_size_km;
    zone_idx_.assign(static_cast<size_t>(g.zones_per_side) * g.zones_per_side, -1);
    for (int jy = 0; jy < g.zones_per_side; ++jy)
      for (int ix = 0; ix < g.zones_per_side; ++ix)
        zone_idx_[zid(ix, jy)] =
            add_node(grid_id("uz", ix, jy), NodeKind::Zone, {(ix + 0.5) * s, (jy + 0.5) * s});
    net_.zone_count = static_cast<int>(net_.nodes.size());
  }

  size_t zid(int ix, int jy) const {
    return static_cast<size_t>(jy) * net_.grid.zones_per_side + ix;
  }

  bool has_lh() const { return net_.tiers != HubStructure::NoLH; }
  bool has_gh() const { return net_.tiers != HubStructure::NoGH; }

  void make_hubs() {
    const GridSpec& g = net_.grid;
    const double s = g.zone_size_km;
    const int Z = g.zones_per_side;
    const int cells = g.cells_per_side();
    const int areas = g.areas_per_side();
    const double cell_km = g.zones_per_cell_side * s;
    const double area_km = cell_km * g.cells_per_area_side;

    if (net_.links == LinkStructure::HS) {
      ah_per_side_ = Z;
      ah_idx_.assign(static_cast<size_t>(Z) * Z, -1);
      for (int j = 0; j < Z; ++j)
        for (int i = 0; i < Z; ++i)
          ah_idx_[static_cast<size_t>(j) * Z + i] = add_node(
              grid_id("ah", i, j), NodeKind::AccessHub, {(i + 0.5) * s, (j + 0.5) * s});
      if (has_lh()) {
        lh_per_side_ = cells;
        lh_idx_.assign(static_cast<size_t>(cells) * cells, -1);
        for (int j = 0; j < cells; ++j)
          for (int i = 0; i < cells; ++i)
            lh_idx_[static_cast<size_t>(j) * cells + i] =
                add_node(grid_id("lh", i, j), NodeKind::LocalHub,
                         {(i + 0.5) * cell_km, (j + 0.5) * cell_km});
      }
      if (has_gh()) {
        gh_per_side_ = areas;
        gh_idx_.assign(static_cast<size_t>(areas) * areas, -1);
        for (int j = 0; j < areas; ++j)
          for (int i = 0; i < areas; ++i)
            gh_idx_[static_cast<size_t>(j) * areas + i] =
                add_node(grid_id("gh", i, j), NodeKind::GatewayHub,
                         {(i + 0.5) * area_km, (j + 0.5) * area_km});
      }
    } else {
      // Corner-placed hubs; HC2 thins the access tier to one hub per
      // 2x2-zone block, sitting on the block's shared interior corner.
      if (net_.links == LinkStructure::HC1) {
        ah_per_side_ = Z + 1;
        ah_idx_.assign(static_cast<size_t>(Z + 1) * (Z + 1), -1);
        for (int j = 0; j <= Z; ++j)
          for (int i = 0; i <= Z; ++i)
            ah_idx_[static_cast<size_t>(j) * (Z + 1) + i] =
                add_node(grid_id("ah", i, j), NodeKind::AccessHub, {i * s, j * s});
      } else {
        const int blocks = Z / 2;
        ah_per_side_ = blocks;
        ah_idx_.assign(static_cast<size_t>(blocks) * blocks, -1);
        for (int j = 0; j < blocks; ++j)
          for (int i = 0; i < blocks; ++i)
            ah_idx_[static_cast<size_t>(j) * blocks + i] =
                add_node(grid_id("ah", i, j), NodeKind::AccessHub,
                         {(2 * i + 1) * s, (2 * j + 1) * s});
      }
      if (has_lh()) {
        lh_per_side_ = cells + 1;
        lh_idx_.assign(static_cast<size_t>(cells + 1) * (cells + 1), -1);
        for (int j = 0; j <= cells; ++j)
          for (int i = 0; i <= cells; ++i)
            lh_idx_[static_cast<size_t>(j) * (cells + 1) + i] =
                add_node(grid_id("lh", i, j), NodeKind::LocalHub, {i * cell_km, j * cell_km});
      }
      if (has_gh()) {
        gh_per_side_ = areas + 1;
        gh_idx_.assign(static_cast<size_t>(areas + 1) * (areas + 1), -1);
        for (int j = 0; j <= areas; ++j)
          for (int i = 0; i <= areas; ++i)
            gh_idx_[static_cast<size_t>(j) * (areas + 1) + i] =
                add_node(grid_id("gh", i, j), NodeKind::GatewayHub, {i * area_km, j * area_km});
      }
    }

    const double span = g.city_span_km();
    const double off = span * (g.embedding_factor - 1) / 2.0;
    rh_idx_.push_back(add_node("rh_sw", NodeKind::RegionalHub, {-off, -off}));
    rh_idx_.push_back(add_node("rh_se", NodeKind::RegionalHub, {span + off, -off}));
    rh_idx_.push_back(add_node("rh_nw", NodeKind::RegionalHub, {-off, span + off}));
    rh_idx_.push_back(add_node("rh_ne", NodeKind::RegionalHub, {span + off, span + off}));
  }

  int ah(int i, int j) const { return ah_idx_[static_cast<size_t>(j) * ah_per_side_ + i]; }
  int lh(int i, int j) const { return lh_idx_[static_cast<size_t>(j) * lh_per_side_ + i]; }
  int gh(int i, int j) const { return gh_idx_[static_cast<size_t>(j) * gh_per_side_ + i]; }

  // Closed tile indices [lo,hi] of the tiles of size `tile` containing
  // coordinate v (tile k spans [k*tile, (k+1)*tile]), clamped to the city's
  // [0, count-1] range.  A coordinate on a shared boundary belongs to both
  // neighbouring tiles.
  static std::pair<int, int> tiles_containing(double v, double tile, int count) {
    double r = v / tile;
    int lo = static_cast<int>(std::ceil(r - 1.0 - 1e-9));
    int hi = static_cast<int>(std::floor(r + 1e-9));
    lo = std::clamp(lo, 0, count - 1);
    hi = std::clamp(hi, 0, count - 1);
    return {lo, hi};
  }

  // True when points p and q both lie inside (or on the border of) one common
  // tile of size `tile` in a count x count tiling of the city.
  static bool share_tile(const Point& p, const Point& q, double tile, int count) {
    auto [pxl, pxh] = tiles_containing(p.x, tile, count);
    auto [qxl, qxh] = tiles_containing(q.x, tile, count);
    auto [pyl, pyh] = tiles_containing(p.y, tile, count);
    auto [qyl, qyh] = tiles_containing(q.y, tile, count);
    int xl = std::max(pxl, qxl), xh = std::min(pxh, qxh);
    int yl = std::max(pyl, qyl), yh = std::min(pyh, qyh);
    return xl <= xh && yl <= yh;
  }

  void make_links() {
    const GridSpec& g = net_.grid;
    const int Z = g.zones_per_side;
    const int cells = g.cells_per_side();
    const int areas = g.areas_per_side();
    const double cell_km = g.zones_per_cell_side * g.zone_size_km;
    const double area_km = cell_km * g.cells_per_area_side;

    if (net_.links == LinkStructure::HS) {
      for (int j = 0; j < Z; ++j)
        for (int i = 0; i < Z; ++i) {
          int z = zone_idx_[zid(i, j)];
          int a = ah(i, j);
          link_zone(z, a);
          if (has_lh())
            link(a, lh(i / g.zones_per_cell_side, j / g.zones_per_cell_side));
          else
            link(a, gh(i / (g.zones_per_cell_side * g.cells_per_area_side),
                       j / (g.zones_per_cell_side * g.cells_per_area_side)));
        }
      if (has_lh() && has_gh())
        for (int j = 0; j < cells; ++j)
          for (int i = 0; i < cells; ++i)
            link(lh(i, j), gh(i / g.cells_per_area_side, j / g.cells_per_area_side));
      if (has_gh()) {
        all_pairs(gh_idx_);
        cross_pairs(gh_idx_, rh_idx_);
      } else {
        all_pairs(lh_idx_);
        cross_pairs(lh_idx_, rh_idx_);
      }
      all_pairs(rh_idx_);
      return;
    }

    // HC structures.
    const bool hc1 = net_.links == LinkStructure::HC1;
    for (int j = 0; j < Z; ++j)
      for (int i = 0; i < Z; ++i) {
        int z = zone_idx_[zid(i, j)];
        if (hc1) {
          link_zone(z, ah(i, j));
          link_zone(z, ah(i + 1, j));
          link_zone(z, ah(i, j + 1));
          link_zone(z, ah(i + 1, j + 1));
        } else {
          link_zone(z, ah(i / 2, j / 2));
        }
      }

    // Lateral access links between lattice neighbours sharing a local cell
    // (with the corner lattice every neighbour pair shares one; the sparse
    // block lattice only pairs up inside a cell).  Cells are geometric tiles,
    // so the rule is unchanged when the LH tier is absent.
    for (int j = 0; j < ah_per_side_; ++j)
      for (int i = 0; i < ah_per_side_; ++i) {
        if (i + 1 < ah_per_side_) maybe_lateral(ah(i, j), ah(i + 1, j), cell_km, cells);
        if (j + 1 < ah_per_side_) maybe_lateral(ah(i, j), ah(i, j + 1), cell_km, cells);
      }

    if (has_lh()) {
      corner_links(ah_idx_, cell_km, cells, lh_idx_, lh_per_side_);
      for (int j = 0; j < lh_per_side_; ++j)
        for (int i = 0; i < lh_per_side_; ++i) {
          if (i + 1 < lh_per_side_) maybe_lateral(lh(i, j), lh(i + 1, j), area_km, areas);
          if (j + 1 < lh_per_side_) maybe_lateral(lh(i, j), lh(i, j + 1), area_km, areas);
        }
      if (has_gh()) corner_links(lh_idx_, area_km, areas, gh_idx_, gh_per_side_);
    } else if (has_gh()) {
      corner_links(ah_idx_, area_km, areas, gh_idx_, gh_per_side_);
    }

    if (has_gh()) {
      for (int j = 0; j < gh_per_side_; ++j)
        for (int i = 0; i < gh_per_side_; ++i) {
          if (i + 1 < gh_per_side_) link(gh(i, j), gh(i + 1, j));
          if (j + 1 < gh_per_side_) link(gh(i, j), gh(i, j + 1));
        }
      cross_pairs(gh_idx_, rh_idx_);
    } else {
      cross_pairs(lh_idx_, rh_idx_);
    }
    all_pairs(rh_idx_);
  }

  void maybe_lateral(int a, int b, double tile, int count) {
    if (share_tile(net_.nodes[static_cast<size_t>(a)].pos, net_.nodes[static_cast<size_t>(b)].pos,
                   tile, count))
      link(a, b);
  }

  // Links every hub of `from` to the four corner hubs of every tile (size
  // `tile`, `count` per side) that contains it.  Corner hubs sit on the
  // corner lattice indexed by `corner_idx` with `per_side` entries per side.
  void corner_links(const std::vector<int>& from, double tile, int count,
                    const std::vector<int>& corner_idx, int per_side) {
    for (int f : from) {
      if (f < 0) continue;
      const Point& p = net_.nodes[static_cast<size_t>(f)].pos;
      auto [xl, xh] = tiles_containing(p.x, tile, count);
      auto [yl, yh] = tiles_containing(p.y, tile, count);
      for (int ty = yl; ty <= yh; ++ty)
        for (int tx = xl; tx <= xh; ++tx)
          for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx)
              link(f, corner_idx[static_cast<size_t>(ty + dy) * per_side + (tx + dx)]);
    }
  }

  void all_pairs(const std::vector<int>& nodes) {
    for (size_t i = 0; i < nodes.size(); ++i)
      for (size_t j = i + 1; j < nodes.size(); ++j) link(nodes[i], nodes[j]);
  }

  void cross_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    for (int i : a)
      for (int j : b) link(i, j);
  }
};

}  // namespace

Network build_network(const GridSpec& grid, LinkStructure links, HubStructure tiers,
                      const HubTimeConfig& times) {
  return Builder(grid, links, tiers, times).build();
}

}  // namespace conroute
