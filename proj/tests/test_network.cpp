#include <doctest.h>

#include <queue>
#include <set>
#include <sstream>

#include "conroute/network.hpp"

using namespace conroute;

namespace {

GridSpec default_grid() { return GridSpec{}; }

GridSpec small_grid() {
  GridSpec g;
  g.zones_per_side = 8;
  g.zones_per_cell_side = 2;
  g.cells_per_area_side = 2;
  return g;
}

const std::vector<std::pair<LinkStructure, HubStructure>>& all_structures() {
  static const std::vector<std::pair<LinkStructure, HubStructure>> v = [] {
    std::vector<std::pair<LinkStructure, HubStructure>> out;
    for (auto l : {LinkStructure::HS, LinkStructure::HC1, LinkStructure::HC2})
      for (auto h : {HubStructure::Default, HubStructure::NoLH, HubStructure::NoGH})
        out.push_back({l, h});
    return out;
  }();
  return v;
}

int find_arc(const Network& net, const std::string& tail, const std::string& head) {
  int t = net.node_index(tail), h = net.node_index(head);
  for (size_t a = 0; a < net.arcs.size(); ++a)
    if (net.arcs[a].tail == t && net.arcs[a].head == h) return static_cast<int>(a);
  return -1;
}

}  // namespace

TEST_CASE("rectilinear distance") {
  CHECK(rectilinear_distance({0, 0}, {3, 4}) == doctest::Approx(7.0));
  CHECK(rectilinear_distance({2, 2}, {2, 2}) == doctest::Approx(0.0));
  CHECK(rectilinear_distance({0, 0}, {-32, 64}) == doctest::Approx(96.0));
}

TEST_CASE("travel times follow the speed bands") {
  CHECK(travel_time_min(ArcClass::AhLh, 18.0) == doctest::Approx(36.0));
  CHECK(travel_time_min(ArcClass::UzAh, 2.0) == doctest::Approx(10.0));
  CHECK(travel_time_min(ArcClass::RhRh, 96.0) == doctest::Approx(57.6));

  // A band boundary belongs to the lower band.
  CHECK(band_speed_kmh(ArcClass::AhLh, 10.0) == doctest::Approx(20.0));
  CHECK(band_speed_kmh(ArcClass::AhLh, 10.0001) == doctest::Approx(30.0));
  CHECK(band_speed_kmh(ArcClass::AhLh, 20.0) == doctest::Approx(30.0));
  CHECK(band_speed_kmh(ArcClass::AhLh, 20.0001) == doctest::Approx(45.0));
  CHECK(band_speed_kmh(ArcClass::UzAh, 5.0) == doctest::Approx(12.0));
  CHECK(band_speed_kmh(ArcClass::GhRh, 48.0) == doctest::Approx(65.0));

  CHECK(vehicle_capacity_parcels(ArcClass::UzAh) == 60);
  CHECK(vehicle_capacity_parcels(ArcClass::AhAh) == 300);
  CHECK(vehicle_capacity_parcels(ArcClass::LhGh) == 1000);
  CHECK(vehicle_capacity_parcels(ArcClass::GhGh) == 3500);
  CHECK(vehicle_capacity_parcels(ArcClass::RhRh) == 3500);

  CHECK_THROWS(travel_time_min(ArcClass::UzAh, 0.0));
  CHECK_THROWS(travel_time_min(ArcClass::UzAh, -1.0));
}

TEST_CASE("hub counts on the default 16x16 grid") {
  auto count = [](LinkStructure l, HubStructure h) {
    Network net = build_network(default_grid(), l, h);
    return std::array<int, 5>{net.count_kind(NodeKind::Zone), net.count_kind(NodeKind::AccessHub),
                              net.count_kind(NodeKind::LocalHub),
                              net.count_kind(NodeKind::GatewayHub),
                              net.count_kind(NodeKind::RegionalHub)};
  };
  CHECK(count(LinkStructure::HS, HubStructure::Default) ==
        std::array<int, 5>{256, 256, 16, 4, 4});
  CHECK(count(LinkStructure::HC1, HubStructure::Default) ==
        std::array<int, 5>{256, 289, 25, 9, 4});
  CHECK(count(LinkStructure::HC2, HubStructure::Default) ==
        std::array<int, 5>{256, 64, 25, 9, 4});
  CHECK(count(LinkStructure::HS, HubStructure::NoLH) == std::array<int, 5>{256, 256, 0, 4, 4});
  CHECK(count(LinkStructure::HC1, HubStructure::NoGH) == std::array<int, 5>{256, 289, 25, 0, 4});
}

TEST_CASE("hub count formulas hold on a smaller grid") {
  Network hs = build_network(small_grid(), LinkStructure::HS, HubStructure::Default);
  CHECK(hs.count_kind(NodeKind::AccessHub) == 64);
  CHECK(hs.count_kind(NodeKind::LocalHub) == 16);
  CHECK(hs.count_kind(NodeKind::GatewayHub) == 4);
  Network hc1 = build_network(small_grid(), LinkStructure::HC1, HubStructure::Default);
  CHECK(hc1.count_kind(NodeKind::AccessHub) == 81);
  CHECK(hc1.count_kind(NodeKind::LocalHub) == 25);
  CHECK(hc1.count_kind(NodeKind::GatewayHub) == 9);
  Network hc2 = build_network(small_grid(), LinkStructure::HC2, HubStructure::Default);
  CHECK(hc2.count_kind(NodeKind::AccessHub) == 16);
  CHECK(hc2.count_kind(NodeKind::LocalHub) == 25);
  CHECK(hc2.count_kind(NodeKind::GatewayHub) == 9);
}

TEST_CASE("first-mile arcs use the expected in-zone distance") {
  Network hs = build_network(small_grid(), LinkStructure::HS, HubStructure::Default);
  int a = find_arc(hs, "uz_00_00", "ah_00_00");
  REQUIRE(a >= 0);
  CHECK(hs.arcs[static_cast<size_t>(a)].distance_km == doctest::Approx(1.0));
  CHECK(hs.arcs[static_cast<size_t>(a)].transport_time_min == doctest::Approx(5.0));

  Network hc1 = build_network(small_grid(), LinkStructure::HC1, HubStructure::Default);
  int b = find_arc(hc1, "uz_00_00", "ah_00_00");
  REQUIRE(b >= 0);
  CHECK(hc1.arcs[static_cast<size_t>(b)].distance_km == doctest::Approx(2.0));
  CHECK(hc1.arcs[static_cast<size_t>(b)].transport_time_min == doctest::Approx(10.0));
}

TEST_CASE("zone adjacency per structure") {
  Network hs = build_network(default_grid(), LinkStructure::HS, HubStructure::Default);
  Network hc1 = build_network(default_grid(), LinkStructure::HC1, HubStructure::Default);
  Network hc2 = build_network(default_grid(), LinkStructure::HC2, HubStructure::Default);
  for (int z = 0; z < hs.zone_count; ++z) {
    CHECK(hs.out_arcs[static_cast<size_t>(z)].size() == 1);
    CHECK(hs.in_arcs[static_cast<size_t>(z)].size() == 1);
    CHECK(hc1.out_arcs[static_cast<size_t>(z)].size() == 4);
    CHECK(hc2.out_arcs[static_cast<size_t>(z)].size() == 1);
  }
}

TEST_CASE("regional hubs sit at the embedding corners") {
  Network net = build_network(default_grid(), LinkStructure::HS, HubStructure::Default);
  auto pos = [&](const char* id) { return net.node(net.node_index(id)).pos; };
  CHECK(pos("rh_sw").x == doctest::Approx(-32.0));
  CHECK(pos("rh_sw").y == doctest::Approx(-32.0));
  CHECK(pos("rh_se").x == doctest::Approx(64.0));
  CHECK(pos("rh_se").y == doctest::Approx(-32.0));
  CHECK(pos("rh_nw").x == doctest::Approx(-32.0));
  CHECK(pos("rh_nw").y == doctest::Approx(64.0));
  CHECK(pos("rh_ne").x == doctest::Approx(64.0));
  CHECK(pos("rh_ne").y == doctest::Approx(64.0));
  CHECK(net.quadrant_of(net.node_index("rh_sw")) == 0);
  CHECK(net.quadrant_of(net.node_index("rh_se")) == 1);
  CHECK(net.quadrant_of(net.node_index("rh_nw")) == 2);
  CHECK(net.quadrant_of(net.node_index("rh_ne")) == 3);
}

TEST_CASE("hub handling times") {
  Network net = build_network(small_grid(), LinkStructure::HC1, HubStructure::Default);
  const Node& ahn = net.node(net.node_index("ah_00_00"));
  CHECK(ahn.sort_time_min == doctest::Approx(8.0));
  CHECK(ahn.crossdock_time_min == doctest::Approx(2.0));
  const Node& ghn = net.node(net.node_index("gh_00_00"));
  CHECK(ghn.sort_time_min == doctest::Approx(24.0));
  CHECK(ghn.crossdock_time_min == doctest::Approx(6.0));
  const Node& rhn = net.node(net.node_index("rh_sw"));
  CHECK(rhn.sort_time_min == doctest::Approx(24.0));
  const Node& uz = net.node(net.node_index("uz_00_00"));
  CHECK(uz.sort_time_min == doctest::Approx(0.0));
}

TEST_CASE("arc structural invariants across all nine structures") {
  for (auto [l, h] : all_structures()) {
    CAPTURE(to_string(l));
    CAPTURE(to_string(h));
    Network net = build_network(small_grid(), l, h);

    // No local hubs under NoLH, no gateways under NoGH.
    if (h == HubStructure::NoLH) CHECK(net.count_kind(NodeKind::LocalHub) == 0);
    if (h == HubStructure::NoGH) CHECK(net.count_kind(NodeKind::GatewayHub) == 0);
    CHECK(net.count_kind(NodeKind::RegionalHub) == 4);

    std::set<std::pair<int, int>> seen;
    for (const PhysicalArc& a : net.arcs) {
      CHECK(a.tail != a.head);
      CHECK(a.distance_km > 0.0);
      CHECK(seen.insert({a.tail, a.head}).second);
      CHECK(a.cls == arc_class_of(net.node(a.tail).kind, net.node(a.head).kind));
      CHECK(a.transport_time_min == doctest::Approx(travel_time_min(a.cls, a.distance_km)));
      CHECK(a.vehicle_capacity_parcels == vehicle_capacity_parcels(a.cls));
    }
    // Symmetry: reverse arc exists with the same distance.
    for (const PhysicalArc& a : net.arcs) {
      CHECK(seen.count({a.head, a.tail}) == 1);
    }

    // Whole graph connected (arcs are paired, so BFS from node 0 suffices).
    std::vector<char> vis(net.nodes.size(), 0);
    std::queue<int> q;
    q.push(0);
    vis[0] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int ai : net.out_arcs[static_cast<size_t>(u)]) {
        int v = net.arcs[static_cast<size_t>(ai)].head;
        if (!vis[static_cast<size_t>(v)]) {
          vis[static_cast<size_t>(v)] = 1;
          q.push(v);
        }
      }
    }
    for (size_t i = 0; i < vis.size(); ++i) {
      CAPTURE(net.nodes[i].id);
      CHECK(vis[i] == 1);
    }

    // Every zone can ship and receive.
    for (int z = 0; z < net.zone_count; ++z) {
      CHECK(!net.out_arcs[static_cast<size_t>(z)].empty());
      CHECK(!net.in_arcs[static_cast<size_t>(z)].empty());
    }
  }
}

TEST_CASE("tier short-circuits") {
  // HS without local hubs wires access hubs straight to gateways.
  Network noLh = build_network(small_grid(), LinkStructure::HS, HubStructure::NoLH);
  CHECK(find_arc(noLh, "ah_00_00", "gh_00_00") >= 0);
  // HS without gateways gives local-hub laterals and local-regional links.
  Network noGh = build_network(small_grid(), LinkStructure::HS, HubStructure::NoGH);
  CHECK(find_arc(noGh, "lh_00_00", "lh_03_03") >= 0);
  CHECK(find_arc(noGh, "lh_00_00", "rh_ne") >= 0);
  // Default HS has neither.
  Network def = build_network(small_grid(), LinkStructure::HS, HubStructure::Default);
  CHECK(find_arc(def, "ah_00_00", "gh_00_00") < 0);
  CHECK(find_arc(def, "lh_00_00", "lh_03_03") < 0);
  CHECK(find_arc(def, "lh_00_00", "rh_ne") < 0);
  CHECK(find_arc(def, "gh_00_00", "rh_ne") >= 0);
  CHECK(find_arc(def, "gh_00_00", "gh_01_01") >= 0);
}

TEST_CASE("structure determinism") {
  Network a = build_network(small_grid(), LinkStructure::HC2, HubStructure::Default);
  Network b = build_network(small_grid(), LinkStructure::HC2, HubStructure::Default);
  REQUIRE(a.nodes.size() == b.nodes.size());
  REQUIRE(a.arcs.size() == b.arcs.size());
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].id == b.nodes[i].id);
    CHECK(a.nodes[i].pos.x == b.nodes[i].pos.x);
    CHECK(a.nodes[i].pos.y == b.nodes[i].pos.y);
  }
  for (size_t i = 0; i < a.arcs.size(); ++i) {
    CHECK(a.arcs[i].id == b.arcs[i].id);
    CHECK(a.arcs[i].distance_km == b.arcs[i].distance_km);
  }
}

TEST_CASE("grid validation errors") {
  GridSpec bad = default_grid();
  bad.zones_per_side = 15;  // not divisible by 4
  CHECK_THROWS(build_network(bad, LinkStructure::HS, HubStructure::Default));

  GridSpec odd = default_grid();
  odd.zones_per_side = 12;
  odd.zones_per_cell_side = 3;
  odd.cells_per_area_side = 2;
  // valid for HS/HC1 but HC2 needs an even zone count per side: 12 is even, ok.
  CHECK_NOTHROW(build_network(odd, LinkStructure::HC1, HubStructure::Default));

  GridSpec tiny = default_grid();
  tiny.zones_per_side = 0;
  CHECK_THROWS(build_network(tiny, LinkStructure::HS, HubStructure::Default));

  GridSpec negcell = default_grid();
  negcell.zone_size_km = -2.0;
  CHECK_THROWS(build_network(negcell, LinkStructure::HS, HubStructure::Default));
}

TEST_CASE("string round trips") {
  CHECK(link_structure_from_string("HC1") == LinkStructure::HC1);
  CHECK(hub_structure_from_string("noLH") == HubStructure::NoLH);
  CHECK_THROWS(link_structure_from_string("bogus"));
  CHECK_THROWS(hub_structure_from_string("bogus"));
  for (auto [l, h] : all_structures()) {
    CHECK(link_structure_from_string(to_string(l)) == l);
    CHECK(hub_structure_from_string(to_string(h)) == h);
  }
}
