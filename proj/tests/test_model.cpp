#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "conroute/capacity.hpp"
#include "conroute/demand.hpp"
#include "conroute/model.hpp"
#include "conroute/network.hpp"
#include "conroute/pathgen.hpp"
#include "conroute/simplex.hpp"
#include "doctest.h"

using namespace conroute;

namespace {

void wire(Network& net) {
  net.out_arcs.assign(net.nodes.size(), {});
  net.in_arcs.assign(net.nodes.size(), {});
  for (size_t a = 0; a < net.arcs.size(); ++a) {
    net.out_arcs[static_cast<size_t>(net.arcs[a].tail)].push_back(static_cast<int>(a));
    net.in_arcs[static_cast<size_t>(net.arcs[a].head)].push_back(static_cast<int>(a));
  }
}

// z0 -> h1 -> ... -> h_m -> rh with the given per-arc transport minutes.
Network line_network(int hubs, const std::vector<double>& transport_min) {
  Network net;
  net.grid.zones_per_side = 4;
  net.nodes.push_back({"z0", NodeKind::Zone, {0.0, 0.0}, 0.0, 0.0});
  for (int i = 1; i <= hubs; ++i) {
    net.nodes.push_back({"h" + std::to_string(i), NodeKind::AccessHub,
                         {2.0 * i, 0.0}, 16.0, 4.0});
  }
  net.nodes.push_back({"rh", NodeKind::RegionalHub, {2.0 * (hubs + 1), 0.0}, 24.0, 6.0});
  net.zone_count = 1;
  for (int i = 0; i <= hubs; ++i) {
    ArcClass cls = i == 0 ? ArcClass::UzAh : (i == hubs ? ArcClass::AhRh : ArcClass::AhAh);
    PhysicalArc a;
    a.id = net.nodes[static_cast<size_t>(i)].id + "->" + net.nodes[static_cast<size_t>(i + 1)].id;
    a.tail = i;
    a.head = i + 1;
    a.cls = cls;
    a.distance_km = 2.0;
    a.transport_time_min = transport_min[static_cast<size_t>(i)];
    a.vehicle_capacity_parcels = vehicle_capacity_parcels(cls);
    net.arcs.push_back(a);
  }
  wire(net);
  return net;
}

CapacityPlan serviced_plan(const Network& net, const std::vector<int64_t>& departures) {
  CapacityPlan plan;
  plan.hubs.resize(net.nodes.size());
  for (size_t n = 0; n < net.nodes.size(); ++n) {
    if (net.nodes[n].kind != NodeKind::Zone) plan.hubs[n] = {1000, 100};
  }
  plan.arcs.resize(net.arcs.size());
  for (size_t a = 0; a < net.arcs.size(); ++a) {
    plan.arcs[a].departures_per_hour = departures[a];
    plan.arcs[a].wait_dmin = departures[a] > 0 ? wait_dmin_for(departures[a]) : 0;
  }
  return plan;
}

GridSpec tiny_grid() {
  GridSpec g;
  g.zones_per_side = 4;
  g.zone_size_km = 2.0;
  g.zones_per_cell_side = 2;
  g.cells_per_area_side = 2;
  return g;
}

Commodity make_commodity(const std::string& id, int origin, int destination, int64_t quantity,
                         int promise_min = -1) {
  Commodity k;
  k.id = id;
  k.origin = origin;
  k.destination = destination;
  k.quantity = quantity;
  k.service_promise_min = promise_min;
  return k;
}

// The 91-minute two-leg example: 30+10 and 20+15 minute legs, a 16-minute
// sorting hub between them.  Variants: sort at h1 (910 dmin) or crossdock
// through it (790 dmin).
struct TwoLeg {
  Network net;
  CapacityPlan plan;
  std::vector<Commodity> ks;
  PathSet set;
  TwoLeg(int64_t quantity) : net(line_network(1, {30.0, 20.0})) {
    plan = serviced_plan(net, {3, 2});
    ks = {make_commodity("k0", 0, 2, quantity, 200)};
    set = build_path_set(net, ks, plan, {}, 40);
  }
};

int find_variant(const IPModel& m, bool crossdocked) {
  for (size_t i = 0; i < m.x.size(); ++i)
    if (m.x[i].xdock_hubs.empty() != crossdocked) return static_cast<int>(i);
  return -1;
}

const IPModel::RowInfo* find_row(const IPModel& m, IPModel::RowKind kind, int subject,
                                 size_t* row_index = nullptr) {
  for (size_t r = 0; r < m.rows.size(); ++r) {
    if (m.rows[r].kind == kind && m.rows[r].subject == subject) {
      if (row_index) *row_index = r;
      return &m.rows[r];
    }
  }
  return nullptr;
}

// Integral hand-built answer: pick one x column per commodity, count
// containers as rounded-up flow, fill objective and totals from metadata.
Solution pick_solution(const IPModel& m, const std::vector<int>& chosen_cols) {
  Solution s;
  s.x.assign(m.x.size(), 0.0);
  s.y.assign(m.y.size(), 0.0);
  s.chosen.assign(m.commodity_x.size(), -1);
  std::vector<int64_t> flow(m.y.size(), 0);
  for (int i : chosen_cols) {
    const auto& v = m.x[static_cast<size_t>(i)];
    s.x[static_cast<size_t>(i)] = 1.0;
    s.chosen[static_cast<size_t>(v.commodity)] = i;
    s.objective_pdmin += v.cost_pdmin;
    s.totals.transport_dmin += v.quantity * v.transit.transport_dmin;
    s.totals.wait_dmin += v.quantity * v.transit.wait_dmin;
    s.totals.sort_dmin += v.quantity * v.transit.sort_dmin;
    s.totals.crossdock_dmin += v.quantity * v.transit.crossdock_dmin;
    for (int j : v.container_arcs) flow[static_cast<size_t>(j)] += v.quantity;
  }
  for (size_t j = 0; j < m.y.size(); ++j)
    if (flow[j] > 0)
      s.y[j] = static_cast<double>((flow[j] + m.container_parcels - 1) / m.container_parcels);
  return s;
}

}  // namespace

TEST_CASE("two-leg model carries both variants with exact costs") {
  TwoLeg f(10);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);

  REQUIRE(m.x.size() == 2);
  REQUIRE(m.y.size() == 3);
  CHECK(m.lp.cols.size() == 5);
  CHECK(m.container_parcels == 40);
  CHECK(m.commodity_ids == std::vector<std::string>{"k0"});
  CHECK(m.commodity_quantity == std::vector<int64_t>{10});
  CHECK(m.commodity_x == std::vector<std::vector<int>>{{0, 1}});

  const int sorted = find_variant(m, false);
  const int docked = find_variant(m, true);
  REQUIRE(sorted >= 0);
  REQUIRE(docked >= 0);
  CHECK(m.x[static_cast<size_t>(sorted)].cost_pdmin == 9100);
  CHECK(m.x[static_cast<size_t>(docked)].cost_pdmin == 7900);
  CHECK(m.x[static_cast<size_t>(sorted)].sort_hubs == std::vector<int>{1});
  CHECK(m.x[static_cast<size_t>(docked)].xdock_hubs == std::vector<int>{1});
  CHECK(m.x[static_cast<size_t>(sorted)].container_arcs.size() == 2);
  CHECK(m.x[static_cast<size_t>(docked)].container_arcs.size() == 1);

  // Container arcs keep their generation identities.
  std::set<std::string> ids;
  for (const auto& cv : m.y) ids.insert(cv.id);
  CHECK(ids == std::set<std::string>{"z0>h1", "h1>rh", "z0>h1>rh"});

  // Vehicle capacity in containers: 60-parcel vans carry 1, 300-parcel
  // trucks carry 7.
  CHECK(m.vehicle_containers(f.net, 0) == 1);
  CHECK(m.vehicle_containers(f.net, 1) == 7);
}

TEST_CASE("two-leg model emits every constraint family once") {
  TwoLeg f(10);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);
  REQUIRE(m.rows.size() == m.lp.rows.size());
  REQUIRE(m.rows.size() == 8);  // 1 crossdock + 1 sort + 3 links + 2 vehicle + 1 assignment

  size_t r = 0;
  REQUIRE(find_row(m, IPModel::RowKind::CrossdockCap, 1, &r) != nullptr);
  CHECK(m.lp.rows[r].rhs == 100.0);  // crossdock limit at h1
  REQUIRE(find_row(m, IPModel::RowKind::SortCap, 1, &r) != nullptr);
  CHECK(m.lp.rows[r].rhs == 1000.0);  // sort limit at h1
  // Endpoints never sort: no sort rows for z0 or rh.
  CHECK(find_row(m, IPModel::RowKind::SortCap, 0) == nullptr);
  CHECK(find_row(m, IPModel::RowKind::SortCap, 2) == nullptr);

  // Vehicle rows: 1 container/vehicle x 3 departures, 7 x 2 departures.
  REQUIRE(find_row(m, IPModel::RowKind::VehicleCap, 0, &r) != nullptr);
  CHECK(m.lp.rows[r].rhs == 3.0);
  REQUIRE(find_row(m, IPModel::RowKind::VehicleCap, 1, &r) != nullptr);
  CHECK(m.lp.rows[r].rhs == 14.0);

  // One link row per container arc, tying quantity to 40-parcel containers.
  for (size_t j = 0; j < m.y.size(); ++j) {
    REQUIRE(find_row(m, IPModel::RowKind::ContainerLink, static_cast<int>(j), &r) != nullptr);
    bool has_count_term = false;
    for (const auto& [col, coef] : m.lp.rows[r].coeffs)
      if (col == m.y_col(static_cast<int>(j))) {
        has_count_term = true;
        CHECK(coef == -40.0);
      }
    CHECK(has_count_term);
    CHECK(m.lp.rows[r].rhs == 0.0);
  }

  REQUIRE(find_row(m, IPModel::RowKind::Assignment, 0, &r) != nullptr);
  CHECK(m.lp.rows[r].sense == LinearProgram::Sense::Eq);
  CHECK(m.lp.rows[r].rhs == 1.0);
  CHECK(m.lp.rows[r].coeffs.size() == 2);
}

TEST_CASE("relaxation of the two-leg model picks the crossdock variant") {
  TwoLeg f(10);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);
  SimplexResult res = simplex_solve(m.lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(7900.0).epsilon(1e-9));
}

TEST_CASE("seventy parcels need two containers") {
  TwoLeg f(70);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);
  const int docked = find_variant(m, true);
  REQUIRE(docked >= 0);

  Solution good = pick_solution(m, {docked});
  const int through = m.x[static_cast<size_t>(docked)].container_arcs[0];
  CHECK(good.y[static_cast<size_t>(through)] == 2.0);  // ceil(70/40)
  CHECK(good.objective_pdmin == 70 * 790);
  ViolationReport rep = validate(m, good);
  CHECK(rep.ok());

  // One container cannot hold seventy parcels: exactly the link row trips.
  Solution bad = good;
  bad.y[static_cast<size_t>(through)] = 1.0;
  rep = validate(m, bad);
  REQUIRE(rep.items.size() == 1);
  CHECK(rep.items[0].kind == IPModel::RowKind::ContainerLink);
  CHECK(rep.items[0].subject == through);

  // Fractional counts are flagged as non-integral.
  Solution fract = good;
  fract.y[static_cast<size_t>(through)] = 1.75;
  rep = validate(m, fract);
  REQUIRE(rep.items.size() == 1);
  CHECK(rep.items[0].kind == IPModel::RowKind::ContainerLink);
  CHECK(rep.items[0].detail.find("not a nonnegative integer") != std::string::npos);
}

TEST_CASE("baseline restricts to fully sorted variants") {
  TwoLeg f(10);
  IPModel base = build_baseline_ip(f.net, f.plan, f.ks, f.set, 40);
  REQUIRE(base.x.size() == 1);
  CHECK(base.x[0].xdock_hubs.empty());
  CHECK(base.x[0].cost_pdmin == 9100);
  CHECK(base.y.size() == 2);  // single-leg container arcs only
  for (const auto& info : base.rows) CHECK(info.kind != IPModel::RowKind::CrossdockCap);

  // The baseline relaxation can never beat the containerized one.
  IPModel full = build_ip(f.net, f.plan, f.ks, f.set, 40);
  SimplexResult rb = simplex_solve(base.lp);
  SimplexResult rf = simplex_solve(full.lp);
  REQUIRE(rb.status == LpStatus::Optimal);
  REQUIRE(rf.status == LpStatus::Optimal);
  CHECK(rb.objective >= rf.objective - 1e-9);
  CHECK(rb.objective == doctest::Approx(9100.0).epsilon(1e-9));
}

TEST_CASE("validate pins every bookkeeping lie") {
  TwoLeg f(10);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);
  const int sorted = find_variant(m, false);
  const int docked = find_variant(m, true);

  SUBCASE("an honest answer is clean") {
    CHECK(validate(m, pick_solution(m, {docked})).ok());
    CHECK(validate(m, pick_solution(m, {sorted})).ok());
  }
  SUBCASE("two routes for one commodity") {
    Solution s = pick_solution(m, {docked});
    s.x[static_cast<size_t>(sorted)] = 1.0;
    // Keep counts and books consistent so only the assignment count trips.
    s.y[0] = s.y[1] = s.y[2] = 1.0;
    const auto& sv = m.x[static_cast<size_t>(sorted)];
    s.objective_pdmin += sv.cost_pdmin;
    s.totals.transport_dmin += sv.quantity * sv.transit.transport_dmin;
    s.totals.wait_dmin += sv.quantity * sv.transit.wait_dmin;
    s.totals.sort_dmin += sv.quantity * sv.transit.sort_dmin;
    s.totals.crossdock_dmin += sv.quantity * sv.transit.crossdock_dmin;
    ViolationReport rep = validate(m, s);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].kind == IPModel::RowKind::Assignment);
    CHECK(rep.items[0].detail.find("2 routes selected") != std::string::npos);
  }
  SUBCASE("fractional route choice") {
    Solution s = pick_solution(m, {docked});
    s.x[static_cast<size_t>(sorted)] = 0.5;
    s.x[static_cast<size_t>(docked)] = 0.5;
    ViolationReport rep = validate(m, s);
    CHECK_FALSE(rep.ok());
    bool flagged = false;
    for (const auto& v : rep.items)
      if (v.detail.find("not binary") != std::string::npos) flagged = true;
    CHECK(flagged);
  }
  SUBCASE("objective tampering") {
    Solution s = pick_solution(m, {docked});
    s.objective_pdmin += 1;
    ViolationReport rep = validate(m, s);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].subject == -1);
    CHECK(rep.items[0].detail.find("objective mismatch") != std::string::npos);
  }
  SUBCASE("decomposition tampering") {
    Solution s = pick_solution(m, {docked});
    s.totals.sort_dmin += 10;
    ViolationReport rep = validate(m, s);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].detail.find("stored decomposition") != std::string::npos);
  }
  SUBCASE("wrong dimensions are an error, not a violation") {
    Solution s = pick_solution(m, {docked});
    s.y.pop_back();
    CHECK_THROWS_WITH_AS(validate(m, s), doctest::Contains("dimensions"), std::runtime_error);
  }
}

TEST_CASE("build rejects inconsistent inputs") {
  TwoLeg f(10);
  SUBCASE("commodity list of the wrong shape") {
    std::vector<Commodity> two = {f.ks[0], make_commodity("k1", 0, 2, 5, 200)};
    CHECK_THROWS_WITH_AS(build_ip(f.net, f.plan, two, f.set, 40),
                         doctest::Contains("different commodity list"), std::runtime_error);
  }
  SUBCASE("container size must be positive") {
    CHECK_THROWS_WITH_AS(build_ip(f.net, f.plan, f.ks, f.set, 0),
                         doctest::Contains("container size must be >= 1"), std::runtime_error);
  }
  SUBCASE("container size disagreeing with the generated arcs") {
    CHECK_THROWS_WITH_AS(build_ip(f.net, f.plan, f.ks, f.set, 20),
                         doctest::Contains("different container size"), std::runtime_error);
  }
  SUBCASE("a commodity with no usable path") {
    PathSet empty;
    empty.paths.resize(1);
    CHECK_THROWS_WITH_AS(build_ip(f.net, f.plan, f.ks, empty, 40),
                         doctest::Contains("has no usable path"), std::runtime_error);
  }
}

TEST_CASE("lp export names the model faithfully") {
  TwoLeg f(10);
  IPModel m = build_ip(f.net, f.plan, f.ks, f.set, 40);
  std::string text = to_lp_format(m);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("Generals") != std::string::npos);
  CHECK(text.rfind("End") != std::string::npos);
  const bool names_sorted_cost = text.find("9100 x0") != std::string::npos ||
                                 text.find("9100 x1") != std::string::npos;
  CHECK(names_sorted_cost);
}

TEST_CASE("grid instance model is structurally sound") {
  Network net = build_network(tiny_grid(), LinkStructure::HS, HubStructure::Default);
  DemandPattern pat = builtin_pattern(PatternKind::Uniform, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  SizeDistribution dist;
  std::vector<Commodity> ks = sample_commodities(net, pat, 10, dist, 23);
  PlannerParams params;
  FlowOutline outline = solve_mcmcnf(net, ks, params);
  CapacityPlan plan = derive_capacities(outline, net, params);
  // Loosen the derived capacities: promise-constrained routes may diverge
  // from the planning outline, and structural checks want feasible rows.
  for (auto& h : plan.hubs) {
    h.sort_parcels_per_hour *= 4;
    h.crossdock_containers_per_hour *= 4;
  }
  for (auto& a : net.arcs) a.vehicle_capacity_parcels *= 4;
  PathLimits lim;
  std::vector<int64_t> doable;
  for (const Commodity& k : ks) doable.push_back(min_doable_dmin(net, k, plan, lim));
  assign_service_promises(ks, {{300, 0.5}, {600, 0.5}}, doable, 9);
  PathSet set = build_path_set(net, ks, plan, lim, 40);

  IPModel m = build_ip(net, plan, ks, set, 40);
  CHECK(m.lp.cols.size() == m.x.size() + m.y.size());
  CHECK(m.lp.rows.size() == m.rows.size());

  // commodity_x partitions the x columns in order.
  size_t next = 0;
  for (size_t c = 0; c < m.commodity_x.size(); ++c) {
    for (int i : m.commodity_x[c]) {
      CHECK(static_cast<size_t>(i) == next++);
      CHECK(m.x[static_cast<size_t>(i)].commodity == static_cast<int>(c));
    }
  }
  CHECK(next == m.x.size());

  // Every container arc is used by some route; references are in range.
  std::vector<int> used(m.y.size(), 0);
  for (const auto& v : m.x)
    for (int j : v.container_arcs) {
      REQUIRE(j >= 0);
      REQUIRE(static_cast<size_t>(j) < m.y.size());
      used[static_cast<size_t>(j)] = 1;
    }
  CHECK(std::count(used.begin(), used.end(), 0) == 0);

  // Relaxations: baseline never beats containerized.
  IPModel base = build_baseline_ip(net, plan, ks, set, 40);
  SimplexResult rf = simplex_solve(m.lp);
  SimplexResult rb = simplex_solve(base.lp);
  REQUIRE(rf.status == LpStatus::Optimal);
  REQUIRE(rb.status == LpStatus::Optimal);
  CHECK(rb.objective >= rf.objective - 1e-9);
}
