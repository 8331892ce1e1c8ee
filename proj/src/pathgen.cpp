#include "conroute/pathgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace conroute {

namespace {

constexpr int64_t kFar = std::numeric_limits<int64_t>::max() / 4;

// Transport plus wait, in deciminutes, for an arc the plan services.
int64_t arc_len_dmin(const Network& net, const CapacityPlan& plan, int a) {
  return to_dmin(net.arcs[static_cast<size_t>(a)].transport_time_min) +
         plan.arcs[static_cast<size_t>(a)].wait_dmin;
}

bool is_hub(const Network& net, int n) {
  return net.nodes[static_cast<size_t>(n)].kind != NodeKind::Zone;
}

// A physical arc may appear on a path for commodity (o, d) iff the plan
// services it, its head is an intermediate-eligible hub or the destination,
// and its tail is a hub or the origin.  Zones other than the endpoints can
// never lie on a path, the origin is never re-entered, and the destination is
// never left.
bool arc_usable(const Network& net, const CapacityPlan& plan, int a, int origin, int dest) {
  const PhysicalArc& arc = net.arcs[static_cast<size_t>(a)];
  if (plan.arcs[static_cast<size_t>(a)].departures_per_hour <= 0) return false;
  if (arc.head == origin || arc.tail == dest) return false;
  if (arc.head != dest && !is_hub(net, arc.head)) return false;
  if (arc.tail != origin && !is_hub(net, arc.tail)) return false;
  return true;
}

// Shortest admissible length via a hop-bounded relaxation.  Walk minima equal
// simple-path minima here (positive lengths), and capping at max_arcs keeps
// the reference consistent with what enumeration may return.
int64_t shortest_len_dmin(const Network& net, const CapacityPlan& plan, const Commodity& k,
                          int max_arcs) {
  const size_t n = net.nodes.size();
  std::vector<int64_t> dist(n, kFar), next(n, kFar);
  dist[static_cast<size_t>(k.origin)] = 0;
  int64_t best = kFar;
  for (int hop = 1; hop <= max_arcs; ++hop) {
    next = dist;
    bool changed = false;
    for (size_t a = 0; a < net.arcs.size(); ++a) {
      if (!arc_usable(net, plan, static_cast<int>(a), k.origin, k.destination)) continue;
      const PhysicalArc& arc = net.arcs[a];
      int64_t from = dist[static_cast<size_t>(arc.tail)];
      if (from >= kFar) continue;
      int64_t cand = from + arc_len_dmin(net, plan, static_cast<int>(a));
      if (cand < next[static_cast<size_t>(arc.head)]) {
        next[static_cast<size_t>(arc.head)] = cand;
        changed = true;
      }
    }
    dist.swap(next);
    best = std::min(best, dist[static_cast<size_t>(k.destination)]);
    if (!changed) break;
  }
  return best;
}

// Exact distance-to-destination over admissible arcs, used as an admissible
// pruning bound during enumeration (it ignores the hop cap, so it never
// overestimates).
std::vector<int64_t> bound_to_destination(const Network& net, const CapacityPlan& plan,
                                          const Commodity& k) {
  const size_t n = net.nodes.size();
  std::vector<int64_t> dist(n, kFar);
  dist[static_cast<size_t>(k.destination)] = 0;
  using Item = std::pair<int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0, k.destination});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<size_t>(v)]) continue;
    for (int a : net.in_arcs[static_cast<size_t>(v)]) {
      if (!arc_usable(net, plan, a, k.origin, k.destination)) continue;
      int t = net.arcs[static_cast<size_t>(a)].tail;
      int64_t cand = d + arc_len_dmin(net, plan, a);
      if (cand < dist[static_cast<size_t>(t)]) {
        dist[static_cast<size_t>(t)] = cand;
        heap.push({cand, t});
      }
    }
  }
  return dist;
}

bool id_sequence_less(const Network& net, const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [&](int x, int y) { return net.nodes[static_cast<size_t>(x)].id < net.nodes[static_cast<size_t>(y)].id; });
}

}  // namespace

int64_t to_dmin(double minutes) { return std::llround(10.0 * minutes); }

void PathLimits::validate() const {
  if (max_intermediate < 0) throw std::runtime_error("path limits: max_intermediate must be >= 0");
  if (!(max_deviation >= 0.0)) throw std::runtime_error("path limits: max_deviation must be >= 0");
  if (max_paths < 1) throw std::runtime_error("path limits: max_paths must be >= 1");
  if (max_xdock_per_arc < 0)
    throw std::runtime_error("path limits: max_xdock_per_arc must be >= 0");
}

std::vector<PhysicalPath> enumerate_physical_paths(const Network& net, const Commodity& k,
                                                   const CapacityPlan& plan,
                                                   const PathLimits& limits) {
  limits.validate();
  if (k.origin == k.destination)
    throw std::runtime_error("path enumeration: commodity " + k.id + " has identical endpoints");
  const int max_arcs = limits.max_intermediate + 1;
  const int64_t shortest = shortest_len_dmin(net, plan, k, max_arcs);
  if (shortest >= kFar) {
    throw std::runtime_error("path enumeration: commodity " + k.id + " has no route from " +
                             net.nodes[static_cast<size_t>(k.origin)].id + " to " +
                             net.nodes[static_cast<size_t>(k.destination)].id);
  }
  const long double slack = (1.0L + static_cast<long double>(limits.max_deviation)) *
                            static_cast<long double>(shortest) * (1.0L + 1e-12L);
  const int64_t bound = static_cast<int64_t>(floorl(slack));
  const std::vector<int64_t> to_dest = bound_to_destination(net, plan, k);

  std::vector<PhysicalPath> found;
  std::vector<char> visited(net.nodes.size(), 0);
  std::vector<int> nodes = {k.origin};
  std::vector<int> arcs;
  visited[static_cast<size_t>(k.origin)] = 1;

  std::function<void(int, int64_t)> walk = [&](int v, int64_t g) {
    if (v == k.destination) {
      PhysicalPath p;
      p.commodity = k.id;
      p.nodes = nodes;
      p.arcs = arcs;
      p.length_dmin = g;
      found.push_back(std::move(p));
      return;
    }
    if (static_cast<int>(arcs.size()) == max_arcs) return;
    for (int a : net.out_arcs[static_cast<size_t>(v)]) {
      if (!arc_usable(net, plan, a, k.origin, k.destination)) continue;
      int h = net.arcs[static_cast<size_t>(a)].head;
      if (visited[static_cast<size_t>(h)]) continue;
      int64_t g2 = g + arc_len_dmin(net, plan, a);
      if (to_dest[static_cast<size_t>(h)] >= kFar || g2 + to_dest[static_cast<size_t>(h)] > bound)
        continue;
      visited[static_cast<size_t>(h)] = 1;
      nodes.push_back(h);
      arcs.push_back(a);
      walk(h, g2);
      arcs.pop_back();
      nodes.pop_back();
      visited[static_cast<size_t>(h)] = 0;
    }
  };
  walk(k.origin, 0);

  std::sort(found.begin(), found.end(), [&](const PhysicalPath& a, const PhysicalPath& b) {
    if (a.length_dmin != b.length_dmin) return a.length_dmin < b.length_dmin;
    return id_sequence_less(net, a.nodes, b.nodes);
  });
  if (static_cast<int>(found.size()) > limits.max_paths)
    found.resize(static_cast<size_t>(limits.max_paths));
  return found;
}

int ContainerArcRegistry::intern(const Network& net, const std::vector<int>& hub_seq,
                                 const std::vector<int>& physical_arcs,
                                 int64_t capacity_parcels) {
  auto it = by_hub_seq.find(hub_seq);
  if (it != by_hub_seq.end()) return it->second;
  ContainerArc arc;
  for (size_t i = 0; i < hub_seq.size(); ++i) {
    if (i) arc.id += '>';
    arc.id += net.nodes[static_cast<size_t>(hub_seq[i])].id;
  }
  arc.hubs = hub_seq;
  arc.physical_arcs = physical_arcs;
  arc.capacity_parcels = capacity_parcels;
  int index = static_cast<int>(arcs.size());
  arcs.push_back(std::move(arc));
  by_hub_seq.emplace(hub_seq, index);
  return index;
}

std::vector<ContainerizedPath> generate_container_paths(const PhysicalPath& p,
                                                        int max_xdock_per_arc,
                                                        int64_t capacity_parcels,
                                                        const Network& net,
                                                        ContainerArcRegistry& registry) {
  if (max_xdock_per_arc < 0)
    throw std::runtime_error("container path generation: max_xdock_per_arc must be >= 0");
  const int S = static_cast<int>(p.arcs.size());
  std::vector<ContainerizedPath> out;
  if (S == 0) return out;

  std::vector<int> joints;       // partition points into p.nodes, ascending
  std::vector<int> arc_indices;  // interned container arcs, parallel to joints

  auto record = [&]() {
    ContainerizedPath cp;
    cp.commodity = p.commodity;
    cp.nodes = p.nodes;
    cp.arcs = p.arcs;
    cp.container_arcs = arc_indices;
    std::vector<char> joint(p.nodes.size(), 0);
    for (int j : joints) joint[static_cast<size_t>(j)] = 1;
    for (int i = 1; i < S; ++i) {
      if (joint[static_cast<size_t>(i)])
        cp.sort_hubs.push_back(p.nodes[static_cast<size_t>(i)]);
      else
        cp.xdock_hubs.push_back(p.nodes[static_cast<size_t>(i)]);
    }
    out.push_back(std::move(cp));
  };

  std::function<void(int)> expand = [&](int i) {
    const int hi = std::min(i + max_xdock_per_arc + 1, S);
    for (int j = i + 1; j <= hi; ++j) {
      std::vector<int> hub_seq(p.nodes.begin() + i, p.nodes.begin() + j + 1);
      std::vector<int> chain(p.arcs.begin() + i, p.arcs.begin() + j);
      arc_indices.push_back(registry.intern(net, hub_seq, chain, capacity_parcels));
      joints.push_back(j);
      if (j == S)
        record();
      else
        expand(j);
      joints.pop_back();
      arc_indices.pop_back();
    }
  };
  expand(0);
  return out;
}

TransitBreakdown transit_time(const ContainerizedPath& cp, const Network& net,
                              const CapacityPlan& plan) {
  TransitBreakdown t;
  for (int a : cp.arcs) {
    if (plan.arcs[static_cast<size_t>(a)].departures_per_hour <= 0) {
      throw std::runtime_error("transit time: arc " + net.arcs[static_cast<size_t>(a)].id +
                               " has no departures in the capacity plan");
    }
    t.transport_dmin += to_dmin(net.arcs[static_cast<size_t>(a)].transport_time_min);
    t.wait_dmin += plan.arcs[static_cast<size_t>(a)].wait_dmin;
  }
  for (int h : cp.sort_hubs) t.sort_dmin += to_dmin(net.nodes[static_cast<size_t>(h)].sort_time_min);
  for (int h : cp.xdock_hubs)
    t.crossdock_dmin += to_dmin(net.nodes[static_cast<size_t>(h)].crossdock_time_min);
  return t;
}

std::vector<ContainerizedPath> filter_feasible(std::vector<ContainerizedPath> paths,
                                               const Commodity& k) {
  if (k.service_promise_min < 0)
    throw std::runtime_error("feasibility filter: commodity " + k.id + " has no service promise");
  const int64_t promise_dmin = static_cast<int64_t>(k.service_promise_min) * 10;
  std::vector<ContainerizedPath> kept;
  for (auto& p : paths)
    if (p.transit.total_dmin() <= promise_dmin) kept.push_back(std::move(p));
  if (kept.empty()) {
    throw std::runtime_error("feasibility filter: commodity " + k.id +
                             " has no path meeting its service promise");
  }
  return kept;
}

int64_t min_doable_dmin(const Network& net, const Commodity& k, const CapacityPlan& plan,
                        const PathLimits& limits) {
  std::vector<PhysicalPath> paths = enumerate_physical_paths(net, k, plan, limits);
  const PhysicalPath& shortest = paths.front();
  int64_t t = shortest.length_dmin;
  for (size_t i = 1; i + 1 < shortest.nodes.size(); ++i)
    t += to_dmin(net.nodes[static_cast<size_t>(shortest.nodes[i])].sort_time_min);
  return t;
}

PathSet build_path_set(const Network& net, const std::vector<Commodity>& ks,
                       const CapacityPlan& plan, const PathLimits& limits,
                       int64_t container_parcels) {
  limits.validate();
  PathSet set;
  set.paths.resize(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    std::vector<ContainerizedPath> variants;
    for (const PhysicalPath& p : enumerate_physical_paths(net, ks[i], plan, limits)) {
      std::vector<ContainerizedPath> expanded = generate_container_paths(
          p, limits.max_xdock_per_arc, container_parcels, net, set.registry);
      for (auto& cp : expanded) {
        cp.transit = transit_time(cp, net, plan);
        variants.push_back(std::move(cp));
      }
    }
    set.paths[i] = filter_feasible(std::move(variants), ks[i]);
  }
  return set;
}

}  // namespace conroute
