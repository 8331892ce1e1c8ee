#include "conroute/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace conroute {

namespace {

// One faithful build serves both variants; `sorted_only` drops every variant
// that crossdocks anywhere.
IPModel build(const Network& net, const CapacityPlan& plan, const std::vector<Commodity>& ks,
              const PathSet& set, int64_t container_parcels, bool sorted_only) {
  if (ks.size() != set.paths.size())
    throw std::runtime_error("model build: path set covers a different commodity list");
  if (container_parcels < 1) throw std::runtime_error("model build: container size must be >= 1");

  IPModel m;
  m.container_parcels = container_parcels;
  m.commodity_x.resize(ks.size());

  // x columns, deduplicated per commodity by (route, partition).
  std::map<int, int> y_of_registry;
  for (size_t c = 0; c < ks.size(); ++c) {
    m.commodity_ids.push_back(ks[c].id);
    m.commodity_quantity.push_back(ks[c].quantity);
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (size_t pi = 0; pi < set.paths[c].size(); ++pi) {
      const ContainerizedPath& cp = set.paths[c][pi];
      if (sorted_only && !cp.xdock_hubs.empty()) continue;
      if (!seen.insert({cp.nodes, cp.container_arcs}).second) continue;
      IPModel::PathVar v;
      v.commodity = static_cast<int>(c);
      v.path = static_cast<int>(pi);
      v.quantity = ks[c].quantity;
      v.transit = cp.transit;
      v.cost_pdmin = ks[c].quantity * cp.transit.total_dmin();
      if (v.cost_pdmin <= 0)
        throw std::runtime_error("model build: nonpositive route cost for commodity " + ks[c].id);
      v.sort_hubs = cp.sort_hubs;
      v.xdock_hubs = cp.xdock_hubs;
      v.arcs = cp.arcs;
      for (int reg : cp.container_arcs) {
        const ContainerArc& arc = set.registry.arcs[static_cast<size_t>(reg)];
        if (arc.capacity_parcels != container_parcels)
          throw std::runtime_error("model build: container arc " + arc.id +
                                   " was generated for a different container size");
        auto it = y_of_registry.find(reg);
        if (it == y_of_registry.end())
          it = y_of_registry.emplace(reg, -1).first;  // index assigned below
        v.container_arcs.push_back(reg);              // registry index for now
        (void)it;
      }
      m.commodity_x[c].push_back(static_cast<int>(m.x.size()));
      m.x.push_back(std::move(v));
    }
    if (m.commodity_x[c].empty())
      throw std::runtime_error("model build: commodity " + ks[c].id + " has no usable path");
  }

  // y columns in registry order (deterministic), then remap paths onto them.
  for (auto& [reg, idx] : y_of_registry) {
    idx = static_cast<int>(m.y.size());
    const ContainerArc& arc = set.registry.arcs[static_cast<size_t>(reg)];
    IPModel::ContainerVar cv;
    cv.id = arc.id;
    cv.registry_index = reg;
    cv.xdock_hubs.assign(arc.hubs.begin() + 1, arc.hubs.end() - 1);
    cv.physical_arcs = arc.physical_arcs;
    m.y.push_back(std::move(cv));
  }
  for (auto& v : m.x)
    for (int& ca : v.container_arcs) ca = y_of_registry.at(ca);

  // Columns of the relaxation.
  for (const auto& v : m.x) m.lp.add_col(0.0, 1.0, static_cast<double>(v.cost_pdmin));
  for (size_t j = 0; j < m.y.size(); ++j) m.lp.add_col(0.0, kInfinity, 0.0);

  // Crossdock capacity per hub with at least one crossing container arc.
  std::map<int, std::vector<int>> xdock_users;  // hub -> y indices
  for (size_t j = 0; j < m.y.size(); ++j)
    for (int h : m.y[j].xdock_hubs) xdock_users[h].push_back(static_cast<int>(j));
  for (const auto& [hub, ys] : xdock_users) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j : ys) coeffs.push_back({m.y_col(j), 1.0});
    m.lp.add_row(coeffs, LinearProgram::Sense::Le,
                 static_cast<double>(plan.hubs[static_cast<size_t>(hub)].crossdock_containers_per_hour));
    m.rows.push_back({IPModel::RowKind::CrossdockCap, hub});
  }

  // Sort capacity per hub sorted at by some path.
  std::map<int, std::vector<int>> sort_users;  // hub -> x indices
  for (size_t i = 0; i < m.x.size(); ++i)
    for (int h : m.x[i].sort_hubs) sort_users[h].push_back(static_cast<int>(i));
  for (const auto& [hub, xs] : sort_users) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i : xs) coeffs.push_back({m.x_col(i), static_cast<double>(m.x[static_cast<size_t>(i)].quantity)});
    m.lp.add_row(coeffs, LinearProgram::Sense::Le,
                 static_cast<double>(plan.hubs[static_cast<size_t>(hub)].sort_parcels_per_hour));
    m.rows.push_back({IPModel::RowKind::SortCap, hub});
  }

  // Container counting per container arc.
  std::vector<std::vector<int>> users_of_y(m.y.size());
  for (size_t i = 0; i < m.x.size(); ++i)
    for (int j : m.x[i].container_arcs) users_of_y[static_cast<size_t>(j)].push_back(static_cast<int>(i));
  for (size_t j = 0; j < m.y.size(); ++j) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i : users_of_y[j])
      coeffs.push_back({m.x_col(i), static_cast<double>(m.x[static_cast<size_t>(i)].quantity)});
    coeffs.push_back({m.y_col(static_cast<int>(j)), -static_cast<double>(container_parcels)});
    m.lp.add_row(coeffs, LinearProgram::Sense::Le, 0.0);
    m.rows.push_back({IPModel::RowKind::ContainerLink, static_cast<int>(j)});
  }

  // Vehicle capacity per physical arc carrying container arcs.
  std::map<int, std::vector<int>> arc_users;  // physical arc -> y indices
  for (size_t j = 0; j < m.y.size(); ++j)
    for (int a : m.y[j].physical_arcs) arc_users[a].push_back(static_cast<int>(j));
  for (const auto& [arc, ys] : arc_users) {
    std::vector<std::pair<int, double>> coeffs;
    for (int j : ys) coeffs.push_back({m.y_col(j), 1.0});
    const int64_t rhs =
        m.vehicle_containers(net, arc) * plan.arcs[static_cast<size_t>(arc)].departures_per_hour;
    m.lp.add_row(coeffs, LinearProgram::Sense::Le, static_cast<double>(rhs));
    m.rows.push_back({IPModel::RowKind::VehicleCap, arc});
  }

  // One path per commodity.
  for (size_t c = 0; c < ks.size(); ++c) {
    std::vector<std::pair<int, double>> coeffs;
    for (int i : m.commodity_x[c]) coeffs.push_back({m.x_col(i), 1.0});
    m.lp.add_row(coeffs, LinearProgram::Sense::Eq, 1.0);
    m.rows.push_back({IPModel::RowKind::Assignment, static_cast<int>(c)});
  }
  return m;
}

const char* row_label(IPModel::RowKind k) {
  switch (k) {
    case IPModel::RowKind::CrossdockCap: return "crossdock capacity";
    case IPModel::RowKind::SortCap: return "sort capacity";
    case IPModel::RowKind::ContainerLink: return "container counting";
    case IPModel::RowKind::VehicleCap: return "vehicle capacity";
    case IPModel::RowKind::Assignment: return "path assignment";
  }
  return "?";
}

}  // namespace

int64_t IPModel::vehicle_containers(const Network& net, int arc) const {
  return net.arcs[static_cast<size_t>(arc)].vehicle_capacity_parcels / container_parcels;
}

IPModel build_ip(const Network& net, const CapacityPlan& plan, const std::vector<Commodity>& ks,
                 const PathSet& set, int64_t container_parcels) {
  return build(net, plan, ks, set, container_parcels, false);
}

IPModel build_baseline_ip(const Network& net, const CapacityPlan& plan,
                          const std::vector<Commodity>& ks, const PathSet& set,
                          int64_t container_parcels) {
  return build(net, plan, ks, set, container_parcels, true);
}

std::string ViolationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : items) os << row_label(v.kind) << " [" << v.subject << "]: " << v.detail << "\n";
  return os.str();
}

ViolationReport validate(const IPModel& model, const Solution& sol) {
  if (sol.x.size() != model.x.size() || sol.y.size() != model.y.size())
    throw std::runtime_error("validate: solution dimensions do not match the model");
  ViolationReport rep;
  const double tol = 1e-6;

  std::vector<int64_t> xi(sol.x.size()), yi(sol.y.size());
  for (size_t i = 0; i < sol.x.size(); ++i) {
    xi[i] = std::llround(sol.x[i]);
    if (std::fabs(sol.x[i] - static_cast<double>(xi[i])) > tol || xi[i] < 0 || xi[i] > 1) {
      rep.items.push_back({IPModel::RowKind::Assignment, model.x[i].commodity,
                           "route variable " + std::to_string(i) + " is not binary"});
      xi[i] = std::max<int64_t>(0, std::min<int64_t>(1, xi[i]));
    }
  }
  for (size_t j = 0; j < sol.y.size(); ++j) {
    yi[j] = std::llround(sol.y[j]);
    if (std::fabs(sol.y[j] - static_cast<double>(yi[j])) > tol || yi[j] < 0) {
      rep.items.push_back({IPModel::RowKind::ContainerLink, static_cast<int>(j),
                           "container count " + std::to_string(j) + " is not a nonnegative integer"});
      yi[j] = std::max<int64_t>(0, yi[j]);
    }
  }

  // Exactly one route per commodity.
  for (size_t c = 0; c < model.commodity_x.size(); ++c) {
    int64_t picked = 0;
    for (int i : model.commodity_x[c]) picked += xi[static_cast<size_t>(i)];
    if (picked != 1) {
      rep.items.push_back({IPModel::RowKind::Assignment, static_cast<int>(c),
                           "commodity " + model.commodity_ids[c] + " has " +
                               std::to_string(picked) + " routes selected"});
    }
  }

  // Every capacity row, in exact integer arithmetic from the metadata.
  for (size_t r = 0; r < model.rows.size(); ++r) {
    const IPModel::RowInfo& info = model.rows[r];
    if (info.kind == IPModel::RowKind::Assignment) continue;
    int64_t lhs = 0;
    const int64_t rhs = std::llround(model.lp.rows[r].rhs);
    switch (info.kind) {
      case IPModel::RowKind::CrossdockCap:
        for (size_t j = 0; j < model.y.size(); ++j)
          if (yi[j] &&
              std::count(model.y[j].xdock_hubs.begin(), model.y[j].xdock_hubs.end(), info.subject))
            lhs += yi[j];
        break;
      case IPModel::RowKind::SortCap:
        for (size_t i = 0; i < model.x.size(); ++i)
          if (xi[i] &&
              std::count(model.x[i].sort_hubs.begin(), model.x[i].sort_hubs.end(), info.subject))
            lhs += model.x[i].quantity;
        break;
      case IPModel::RowKind::ContainerLink: {
        for (size_t i = 0; i < model.x.size(); ++i)
          if (xi[i] && std::count(model.x[i].container_arcs.begin(),
                                  model.x[i].container_arcs.end(), info.subject))
            lhs += model.x[i].quantity;
        lhs -= model.container_parcels * yi[static_cast<size_t>(info.subject)];
        break;
      }
      case IPModel::RowKind::VehicleCap:
        for (size_t j = 0; j < model.y.size(); ++j)
          if (yi[j] && std::count(model.y[j].physical_arcs.begin(),
                                  model.y[j].physical_arcs.end(), info.subject))
            lhs += yi[j];
        break;
      case IPModel::RowKind::Assignment:
        break;
    }
    if (lhs > rhs) {
      rep.items.push_back({info.kind, info.subject,
                           std::string(row_label(info.kind)) + " exceeded: " +
                               std::to_string(lhs) + " > " + std::to_string(rhs)});
    }
  }

  // Objective and decomposition, recomputed from path metadata.
  int64_t obj = 0;
  TransitBreakdown totals;
  for (size_t i = 0; i < model.x.size(); ++i) {
    if (!xi[i]) continue;
    obj += model.x[i].cost_pdmin;
    totals.transport_dmin += model.x[i].quantity * model.x[i].transit.transport_dmin;
    totals.wait_dmin += model.x[i].quantity * model.x[i].transit.wait_dmin;
    totals.sort_dmin += model.x[i].quantity * model.x[i].transit.sort_dmin;
    totals.crossdock_dmin += model.x[i].quantity * model.x[i].transit.crossdock_dmin;
  }
  if (obj != sol.objective_pdmin) {
    rep.items.push_back({IPModel::RowKind::Assignment, -1,
                         "objective mismatch: recomputed " + std::to_string(obj) + ", stored " +
                             std::to_string(sol.objective_pdmin)});
  }
  if (totals.total_dmin() != obj) {
    rep.items.push_back({IPModel::RowKind::Assignment, -1, "decomposition does not sum to objective"});
  }
  if (totals.transport_dmin != sol.totals.transport_dmin || totals.wait_dmin != sol.totals.wait_dmin ||
      totals.sort_dmin != sol.totals.sort_dmin || totals.crossdock_dmin != sol.totals.crossdock_dmin) {
    rep.items.push_back(
        {IPModel::RowKind::Assignment, -1, "stored decomposition disagrees with path metadata"});
  }
  return rep;
}

std::string to_lp_format(const IPModel& model) {
  std::ostringstream os;
  os << "Minimize\n obj:";
  bool first = true;
  for (size_t i = 0; i < model.x.size(); ++i) {
    os << (first ? " " : " + ") << model.x[i].cost_pdmin << " x" << i;
    first = false;
  }
  os << "\nSubject To\n";
  for (size_t r = 0; r < model.lp.rows.size(); ++r) {
    const auto& row = model.lp.rows[r];
    os << " r" << r << ":";
    for (size_t t = 0; t < row.coeffs.size(); ++t) {
      const auto& [col, coef] = row.coeffs[t];
      double a = coef;
      if (t == 0) {
        os << ' ' << a;
      } else {
        os << (a < 0 ? " - " : " + ") << std::fabs(a);
      }
      if (col < static_cast<int>(model.x.size()))
        os << " x" << col;
      else
        os << " y" << (col - static_cast<int>(model.x.size()));
    }
    const char* sense = row.sense == LinearProgram::Sense::Le
                            ? "<="
                            : (row.sense == LinearProgram::Sense::Ge ? ">=" : "=");
    os << ' ' << sense << ' ' << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (size_t j = 0; j < model.y.size(); ++j) os << " y" << j << " >= 0\n";
  os << "Binaries\n";
  for (size_t i = 0; i < model.x.size(); ++i) os << " x" << i << "\n";
  os << "Generals\n";
  for (size_t j = 0; j < model.y.size(); ++j) os << " y" << j << "\n";
  os << "End\n";
  return os.str();
}

}  // namespace conroute
