#include "conroute/demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "conroute/rng.hpp"

namespace conroute {

const char* to_string(DemandCategory c) {
  switch (c) {
    case DemandCategory::Intracity: return "Intracity";
    case DemandCategory::InterInbound: return "InterInbound";
    case DemandCategory::InterOutbound: return "InterOutbound";
  }
  return "?";
}

const char* to_string(PatternKind k) {
  switch (k) {
    case PatternKind::Uniform: return "Uniform";
    case PatternKind::Centric: return "Centric";
    case PatternKind::BiPolar: return "BiPolar";
  }
  return "?";
}

PatternKind pattern_from_string(const std::string& s) {
  if (s == "Uniform") return PatternKind::Uniform;
  if (s == "Centric") return PatternKind::Centric;
  if (s == "BiPolar") return PatternKind::BiPolar;
  throw std::runtime_error("unknown demand pattern: " + s);
}

const char* to_string(SizeShape s) { return s == SizeShape::Wide ? "Wide" : "Narrow"; }

void SizeDistribution::validate() const {
  if (!(min() < mode() && mode() < max()) || min() < 0)
    throw std::runtime_error("SizeDistribution: need 0 <= min < mode < max (mean too small?)");
}

namespace {

bool city_adl(int a) { return a < 4; }

}  // namespace

DemandCategory category_of(int pickup_adl, int delivery_adl) {
  if (pickup_adl < 0 || pickup_adl >= kAdlCount || delivery_adl < 0 || delivery_adl >= kAdlCount)
    throw std::runtime_error("category_of: ADL index out of range");
  if (city_adl(pickup_adl) && city_adl(delivery_adl)) return DemandCategory::Intracity;
  if (!city_adl(pickup_adl) && city_adl(delivery_adl)) return DemandCategory::InterInbound;
  if (city_adl(pickup_adl) && !city_adl(delivery_adl)) return DemandCategory::InterOutbound;
  throw std::runtime_error("category_of: hub-to-hub demand is not eligible");
}

void DemandPattern::validate() const {
  double fsum = 0;
  for (double f : category_fractions) {
    if (f < -1e-12 || f > 1 + 1e-12)
      throw std::runtime_error("DemandPattern: category fraction outside [0,1]");
    fsum += f;
  }
  if (std::abs(fsum - 1.0) > 1e-9)
    throw std::runtime_error("DemandPattern: category fractions must sum to 1");
  for (int c = 0; c < 3; ++c) {
    if (category_fractions[static_cast<size_t>(c)] == 0.0) continue;
    double po = 0, pd = 0;
    for (int a = 0; a < kAdlCount; ++a) {
      po += pickup[static_cast<size_t>(c)][static_cast<size_t>(a)];
      pd += delivery[static_cast<size_t>(c)][static_cast<size_t>(a)];
    }
    if (std::abs(po - 1.0) > 1e-9 || std::abs(pd - 1.0) > 1e-9)
      throw std::runtime_error("DemandPattern: pickup/delivery probabilities must sum to 1");
    auto cat = static_cast<DemandCategory>(c);
    for (int a = 0; a < kAdlCount; ++a) {
      bool pickup_ok = (cat == DemandCategory::InterInbound) ? !city_adl(a) : city_adl(a);
      bool delivery_ok = (cat == DemandCategory::InterOutbound) ? !city_adl(a) : city_adl(a);
      if (!pickup_ok && pickup[static_cast<size_t>(c)][static_cast<size_t>(a)] != 0.0)
        throw std::runtime_error("DemandPattern: pickup probability on ineligible ADL");
      if (!delivery_ok && delivery[static_cast<size_t>(c)][static_cast<size_t>(a)] != 0.0)
        throw std::runtime_error("DemandPattern: delivery probability on ineligible ADL");
    }
  }
}

DemandPattern builtin_pattern(PatternKind kind, const std::array<double, 3>& category_fractions) {
  DemandPattern p;
  p.kind = kind;
  p.category_fractions = category_fractions;
  const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
  const std::array<double, 4> peaked{0.79, 0.07, 0.07, 0.07};
  const std::array<double, 4> peaked_rev{0.07, 0.07, 0.07, 0.79};

  std::array<double, 4> city_pickup = uniform, city_delivery = uniform;
  if (kind == PatternKind::Centric) {
    city_pickup = peaked;
    city_delivery = peaked;
  } else if (kind == PatternKind::BiPolar) {
    city_pickup = peaked;
    city_delivery = peaked_rev;
  }

  constexpr size_t kIntra = 0, kIn = 1, kOut = 2;
  for (size_t a = 0; a < 4; ++a) {
    p.pickup[kIntra][a] = city_pickup[a];
    p.delivery[kIntra][a] = city_delivery[a];
    // Intercity demand is uniform over its eligible ADLs.
    p.pickup[kIn][a + 4] = 0.25;
    p.delivery[kIn][a] = 0.25;
    p.pickup[kOut][a] = 0.25;
    p.delivery[kOut][a + 4] = 0.25;
  }
  p.validate();
  return p;
}

std::array<std::vector<int>, kAdlCount> adl_members(const Network& net) {
  std::array<std::vector<int>, kAdlCount> out;
  for (size_t i = 0; i < net.nodes.size(); ++i) {
    const Node& n = net.nodes[i];
    if (n.kind == NodeKind::Zone)
      out[static_cast<size_t>(net.quadrant_of(static_cast<int>(i)))].push_back(
          static_cast<int>(i));
    else if (n.kind == NodeKind::RegionalHub)
      out[static_cast<size_t>(4 + net.quadrant_of(static_cast<int>(i)))].push_back(
          static_cast<int>(i));
  }
  return out;
}

CountTensor allocate_counts(int64_t n, const DemandPattern& pattern) {
  if (n <= 0) throw std::runtime_error("allocate_counts: commodity count must be positive");
  pattern.validate();
  CountTensor counts{};
  for (size_t c = 0; c < 3; ++c)
    for (size_t i = 0; i < kAdlCount; ++i)
      for (size_t j = 0; j < kAdlCount; ++j) {
        double expect = static_cast<double>(n) * pattern.category_fractions[c] *
                        pattern.pickup[c][i] * pattern.delivery[c][j];
        counts[c][i][j] = expect <= 1e-12 ? 0 : static_cast<int64_t>(std::ceil(expect - 1e-9));
      }
  return counts;
}

int64_t total_count(const CountTensor& counts) {
  int64_t total = 0;
  for (const auto& per_cat : counts)
    for (const auto& row : per_cat)
      for (int64_t v : row) total += v;
  return total;
}

std::vector<Commodity> sample_commodities(const Network& net, const DemandPattern& pattern,
                                          int64_t n, const SizeDistribution& dist, uint64_t seed) {
  dist.validate();
  CountTensor counts = allocate_counts(n, pattern);
  auto members = adl_members(net);
  Rng rng(hash_seed(seed, "demand"));
  std::vector<Commodity> out;

  for (size_t c = 0; c < 3; ++c)
    for (size_t i = 0; i < kAdlCount; ++i)
      for (size_t j = 0; j < kAdlCount; ++j) {
        int64_t cnt = counts[c][i][j];
        if (cnt == 0) continue;
        const auto& orig = members[i];
        const auto& dest = members[j];
        if (orig.empty() || dest.empty())
          throw std::runtime_error("sample_commodities: ADL has no member nodes");
        if (i == j && orig.size() < 2)
          throw std::runtime_error(
              "sample_commodities: same-ADL demand needs at least two member nodes");
        for (int64_t t = 0; t < cnt; ++t) {
          Commodity k;
          k.category = static_cast<DemandCategory>(c);
          k.origin = orig[rng.next_below(orig.size())];
          do {
            k.destination = dest[rng.next_below(dest.size())];
          } while (k.destination == k.origin);
          double draw = rng.triangular(dist.min(), dist.mode(), dist.max());
          k.quantity = std::max<int64_t>(1, std::llround(draw));
          out.push_back(std::move(k));
        }
      }

  char buf[16];
  for (size_t k = 0; k < out.size(); ++k) {
    std::snprintf(buf, sizeof buf, "k%04zu", k);
    out[k].id = buf;
  }
  return out;
}

void assign_service_promises(std::vector<Commodity>& commodities,
                             std::vector<ServicePromise> promises,
                             const std::vector<int64_t>& min_doable_dmin, uint64_t seed) {
  if (promises.empty()) throw std::runtime_error("assign_service_promises: no promises given");
  if (min_doable_dmin.size() != commodities.size())
    throw std::runtime_error("assign_service_promises: min_doable size mismatch");
  std::sort(promises.begin(), promises.end(),
            [](const ServicePromise& a, const ServicePromise& b) { return a.minutes < b.minutes; });
  double share_sum = 0;
  for (const auto& p : promises) {
    if (p.minutes <= 0 || p.share < 0)
      throw std::runtime_error("assign_service_promises: bad promise tier");
    share_sum += p.share;
  }
  if (std::abs(share_sum - 1.0) > 1e-9)
    throw std::runtime_error("assign_service_promises: promise shares must sum to 1");

  int64_t loosest = static_cast<int64_t>(promises.back().minutes) * 10;
  std::string hopeless;
  for (size_t k = 0; k < commodities.size(); ++k)
    if (min_doable_dmin[k] > loosest)
      hopeless += (hopeless.empty() ? "" : ", ") + commodities[k].id;
  if (!hopeless.empty())
    throw std::runtime_error(
        "assign_service_promises: commodities cannot meet the loosest promise: " + hopeless);

  const size_t total = commodities.size();
  Rng rng(hash_seed(seed, "promises"));
  std::vector<char> assigned(total, 0);
  for (size_t t = 0; t < promises.size(); ++t) {
    int64_t limit = static_cast<int64_t>(promises[t].minutes) * 10;
    std::vector<size_t> pool;
    for (size_t k = 0; k < total; ++k)
      if (!assigned[k] && min_doable_dmin[k] <= limit) pool.push_back(k);
    size_t want = static_cast<size_t>(std::llround(promises[t].share * static_cast<double>(total)));
    if (t + 1 == promises.size() || want >= pool.size()) {
      for (size_t k : pool) {
        commodities[k].service_promise_min = promises[t].minutes;
        assigned[k] = 1;
      }
    } else {
      rng.shuffle(pool);
      for (size_t u = 0; u < want; ++u) {
        commodities[pool[u]].service_promise_min = promises[t].minutes;
        assigned[pool[u]] = 1;
      }
    }
  }
}

}  // namespace conroute
