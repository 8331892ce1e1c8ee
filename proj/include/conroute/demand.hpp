#ifndef CONROUTE_DEMAND_HPP
#define CONROUTE_DEMAND_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "conroute/network.hpp"

namespace conroute {

// Aggregated demand locations 0..7: 0-3 are the four city quadrants (SW, SE,
// NW, NE), 4-7 the regional hubs in the same geographic order.
constexpr int kAdlCount = 8;

enum class DemandCategory : uint8_t { Intracity, InterInbound, InterOutbound };
const char* to_string(DemandCategory c);

enum class PatternKind : uint8_t { Uniform, Centric, BiPolar };
const char* to_string(PatternKind k);
PatternKind pattern_from_string(const std::string& s);

struct DemandPattern {
  PatternKind kind = PatternKind::Uniform;
  std::array<double, 3> category_fractions{1.0 / 3, 1.0 / 3, 1.0 / 3};
  // pickup[c][i]: probability that a category-c commodity picks up at ADL i.
  std::array<std::array<double, kAdlCount>, 3> pickup{};
  std::array<std::array<double, kAdlCount>, 3> delivery{};
  void validate() const;  // throws on bad sums or ineligible placements
};

// Category implied by a pickup/delivery ADL pair; throws on an ineligible
// combination (e.g. regional hub to regional hub).
DemandCategory category_of(int pickup_adl, int delivery_adl);

DemandPattern builtin_pattern(PatternKind kind, const std::array<double, 3>& category_fractions);

// Zone/hub node indices per ADL.
std::array<std::vector<int>, kAdlCount> adl_members(const Network& net);

enum class SizeShape : uint8_t { Wide, Narrow };
const char* to_string(SizeShape s);

// Triangular commodity-size distribution around mean volume m.
struct SizeDistribution {
  double mean = 10.0;
  SizeShape shape = SizeShape::Wide;
  double min() const { return shape == SizeShape::Wide ? 1.0 : mean / 2; }
  double mode() const { return mean; }
  double max() const { return shape == SizeShape::Wide ? 2 * mean : 1.5 * mean; }
  void validate() const;
};

struct Commodity {
  std::string id;
  int origin = -1;       // node index (zone or regional hub)
  int destination = -1;  // node index
  int64_t quantity = 0;  // parcels per hour
  DemandCategory category = DemandCategory::Intracity;
  int service_promise_min = -1;  // -1 until assigned
};

// counts[c][i][j]: commodities of category c from ADL i to ADL j.
using CountTensor = std::array<std::array<std::array<int64_t, kAdlCount>, kAdlCount>, 3>;

// ceil(n * f_c * pickup * delivery) per cell; exact zero probability gives 0.
CountTensor allocate_counts(int64_t n, const DemandPattern& pattern);

int64_t total_count(const CountTensor& counts);

// Draws origin, destination and quantity for every counted commodity.
// Deterministic in (network, pattern, n, dist, seed) and independent of the
// hub layout, so all structures sharing a seed get identical commodities.
std::vector<Commodity> sample_commodities(const Network& net, const DemandPattern& pattern,
                                          int64_t n, const SizeDistribution& dist, uint64_t seed);

struct ServicePromise {
  int minutes = 0;
  double share = 0.0;
};

// Assigns promises tightest-first: each tier draws a uniform random subset of
// size round(share * total) from the commodities that can still meet it
// (min_doable <= promise); leftovers cascade, the loosest tier takes the
// rest.  min_doable_dmin[k] is commodity k's best achievable transit time in
// deciminutes.  Throws if any commodity cannot meet the loosest promise.
void assign_service_promises(std::vector<Commodity>& commodities,
                             std::vector<ServicePromise> promises,
                             const std::vector<int64_t>& min_doable_dmin, uint64_t seed);

}  // namespace conroute

#endif
