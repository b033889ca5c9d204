#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mhsim/routing.hpp"
#include "mhsim/topology.hpp"

namespace mhsim {

// Per-hour background load as a fraction of each link's capacity, with a
// deterministic per-(link, hour) multiplicative jitter drawn uniformly from
// [1 - jitter_width, 1 + jitter_width].
struct BackgroundProfile {
  std::array<double, 24> hourly_load{};
  double jitter_width = 0.0;
  std::uint64_t seed = 0;

  static BackgroundProfile constant(double load, double jitter_width,
                                    std::uint64_t seed);
  double jitter(LinkId link, int hour) const;
  // Throws ParameterError when a load falls outside [0, 1) or the width
  // is negative.
  void validate() const;
};

// max(0, capacity * (1 - hourly_load[hour] * jitter(link, hour))).
double residual_capacity(const Topology& topology, LinkId link, int hour,
                         const BackgroundProfile& profile);
std::vector<double> residual_capacities(const Topology& topology, int hour,
                                        const BackgroundProfile& profile);
std::vector<double> raw_capacities(const Topology& topology);

enum class AllocationObjective {
  kMaxTotal,    // maximize the sum of client rates
  kMaxMinFair,  // progressive filling
};

struct ThroughputSolution {
  std::vector<double> rates;  // Gbps, client order
  double total = 0.0;
  std::vector<LinkId> saturated_links;  // sorted
};

// Allocates rates to the clients' fixed paths under the strategy so that
// no link carries more than its residual and no client exceeds its demand.
// kMaxTotal returns the lexicographically greatest rate vector among the
// throughput-maximizing ones. Throws InfeasibleStrategyError.
ThroughputSolution max_throughput(
    const Strategy& strategy, const PathTable& table,
    std::span<const double> demands, std::span<const double> residuals,
    AllocationObjective objective = AllocationObjective::kMaxTotal);

struct Choke {
  LinkId link = 0;
  std::size_t position = 0;  // 0-based hop index on the client's path
  double available_gbps = 0.0;
};

struct BottleneckSet {
  std::vector<Choke> per_path;       // one per client
  std::vector<LinkId> distinct_links;  // sorted
};

// Minimum-residual link of a path among positions with known[pos] true
// (all positions when `known` is empty); the position nearest the server
// wins ties. nullopt when no position is known.
std::optional<Choke> choke_link(const Path& path,
                                std::span<const double> residuals,
                                const std::vector<bool>& known = {});

// Throws InfeasibleStrategyError.
BottleneckSet detect_bottlenecks(const Strategy& strategy,
                                 const PathTable& table,
                                 std::span<const double> residuals);

}  // namespace mhsim
