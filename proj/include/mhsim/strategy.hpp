#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mhsim/flow.hpp"
#include "mhsim/routing.hpp"
#include "mhsim/topology.hpp"

namespace mhsim {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

class EnumerationTooLargeError : public Error {
 public:
  using Error::Error;
};

// All num_isps^num_clients vectors in odometer order: the last client varies
// fastest and the first element is all-A.
std::vector<Strategy> enumerate_strategies(
    std::size_t num_isps, std::size_t num_clients,
    std::size_t cap = kDefaultEnumerationCap);

// Total throughput of every enumerated strategy; nullopt when infeasible.
struct StrategyScores {
  std::vector<Strategy> strategies;
  std::vector<std::optional<double>> totals;

  // Index into `strategies`; nullopt if absent or infeasible.
  std::optional<std::size_t> index_of(const Strategy& s) const;
};

StrategyScores score_strategies(const MultihomeSetup& setup,
                                const PathTable& table,
                                std::span<const double> demands,
                                std::span<const double> residuals);

struct GainReport {
  Strategy optimal_strategy;
  double optimal_total = 0.0;
  double static_total = 0.0;
  double gain = 1.0;
};

// Ratio optimal / static. Throws Error when static_total is 0.
double performance_gain(double optimal_total, double static_total);

// Argmax over feasible enumerated strategies (first in enumeration order
// wins ties). Throws Error if nothing is feasible or the static strategy is
// infeasible.
GainReport optimal_strategy(const MultihomeSetup& setup, const PathTable& table,
                            std::span<const double> demands,
                            std::span<const double> residuals);
GainReport optimal_strategy(const MultihomeSetup& setup,
                            const StrategyScores& scores);

}  // namespace mhsim
