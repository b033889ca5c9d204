#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mhsim/parameters.hpp"
#include "mhsim/strategy.hpp"

namespace mhsim {

class SelectionError : public Error {
 public:
  using Error::Error;
};

// Non-empty subset of {E, O, W}. E and W are maximized, O minimized.
class Combination {
 public:
  static constexpr std::uint8_t kE = 1;
  static constexpr std::uint8_t kO = 2;
  static constexpr std::uint8_t kW = 4;

  explicit Combination(std::uint8_t members);
  // Letters from "EOW" in any order, e.g. "EW"; also accepts "{E,O,W}".
  static Combination parse(std::string_view text);

  bool has(std::uint8_t member) const { return (members_ & member) != 0; }
  std::uint8_t members() const { return members_; }
  std::string to_string() const;  // "{E,O,W}" style

  friend bool operator==(Combination, Combination) = default;

 private:
  std::uint8_t members_;
};

// The seven non-empty subsets: {E},{O},{W},{E,O},{E,W},{O,W},{E,O,W}.
std::array<Combination, 7> all_combinations();

struct StrategyParams {
  Strategy strategy;
  ParameterVector params;
};

// Parameter vectors of every feasible enumerated strategy, in enumeration
// order, computed under `view`.
std::vector<StrategyParams> build_param_table(const MultihomeSetup& setup,
                                              const PathTable& table,
                                              std::span<const double> residuals,
                                              const InfoView& view);

struct SelectionResult {
  std::size_t selected = 0;         // index into the parameter table
  Strategy strategy;                // the selected strategy
  std::vector<std::size_t> pareto;  // indices, ascending
};

// Pareto-non-dominated entries under the combination, then W desc, O asc,
// E desc (members only), then lowest index. Throws SelectionError on an
// empty table.
SelectionResult select_strategy(Combination combination,
                                std::span<const StrategyParams> param_table);

// Known clients take their entry from `selected`; every other client keeps
// its `fallback` (default rule) entry.
Strategy apply_default_rule(const Strategy& selected, const Strategy& fallback,
                            std::span<const std::size_t> known_clients);

struct ParamGain {
  SelectionResult selection;
  Strategy applied;  // selection on known clients, static vector elsewhere
  double selected_total = 0.0;
  double static_total = 0.0;
  double gain = 1.0;  // selected_total / static_total
};

// Gain of the strategy the heuristic picks (unknown clients on the static
// vector), using true throughput on the full network.
ParamGain param_performance_gain(Combination combination,
                                 const MultihomeSetup& setup,
                                 const PathTable& table,
                                 std::span<const double> demands,
                                 std::span<const double> residuals,
                                 const InfoView& view);

// Same, reusing already-scored throughputs and a parameter table built
// under `view`.
ParamGain param_performance_gain(Combination combination,
                                 const MultihomeSetup& setup,
                                 const StrategyScores& scores,
                                 std::span<const StrategyParams> param_table,
                                 const InfoView& view);

}  // namespace mhsim
