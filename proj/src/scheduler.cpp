#include "mhsim/scheduler.hpp"

#include <algorithm>

namespace mhsim {

Combination::Combination(std::uint8_t members) : members_(members) {
  if (members == 0 || members > (kE | kO | kW)) {
    throw ParameterError("combination must be a non-empty subset of {E,O,W}");
  }
}

Combination Combination::parse(std::string_view text) {
  std::uint8_t m = 0;
  for (char ch : text) {
    switch (ch) {
      case 'E': m |= kE; break;
      case 'O': m |= kO; break;
      case 'W': m |= kW; break;
      case '{': case '}': case ',': case ' ': break;
      default:
        throw ParameterError("combination: unexpected '" + std::string(1, ch) +
                             "' in '" + std::string(text) + "'");
    }
  }
  return Combination(m);
}

std::string Combination::to_string() const {
  std::string out = "{";
  auto add = [&](std::uint8_t bit, char name) {
    if (!has(bit)) return;
    if (out.size() > 1) out += ',';
    out += name;
  };
  add(kE, 'E');
  add(kO, 'O');
  add(kW, 'W');
  return out + "}";
}

std::array<Combination, 7> all_combinations() {
  using C = Combination;
  return {C(C::kE),        C(C::kO),        C(C::kW),
          C(C::kE | C::kO), C(C::kE | C::kW), C(C::kO | C::kW),
          C(C::kE | C::kO | C::kW)};
}

std::vector<StrategyParams> build_param_table(const MultihomeSetup& setup,
                                              const PathTable& table,
                                              std::span<const double> residuals,
                                              const InfoView& view) {
  std::vector<StrategyParams> out;
  for (auto& s : enumerate_strategies(setup.isp_count(), setup.client_count())) {
    if (!table.feasible(s)) continue;
    auto pv = compute_parameters(s, table, residuals, view);
    out.push_back({std::move(s), pv});
  }
  return out;
}

namespace {

// Objectives oriented so that larger is better.
struct Score {
  double w;
  double neg_o;
  double e;
};

Score score_of(const ParameterVector& p) {
  return {p.W, -static_cast<double>(p.O), static_cast<double>(p.E)};
}

bool dominates(Combination combo, const Score& a, const Score& b) {
  bool strict = false;
  auto cmp = [&](bool member, double x, double y) {
    if (!member) return true;
    if (x < y) return false;
    if (x > y) strict = true;
    return true;
  };
  return cmp(combo.has(Combination::kW), a.w, b.w) &&
         cmp(combo.has(Combination::kO), a.neg_o, b.neg_o) &&
         cmp(combo.has(Combination::kE), a.e, b.e) && strict;
}

}  // namespace

SelectionResult select_strategy(Combination combination,
                                std::span<const StrategyParams> param_table) {
  if (param_table.empty()) {
    throw SelectionError("select_strategy: empty parameter table");
  }
  std::vector<Score> scores;
  scores.reserve(param_table.size());
  for (const auto& row : param_table) scores.push_back(score_of(row.params));

  SelectionResult result;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < scores.size() && !dominated; ++j) {
      dominated = j != i && dominates(combination, scores[j], scores[i]);
    }
    if (!dominated) result.pareto.push_back(i);
  }

  auto key = [&](std::size_t i) {
    const Score& s = scores[i];
    return std::array<double, 3>{
        combination.has(Combination::kW) ? s.w : 0.0,
        combination.has(Combination::kO) ? s.neg_o : 0.0,
        combination.has(Combination::kE) ? s.e : 0.0};
  };
  std::size_t best = result.pareto.front();
  for (std::size_t i : result.pareto) {
    if (key(i) > key(best)) best = i;
  }
  result.selected = best;
  result.strategy = param_table[best].strategy;
  return result;
}

Strategy apply_default_rule(const Strategy& selected, const Strategy& fallback,
                            std::span<const std::size_t> known_clients) {
  if (selected.size() != fallback.size()) {
    throw ParameterError("default rule and selection differ in length");
  }
  Strategy out = fallback;
  for (std::size_t c : known_clients) {
    if (c >= out.size()) throw ParameterError("known client out of range");
    out.assignment()[c] = selected.assignment()[c];
  }
  return out;
}

ParamGain param_performance_gain(Combination combination,
                                 const MultihomeSetup& setup,
                                 const StrategyScores& scores,
                                 std::span<const StrategyParams> param_table,
                                 const InfoView& view) {
  ParamGain out;
  out.selection = select_strategy(combination, param_table);
  out.applied = apply_default_rule(out.selection.strategy,
                                   setup.static_strategy, view.known_clients);
  const auto static_idx = scores.index_of(setup.static_strategy);
  if (!static_idx) {
    throw InfeasibleStrategyError("static strategy " +
                                  setup.static_strategy.to_string() +
                                  " is infeasible");
  }
  const auto applied_idx = scores.index_of(out.applied);
  if (!applied_idx) {
    throw InfeasibleStrategyError("applied strategy has no score");
  }
  out.static_total = *scores.totals[*static_idx];
  out.selected_total = *scores.totals[*applied_idx];
  out.gain = performance_gain(out.selected_total, out.static_total);
  return out;
}

ParamGain param_performance_gain(Combination combination,
                                 const MultihomeSetup& setup,
                                 const PathTable& table,
                                 std::span<const double> demands,
                                 std::span<const double> residuals,
                                 const InfoView& view) {
  if (!table.feasible(setup.static_strategy)) {
    throw InfeasibleStrategyError("static strategy " +
                                  setup.static_strategy.to_string() +
                                  " is infeasible");
  }
  const auto params = build_param_table(setup, table, residuals, view);
  ParamGain out;
  out.selection = select_strategy(combination, params);
  out.applied = apply_default_rule(out.selection.strategy,
                                   setup.static_strategy, view.known_clients);
  out.static_total =
      max_throughput(setup.static_strategy, table, demands, residuals).total;
  out.selected_total =
      max_throughput(out.applied, table, demands, residuals).total;
  out.gain = performance_gain(out.selected_total, out.static_total);
  return out;
}

}  // namespace mhsim
