#include "mhsim/strategy.hpp"

#include <algorithm>

namespace mhsim {

Strategy Strategy::parse(std::string_view letters) {
  std::vector<std::uint8_t> out;
  out.reserve(letters.size());
  for (char ch : letters) {
    if (ch < 'A' || ch > 'Z') {
      throw ParameterError("strategy: expected letters A-Z, got '" +
                           std::string(letters) + "'");
    }
    out.push_back(static_cast<std::uint8_t>(ch - 'A'));
  }
  if (out.empty()) throw ParameterError("strategy: empty");
  return Strategy(std::move(out));
}

Strategy Strategy::parse(std::string_view letters, std::size_t num_isps,
                         std::size_t num_clients) {
  Strategy s = parse(letters);
  if (s.size() != num_clients) {
    throw ParameterError("strategy '" + std::string(letters) + "' has " +
                         std::to_string(s.size()) + " entries, expected " +
                         std::to_string(num_clients));
  }
  for (auto isp : s.assignment()) {
    if (isp >= num_isps) {
      throw ParameterError("strategy '" + std::string(letters) +
                           "' names an ISP beyond " +
                           std::string(1, static_cast<char>('A' + num_isps - 1)));
    }
  }
  return s;
}

std::string Strategy::to_string() const {
  std::string out;
  out.reserve(assignment_.size());
  for (auto isp : assignment_) out.push_back(static_cast<char>('A' + isp));
  return out;
}

Strategy balanced_strategy(std::size_t num_isps, std::size_t num_clients) {
  if (num_isps == 0 || num_isps > 26) {
    throw ParameterError("strategy: ISP count must be in 1..26");
  }
  std::vector<std::uint8_t> v(num_clients);
  for (std::size_t i = 0; i < num_clients; ++i) {
    v[i] = static_cast<std::uint8_t>(i * num_isps / num_clients);
  }
  return Strategy(std::move(v));
}

std::vector<Strategy> enumerate_strategies(std::size_t num_isps,
                                           std::size_t num_clients,
                                           std::size_t cap) {
  if (num_isps < 1 || num_clients < 1) {
    throw ParameterError("enumerate: need at least one ISP and one client");
  }
  if (num_isps > 26) throw ParameterError("enumerate: at most 26 ISPs");
  std::size_t count = 1;
  for (std::size_t i = 0; i < num_clients; ++i) {
    if (count > cap / num_isps) {
      throw EnumerationTooLargeError(
          "enumerate: " + std::to_string(num_isps) + "^" +
          std::to_string(num_clients) + " strategies exceed the cap of " +
          std::to_string(cap));
    }
    count *= num_isps;
  }
  std::vector<Strategy> out;
  out.reserve(count);
  std::vector<std::uint8_t> digits(num_clients, 0);
  for (std::size_t k = 0; k < count; ++k) {
    out.emplace_back(digits);
    for (std::size_t pos = num_clients; pos-- > 0;) {
      if (++digits[pos] < num_isps) break;
      digits[pos] = 0;
    }
  }
  return out;
}

std::optional<std::size_t> StrategyScores::index_of(const Strategy& s) const {
  // Odometer order makes the index the base-|F| value of the vector, but
  // the list may have been filtered, so search.
  auto it = std::find(strategies.begin(), strategies.end(), s);
  if (it == strategies.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - strategies.begin());
  if (!totals[idx]) return std::nullopt;
  return idx;
}

StrategyScores score_strategies(const MultihomeSetup& setup,
                                const PathTable& table,
                                std::span<const double> demands,
                                std::span<const double> residuals) {
  StrategyScores scores;
  scores.strategies =
      enumerate_strategies(setup.isp_count(), setup.client_count());
  scores.totals.reserve(scores.strategies.size());
  for (const auto& s : scores.strategies) {
    if (!table.feasible(s)) {
      scores.totals.emplace_back();
      continue;
    }
    scores.totals.emplace_back(
        max_throughput(s, table, demands, residuals).total);
  }
  return scores;
}

double performance_gain(double optimal_total, double static_total) {
  if (!(static_total > 0.0)) {
    throw Error("performance gain undefined: static throughput is 0");
  }
  return optimal_total / static_total;
}

GainReport optimal_strategy(const MultihomeSetup& setup,
                            const StrategyScores& scores) {
  const auto static_idx = scores.index_of(setup.static_strategy);
  if (!static_idx) {
    throw InfeasibleStrategyError("static strategy " +
                                  setup.static_strategy.to_string() +
                                  " is infeasible");
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scores.totals.size(); ++i) {
    if (!scores.totals[i]) continue;
    // Round-off between equivalent allocations must not break the
    // enumeration-order tie rule.
    if (!best) {
      best = i;
    } else {
      const double incumbent = *scores.totals[*best];
      if (*scores.totals[i] > incumbent + 1e-9 * std::max(1.0, incumbent)) {
        best = i;
      }
    }
  }
  if (!best) throw InfeasibleStrategyError("no feasible strategy");
  GainReport report;
  report.optimal_strategy = scores.strategies[*best];
  report.optimal_total = *scores.totals[*best];
  report.static_total = *scores.totals[*static_idx];
  report.gain = performance_gain(report.optimal_total, report.static_total);
  // The static strategy is in the enumeration, so a ratio below 1 can only
  // be tie-tolerance round-off.
  report.gain = std::max(report.gain, 1.0);
  return report;
}

GainReport optimal_strategy(const MultihomeSetup& setup, const PathTable& table,
                            std::span<const double> demands,
                            std::span<const double> residuals) {
  if (!table.feasible(setup.static_strategy)) {
    throw InfeasibleStrategyError("static strategy " +
                                  setup.static_strategy.to_string() +
                                  " is infeasible");
  }
  return optimal_strategy(setup,
                          score_strategies(setup, table, demands, residuals));
}

}  // namespace mhsim
