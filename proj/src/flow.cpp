#include "mhsim/flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mhsim/lp.hpp"
#include "mhsim/rng.hpp"

namespace mhsim {

BackgroundProfile BackgroundProfile::constant(double load, double jitter_width,
                                              std::uint64_t seed) {
  BackgroundProfile p;
  p.hourly_load.fill(load);
  p.jitter_width = jitter_width;
  p.seed = seed;
  p.validate();
  return p;
}

double BackgroundProfile::jitter(LinkId link, int hour) const {
  if (jitter_width == 0.0) return 1.0;
  const auto bits = derive_seed(seed, link, static_cast<std::uint64_t>(hour));
  return 1.0 + jitter_width * (2.0 * unit_uniform(bits) - 1.0);
}

void BackgroundProfile::validate() const {
  for (double v : hourly_load) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw ParameterError("profile: hourly_load values must be in [0, 1)");
    }
  }
  if (!(jitter_width >= 0.0)) {
    throw ParameterError("profile: jitter width must be >= 0");
  }
}

double residual_capacity(const Topology& topology, LinkId link, int hour,
                         const BackgroundProfile& profile) {
  if (hour < 0 || hour > 23) throw ParameterError("hour must be in 0..23");
  const double cap = topology.link(link).capacity_gbps;
  const double load = profile.hourly_load[static_cast<std::size_t>(hour)];
  return std::max(0.0, cap * (1.0 - load * profile.jitter(link, hour)));
}

std::vector<double> residual_capacities(const Topology& topology, int hour,
                                        const BackgroundProfile& profile) {
  std::vector<double> out(topology.link_count());
  for (LinkId l = 0; l < topology.link_count(); ++l) {
    out[l] = residual_capacity(topology, l, hour, profile);
  }
  return out;
}

std::vector<double> raw_capacities(const Topology& topology) {
  std::vector<double> out;
  out.reserve(topology.link_count());
  for (const Link& l : topology.links()) out.push_back(l.capacity_gbps);
  return out;
}

namespace {

// One capacity row per distinct set of clients sharing a link; only the
// tightest link of each set constrains the allocation.
struct SharedConstraint {
  std::uint64_t clients = 0;  // bitmask
  double capacity = 0.0;
};

struct Instance {
  std::vector<const Path*> paths;
  std::vector<SharedConstraint> rows;
};

Instance build_instance(const Strategy& strategy, const PathTable& table,
                        std::span<const double> residuals) {
  const std::size_t n = table.client_count();
  if (n > 64) throw ParameterError("max_throughput: at most 64 clients");
  Instance inst;
  std::map<LinkId, std::uint64_t> users;
  for (std::size_t c = 0; c < n; ++c) {
    const Path& p = table.selected(strategy, c);
    inst.paths.push_back(&p);
    for (LinkId l : p.links) users[l] |= std::uint64_t{1} << c;
  }
  std::map<std::uint64_t, double> tightest;
  for (const auto& [link, mask] : users) {
    if (link >= residuals.size()) {
      throw ParameterError("max_throughput: residual vector too short");
    }
    const double r = std::max(0.0, residuals[link]);
    auto [it, fresh] = tightest.emplace(mask, r);
    if (!fresh) it->second = std::min(it->second, r);
  }
  for (const auto& [mask, cap] : tightest) inst.rows.push_back({mask, cap});
  return inst;
}

// maximize sum_{c in free} weight_c x_c with x fixed for clients < first.
lp::Problem stage_problem(const Instance& inst, std::span<const double> demands,
                          const std::vector<double>& fixed, std::size_t first,
                          const std::vector<double>& weight,
                          double min_total) {
  const std::size_t n = inst.paths.size();
  const std::size_t vars = n - first;
  lp::Problem prob;
  prob.objective.assign(weight.begin() + static_cast<long>(first), weight.end());
  for (const auto& row : inst.rows) {
    double cap = row.capacity;
    std::vector<double> coeff(vars, 0.0);
    bool any = false;
    for (std::size_t c = 0; c < n; ++c) {
      if ((row.clients >> c & 1U) == 0) continue;
      if (c < first) {
        cap -= fixed[c];
      } else {
        coeff[c - first] = 1.0;
        any = true;
      }
    }
    if (!any) continue;
    prob.rows.push_back(std::move(coeff));
    prob.rhs.push_back(std::max(0.0, cap));
  }
  for (std::size_t c = first; c < n; ++c) {
    if (!std::isfinite(demands[c])) continue;
    std::vector<double> coeff(vars, 0.0);
    coeff[c - first] = 1.0;
    prob.rows.push_back(std::move(coeff));
    prob.rhs.push_back(demands[c]);
  }
  if (min_total > 0.0) {
    prob.rows.emplace_back(vars, -1.0);
    prob.rhs.push_back(-min_total);
  }
  return prob;
}

std::vector<double> lexmax_total(const Instance& inst,
                                 std::span<const double> demands) {
  const std::size_t n = inst.paths.size();
  std::vector<double> ones(n, 1.0);
  std::vector<double> fixed(n, 0.0);
  const auto best = lp::solve(stage_problem(inst, demands, fixed, 0, ones, 0.0));
  if (best.status != lp::Status::kOptimal) {
    throw Error("max_throughput: allocation LP did not reach an optimum");
  }
  const double target = best.value;
  const double slack = 1e-9 * std::max(1.0, target);
  std::vector<double> fallback = best.x;
  double assigned = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> weight(n, 0.0);
    weight[i] = 1.0;
    const double need = target - assigned - slack * static_cast<double>(i + 1);
    const auto sol =
        lp::solve(stage_problem(inst, demands, fixed, i, weight, need));
    if (sol.status != lp::Status::kOptimal) {
      // Round-off made the remaining target unreachable; keep the last
      // optimal completion.
      for (std::size_t c = i; c < n; ++c) fixed[c] = fallback[c - i];
      break;
    }
    fixed[i] = sol.x[0];
    assigned += fixed[i];
    fallback.assign(sol.x.begin() + 1, sol.x.end());
  }
  return fixed;
}

std::vector<double> max_min_fair(const Instance& inst,
                                 std::span<const double> demands) {
  const std::size_t n = inst.paths.size();
  std::vector<double> rate(n, 0.0);
  std::vector<bool> active(n, true);
  for (std::size_t c = 0; c < n; ++c) active[c] = demands[c] > 0.0;
  for (;;) {
    double step = kUnbounded;
    for (const auto& row : inst.rows) {
      double load = 0.0;
      std::size_t count = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if ((row.clients >> c & 1U) == 0) continue;
        load += rate[c];
        count += active[c] ? 1 : 0;
      }
      if (count > 0) {
        step = std::min(step, std::max(0.0, row.capacity - load) /
                                  static_cast<double>(count));
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (active[c]) step = std::min(step, demands[c] - rate[c]);
    }
    if (!std::isfinite(step)) break;
    for (std::size_t c = 0; c < n; ++c) {
      if (active[c]) rate[c] += step;
    }
    bool any_active = false;
    for (const auto& row : inst.rows) {
      double load = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (row.clients >> c & 1U) load += rate[c];
      }
      if (load >= row.capacity - 1e-12) {
        for (std::size_t c = 0; c < n; ++c) {
          if (row.clients >> c & 1U) active[c] = false;
        }
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (active[c] && rate[c] >= demands[c] - 1e-12) active[c] = false;
      any_active = any_active || active[c];
    }
    if (!any_active) break;
  }
  return rate;
}

}  // namespace

ThroughputSolution max_throughput(const Strategy& strategy,
                                  const PathTable& table,
                                  std::span<const double> demands,
                                  std::span<const double> residuals,
                                  AllocationObjective objective) {
  if (demands.size() != table.client_count()) {
    throw ParameterError("max_throughput: one demand per client required");
  }
  const Instance inst = build_instance(strategy, table, residuals);
  ThroughputSolution sol;
  sol.rates = objective == AllocationObjective::kMaxTotal
                  ? lexmax_total(inst, demands)
                  : max_min_fair(inst, demands);
  for (double& r : sol.rates) r = std::max(0.0, r);
  for (double r : sol.rates) sol.total += r;

  std::map<LinkId, double> load;
  for (std::size_t c = 0; c < inst.paths.size(); ++c) {
    for (LinkId l : inst.paths[c]->links) load[l] += sol.rates[c];
  }
  for (const auto& [link, used] : load) {
    if (used >= residuals[link] - 1e-9) sol.saturated_links.push_back(link);
  }
  return sol;
}

std::optional<Choke> choke_link(const Path& path,
                                std::span<const double> residuals,
                                const std::vector<bool>& known) {
  std::optional<Choke> best;
  for (std::size_t pos = 0; pos < path.links.size(); ++pos) {
    if (!known.empty() && !known[pos]) continue;
    const LinkId l = path.links[pos];
    const double r = residuals[l];
    if (!best || r < best->available_gbps) best = Choke{l, pos, r};
  }
  return best;
}

BottleneckSet detect_bottlenecks(const Strategy& strategy,
                                 const PathTable& table,
                                 std::span<const double> residuals) {
  BottleneckSet out;
  for (std::size_t c = 0; c < table.client_count(); ++c) {
    const Path& p = table.selected(strategy, c);
    out.per_path.push_back(*choke_link(p, residuals));
    out.distinct_links.push_back(out.per_path.back().link);
  }
  std::sort(out.distinct_links.begin(), out.distinct_links.end());
  out.distinct_links.erase(
      std::unique(out.distinct_links.begin(), out.distinct_links.end()),
      out.distinct_links.end());
  return out;
}

}  // namespace mhsim
