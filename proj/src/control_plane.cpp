#include "mhsim/control_plane.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

namespace mhsim {

std::array<bool, 24> ControlPlaneConfig::default_peak_hours() {
  std::array<bool, 24> peak{};
  for (int h = 18; h < 24; ++h) peak[static_cast<std::size_t>(h)] = true;
  return peak;
}

void ControlPlaneConfig::validate() const {
  if (topo_probe_minute < 0 || topo_probe_minute >= 24 * 60) {
    throw ParameterError("control plane: topo_probe_minute must be in [0, 1440)");
  }
  if (offpeak_period_min <= 0 || peak_period_min <= 0) {
    throw ParameterError("control plane: probe periods must be > 0");
  }
  if (!(sampler_probability >= 0.0 && sampler_probability <= 1.0)) {
    throw ParameterError("control plane: sampler_probability must be in [0, 1]");
  }
  if (probe_bytes < 0.0 || probe_seconds < 0.0 || probes_per_client < 1) {
    throw ParameterError("control plane: invalid probe cost");
  }
}

IpSampler::IpSampler(double probability, std::uint64_t seed)
    : probability_(probability), rng_(seed) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ParameterError("sampler probability must be in [0, 1]");
  }
}

bool IpSampler::admit() {
  ++draws_;
  const bool yes = unit_uniform(rng_) < probability_;
  admitted_ += yes ? 1 : 0;
  return yes;
}

std::size_t RequestTrace::rounds(ProbeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(probe_log.begin(), probe_log.end(),
                    [kind](const ProbeRecord& r) { return r.kind == kind; }));
}

Workload Workload::uniform(std::size_t clients, double rate) {
  return Workload{std::vector<double>(clients, rate)};
}

namespace {

int poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  // Knuth's multiplication method; rates here are a few per minute.
  const double limit = std::exp(-mean);
  int k = 0;
  double p = unit_uniform(rng);
  while (p > limit) {
    ++k;
    p *= unit_uniform(rng);
  }
  return k;
}

class Simulation {
 public:
  Simulation(const ControlPlaneConfig& config, const Topology& topology,
             const MultihomeSetup& setup, const BackgroundProfile& profile,
             std::uint64_t seed)
      : config_(config),
        topology_(topology),
        setup_(setup),
        profile_(profile),
        table_(build_path_table(topology, setup)),
        default_(config.default_rule.value_or(setup.static_strategy)),
        known_(setup.client_count(), false),
        admitted_(setup.client_count(), false),
        sampler_(config.sampler_probability, derive_seed(seed, 1)),
        rng_(derive_seed(seed, 2)) {
    if (default_.size() != setup.client_count() || !table_.feasible(default_)) {
      throw ParameterError("control plane: default rule is not a feasible "
                           "strategy for this setup");
    }
    if (config.known_at_start) {
      for (std::size_t c : *config.known_at_start) {
        if (c >= known_.size()) {
          throw ParameterError("control plane: known client out of range");
        }
        known_[c] = admitted_[c] = true;
      }
    } else {
      std::fill(known_.begin(), known_.end(), true);
      std::fill(admitted_.begin(), admitted_.end(), true);
    }
  }

  RequestTrace run(const Workload& workload, int duration_hours) {
    const int end = duration_hours * 60;
    int next_bottleneck = 0;
    for (int t = 0; t < end; ++t) {
      const int hour = (t / 60) % 24;
      bool refreshed = false;
      if (t == next_bottleneck) {
        bottleneck_round(t, hour);
        refreshed = true;
        const bool peak = config_.peak_hours[static_cast<std::size_t>(hour)];
        next_bottleneck =
            t + (peak ? config_.peak_period_min : config_.offpeak_period_min);
      }
      if (t % (24 * 60) == config_.topo_probe_minute) {
        topology_round(t);
        refreshed = true;
      }
      if (refreshed) rebuild_hash_table();
      track_interval(t, hour);
      serve_requests(t, workload);
    }
    close_interval(end);
    trace_.sampler_draws = sampler_.draws();
    trace_.sampler_admitted = sampler_.admitted();
    return std::move(trace_);
  }

 private:
  std::size_t probe_targets() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < known_.size(); ++c) n += admitted_[c] ? 1 : 0;
    return n;
  }

  void log_probe(int t, ProbeKind kind, std::size_t targets) {
    const double probes =
        static_cast<double>(targets) * config_.probes_per_client;
    trace_.probe_log.push_back({t, kind, targets, probes * config_.probe_bytes,
                                probes * config_.probe_seconds});
  }

  void bottleneck_round(int t, int hour) {
    log_probe(t, ProbeKind::kBottleneck, probe_targets());
    // Pathneck-style probes also report the hop list, so admitted clients
    // become fully known here.
    for (std::size_t c = 0; c < known_.size(); ++c) {
      known_[c] = known_[c] || admitted_[c];
    }
    measured_ = residual_capacities(topology_, hour, profile_);
  }

  void topology_round(int t) {
    log_probe(t, ProbeKind::kTopology, probe_targets());
  }

  void rebuild_hash_table() {
    InfoView view;
    view.region = Region::kAll;
    for (std::size_t c = 0; c < known_.size(); ++c) {
      if (known_[c]) view.known_clients.push_back(c);
    }
    hash_table_.clear();
    if (view.known_clients.empty() || measured_.empty()) return;
    const auto params = build_param_table(setup_, table_, measured_, view);
    const auto sel = select_strategy(config_.combination, params);
    for (std::size_t c : view.known_clients) hash_table_[c] = sel.strategy[c];
  }

  Strategy running_strategy() const {
    Strategy s = default_;
    for (const auto& [client, isp] : hash_table_) {
      s.assignment()[client] = static_cast<std::uint8_t>(isp);
    }
    return s;
  }

  const StrategyScores& scores_for_hour(int hour) {
    auto it = scores_.find(hour);
    if (it == scores_.end()) {
      const auto residuals = residual_capacities(topology_, hour, profile_);
      it = scores_
               .emplace(hour, score_strategies(setup_, table_, setup_.demands,
                                               residuals))
               .first;
    }
    return it->second;
  }

  void track_interval(int t, int hour) {
    Strategy running = running_strategy();
    if (!trace_.achieved_vs_oracle.empty() && hour == current_hour_ &&
        running == trace_.achieved_vs_oracle.back().running) {
      return;
    }
    close_interval(t);
    current_hour_ = hour;
    const auto& scores = scores_for_hour(hour);
    OracleInterval iv;
    iv.start_min = t;
    iv.end_min = t;
    iv.running = std::move(running);
    iv.running_total = *scores.totals[*scores.index_of(iv.running)];
    for (const auto& total : scores.totals) {
      if (total) iv.oracle_total = std::max(iv.oracle_total, *total);
    }
    iv.ratio = iv.oracle_total > 0.0
                   ? std::min(1.0, iv.running_total / iv.oracle_total)
                   : 0.0;
    trace_.achieved_vs_oracle.push_back(std::move(iv));
  }

  void close_interval(int t) {
    if (!trace_.achieved_vs_oracle.empty()) {
      trace_.achieved_vs_oracle.back().end_min = t;
    }
  }

  void serve_requests(int t, const Workload& workload) {
    const double ratio = trace_.achieved_vs_oracle.back().ratio;
    for (std::size_t c = 0; c < known_.size(); ++c) {
      const double rate = c < workload.requests_per_minute.size()
                               ? workload.requests_per_minute[c]
                               : 0.0;
      const int n = poisson(rng_, rate);
      for (int k = 0; k < n; ++k) {
        RequestEvent ev;
        ev.t_min = t;
        ev.client = c;
        auto it = hash_table_.find(c);
        ev.hit = it != hash_table_.end();
        ev.isp = ev.hit ? it->second : default_[c];
        ev.oracle_ratio = ratio;
        trace_.events.push_back(ev);
        if (!known_[c] && !admitted_[c] && sampler_.admit()) {
          admitted_[c] = true;
        }
      }
    }
  }

  const ControlPlaneConfig& config_;
  const Topology& topology_;
  const MultihomeSetup& setup_;
  const BackgroundProfile& profile_;
  PathTable table_;
  Strategy default_;
  std::vector<bool> known_;
  std::vector<bool> admitted_;
  std::map<std::size_t, std::size_t> hash_table_;  // hash table 1
  std::vector<double> measured_;  // residuals at the last bottleneck round
  std::map<int, StrategyScores> scores_;
  int current_hour_ = -1;
  IpSampler sampler_;
  Rng rng_;
  RequestTrace trace_;
};

}  // namespace

RequestTrace run_control_plane(const ControlPlaneConfig& config,
                               const Topology& topology,
                               const MultihomeSetup& setup,
                               const BackgroundProfile& profile,
                               const Workload& workload, int duration_hours,
                               std::uint64_t seed) {
  config.validate();
  profile.validate();
  setup.validate(topology);
  if (duration_hours < 1) {
    throw ParameterError("control plane: duration must be >= 1 hour");
  }
  Simulation sim(config, topology, setup, profile, seed);
  return sim.run(workload, duration_hours);
}

void write_trace_csv(const RequestTrace& trace, std::ostream& out) {
  out << "t_min,client,isp,hit,oracle_ratio\n";
  char buf[64];
  for (const auto& ev : trace.events) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, ev.oracle_ratio);
    out << ev.t_min << ',' << ev.client << ','
        << static_cast<char>('A' + ev.isp) << ',' << (ev.hit ? 1 : 0) << ','
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

}  // namespace mhsim
