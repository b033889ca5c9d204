#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mhsim/flow.hpp"
#include "mhsim/rng.hpp"
#include "mhsim/scheduler.hpp"

namespace mhsim {

struct ControlPlaneConfig {
  int topo_probe_minute = 4 * 60;  // daily path refresh at 04:00
  int offpeak_period_min = 60;
  int peak_period_min = 30;
  std::array<bool, 24> peak_hours = default_peak_hours();
  double sampler_probability = 0.6;
  double probe_bytes = 33.6e3;  // one Pathneck-style probe
  double probe_seconds = 2.5;
  int probes_per_client = 3;    // probe targets per client network
  Combination combination{Combination::kE | Combination::kO |
                          Combination::kW};
  // Assignment for clients missing from hash table 1; the setup's static
  // vector when unset.
  std::optional<Strategy> default_rule;
  // Clients whose paths and bottlenecks are known at start; all when unset.
  std::optional<std::vector<std::size_t>> known_at_start;

  static std::array<bool, 24> default_peak_hours();  // 18:00-23:59
  void validate() const;
};

// Decides, per contact from an unknown client network, whether to add it to
// the probe set.
class IpSampler {
 public:
  IpSampler(double probability, std::uint64_t seed);
  bool admit();
  std::size_t draws() const { return draws_; }
  std::size_t admitted() const { return admitted_; }

 private:
  double probability_;
  Rng rng_;
  std::size_t draws_ = 0;
  std::size_t admitted_ = 0;
};

enum class ProbeKind { kTopology, kBottleneck };

struct ProbeRecord {
  int t_min = 0;
  ProbeKind kind = ProbeKind::kBottleneck;
  std::size_t targets = 0;  // client networks probed
  double bytes = 0.0;
  double seconds = 0.0;
};

struct RequestEvent {
  int t_min = 0;
  std::size_t client = 0;
  std::size_t isp = 0;
  bool hit = false;  // resolved through hash table 1
  double oracle_ratio = 0.0;
};

// Throughput of the running assignment relative to the best strategy over
// [start_min, end_min).
struct OracleInterval {
  int start_min = 0;
  int end_min = 0;
  Strategy running;
  double running_total = 0.0;
  double oracle_total = 0.0;
  double ratio = 0.0;
};

struct RequestTrace {
  std::vector<RequestEvent> events;
  std::vector<ProbeRecord> probe_log;
  std::vector<OracleInterval> achieved_vs_oracle;
  std::size_t sampler_draws = 0;
  std::size_t sampler_admitted = 0;

  std::size_t rounds(ProbeKind kind) const;
};

// Per-client request arrival rates (requests per minute, Poisson).
struct Workload {
  std::vector<double> requests_per_minute;

  static Workload uniform(std::size_t clients, double rate);
};

// Minute-resolution simulation of the scheduling framework: a network
// information updater refreshing path data daily and bottleneck data on a
// peak/off-peak cadence, a decision maker rebuilding hash table 1 after
// each refresh, and an IP sampler admitting unknown clients for probing.
// Admitted clients become known at the next bottleneck round.
RequestTrace run_control_plane(const ControlPlaneConfig& config,
                               const Topology& topology,
                               const MultihomeSetup& setup,
                               const BackgroundProfile& profile,
                               const Workload& workload, int duration_hours,
                               std::uint64_t seed);

// Columns t_min,client,isp,hit,oracle_ratio.
void write_trace_csv(const RequestTrace& trace, std::ostream& out);

}  // namespace mhsim
