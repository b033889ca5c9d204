#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhsim/analysis.hpp"
#include "mhsim/control_plane.hpp"
#include "mhsim/flow.hpp"
#include "mhsim/scheduler.hpp"
#include "mhsim/strategy.hpp"
#include "mhsim/topology.hpp"

namespace mhsim {

enum class ExperimentKind {
  kGainEnsemble,
  kFactorSweep,
  kInfoGain,
  kComboEval,
  kPartialInfo,
  kRuntime,
};

std::string_view experiment_kind_name(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct TopologySpec {
  enum class Generator { kWaxman, kTransitStub, kFile };
  Generator generator = Generator::kWaxman;
  WaxmanParams waxman;  // also the per-AS shape for transit-stub
  std::size_t num_as = 10;
  std::size_t nodes_per_as = 300;
  std::filesystem::path file;
  CapacityLaw capacity;
  // Loaded files keep their capacities unless this is set.
  bool reassign_file_capacities = false;
};

struct SetupSpec {
  std::size_t num_isps = 3;
  std::size_t num_clients = 5;
  std::optional<double> demand_gbps;     // unbounded when unset
  std::optional<Strategy> static_vector;  // round-balanced when unset
  // When set, clients are drawn among nodes exactly this many hops from
  // the server.
  std::optional<int> client_distance;
};

enum class SweepFactor {
  kHops,      // levels are node counts of a flat Waxman topology
  kDistance,  // levels are the server-to-client BFS distance
  kDegree,    // levels are Waxman links per arriving node
  kLoad,      // levels are a constant background load fraction
};

std::string_view sweep_factor_name(SweepFactor f);
SweepFactor parse_sweep_factor(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kGainEnsemble;
  TopologySpec topology;
  SetupSpec setup;
  std::size_t ensemble_size = 200;
  std::uint64_t seed = 1;
  BackgroundProfile profile;  // zero load by default
  int hour = 20;
  std::size_t threads = 0;  // 0: hardware concurrency

  SweepFactor sweep_factor = SweepFactor::kDegree;
  std::vector<double> sweep_levels{2, 3, 4, 5, 6};
  double sweep_jitter = 0.2;  // jitter width for load sweeps

  std::vector<double> client_fractions{1.0, 0.8, 0.6, 0.4};
  std::vector<Region> regions{Region::kAll, Region::kServerSide,
                              Region::kClientSide, Region::kEnds};
  Combination partial_combination{Combination::kE | Combination::kO |
                                  Combination::kW};

  ControlPlaneConfig control;
  int runtime_hours = 24;
  double request_rate = 1.0;  // requests per minute per client

  bool write_samples = false;  // info-gain: also emit samples.csv

  // Throws ParameterError naming the offending field.
  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// One sampled topology + setup ready for evaluation.
struct Instance {
  std::size_t index = 0;
  Topology topology;
  MultihomeSetup setup;
  PathTable table;
  std::vector<double> residuals;
  std::size_t setup_attempts = 1;
};

// Deterministic in (config, index). Setups whose static strategy is
// infeasible or carries zero throughput are redrawn on the same topology
// (up to 50 attempts); throws SamplingError afterwards.
Instance make_instance(const ExperimentConfig& config, std::size_t index);

// Runs fn(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

struct GainRow {
  std::size_t index = 0;
  std::size_t nodes = 0;
  std::size_t links = 0;
  std::size_t min_hops = 0;
  GainReport report;
};

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
};
Summary summarize(std::vector<double> values);

std::vector<GainRow> run_gain_ensemble(const ExperimentConfig& config);

struct SweepLevel {
  double level = 0.0;
  double mean_factor = 0.0;  // measured hop count, mean degree or load
  double mean_gain = 0.0;
  std::size_t samples = 0;
};

struct SweepResult {
  SweepFactor factor = SweepFactor::kDegree;
  std::vector<SweepLevel> levels;
  double spearman = 0.0;  // mean factor vs mean gain across levels
};

SweepResult run_factor_sweep(const ExperimentConfig& config);

struct InfoGainResult {
  SampleSet samples;
  InfoGainTable table;
};

InfoGainResult run_info_gain(const ExperimentConfig& config);

struct ComboRow {
  std::string label;  // "baseline" or "{E,O,W}" style
  double mean_gain = 0.0;
  // Mean excess gain (gain - 1) relative to the baseline's mean excess.
  double excess_fraction = 0.0;
};

std::vector<ComboRow> run_combo_eval(const ExperimentConfig& config);

struct PartialRow {
  std::string mode;   // "baseline", "clients" or "links"
  std::string level;  // fraction or region name
  double mean_gain = 0.0;
  double excess_fraction = 0.0;
};

std::vector<PartialRow> run_partial_info(const ExperimentConfig& config);

RequestTrace run_runtime(const ExperimentConfig& config);

// Runs the configured experiment and writes its CSV(s) plus summary.csv
// into out_dir. Returns the files written.
std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace mhsim
