#include "mhsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "mhsim/io.hpp"
#include "mhsim/rng.hpp"

namespace mhsim {

using nlohmann::json;

namespace {

enum SeedPurpose : std::uint64_t {
  kTopologySeed = 1,
  kCapacitySeed = 2,
  kSetupSeed = 3,
  kClientInfoSeed = 4,
  kProfileSeed = 5,
  kRuntimeSeed = 6,
};

constexpr std::size_t kMaxSetupAttempts = 50;

std::string fmt_num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, static_cast<std::size_t>(end - buf));
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Ratio of mean excess gains; 0 when the reference has no excess.
double excess_fraction(double mean_gain, double reference_mean_gain) {
  const double ref = reference_mean_gain - 1.0;
  return ref > 0.0 ? (mean_gain - 1.0) / ref : 0.0;
}

Topology build_topology(const ExperimentConfig& config, std::size_t index) {
  const auto& spec = config.topology;
  const auto topo_seed = derive_seed(config.seed, kTopologySeed, index);
  const auto cap_seed = derive_seed(config.seed, kCapacitySeed, index);
  switch (spec.generator) {
    case TopologySpec::Generator::kWaxman:
      return assign_capacities(generate_waxman(spec.waxman, topo_seed),
                               spec.capacity, cap_seed);
    case TopologySpec::Generator::kTransitStub:
      return assign_capacities(
          generate_transit_stub(spec.num_as, spec.nodes_per_as, topo_seed,
                                spec.waxman),
          spec.capacity, cap_seed);
    case TopologySpec::Generator::kFile: {
      auto topo = load_topology(spec.file);
      if (spec.reassign_file_capacities) {
        topo = assign_capacities(std::move(topo), spec.capacity, cap_seed);
      }
      return topo;
    }
  }
  throw ParameterError("unknown topology generator");
}

// Replaces the clients with nodes exactly `distance` hops from the server.
bool redraw_clients_at_distance(const Topology& topo, MultihomeSetup& setup,
                                int distance, std::uint64_t seed) {
  const auto dist = topo.hop_distances(setup.server);
  std::vector<NodeId> pool;
  for (NodeId n = 0; n < topo.node_count(); ++n) {
    if (dist[n] == distance) pool.push_back(n);
  }
  const std::size_t count = setup.clients.size();
  if (pool.size() < count) return false;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    setup.clients[i] = pool[i];
  }
  return true;
}

}  // namespace

std::string_view experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kGainEnsemble: return "gain-ensemble";
    case ExperimentKind::kFactorSweep: return "factor-sweep";
    case ExperimentKind::kInfoGain: return "info-gain";
    case ExperimentKind::kComboEval: return "combo-eval";
    case ExperimentKind::kPartialInfo: return "partial-info";
    case ExperimentKind::kRuntime: return "runtime";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::kGainEnsemble, ExperimentKind::kFactorSweep,
                 ExperimentKind::kInfoGain, ExperimentKind::kComboEval,
                 ExperimentKind::kPartialInfo, ExperimentKind::kRuntime}) {
    if (experiment_kind_name(k) == name) return k;
  }
  throw ParameterError("kind: unknown experiment '" + std::string(name) + "'");
}

std::string_view sweep_factor_name(SweepFactor f) {
  switch (f) {
    case SweepFactor::kHops: return "hops";
    case SweepFactor::kDistance: return "distance";
    case SweepFactor::kDegree: return "degree";
    case SweepFactor::kLoad: return "load";
  }
  return "?";
}

SweepFactor parse_sweep_factor(std::string_view name) {
  for (auto f : {SweepFactor::kHops, SweepFactor::kDistance,
                 SweepFactor::kDegree, SweepFactor::kLoad}) {
    if (sweep_factor_name(f) == name) return f;
  }
  throw ParameterError("sweep.factor: unknown factor '" + std::string(name) +
                       "'");
}

void ExperimentConfig::validate() const {
  if (ensemble_size < 1) throw ParameterError("ensemble_size: must be >= 1");
  if (hour < 0 || hour > 23) throw ParameterError("hour: must be in 0..23");
  if (setup.num_isps < 2) throw ParameterError("setup.num_isps: must be >= 2");
  if (setup.num_clients < 1) {
    throw ParameterError("setup.num_clients: must be >= 1");
  }
  if (setup.static_vector &&
      (setup.static_vector->size() != setup.num_clients ||
       std::any_of(setup.static_vector->assignment().begin(),
                   setup.static_vector->assignment().end(),
                   [&](auto f) { return f >= setup.num_isps; }))) {
    throw ParameterError("setup.static: does not match num_isps/num_clients");
  }
  if (setup.demand_gbps && !(*setup.demand_gbps > 0.0)) {
    throw ParameterError("setup.demand_gbps: must be > 0");
  }
  if (topology.generator == TopologySpec::Generator::kFile &&
      !std::filesystem::exists(topology.file)) {
    throw ParameterError("topology.file: '" + topology.file.string() +
                         "' does not exist");
  }
  if (kind == ExperimentKind::kFactorSweep && sweep_levels.size() < 2) {
    throw ParameterError("sweep.levels: need at least two levels");
  }
  for (double f : client_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ParameterError("partial.client_fractions: values must be in (0, 1]");
    }
  }
  if (runtime_hours < 1) throw ParameterError("runtime.hours: must be >= 1");
  profile.validate();
  control.validate();
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("topology")) {
      const auto& t = j.at("topology");
      const auto gen = t.value("generator", std::string("waxman"));
      if (gen == "waxman") {
        c.topology.generator = TopologySpec::Generator::kWaxman;
      } else if (gen == "transit-stub") {
        c.topology.generator = TopologySpec::Generator::kTransitStub;
      } else if (gen == "file") {
        c.topology.generator = TopologySpec::Generator::kFile;
        c.topology.file = t.at("file").get<std::string>();
      } else {
        throw ParameterError("topology.generator: unknown '" + gen + "'");
      }
      c.topology.waxman.n = t.value("n", c.topology.waxman.n);
      c.topology.waxman.m_per_node =
          t.value("m_per_node", c.topology.waxman.m_per_node);
      c.topology.waxman.alpha = t.value("alpha", c.topology.waxman.alpha);
      c.topology.waxman.beta = t.value("beta", c.topology.waxman.beta);
      c.topology.num_as = t.value("num_as", c.topology.num_as);
      c.topology.nodes_per_as = t.value("nodes_per_as", c.topology.nodes_per_as);
      c.topology.reassign_file_capacities =
          t.value("reassign_capacities", c.topology.reassign_file_capacities);
    }
    if (j.contains("capacity")) {
      const auto& cap = j.at("capacity");
      c.topology.capacity.low_gbps = cap.value("low", c.topology.capacity.low_gbps);
      c.topology.capacity.high_gbps =
          cap.value("high", c.topology.capacity.high_gbps);
      c.topology.capacity.shape = cap.value("shape", c.topology.capacity.shape);
    }
    if (j.contains("setup")) {
      const auto& s = j.at("setup");
      c.setup.num_isps = s.value("num_isps", c.setup.num_isps);
      c.setup.num_clients = s.value("num_clients", c.setup.num_clients);
      if (s.contains("demand_gbps") && !s.at("demand_gbps").is_null()) {
        c.setup.demand_gbps = s.at("demand_gbps").get<double>();
      }
      if (s.contains("static")) {
        c.setup.static_vector = Strategy::parse(s.at("static").get<std::string>());
      }
      if (s.contains("client_distance") && !s.at("client_distance").is_null()) {
        c.setup.client_distance = s.at("client_distance").get<int>();
      }
    }
    c.ensemble_size = j.value("ensemble_size", c.ensemble_size);
    c.seed = j.value("seed", c.seed);
    c.hour = j.value("hour", c.hour);
    c.threads = j.value("threads", c.threads);
    if (j.contains("profile") && !j.at("profile").is_null()) {
      c.profile = profile_from_json(j.at("profile"));
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      c.sweep_factor = parse_sweep_factor(s.at("factor").get<std::string>());
      c.sweep_levels = s.value("levels", c.sweep_levels);
      c.sweep_jitter = s.value("jitter", c.sweep_jitter);
    }
    if (j.contains("partial")) {
      const auto& p = j.at("partial");
      c.client_fractions = p.value("client_fractions", c.client_fractions);
      if (p.contains("regions")) {
        c.regions.clear();
        for (const auto& r : p.at("regions")) {
          c.regions.push_back(parse_region(r.get<std::string>()));
        }
      }
      if (p.contains("combination")) {
        c.partial_combination =
            Combination::parse(p.at("combination").get<std::string>());
      }
    }
    if (j.contains("runtime")) {
      const auto& r = j.at("runtime");
      c.control = control_config_from_json(r);
      c.runtime_hours = r.value("hours", c.runtime_hours);
      c.request_rate = r.value("request_rate", c.request_rate);
    }
    c.write_samples = j.value("write_samples", c.write_samples);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

Instance make_instance(const ExperimentConfig& config, std::size_t index) {
  Instance inst;
  inst.index = index;
  inst.topology = build_topology(config, index);
  inst.residuals =
      residual_capacities(inst.topology, config.hour, config.profile);
  for (std::size_t attempt = 0; attempt < kMaxSetupAttempts; ++attempt) {
    const auto seed =
        derive_seed(config.seed, kSetupSeed, index * kMaxSetupAttempts + attempt);
    MultihomeSetup setup =
        sample_multihome_setup(inst.topology, config.setup.num_isps,
                               config.setup.num_clients, seed);
    if (config.setup.client_distance &&
        !redraw_clients_at_distance(inst.topology, setup,
                                    *config.setup.client_distance,
                                    splitmix64(seed))) {
      continue;
    }
    if (config.setup.demand_gbps) {
      setup.demands.assign(setup.client_count(), *config.setup.demand_gbps);
    }
    if (config.setup.static_vector) {
      setup.static_strategy = *config.setup.static_vector;
    }
    PathTable table = build_path_table(inst.topology, setup);
    if (!table.feasible(setup.static_strategy)) continue;
    const double static_total =
        max_throughput(setup.static_strategy, table, setup.demands,
                       inst.residuals)
            .total;
    if (!(static_total > 0.0)) continue;
    inst.setup = std::move(setup);
    inst.table = std::move(table);
    inst.setup_attempts = attempt + 1;
    return inst;
  }
  throw SamplingError("instance " + std::to_string(index) +
                      ": no usable setup after " +
                      std::to_string(kMaxSetupAttempts) + " attempts");
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  s.mean = mean_of(values);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  s.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return s;
}

std::vector<GainRow> run_gain_ensemble(const ExperimentConfig& config) {
  std::vector<GainRow> rows(config.ensemble_size);
  parallel_for(config.ensemble_size, config.threads, [&](std::size_t i) {
    const Instance inst = make_instance(config, i);
    const auto stats = setup_stats(inst.topology, inst.setup, inst.table);
    GainRow& row = rows[i];
    row.index = i;
    row.nodes = stats.nodes;
    row.links = stats.links;
    row.min_hops = stats.min_hops;
    row.report = optimal_strategy(inst.setup, inst.table, inst.setup.demands,
                                  inst.residuals);
  });
  return rows;
}

SweepResult run_factor_sweep(const ExperimentConfig& config) {
  SweepResult result;
  result.factor = config.sweep_factor;
  for (double level : config.sweep_levels) {
    ExperimentConfig cfg = config;
    switch (config.sweep_factor) {
      case SweepFactor::kHops:
        cfg.topology.generator = TopologySpec::Generator::kWaxman;
        cfg.topology.waxman.n = static_cast<std::size_t>(level);
        break;
      case SweepFactor::kDistance:
        cfg.setup.client_distance = static_cast<int>(level);
        break;
      case SweepFactor::kDegree:
        cfg.topology.generator = TopologySpec::Generator::kWaxman;
        cfg.topology.waxman.m_per_node = static_cast<std::size_t>(level);
        break;
      case SweepFactor::kLoad:
        cfg.profile = BackgroundProfile::constant(
            level, config.sweep_jitter,
            derive_seed(config.seed, kProfileSeed));
        break;
    }
    std::vector<double> gains(cfg.ensemble_size);
    std::vector<double> factor(cfg.ensemble_size);
    parallel_for(cfg.ensemble_size, cfg.threads, [&](std::size_t i) {
      const Instance inst = make_instance(cfg, i);
      gains[i] = optimal_strategy(inst.setup, inst.table, inst.setup.demands,
                                  inst.residuals)
                     .gain;
      switch (config.sweep_factor) {
        case SweepFactor::kHops:
        case SweepFactor::kDistance: {
          const auto dist = inst.topology.hop_distances(inst.setup.server);
          double sum = 0.0;
          for (NodeId c : inst.setup.clients) sum += dist[c];
          factor[i] = sum / static_cast<double>(inst.setup.client_count());
          break;
        }
        case SweepFactor::kDegree:
          factor[i] = inst.topology.mean_degree();
          break;
        case SweepFactor::kLoad:
          factor[i] = level;
          break;
      }
    });
    result.levels.push_back(
        {level, mean_of(factor), mean_of(gains), cfg.ensemble_size});
  }
  std::vector<double> xs, ys;
  for (const auto& l : result.levels) {
    xs.push_back(l.mean_factor);
    ys.push_back(l.mean_gain);
  }
  result.spearman = spearman(xs, ys);
  return result;
}

InfoGainResult run_info_gain(const ExperimentConfig& config) {
  std::vector<std::vector<SampleRecord>> per_instance(config.ensemble_size);
  parallel_for(config.ensemble_size, config.threads, [&](std::size_t i) {
    const Instance inst = make_instance(config, i);
    const auto scores = score_strategies(inst.setup, inst.table,
                                         inst.setup.demands, inst.residuals);
    const auto view = InfoView::full(inst.setup.client_count());
    for (std::size_t k = 0; k < scores.strategies.size(); ++k) {
      if (!scores.totals[k]) continue;
      per_instance[i].push_back(
          {compute_parameters(scores.strategies[k], inst.table, inst.residuals,
                              view),
           *scores.totals[k]});
    }
  });
  InfoGainResult result;
  for (auto& recs : per_instance) {
    result.samples.records.insert(result.samples.records.end(), recs.begin(),
                                  recs.end());
  }
  result.samples.provenance = std::string(experiment_kind_name(config.kind)) +
                              " seed=" + std::to_string(config.seed) +
                              " ensemble=" +
                              std::to_string(config.ensemble_size);
  result.table = info_gain_table(result.samples);
  return result;
}

std::vector<ComboRow> run_combo_eval(const ExperimentConfig& config) {
  const auto combos = all_combinations();
  std::vector<double> optimal(config.ensemble_size);
  std::vector<std::array<double, 7>> by_combo(config.ensemble_size);
  parallel_for(config.ensemble_size, config.threads, [&](std::size_t i) {
    const Instance inst = make_instance(config, i);
    const auto scores = score_strategies(inst.setup, inst.table,
                                         inst.setup.demands, inst.residuals);
    optimal[i] = optimal_strategy(inst.setup, scores).gain;
    const auto full = InfoView::full(inst.setup.client_count());
    const auto params =
        build_param_table(inst.setup, inst.table, inst.residuals, full);
    for (std::size_t k = 0; k < combos.size(); ++k) {
      by_combo[i][k] =
          param_performance_gain(combos[k], inst.setup, scores, params, full)
              .gain;
    }
  });
  std::vector<ComboRow> rows;
  const double base = mean_of(optimal);
  rows.push_back({"baseline", base, excess_fraction(base, base)});
  for (std::size_t k = 0; k < combos.size(); ++k) {
    std::vector<double> g;
    for (const auto& v : by_combo) g.push_back(v[k]);
    const double m = mean_of(g);
    rows.push_back({combos[k].to_string(), m, excess_fraction(m, base)});
  }
  return rows;
}

std::vector<PartialRow> run_partial_info(const ExperimentConfig& config) {
  const std::size_t nf = config.client_fractions.size();
  const std::size_t nr = config.regions.size();
  std::vector<double> optimal(config.ensemble_size);
  std::vector<std::vector<double>> fraction_gain(
      config.ensemble_size, std::vector<double>(nf));
  std::vector<std::vector<double>> region_gain(config.ensemble_size,
                                               std::vector<double>(nr));
  parallel_for(config.ensemble_size, config.threads, [&](std::size_t i) {
    const Instance inst = make_instance(config, i);
    const auto scores = score_strategies(inst.setup, inst.table,
                                         inst.setup.demands, inst.residuals);
    optimal[i] = optimal_strategy(inst.setup, scores).gain;
    const auto full = InfoView::full(inst.setup.client_count());
    // One seed per instance so smaller fractions keep a subset of the
    // clients known at larger ones.
    const auto subset_seed = derive_seed(config.seed, kClientInfoSeed, i);
    auto gain_under = [&](const InfoView& view) {
      const auto params =
          build_param_table(inst.setup, inst.table, inst.residuals, view);
      return param_performance_gain(config.partial_combination, inst.setup,
                                    scores, params, view)
          .gain;
    };
    for (std::size_t k = 0; k < nf; ++k) {
      fraction_gain[i][k] = gain_under(
          degrade_client_info(full, config.client_fractions[k], subset_seed));
    }
    for (std::size_t k = 0; k < nr; ++k) {
      region_gain[i][k] = gain_under(degrade_link_info(full, config.regions[k]));
    }
  });
  std::vector<PartialRow> rows;
  const double base = mean_of(optimal);
  rows.push_back({"baseline", "optimal", base, excess_fraction(base, base)});
  for (std::size_t k = 0; k < nf; ++k) {
    std::vector<double> g;
    for (const auto& v : fraction_gain) g.push_back(v[k]);
    const double m = mean_of(g);
    rows.push_back({"clients", fmt_fixed(config.client_fractions[k], 1), m,
                    excess_fraction(m, base)});
  }
  for (std::size_t k = 0; k < nr; ++k) {
    std::vector<double> g;
    for (const auto& v : region_gain) g.push_back(v[k]);
    const double m = mean_of(g);
    rows.push_back({"links", std::string(region_name(config.regions[k])), m,
                    excess_fraction(m, base)});
  }
  return rows;
}

RequestTrace run_runtime(const ExperimentConfig& config) {
  const Instance inst = make_instance(config, 0);
  return run_control_plane(
      config.control, inst.topology, inst.setup, config.profile,
      Workload::uniform(inst.setup.client_count(), config.request_rate),
      config.runtime_hours, derive_seed(config.seed, kRuntimeSeed));
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::vector<std::filesystem::path>& written)
      : out_(path) {
    if (!out_) throw FormatError("cannot write " + path.string());
    written.push_back(path);
  }
  std::ofstream& stream() { return out_; }

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::size_t i = 0;
    ((out_ << (i++ ? "," : "") << cells), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string pct(double ratio) { return fmt_fixed(100.0 * ratio, 2); }

}  // namespace

std::vector<std::filesystem::path> run_experiment(
    const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  std::vector<std::pair<std::string, std::string>> summary;
  const std::string kind(experiment_kind_name(config.kind));

  switch (config.kind) {
    case ExperimentKind::kGainEnsemble: {
      const auto rows = run_gain_ensemble(config);
      CsvFile csv(out_dir / "gains.csv", written);
      csv.row("index", "nodes", "links", "H", "static_total_gbps",
              "optimal_total_gbps", "optimal_strategy", "gain_pct");
      std::vector<double> gains;
      for (const auto& r : rows) {
        csv.row(r.index, r.nodes, r.links, r.min_hops,
                fmt_num(r.report.static_total), fmt_num(r.report.optimal_total),
                r.report.optimal_strategy.to_string(), pct(r.report.gain));
        gains.push_back(r.report.gain);
      }
      const auto s = summarize(gains);
      summary = {{"mean_gain_pct", pct(s.mean)},
                 {"median_gain_pct", pct(s.median)},
                 {"std_gain_pct", fmt_fixed(100.0 * s.stddev, 2)}};
      break;
    }
    case ExperimentKind::kFactorSweep: {
      const auto res = run_factor_sweep(config);
      CsvFile csv(out_dir / "factor_sweep.csv", written);
      csv.row("factor", "level", "mean_factor_value", "mean_gain_pct",
              "samples");
      for (const auto& l : res.levels) {
        csv.row(sweep_factor_name(res.factor), fmt_num(l.level),
                fmt_fixed(l.mean_factor, 4), pct(l.mean_gain), l.samples);
      }
      summary = {{"factor", std::string(sweep_factor_name(res.factor))},
                 {"spearman", fmt_fixed(res.spearman, 4)}};
      break;
    }
    case ExperimentKind::kInfoGain: {
      const auto res = run_info_gain(config);
      CsvFile csv(out_dir / "info_gains.csv", written);
      csv.row("parameter", "information_gain", "rank");
      const auto ranking = res.table.ranking();
      for (Param p : kAllParams) {
        const auto rank =
            std::find(ranking.begin(), ranking.end(), p) - ranking.begin() + 1;
        csv.row(param_name(p), fmt_fixed(res.table.gain(p), 4), rank);
      }
      if (config.write_samples) {
        std::ofstream out(out_dir / "samples.csv");
        write_samples_csv(res.samples, out);
        written.push_back(out_dir / "samples.csv");
      }
      summary = {{"records", std::to_string(res.samples.records.size())},
                 {"top_parameter", std::string(param_name(ranking.front()))},
                 {"binning", res.table.bin_spec}};
      if (!res.table.warning.empty()) {
        summary.emplace_back("warning", res.table.warning);
      }
      break;
    }
    case ExperimentKind::kComboEval: {
      const auto rows = run_combo_eval(config);
      CsvFile csv(out_dir / "combo_eval.csv", written);
      csv.row("combination", "mean_gain_pct", "excess_fraction_of_optimal");
      for (const auto& r : rows) {
        csv.row(r.label, pct(r.mean_gain), fmt_fixed(r.excess_fraction, 4));
      }
      summary = {{"rows", std::to_string(rows.size())}};
      break;
    }
    case ExperimentKind::kPartialInfo: {
      const auto rows = run_partial_info(config);
      CsvFile csv(out_dir / "partial_info.csv", written);
      csv.row("mode", "level", "mean_gain_pct", "excess_fraction_of_optimal");
      for (const auto& r : rows) {
        csv.row(r.mode, r.level, pct(r.mean_gain),
                fmt_fixed(r.excess_fraction, 4));
      }
      summary = {{"combination", config.partial_combination.to_string()}};
      break;
    }
    case ExperimentKind::kRuntime: {
      const auto trace = run_runtime(config);
      CsvFile csv(out_dir / "runtime_trace.csv", written);
      write_trace_csv(trace, csv.stream());
      std::size_t hits = 0;
      for (const auto& ev : trace.events) hits += ev.hit ? 1 : 0;
      double bytes = 0.0, seconds = 0.0;
      for (const auto& p : trace.probe_log) {
        bytes += p.bytes;
        seconds += p.seconds;
      }
      double weighted = 0.0;
      int minutes = 0;
      for (const auto& iv : trace.achieved_vs_oracle) {
        weighted += iv.ratio * (iv.end_min - iv.start_min);
        minutes += iv.end_min - iv.start_min;
      }
      summary = {
          {"requests", std::to_string(trace.events.size())},
          {"hash_table_hits", std::to_string(hits)},
          {"bottleneck_rounds",
           std::to_string(trace.rounds(ProbeKind::kBottleneck))},
          {"topology_rounds", std::to_string(trace.rounds(ProbeKind::kTopology))},
          {"probe_bytes", fmt_num(bytes)},
          {"probe_seconds", fmt_num(seconds)},
          {"sampler_draws", std::to_string(trace.sampler_draws)},
          {"sampler_admitted", std::to_string(trace.sampler_admitted)},
          {"mean_oracle_ratio",
           fmt_fixed(minutes > 0 ? weighted / minutes : 0.0, 4)}};
      break;
    }
  }

  CsvFile csv(out_dir / "summary.csv", written);
  csv.row("experiment", "metric", "value");
  for (const auto& [metric, value] : summary) {
    csv.row(kind, metric, value.find(',') == std::string::npos
                              ? value
                              : "\"" + value + "\"");
  }
  return written;
}

}  // namespace mhsim
