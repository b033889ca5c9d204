#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mhsim/analysis.hpp"
#include "mhsim/control_plane.hpp"
#include "mhsim/flow.hpp"
#include "mhsim/harness.hpp"
#include "mhsim/io.hpp"
#include "mhsim/parameters.hpp"
#include "mhsim/routing.hpp"
#include "mhsim/scheduler.hpp"
#include "mhsim/strategy.hpp"
#include "mhsim/topology.hpp"

namespace {

using namespace mhsim;

// Topology + setup + residuals shared by most subcommands.
struct Scenario {
  std::string topo_path;
  std::string setup_path;
  std::string profile_path;
  int hour = 20;

  void add_options(CLI::App* cmd, bool with_hour = true) {
    cmd->add_option("--topo", topo_path, "edge-list topology file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--setup", setup_path, "setup JSON")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_hour) {
      cmd->add_option("--hour", hour, "hour of day for background load")
          ->check(CLI::Range(0, 23));
      cmd->add_option("--profile", profile_path,
                      "background profile JSON (zero load when omitted)")
          ->check(CLI::ExistingFile);
    }
  }

  Topology topology() const { return load_topology(topo_path); }

  MultihomeSetup setup(const Topology& topo) const {
    auto s = setup_from_json(read_json_file(setup_path));
    s.validate(topo);
    return s;
  }

  std::vector<double> residuals(const Topology& topo) const {
    BackgroundProfile profile;
    if (!profile_path.empty()) {
      profile = profile_from_json(read_json_file(profile_path));
    }
    return residual_capacities(topo, hour, profile);
  }
};

void print_csv_row(std::ostream& out, const ParameterVector& p) {
  out << "P,E,O,B,W,BL1,BL2,BL3\n"
      << p.P << ',' << p.E << ',' << p.O << ',' << p.B << ',' << p.W << ','
      << p.BL1 << ',' << p.BL2 << ',' << p.BL3 << '\n';
}

void print_rates(const ThroughputSolution& sol) {
  std::cout << "client,rate_gbps\n";
  for (std::size_t c = 0; c < sol.rates.size(); ++c) {
    std::cout << c << ',' << sol.rates[c] << '\n';
  }
  std::cout << "total," << sol.total << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multihomed server flow-scheduling simulator"};
  app.require_subcommand(1);

  // topo
  auto* topo = app.add_subcommand("topo", "generate and edit topologies");
  topo->require_subcommand(1);

  WaxmanParams wax;
  std::uint64_t seed = 1;
  std::string out_path;
  auto* gen_waxman = topo->add_subcommand("gen-waxman", "incremental Waxman");
  gen_waxman->add_option("--n", wax.n)->check(CLI::PositiveNumber);
  gen_waxman->add_option("--m-per-node", wax.m_per_node)
      ->check(CLI::PositiveNumber);
  gen_waxman->add_option("--alpha", wax.alpha);
  gen_waxman->add_option("--beta", wax.beta);
  gen_waxman->add_option("--seed", seed);
  gen_waxman->add_option("--out", out_path)->required();

  std::size_t num_as = 10, per_as = 300;
  auto* gen_ts = topo->add_subcommand("gen-ts", "two-level transit-stub");
  gen_ts->add_option("--as", num_as)->check(CLI::PositiveNumber);
  gen_ts->add_option("--per-as", per_as)->check(CLI::PositiveNumber);
  gen_ts->add_option("--m-per-node", wax.m_per_node)->check(CLI::PositiveNumber);
  gen_ts->add_option("--seed", seed);
  gen_ts->add_option("--out", out_path)->required();

  CapacityLaw law;
  std::string in_path;
  auto* caps = topo->add_subcommand("caps", "redraw link capacities");
  caps->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  caps->add_option("--low", law.low_gbps);
  caps->add_option("--high", law.high_gbps);
  caps->add_option("--shape", law.shape);
  caps->add_option("--seed", seed);
  caps->add_option("--out", out_path, "defaults to overwriting --in");

  std::size_t num_isps = 3, num_clients = 5;
  auto* setup_cmd =
      topo->add_subcommand("setup", "sample a server/ISP/client setup");
  setup_cmd->add_option("--topo", in_path)->required()->check(CLI::ExistingFile);
  setup_cmd->add_option("--isps", num_isps)->check(CLI::PositiveNumber);
  setup_cmd->add_option("--clients", num_clients)->check(CLI::PositiveNumber);
  setup_cmd->add_option("--seed", seed);
  setup_cmd->add_option("--out", out_path)->required();

  // route
  Scenario sc;
  auto* route = app.add_subcommand("route", "routing");
  route->require_subcommand(1);
  auto* route_table = route->add_subcommand("table", "per client/ISP paths");
  sc.add_options(route_table, false);
  route_table->add_option("--out", out_path)->required();

  // flow
  std::string strategy_text;
  auto* flow = app.add_subcommand("flow", "rate allocation");
  flow->require_subcommand(1);
  auto* throughput = flow->add_subcommand("throughput", "max total throughput");
  sc.add_options(throughput);
  throughput->add_option("--strategy", strategy_text)->required();
  bool fair = false;
  throughput->add_flag("--fair", fair, "max-min fair allocation instead");

  // strategy
  auto* strategy = app.add_subcommand("strategy", "strategy search");
  strategy->require_subcommand(1);
  auto* best = strategy->add_subcommand("best", "exhaustive optimum");
  sc.add_options(best);

  // params
  auto* params = app.add_subcommand("params", "path/bottleneck observables");
  sc.add_options(params);
  params->add_option("--strategy", strategy_text)->required();
  std::optional<double> clients_frac;
  std::string region_text;
  auto* frac_opt = params->add_option("--clients-frac", clients_frac);
  params->add_option("--seed", seed);
  params->add_option("--region", region_text)->excludes(frac_opt);

  // analyze
  std::string samples_path;
  auto* analyze = app.add_subcommand("analyze", "statistics");
  analyze->require_subcommand(1);
  auto* info_gain = analyze->add_subcommand("info-gain", "parameter ranking");
  info_gain->add_option("--samples", samples_path)
      ->required()
      ->check(CLI::ExistingFile);
  info_gain->add_option("--out", out_path)->required();

  // schedule
  auto* schedule = app.add_subcommand("schedule", "heuristic scheduler");
  schedule->require_subcommand(1);
  std::string combo_text = "EOW";
  auto* select = schedule->add_subcommand("select", "parameter-based pick");
  sc.add_options(select);
  select->add_option("--combo", combo_text);

  std::string config_path;
  int hours = 24;
  auto* runtime = schedule->add_subcommand("runtime", "control-plane trace");
  runtime->add_option("--config", config_path, "ctl.json")
      ->required()
      ->check(CLI::ExistingFile);
  runtime->add_option("--hours", hours)->check(CLI::PositiveNumber);
  runtime->add_option("--seed", seed);
  runtime->add_option("--out", out_path)->required();

  // run
  std::string out_dir;
  std::optional<std::size_t> threads;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "exp.json")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir)->required();
  run->add_option("--threads", threads, "overrides the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_waxman) {
      save_topology(generate_waxman(wax, seed), out_path);
    } else if (*gen_ts) {
      WaxmanParams intra;
      intra.m_per_node = wax.m_per_node;
      save_topology(generate_transit_stub(num_as, per_as, seed, intra),
                    out_path);
    } else if (*caps) {
      save_topology(assign_capacities(load_topology(in_path), law, seed),
                    out_path.empty() ? in_path : out_path);
    } else if (*setup_cmd) {
      const auto t = load_topology(in_path);
      write_json_file(setup_to_json(sample_multihome_setup(t, num_isps,
                                                           num_clients, seed)),
                      out_path);
    } else if (*route_table) {
      const auto t = sc.topology();
      const auto s = sc.setup(t);
      std::ofstream out(out_path);
      if (!out) throw FormatError("cannot write " + out_path);
      write_path_table_csv(build_path_table(t, s), out);
    } else if (*throughput) {
      const auto t = sc.topology();
      const auto s = sc.setup(t);
      const auto k =
          Strategy::parse(strategy_text, s.isp_count(), s.client_count());
      print_rates(max_throughput(k, build_path_table(t, s), s.demands,
                                 sc.residuals(t),
                                 fair ? AllocationObjective::kMaxMinFair
                                      : AllocationObjective::kMaxTotal));
    } else if (*best) {
      const auto t = sc.topology();
      const auto s = sc.setup(t);
      const auto r =
          optimal_strategy(s, build_path_table(t, s), s.demands, sc.residuals(t));
      std::cout << "optimal_strategy," << r.optimal_strategy.to_string() << '\n'
                << "optimal_total_gbps," << r.optimal_total << '\n'
                << "static_strategy," << s.static_strategy.to_string() << '\n'
                << "static_total_gbps," << r.static_total << '\n'
                << "gain," << r.gain << '\n';
    } else if (*params) {
      const auto t = sc.topology();
      const auto s = sc.setup(t);
      const auto k =
          Strategy::parse(strategy_text, s.isp_count(), s.client_count());
      InfoView view = InfoView::full(s.client_count());
      if (clients_frac) view = degrade_client_info(view, *clients_frac, seed);
      if (!region_text.empty()) {
        view = degrade_link_info(view, parse_region(region_text));
      }
      print_csv_row(std::cout, compute_parameters(k, build_path_table(t, s),
                                                  sc.residuals(t), view));
    } else if (*info_gain) {
      const auto table = info_gain_table(load_samples_csv(samples_path));
      if (!table.warning.empty()) std::cerr << "warning: " << table.warning << '\n';
      std::ofstream out(out_path);
      if (!out) throw FormatError("cannot write " + out_path);
      out << "parameter,information_gain\n";
      for (Param p : kAllParams) {
        out << param_name(p) << ',' << table.gain(p) << '\n';
      }
    } else if (*select) {
      const auto t = sc.topology();
      const auto s = sc.setup(t);
      const auto table = build_path_table(t, s);
      const auto res = sc.residuals(t);
      const auto g =
          param_performance_gain(Combination::parse(combo_text), s, table,
                                 s.demands, res, InfoView::full(s.client_count()));
      std::cout << "selected_strategy," << g.applied.to_string()
                << '\n'
                << "pareto_size," << g.selection.pareto.size() << '\n'
                << "selected_total_gbps," << g.selected_total << '\n'
                << "static_total_gbps," << g.static_total << '\n'
                << "gain," << g.gain << '\n';
    } else if (*runtime) {
      // ctl.json: control-plane fields plus "topology" (edge-list path),
      // "setup" (setup JSON path), optional "profile" object and
      // "request_rate".
      const auto j = read_json_file(config_path);
      const auto ctl = control_config_from_json(j);
      const auto t = load_topology(j.at("topology").get<std::string>());
      const auto s = setup_from_json(read_json_file(j.at("setup").get<std::string>()));
      BackgroundProfile profile;
      if (j.contains("profile")) profile = profile_from_json(j.at("profile"));
      const auto trace = run_control_plane(
          ctl, t, s, profile,
          Workload::uniform(s.client_count(), j.value("request_rate", 1.0)),
          hours, seed);
      std::ofstream out(out_path);
      if (!out) throw FormatError("cannot write " + out_path);
      write_trace_csv(trace, out);
      std::cout << "bottleneck_rounds," << trace.rounds(ProbeKind::kBottleneck)
                << '\n'
                << "topology_rounds," << trace.rounds(ProbeKind::kTopology)
                << '\n'
                << "requests," << trace.events.size() << '\n';
    } else if (*run) {
      auto config = experiment_config_from_json(read_json_file(config_path));
      if (threads) config.threads = *threads;
      for (const auto& f : run_experiment(config, out_dir)) {
        std::cout << f.string() << '\n';
      }
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
