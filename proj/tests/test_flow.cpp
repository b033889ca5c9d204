#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mhsim/flow.hpp"
#include "mhsim/lp.hpp"
#include "support.hpp"

using namespace mhsim;
using testsupport::WorkedExample;

namespace {

double link_load(const ThroughputSolution& sol, const Strategy& k,
                 const PathTable& table, LinkId l) {
  double load = 0.0;
  for (std::size_t c = 0; c < sol.rates.size(); ++c) {
    const auto& links = table.selected(k, c).links;
    if (std::find(links.begin(), links.end(), l) != links.end()) {
      load += sol.rates[c];
    }
  }
  return load;
}

// Random small instance with at most `max_clients` clients and 12 links.
struct RandomInstance {
  Topology topo;
  MultihomeSetup setup;
  PathTable table;
  Strategy strategy;
  std::vector<double> residuals;
};

std::optional<RandomInstance> random_instance(Rng& rng, std::size_t max_clients) {
  RandomInstance r;
  const std::size_t n = 5 + uniform_index(rng, 4);
  r.topo = testsupport::random_graph(n, 8 + uniform_index(rng, 5), rng);
  NodeId server = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (r.topo.degree(v) > r.topo.degree(server)) server = v;
  }
  if (r.topo.degree(server) < 2) return std::nullopt;
  r.setup.server = server;
  r.setup.isp_egress = {r.topo.incident(server)[0], r.topo.incident(server)[1]};
  const std::size_t clients = 2 + uniform_index(rng, max_clients - 1);
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < n; ++v) {
    if (v != server) pool.push_back(v);
  }
  for (std::size_t i = 0; i < clients && i < pool.size(); ++i) {
    const auto j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    r.setup.clients.push_back(pool[i]);
  }
  r.setup.demands.assign(r.setup.clients.size(), kUnbounded);
  r.setup.static_strategy = balanced_strategy(2, r.setup.clients.size());
  r.table = build_path_table(r.topo, r.setup);
  std::vector<std::uint8_t> k;
  for (std::size_t c = 0; c < r.setup.clients.size(); ++c) {
    k.push_back(static_cast<std::uint8_t>(uniform_index(rng, 2)));
  }
  r.strategy = Strategy(k);
  if (!r.table.feasible(r.strategy)) return std::nullopt;
  for (LinkId l = 0; l < r.topo.link_count(); ++l) {
    r.residuals.push_back(0.01 * static_cast<double>(10 + uniform_index(rng, 141)));
  }
  return r;
}

}  // namespace

TEST_CASE("residual capacity model") {
  Topology t(2);
  t.add_link(0, 1, 10);
  CHECK(residual_capacity(t, 0, 3, BackgroundProfile{}) == 10.0);

  Topology u(2);
  u.add_link(0, 1, 20);
  BackgroundProfile p;
  p.hourly_load[20] = 0.5;
  CHECK(residual_capacity(u, 0, 20, p) == doctest::Approx(10.0));

  // Load near 1 with jitter above 1 clamps to zero.
  auto heavy = BackgroundProfile::constant(0.99, 0.5, 3);
  bool clamped = false;
  Topology many(41);
  for (NodeId v = 1; v <= 40; ++v) many.add_link(0, v, 5);
  for (double r : residual_capacities(many, 0, heavy)) {
    CHECK(r >= 0.0);
    clamped = clamped || r == 0.0;
  }
  CHECK(clamped);

  CHECK_THROWS_AS(residual_capacity(t, 0, 24, p), ParameterError);
  CHECK_THROWS_AS(BackgroundProfile::constant(1.0, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(BackgroundProfile::constant(0.2, -0.1, 1), ParameterError);
}

TEST_CASE("jitter is deterministic and within its band") {
  const auto p = BackgroundProfile::constant(0.3, 0.2, 99);
  for (LinkId l = 0; l < 200; ++l) {
    for (int h = 0; h < 24; h += 5) {
      const double j = p.jitter(l, h);
      CHECK(j >= 0.8);
      CHECK(j <= 1.2);
      CHECK(j == p.jitter(l, h));
    }
  }
  CHECK(p.jitter(1, 1) != p.jitter(2, 1));
}

TEST_CASE("lp solver basics") {
  // max x + y, x + 2y <= 4, 3x + y <= 6 -> (1.6, 1.2), value 2.8
  lp::Problem p{{1, 1}, {{1, 2}, {3, 1}}, {4, 6}};
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.value == doctest::Approx(2.8));
  CHECK(s.x[0] == doctest::Approx(1.6));
  CHECK(s.x[1] == doctest::Approx(1.2));

  // x >= 3 written as -x <= -3, with x <= 2: infeasible.
  lp::Problem inf{{1}, {{-1}, {1}}, {-3, 2}};
  CHECK(lp::solve(inf).status == lp::Status::kInfeasible);

  lp::Problem unb{{1, 0}, {{0, 1}}, {1}};
  CHECK(lp::solve(unb).status == lp::Status::kUnbounded);

  // Phase one needed: x + y >= 2, x <= 5, y <= 1, maximize -x.
  lp::Problem ph{{-1, 0}, {{-1, -1}, {1, 0}, {0, 1}}, {-2, 5, 1}};
  s = lp::solve(ph);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("two clients on one shared link") {
  Topology t(4);
  const LinkId a = t.add_link(0, 1, 10);
  const LinkId b = t.add_link(0, 3, 10);
  t.add_link(1, 2, 100);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b};
  s.clients = {1, 2};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = Strategy::parse("AA");
  const auto table = build_path_table(t, s);
  const auto sol = max_throughput(Strategy::parse("AA"), table, s.demands,
                                  raw_capacities(t));
  CHECK(sol.total == doctest::Approx(10.0));
  // Lexicographically greatest optimum puts everything on client 0.
  CHECK(sol.rates[0] == doctest::Approx(10.0));
  CHECK(sol.rates[1] == doctest::Approx(0.0));
  CHECK(sol.saturated_links == std::vector<LinkId>{a});
}

TEST_CASE("disjoint paths add their path minima") {
  Topology t(5);
  const LinkId a = t.add_link(0, 1, 9);
  const LinkId b = t.add_link(0, 2, 7);
  t.add_link(1, 3, 5);
  t.add_link(2, 4, 8);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b};
  s.clients = {3, 4};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = Strategy::parse("AB");
  const auto table = build_path_table(t, s);
  auto sol = max_throughput(Strategy::parse("AB"), table, s.demands,
                            raw_capacities(t));
  CHECK(sol.total == doctest::Approx(12.0));
  CHECK(sol.rates[0] == doctest::Approx(5.0));
  CHECK(sol.rates[1] == doctest::Approx(7.0));

  // Demands clamp the rates.
  const std::vector<double> demands{2.0, kUnbounded};
  sol = max_throughput(Strategy::parse("AB"), table, demands, raw_capacities(t));
  CHECK(sol.total == doctest::Approx(9.0));
  CHECK(sol.rates[0] == doctest::Approx(2.0));
}

TEST_CASE("infeasible strategies are rejected") {
  Topology t(4);
  const LinkId dead = t.add_link(0, 1);
  const LinkId live = t.add_link(0, 2);
  t.add_link(2, 3);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {dead, live};
  s.clients = {3};
  s.demands = {kUnbounded};
  s.static_strategy = Strategy::parse("B");
  const auto table = build_path_table(t, s);
  CHECK_THROWS_AS(max_throughput(Strategy::parse("A"), table, s.demands,
                                 raw_capacities(t)),
                  InfeasibleStrategyError);
  CHECK_THROWS_AS(detect_bottlenecks(Strategy::parse("A"), table,
                                     raw_capacities(t)),
                  InfeasibleStrategyError);
}

TEST_CASE("max-min fair gives the leftover to the uncapped client") {
  Topology t(4);
  const LinkId a = t.add_link(0, 1, 10);
  const LinkId b = t.add_link(0, 3, 10);
  t.add_link(1, 2, 3);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b};
  s.clients = {1, 2};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = Strategy::parse("AA");
  const auto table = build_path_table(t, s);
  const auto sol =
      max_throughput(Strategy::parse("AA"), table, s.demands, raw_capacities(t),
                     AllocationObjective::kMaxMinFair);
  // Client 1 is capped at 3 by link 1-2, client 0 takes the rest of 10.
  CHECK(sol.rates[1] == doctest::Approx(3.0));
  CHECK(sol.rates[0] == doctest::Approx(7.0));
  CHECK(sol.total == doctest::Approx(10.0));
}

TEST_CASE("bottleneck examples") {
  WorkedExample f;
  const auto table = build_path_table(f.topo, f.setup);
  const auto bs =
      detect_bottlenecks(Strategy::parse("ACC"), table, raw_capacities(f.topo));
  CHECK(bs.distinct_links.size() == 2);
  double w = 0.0;
  for (LinkId l : bs.distinct_links) w += f.topo.link(l).capacity_gbps;
  CHECK(w == doctest::Approx(10.0));
  CHECK(bs.per_path[0].available_gbps == doctest::Approx(4.0));
  CHECK(bs.per_path[1].available_gbps == doctest::Approx(6.0));

  Path p;
  p.links = {0, 1, 2};
  p.nodes = {0, 1, 2, 3};
  const std::vector<double> r{9, 3, 5};
  auto ch = choke_link(p, r);
  REQUIRE(ch);
  CHECK(ch->link == 1);
  CHECK(ch->position == 1);
  CHECK(ch->available_gbps == 3.0);

  Path q;
  q.links = {0, 1};
  q.nodes = {0, 1, 2};
  const std::vector<double> eq{4, 4};
  ch = choke_link(q, eq);
  REQUIRE(ch);
  CHECK(ch->position == 0);

  // Restricted to known positions.
  ch = choke_link(p, r, {true, false, true});
  REQUIRE(ch);
  CHECK(ch->link == 2);
  CHECK_FALSE(choke_link(p, r, {false, false, false}));
}

TEST_CASE("property: allocation matches grid-search oracle") {
  Rng rng(8);
  int checked = 0;
  while (checked < 60) {
    auto inst = random_instance(rng, 4);
    if (!inst) continue;
    const auto sol = max_throughput(inst->strategy, inst->table,
                                    inst->setup.demands, inst->residuals);
    std::vector<std::vector<LinkId>> paths;
    for (std::size_t c = 0; c < inst->setup.clients.size(); ++c) {
      paths.push_back(inst->table.selected(inst->strategy, c).links);
    }
    const double oracle = testsupport::grid_max_throughput(paths, inst->residuals);
    CHECK(sol.total >= oracle - 1e-6);
    CHECK(sol.total - oracle <= 0.02);
    ++checked;
  }
}

TEST_CASE("property: feasibility, monotonicity and choke invariants") {
  Rng rng(31);
  int checked = 0;
  while (checked < 150) {
    auto inst = random_instance(rng, 4);
    if (!inst) continue;
    const auto& k = inst->strategy;
    const auto sol =
        max_throughput(k, inst->table, inst->setup.demands, inst->residuals);
    double sum = 0.0;
    for (double x : sol.rates) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sol.total == doctest::Approx(sum));
    for (LinkId l = 0; l < inst->topo.link_count(); ++l) {
      CHECK(link_load(sol, k, inst->table, l) <= inst->residuals[l] + 1e-9);
    }

    // Raising one residual never lowers the optimum.
    auto bigger = inst->residuals;
    bigger[uniform_index(rng, bigger.size())] += 0.5;
    CHECK(max_throughput(k, inst->table, inst->setup.demands, bigger).total >=
          sol.total - 1e-9);

    // Scaling all residuals scales the optimum.
    auto scaled = inst->residuals;
    for (double& x : scaled) x *= 3.0;
    CHECK(max_throughput(k, inst->table, inst->setup.demands, scaled).total ==
          doctest::Approx(3.0 * sol.total));

    const auto bs = detect_bottlenecks(k, inst->table, inst->residuals);
    for (std::size_t c = 0; c < bs.per_path.size(); ++c) {
      const auto& path = inst->table.selected(k, c);
      const auto& ch = bs.per_path[c];
      REQUIRE(ch.position < path.links.size());
      CHECK(path.links[ch.position] == ch.link);
      double lo = 1e300;
      for (LinkId l : path.links) lo = std::min(lo, inst->residuals[l]);
      CHECK(ch.available_gbps == lo);
      for (std::size_t i = 0; i < ch.position; ++i) {
        CHECK(inst->residuals[path.links[i]] > lo);
      }
      // No client can exceed its path minimum.
      CHECK(sol.rates[c] <= lo + 1e-9);
    }
    ++checked;
  }
}

TEST_CASE("property: lexicographic optimum is deterministic") {
  Rng rng(77);
  int checked = 0;
  while (checked < 40) {
    auto inst = random_instance(rng, 4);
    if (!inst) continue;
    const auto a = max_throughput(inst->strategy, inst->table,
                                  inst->setup.demands, inst->residuals);
    const auto b = max_throughput(inst->strategy, inst->table,
                                  inst->setup.demands, inst->residuals);
    CHECK(a.rates == b.rates);
    ++checked;
  }
}
