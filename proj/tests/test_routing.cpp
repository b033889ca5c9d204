#include <doctest.h>

#include <algorithm>
#include <set>

#include "mhsim/routing.hpp"
#include "support.hpp"

using namespace mhsim;
using testsupport::WorkedExample;

TEST_CASE("link cost is 1e8 over bits per second") {
  CHECK(link_cost(1.0) == doctest::Approx(0.1));
  CHECK(link_cost(50.0) == doctest::Approx(0.002));
  CHECK(link_cost(10.0) == doctest::Approx(0.01));
  CHECK_THROWS_AS(link_cost(0.0), ParameterError);
  CHECK_THROWS_AS(link_cost(-2.0), ParameterError);
}

TEST_CASE("line graph has the unique path") {
  Topology t(3);
  const LinkId sa = t.add_link(0, 1);
  const LinkId ac = t.add_link(1, 2);
  const auto p = shortest_path(t, 0, sa, 2);
  REQUIRE(p);
  CHECK(p->links == std::vector<LinkId>{sa, ac});
  CHECK(p->nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(p->hop_count() == 2);
  CHECK(p->first_link() == sa);
}

TEST_CASE("equal cost and hops go to the smaller node sequence") {
  // 0 -egress- 1, then 1-4-9 and 1-7-9 with equal capacities.
  Topology t(10);
  const LinkId e = t.add_link(0, 1, 5);
  t.add_link(1, 7, 5);
  t.add_link(7, 9, 5);
  t.add_link(1, 4, 5);
  t.add_link(4, 9, 5);
  const auto p = shortest_path(t, 0, e, 9);
  REQUIRE(p);
  CHECK(p->nodes == std::vector<NodeId>{0, 1, 4, 9});
}

TEST_CASE("three fast hops beat one slow hop") {
  Topology t(5);
  const LinkId e = t.add_link(0, 1, 50);
  t.add_link(1, 4, 1);  // cost 0.1
  t.add_link(1, 2, 50);
  t.add_link(2, 3, 50);
  t.add_link(3, 4, 50);  // 3 x 0.002
  const auto p = shortest_path(t, 0, e, 4);
  REQUIRE(p);
  CHECK(p->hop_count() == 4);
  CHECK(p->cost == doctest::Approx(0.008));
}

TEST_CASE("the path never returns through the server") {
  // Cheapest continuation would be back through the server's other link.
  Topology t(4);
  const LinkId slow = t.add_link(0, 1, 1);
  t.add_link(0, 2, 50);
  t.add_link(2, 3, 50);
  t.add_link(1, 3, 1);
  const auto p = shortest_path(t, 0, slow, 3);
  REQUIRE(p);
  CHECK(p->nodes == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("shortest path argument checks") {
  WorkedExample f;
  CHECK_THROWS_AS(shortest_path(f.topo, 0, 3, 4), ParameterError);
  CHECK_THROWS_AS(shortest_path(f.topo, 0, 0, 0), ParameterError);
  CHECK_THROWS_AS(shortest_path(f.topo, 0, 0, 99), ParameterError);
}

TEST_CASE("unreachable through an egress") {
  // 0-1 is a dead end; 0-2-3 reaches the client.
  Topology t(4);
  const LinkId dead = t.add_link(0, 1);
  const LinkId live = t.add_link(0, 2);
  t.add_link(2, 3);
  CHECK_FALSE(shortest_path(t, 0, dead, 3));
  CHECK(shortest_path(t, 0, live, 3));
}

TEST_CASE("path table shape, adjacency and disconnected clients") {
  WorkedExample f;
  const auto table = build_path_table(f.topo, f.setup);
  CHECK(table.client_count() == 3);
  CHECK(table.isp_count() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(table.at(c, i));
      CHECK(table.at(c, i)->first_link() == f.setup.isp_egress[i]);
    }
  }

  Topology t(6);
  const LinkId a = t.add_link(0, 1);
  const LinkId b = t.add_link(0, 2);
  const LinkId c = t.add_link(0, 3);
  t.add_link(4, 5);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b, c};
  s.clients = {1, 5};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = balanced_strategy(3, 2);
  const auto tab = build_path_table(t, s);
  CHECK(tab.at(0, 0)->hop_count() == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK_FALSE(tab.reachable(1, i));
  CHECK_FALSE(tab.feasible(Strategy::parse("AA")));
  CHECK_THROWS_AS(tab.selected(Strategy::parse("AA"), 1), InfeasibleStrategyError);
}

TEST_CASE("fifteen entries for 3 ISPs and 5 clients") {
  const auto t = assign_capacities(generate_waxman({300, 2, 0.15, 0.2}, 1), {}, 2);
  const auto s = sample_multihome_setup(t, 3, 5, 3);
  const auto table = build_path_table(t, s);
  CHECK(table.client_count() * table.isp_count() == 15);
}

TEST_CASE("footprint of the worked example strategy ACC") {
  WorkedExample f;
  const auto table = build_path_table(f.topo, f.setup);
  const auto fp = footprint(Strategy::parse("ACC"), table);
  CHECK(fp.link_multiset.size() == 9);
  CHECK(fp.link_set.size() == 7);
  CHECK(std::is_sorted(fp.link_set.begin(), fp.link_set.end()));
  CHECK(fp.node_set == std::vector<NodeId>{0, 1, 2, 4, 5, 6, 7, 8});
}

TEST_CASE("footprint of identical paths and a single client") {
  Topology t(5);
  const LinkId a = t.add_link(0, 1);
  const LinkId b = t.add_link(0, 4);
  t.add_link(1, 2);
  t.add_link(2, 3);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b};
  s.clients = {3};
  s.demands = {kUnbounded};
  s.static_strategy = Strategy::parse("A");
  auto fp = footprint(Strategy::parse("A"), build_path_table(t, s));
  CHECK(fp.link_multiset.size() == 3);
  CHECK(fp.link_set.size() == 3);

  // Client 2's path is a prefix of client 3's.
  s.clients = {3, 2};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = Strategy::parse("AA");
  fp = footprint(Strategy::parse("AA"), build_path_table(t, s));
  CHECK(fp.link_multiset.size() == 5);
  CHECK(fp.link_set.size() == 3);
}

TEST_CASE("setup stats report the closest client") {
  Topology t(7);
  const LinkId a = t.add_link(0, 1);
  const LinkId b = t.add_link(0, 6);
  for (NodeId v = 1; v < 5; ++v) t.add_link(v, v + 1);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {a, b};
  s.clients = {3, 5};
  s.demands.assign(2, kUnbounded);
  s.static_strategy = Strategy::parse("AB");
  const auto stats = setup_stats(t, s, build_path_table(t, s));
  CHECK(stats.nodes == 7);
  CHECK(stats.links == 6);
  CHECK(stats.min_hops == 3);

  s.clients = {1, 5};
  CHECK(setup_stats(t, s, build_path_table(t, s)).min_hops == 1);
}

TEST_CASE("property: routing matches brute-force simple path search") {
  Rng rng(2024);
  int checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 3 + uniform_index(rng, 8);  // 3..10 nodes
    const std::size_t m = n - 1 + uniform_index(rng, n + 3);
    // Some integer capacities to force cost ties.
    const auto t = testsupport::random_graph(n, m, rng, 1.0, 4.0);
    Topology tie(n);
    for (const auto& l : t.links()) {
      tie.add_link(l.a, l.b, std::round(l.capacity_gbps));
    }
    for (const Topology* g : {&t, static_cast<const Topology*>(&tie)}) {
      const NodeId server = static_cast<NodeId>(uniform_index(rng, n));
      for (LinkId egress : g->incident(server)) {
        for (NodeId client = 0; client < n; ++client) {
          if (client == server) continue;
          const auto got = shortest_path(*g, server, egress, client);
          const auto want =
              testsupport::brute_force_path(*g, server, egress, client);
          REQUIRE(got.has_value() == want.has_value());
          if (!got) continue;
          CHECK(got->nodes == want->nodes);
          CHECK(got->links == want->links);
          CHECK(got->cost == doctest::Approx(want->cost).epsilon(1e-12));
          // Simple, starts at the egress, ends at the client.
          std::set<NodeId> uniq(got->nodes.begin(), got->nodes.end());
          CHECK(uniq.size() == got->nodes.size());
          CHECK(got->first_link() == egress);
          CHECK(got->nodes.back() == client);
          CHECK(got->nodes.size() == got->links.size() + 1);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("property: footprint identity") {
  for (int iter = 0; iter < 50; ++iter) {
    const auto t = assign_capacities(generate_waxman({60, 2, 0.15, 0.2}, iter), {}, iter);
    const auto s = sample_multihome_setup(t, 3, 5, iter);
    const auto table = build_path_table(t, s);
    const auto k = s.static_strategy;
    if (!table.feasible(k)) continue;
    const auto fp = footprint(k, table);
    std::size_t hops = 0;
    for (std::size_t c = 0; c < 5; ++c) hops += table.selected(k, c).hop_count();
    CHECK(fp.link_multiset.size() == hops);
    CHECK(fp.link_set.size() <= fp.link_multiset.size());
    // Equality exactly when no two paths share a link.
    std::multiset<LinkId> ms(fp.link_multiset.begin(), fp.link_multiset.end());
    bool shared = false;
    for (LinkId l : fp.link_set) shared = shared || ms.count(l) > 1;
    CHECK((fp.link_set.size() == fp.link_multiset.size()) == !shared);
  }
}

TEST_CASE("routing is deterministic") {
  const auto t = assign_capacities(generate_waxman({200, 2, 0.15, 0.2}, 8), {}, 8);
  const auto s = sample_multihome_setup(t, 3, 5, 8);
  const auto x = build_path_table(t, s);
  const auto y = build_path_table(t, s);
  for (std::size_t c = 0; c < 5; ++c) {
    for (std::size_t i = 0; i < 3; ++i) CHECK(x.at(c, i) == y.at(c, i));
  }
}
