#include <doctest.h>

#include <set>

#include "mhsim/strategy.hpp"
#include "support.hpp"

using namespace mhsim;

namespace {

// Server 0, egress A = 0-1 (cap a), B = 0-2 (cap b); clients 3 and 4 each
// hang off both 1 and 2 with fat links, so each ISP gives a disjoint route.
struct TwoByTwo {
  Topology topo{5};
  MultihomeSetup setup;
  TwoByTwo(double a, double b, const char* stat) {
    const LinkId ea = topo.add_link(0, 1, a);
    const LinkId eb = topo.add_link(0, 2, b);
    topo.add_link(1, 3, 40);
    topo.add_link(2, 3, 40);
    topo.add_link(1, 4, 40);
    topo.add_link(2, 4, 40);
    setup.server = 0;
    setup.isp_egress = {ea, eb};
    setup.clients = {3, 4};
    setup.demands.assign(2, kUnbounded);
    setup.static_strategy = Strategy::parse(stat);
  }
};

}  // namespace

TEST_CASE("strategy letters") {
  const auto k = Strategy::parse("AACBC");
  CHECK(k.size() == 5);
  CHECK(k[2] == 2);
  CHECK(k.to_string() == "AACBC");
  CHECK_THROWS_AS(Strategy::parse(""), ParameterError);
  CHECK_THROWS_AS(Strategy::parse("aab"), ParameterError);
  CHECK_THROWS_AS(Strategy::parse("AAB", 3, 5), ParameterError);
  CHECK_THROWS_AS(Strategy::parse("AAD", 3, 3), ParameterError);
  CHECK(Strategy::parse("AB") < Strategy::parse("BA"));
}

TEST_CASE("enumeration size and order") {
  const auto all = enumerate_strategies(3, 5);
  CHECK(all.size() == 243);
  CHECK(all.front().to_string() == "AAAAA");
  CHECK(all[1].to_string() == "AAAAB");
  CHECK(all.back().to_string() == "CCCCC");
  CHECK(std::set<Strategy>(all.begin(), all.end()).size() == 243);
  CHECK(std::is_sorted(all.begin(), all.end()));

  const auto one = enumerate_strategies(3, 1);
  REQUIRE(one.size() == 3);
  CHECK(one[0].to_string() == "A");
  CHECK(one[1].to_string() == "B");
  CHECK(one[2].to_string() == "C");

  CHECK(enumerate_strategies(2, 10).size() == 1024);
  CHECK_THROWS_AS(enumerate_strategies(3, 13), EnumerationTooLargeError);
  CHECK(enumerate_strategies(3, 13, 2'000'000).size() == 1'594'323);
  CHECK_THROWS_AS(enumerate_strategies(0, 3), ParameterError);
}

TEST_CASE("performance gain ratio") {
  CHECK(performance_gain(13.66, 10.0) == doctest::Approx(1.366));
  CHECK(performance_gain(7.0, 7.0) == 1.0);
  CHECK(performance_gain(0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(performance_gain(1.0, 0.0), Error);
}

TEST_CASE("symmetric routes give gain one and the first strategy") {
  // Three ISP nodes 1..3 all feed hub 4 with identical links.
  Topology t(10);
  MultihomeSetup s;
  s.server = 0;
  for (NodeId v = 1; v <= 3; ++v) {
    s.isp_egress.push_back(t.add_link(0, v, 10));
    t.add_link(v, 4, 10);
  }
  for (NodeId v = 5; v < 10; ++v) {
    t.add_link(4, v, 2);
    s.clients.push_back(v);
  }
  s.demands.assign(5, kUnbounded);
  s.static_strategy = balanced_strategy(3, 5);
  const auto r = optimal_strategy(s, build_path_table(t, s), s.demands,
                                  raw_capacities(t));
  CHECK(r.gain == 1.0);
  CHECK(r.optimal_strategy.to_string() == "AAAAA");
  CHECK(r.optimal_total == doctest::Approx(10.0));
}

TEST_CASE("two ISPs, two clients by hand") {
  // AA: 4, AB: 4 + 6, BA: 6 + 4, BB: 6.
  TwoByTwo x(4, 6, "AA");
  const auto table = build_path_table(x.topo, x.setup);
  const auto scores =
      score_strategies(x.setup, table, x.setup.demands, raw_capacities(x.topo));
  REQUIRE(scores.totals.size() == 4);
  CHECK(*scores.totals[0] == doctest::Approx(4.0));
  CHECK(*scores.totals[1] == doctest::Approx(10.0));
  CHECK(*scores.totals[2] == doctest::Approx(10.0));
  CHECK(*scores.totals[3] == doctest::Approx(6.0));
  const auto r = optimal_strategy(x.setup, scores);
  CHECK(r.optimal_strategy.to_string() == "AB");
  CHECK(r.static_total == doctest::Approx(4.0));
  CHECK(r.gain == doctest::Approx(2.5));
}

TEST_CASE("infeasible strategies are skipped, infeasible static is an error") {
  // ISP A dead-ends, so only B reaches the client.
  Topology t(4);
  const LinkId dead = t.add_link(0, 1);
  const LinkId live = t.add_link(0, 2, 3);
  t.add_link(2, 3, 5);
  MultihomeSetup s;
  s.server = 0;
  s.isp_egress = {dead, live};
  s.clients = {3};
  s.demands = {kUnbounded};
  s.static_strategy = Strategy::parse("B");
  const auto table = build_path_table(t, s);
  const auto scores = score_strategies(s, table, s.demands, raw_capacities(t));
  CHECK_FALSE(scores.totals[0]);
  CHECK_FALSE(scores.index_of(Strategy::parse("A")));
  const auto r = optimal_strategy(s, scores);
  CHECK(r.optimal_strategy.to_string() == "B");
  CHECK(r.gain == 1.0);

  s.static_strategy = Strategy::parse("A");
  CHECK_THROWS_AS(optimal_strategy(s, scores), InfeasibleStrategyError);
}

TEST_CASE("property: gain dominance, scale invariance and pruning") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto t =
        assign_capacities(generate_waxman({150, 2, 0.15, 0.2}, seed), {}, seed);
    const auto s = sample_multihome_setup(t, 3, 5, seed);
    const auto table = build_path_table(t, s);
    if (!table.feasible(s.static_strategy)) continue;
    const auto res = raw_capacities(t);
    const auto scores = score_strategies(s, table, s.demands, res);
    const auto r = optimal_strategy(s, scores);
    CHECK(r.gain >= 1.0);
    for (const auto& total : scores.totals) {
      if (total) CHECK(*total <= r.optimal_total + 1e-9);
    }

    auto scaled = res;
    for (double& x : scaled) x *= 2.5;
    const auto rs = optimal_strategy(s, table, s.demands, scaled);
    CHECK(rs.optimal_strategy == r.optimal_strategy);
    CHECK(rs.gain == doctest::Approx(r.gain));

    // Dropping a non-optimal, non-static strategy changes nothing.
    auto pruned = scores;
    for (std::size_t i = 0; i < pruned.strategies.size(); ++i) {
      const auto& k = pruned.strategies[i];
      if (pruned.totals[i] && k != r.optimal_strategy && k != s.static_strategy) {
        pruned.strategies.erase(pruned.strategies.begin() + i);
        pruned.totals.erase(pruned.totals.begin() + i);
        break;
      }
    }
    const auto rp = optimal_strategy(s, pruned);
    CHECK(rp.optimal_strategy == r.optimal_strategy);
    CHECK(rp.optimal_total == r.optimal_total);
    CHECK(rp.gain == r.gain);
  }
}
