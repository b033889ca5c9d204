#pragma once

// Fixtures and brute-force reference implementations shared by the tests.
// The oracles deliberately avoid the library's algorithms: paths come from
// exhaustive DFS and rates from grid search.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mhsim/rng.hpp"
#include "mhsim/routing.hpp"
#include "mhsim/topology.hpp"

namespace testsupport {

using namespace mhsim;

// Worked example network: server 0, ISP links A=0-1, B=0-3, C=0-5,
// clients 4, 7, 8.
struct WorkedExample {
  Topology topo{9};
  MultihomeSetup setup;

  WorkedExample() {
    const LinkId a = topo.add_link(0, 1, 10);
    const LinkId b = topo.add_link(0, 3, 10);
    const LinkId c = topo.add_link(0, 5, 6);
    topo.add_link(1, 2, 10);
    topo.add_link(2, 4, 4);
    topo.add_link(5, 6, 10);
    topo.add_link(6, 7, 10);
    topo.add_link(6, 8, 10);
    topo.add_link(3, 2, 10);
    topo.add_link(3, 6, 10);
    setup.server = 0;
    setup.isp_egress = {a, b, c};
    setup.clients = {4, 7, 8};
    setup.demands.assign(3, kUnbounded);
    setup.static_strategy = balanced_strategy(3, 3);
  }
};

// Random connected graph: a random spanning tree plus extra links.
inline Topology random_graph(std::size_t nodes, std::size_t links, Rng& rng,
                             double cap_low = 1.0, double cap_high = 10.0) {
  Topology t(nodes);
  auto cap = [&] { return cap_low + (cap_high - cap_low) * unit_uniform(rng); };
  for (NodeId v = 1; v < nodes; ++v) {
    t.add_link(static_cast<NodeId>(uniform_index(rng, v)), v, cap());
  }
  std::size_t guard = 0;
  while (t.link_count() < links && guard++ < 1000) {
    const auto a = static_cast<NodeId>(uniform_index(rng, nodes));
    const auto b = static_cast<NodeId>(uniform_index(rng, nodes));
    if (a == b || t.find_link(a, b)) continue;
    t.add_link(a, b, cap());
  }
  return t;
}

// Every simple path server -> client starting with `egress`, by DFS.
inline std::vector<Path> all_simple_paths(const Topology& t, NodeId server,
                                          LinkId egress, NodeId client) {
  std::vector<Path> out;
  const NodeId first = t.link(egress).other(server);
  std::vector<bool> seen(t.node_count(), false);
  seen[server] = true;
  Path cur;
  cur.nodes = {server};
  cur.links = {egress};
  std::function<void(NodeId)> dfs = [&](NodeId n) {
    seen[n] = true;
    cur.nodes.push_back(n);
    if (n == client) {
      out.push_back(cur);
    } else {
      for (LinkId l : t.incident(n)) {
        const NodeId m = t.link(l).other(n);
        if (seen[m]) continue;
        cur.links.push_back(l);
        dfs(m);
        cur.links.pop_back();
      }
    }
    cur.nodes.pop_back();
    seen[n] = false;
  };
  dfs(first);
  for (auto& p : out) {
    p.cost = 0.0;
    for (LinkId l : p.links) p.cost += 1e8 / (t.link(l).capacity_gbps * 1e9);
  }
  return out;
}

// Best path under (cost within 1e-12 relative, hops, node sequence).
inline std::optional<Path> brute_force_path(const Topology& t, NodeId server,
                                            LinkId egress, NodeId client) {
  auto paths = all_simple_paths(t, server, egress, client);
  if (paths.empty()) return std::nullopt;
  double best = paths.front().cost;
  for (const auto& p : paths) best = std::min(best, p.cost);
  std::vector<Path> tied;
  for (const auto& p : paths) {
    if (p.cost <= best * (1 + 1e-12)) tied.push_back(p);
  }
  std::sort(tied.begin(), tied.end(), [](const Path& x, const Path& y) {
    if (x.links.size() != y.links.size()) return x.links.size() < y.links.size();
    return x.nodes < y.nodes;
  });
  return tied.front();
}

// Max total rate over fixed paths by grid search on the first C-1 rates
// (step `step`); the last rate is set exactly to its remaining headroom.
inline double grid_max_throughput(const std::vector<std::vector<LinkId>>& paths,
                                  const std::vector<double>& residual,
                                  double step = 0.01) {
  const std::size_t c = paths.size();
  std::vector<double> used(residual.size(), 0.0);
  double best = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i,
                                                     double sum) {
    double head = 1e300;
    for (LinkId l : paths[i]) head = std::min(head, residual[l] - used[l]);
    head = std::max(head, 0.0);
    if (i + 1 == c) {
      best = std::max(best, sum + head);
      return;
    }
    const int steps = static_cast<int>(std::floor(head / step + 1e-9));
    for (int k = 0; k <= steps; ++k) {
      const double x = k * step;
      for (LinkId l : paths[i]) used[l] += x;
      rec(i + 1, sum + x);
      for (LinkId l : paths[i]) used[l] -= x;
    }
  };
  if (c > 0) rec(0, 0.0);
  return best;
}

// Plug-in entropy (bits) of a sequence of discrete labels.
template <typename T>
double label_entropy(const std::vector<T>& labels) {
  std::map<T, double> counts;
  for (const auto& v : labels) counts[v] += 1.0;
  double h = 0.0;
  const double n = static_cast<double>(labels.size());
  for (const auto& [v, k] : counts) h -= (k / n) * std::log2(k / n);
  return h;
}

}  // namespace testsupport
