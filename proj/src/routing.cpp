#include "mhsim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace mhsim {

double link_cost(double capacity_gbps) {
  if (!(capacity_gbps > 0.0)) {
    throw ParameterError("link_cost: capacity must be positive");
  }
  return 1e8 / (capacity_gbps * 1e9);
}

double link_cost(const Link& link) { return link_cost(link.capacity_gbps); }

namespace {

constexpr std::uint32_t kNone = ~std::uint32_t{0};

// Costs within this relative distance are treated as a tie.
bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

struct Label {
  double cost = 0.0;
  std::uint32_t hops = 0;
  NodeId pred = kNone;
  LinkId via = kNone;
  bool reached = false;
  bool done = false;
};

std::vector<NodeId> chain(const std::vector<Label>& labels, NodeId tail) {
  std::vector<NodeId> seq;
  for (NodeId n = tail; n != kNone; n = labels[n].pred) seq.push_back(n);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

}  // namespace

std::optional<Path> shortest_path(const Topology& topology, NodeId server,
                                  LinkId egress, NodeId client) {
  if (server >= topology.node_count() || client >= topology.node_count()) {
    throw ParameterError("shortest_path: node out of range");
  }
  if (egress >= topology.link_count() ||
      !topology.link(egress).touches(server)) {
    throw ParameterError("shortest_path: egress not incident to server");
  }
  if (client == server) {
    throw ParameterError("shortest_path: client equals server");
  }

  std::vector<Label> labels(topology.node_count());
  const NodeId start = topology.link(egress).other(server);
  labels[server].done = true;  // a simple path never returns to the server
  labels[start] = Label{link_cost(topology.link(egress)), 1, kNone, egress,
                        true, false};

  using Entry = std::tuple<double, std::uint32_t, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(labels[start].cost, 1, start);

  while (!queue.empty()) {
    const auto [cost, hops, u] = queue.top();
    queue.pop();
    Label& lu = labels[u];
    if (lu.done || cost != lu.cost || hops != lu.hops) continue;
    lu.done = true;
    if (u == client) break;
    for (LinkId l : topology.incident(u)) {
      const NodeId v = topology.link(l).other(u);
      Label& lv = labels[v];
      if (lv.done) continue;
      const double c = lu.cost + link_cost(topology.link(l));
      const std::uint32_t h = lu.hops + 1;
      bool better = !lv.reached;
      if (!better) {
        if (!nearly_equal(c, lv.cost)) {
          better = c < lv.cost;
        } else if (h != lv.hops) {
          better = h < lv.hops;
        } else {
          // Equal cost and hops: keep the lexicographically smaller
          // server-to-node sequence. Both chains have the same length.
          auto via_u = chain(labels, u);
          auto current = chain(labels, lv.pred);
          better = via_u < current;
          if (better) {
            lv.pred = u;
            lv.via = l;
          }
          continue;
        }
      }
      if (better) {
        lv = Label{c, h, u, l, true, false};
        queue.emplace(c, h, v);
      }
    }
  }

  if (!labels[client].reached) return std::nullopt;
  Path path;
  path.cost = labels[client].cost;
  for (NodeId n = client; n != kNone; n = labels[n].pred) {
    path.nodes.push_back(n);
    path.links.push_back(labels[n].via);
  }
  path.nodes.push_back(server);
  std::reverse(path.nodes.begin(), path.nodes.end());
  std::reverse(path.links.begin(), path.links.end());
  return path;
}

bool PathTable::feasible(const Strategy& strategy) const {
  if (strategy.size() != clients_) return false;
  for (std::size_t c = 0; c < clients_; ++c) {
    if (strategy[c] >= isps_ || !reachable(c, strategy[c])) return false;
  }
  return true;
}

const Path& PathTable::selected(const Strategy& strategy,
                                std::size_t client) const {
  if (strategy.size() != clients_) {
    throw InfeasibleStrategyError("strategy length does not match clients");
  }
  const std::size_t isp = strategy[client];
  if (isp >= isps_ || !reachable(client, isp)) {
    throw InfeasibleStrategyError("strategy " + strategy.to_string() +
                                  " selects an unreachable path for client " +
                                  std::to_string(client));
  }
  return *at(client, isp);
}

PathTable build_path_table(const Topology& topology,
                           const MultihomeSetup& setup) {
  PathTable table(setup.client_count(), setup.isp_count());
  for (std::size_t c = 0; c < setup.client_count(); ++c) {
    for (std::size_t f = 0; f < setup.isp_count(); ++f) {
      table.at(c, f) = shortest_path(topology, setup.server,
                                     setup.isp_egress[f], setup.clients[c]);
    }
  }
  return table;
}

Footprint footprint(const Strategy& strategy, const PathTable& table) {
  Footprint fp;
  for (std::size_t c = 0; c < table.client_count(); ++c) {
    const Path& p = table.selected(strategy, c);
    fp.link_multiset.insert(fp.link_multiset.end(), p.links.begin(),
                            p.links.end());
    fp.node_set.insert(fp.node_set.end(), p.nodes.begin(), p.nodes.end());
  }
  fp.link_set = fp.link_multiset;
  std::sort(fp.link_set.begin(), fp.link_set.end());
  fp.link_set.erase(std::unique(fp.link_set.begin(), fp.link_set.end()),
                    fp.link_set.end());
  std::sort(fp.node_set.begin(), fp.node_set.end());
  fp.node_set.erase(std::unique(fp.node_set.begin(), fp.node_set.end()),
                    fp.node_set.end());
  return fp;
}

SetupStats setup_stats(const Topology& topology, const MultihomeSetup& setup,
                       const PathTable& table) {
  SetupStats stats{topology.node_count(), topology.link_count(), 0};
  bool any = false;
  for (std::size_t c = 0; c < setup.client_count(); ++c) {
    for (std::size_t f = 0; f < setup.isp_count(); ++f) {
      if (!table.reachable(c, f)) continue;
      const auto h = table.at(c, f)->hop_count();
      stats.min_hops = any ? std::min(stats.min_hops, h) : h;
      any = true;
    }
  }
  if (!any) throw Error("setup_stats: no client is reachable");
  return stats;
}

}  // namespace mhsim
