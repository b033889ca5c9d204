#pragma once

#include <optional>
#include <vector>

#include "mhsim/topology.hpp"
#include "mhsim/types.hpp"

namespace mhsim {

// OSPF cost 10^8 / bandwidth(bps), real-valued.
double link_cost(double capacity_gbps);
double link_cost(const Link& link);

// Route from the server to one client. links[0] is the egress link and
// nodes[0] the server; nodes.size() == links.size() + 1.
struct Path {
  std::vector<LinkId> links;
  std::vector<NodeId> nodes;
  double cost = 0.0;

  std::size_t hop_count() const { return links.size(); }
  LinkId first_link() const { return links.front(); }

  friend bool operator==(const Path&, const Path&) = default;
};

// Least-cost simple path whose first link is `egress`. Ties go to fewer
// hops, then to the lexicographically smallest node sequence. nullopt when
// no such path exists. Throws ParameterError if egress is not incident to
// server or client == server.
std::optional<Path> shortest_path(const Topology& topology, NodeId server,
                                  LinkId egress, NodeId client);

// |C| x |F| matrix of constrained shortest paths.
class PathTable {
 public:
  PathTable() = default;
  PathTable(std::size_t clients, std::size_t isps)
      : clients_(clients), isps_(isps), entries_(clients * isps) {}

  std::size_t client_count() const { return clients_; }
  std::size_t isp_count() const { return isps_; }

  const std::optional<Path>& at(std::size_t client, std::size_t isp) const {
    return entries_.at(client * isps_ + isp);
  }
  std::optional<Path>& at(std::size_t client, std::size_t isp) {
    return entries_.at(client * isps_ + isp);
  }

  bool reachable(std::size_t client, std::size_t isp) const {
    return at(client, isp).has_value();
  }
  // True when every selected (client, ISP) entry has a path.
  bool feasible(const Strategy& strategy) const;
  // Path of `client` under `strategy`; throws InfeasibleStrategyError.
  const Path& selected(const Strategy& strategy, std::size_t client) const;

 private:
  std::size_t clients_ = 0;
  std::size_t isps_ = 0;
  std::vector<std::optional<Path>> entries_;
};

PathTable build_path_table(const Topology& topology,
                           const MultihomeSetup& setup);

// Links and nodes touched by the |C| selected paths (TOPO_k).
struct Footprint {
  std::vector<LinkId> link_multiset;  // path order, client by client
  std::vector<LinkId> link_set;       // sorted, unique
  std::vector<NodeId> node_set;       // sorted, unique
};

Footprint footprint(const Strategy& strategy, const PathTable& table);

struct SetupStats {
  std::size_t nodes = 0;
  std::size_t links = 0;
  std::size_t min_hops = 0;  // H: closest client over all reachable entries
};

// Throws Error when no client is reachable through any ISP.
SetupStats setup_stats(const Topology& topology, const MultihomeSetup& setup,
                       const PathTable& table);

}  // namespace mhsim
