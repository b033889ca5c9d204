#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mhsim/types.hpp"

namespace mhsim {

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double capacity_gbps = 1.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
};

// Capacitated undirected simple graph. Node ids are dense 0..N-1 and link
// ids are dense 0..M-1 in insertion order.
class Topology {
 public:
  Topology() = default;
  explicit Topology(std::size_t node_count);

  // Throws StructuralError on self-loops, parallel links, unknown endpoints
  // or non-positive capacity.
  LinkId add_link(NodeId a, NodeId b, double capacity_gbps = 1.0);
  void set_capacity(LinkId id, double capacity_gbps);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const Link& link(LinkId id) const { return links_.at(id); }
  std::span<const Link> links() const { return links_; }
  std::span<const LinkId> incident(NodeId n) const { return adjacency_.at(n); }
  std::size_t degree(NodeId n) const { return adjacency_.at(n).size(); }
  std::optional<LinkId> find_link(NodeId a, NodeId b) const;

  double mean_degree() const;
  bool connected() const;
  // BFS hop counts from `from`; -1 for unreachable nodes.
  std::vector<int> hop_distances(NodeId from) const;

  friend bool operator==(const Topology& x, const Topology& y);

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b);

  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> adjacency_;
  std::unordered_map<std::uint64_t, LinkId> pairs_;
};

struct WaxmanParams {
  std::size_t n = 1000;
  std::size_t m_per_node = 2;
  double alpha = 0.15;
  double beta = 0.2;
};

// Incremental Waxman: nodes uniform on the unit square; each arriving node
// links to min(m_per_node, existing) distinct earlier nodes drawn with
// weight alpha * exp(-d / (beta * sqrt(2))). Connected by construction.
// All links get capacity 1 Gbps; see assign_capacities.
Topology generate_waxman(const WaxmanParams& params, std::uint64_t seed);

// Two-level hierarchy: each AS is an incremental Waxman subgraph with
// `intra.m_per_node` links per node, node `as * nodes_per_as` is the AS's
// border router, and the border routers form a Waxman transit core.
Topology generate_transit_stub(std::size_t num_as, std::size_t nodes_per_as,
                               std::uint64_t seed,
                               const WaxmanParams& intra = {});

struct CapacityLaw {
  double low_gbps = 1.0;
  double high_gbps = 50.0;
  double shape = 1.2;  // Pareto tail index
};

// Draws every capacity i.i.d. from Pareto(scale=low, index=shape),
// resampling values above `high`.
Topology assign_capacities(Topology topology, const CapacityLaw& law,
                           std::uint64_t seed);

// Edge-list format:
//   # comment
//   nodes <N> links <M>
//   u v capacity_gbps
// Node ids in the file may be sparse; they are remapped densely in
// ascending id order.
Topology read_topology(std::istream& in);
void write_topology(const Topology& topology, std::ostream& out);
Topology load_topology(const std::filesystem::path& path);
void save_topology(const Topology& topology, const std::filesystem::path& path);

// A multihomed peering server, its egress links (one per ISP label A, B, ...)
// and the client nodes it serves.
struct MultihomeSetup {
  NodeId server = 0;
  std::vector<LinkId> isp_egress;
  std::vector<NodeId> clients;
  std::vector<double> demands;  // Gbps, kUnbounded for no cap
  Strategy static_strategy;

  std::size_t isp_count() const { return isp_egress.size(); }
  std::size_t client_count() const { return clients.size(); }

  // Throws ParameterError naming the violated invariant.
  void validate(const Topology& topology) const;
};

// Server drawn uniformly among nodes with degree >= num_isps, egress links
// uniformly among its incident links, clients uniformly among reachable
// non-server nodes. Demands are unbounded; the static strategy is the
// round-balanced vector.
MultihomeSetup sample_multihome_setup(const Topology& topology,
                                      std::size_t num_isps,
                                      std::size_t num_clients,
                                      std::uint64_t seed);

}  // namespace mhsim
