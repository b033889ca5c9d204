#include "mhsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "mhsim/rng.hpp"

namespace mhsim {

Topology::Topology(std::size_t node_count) : adjacency_(node_count) {}

std::uint64_t Topology::pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

LinkId Topology::add_link(NodeId a, NodeId b, double capacity_gbps) {
  if (a >= node_count() || b >= node_count()) {
    throw StructuralError("link endpoint out of range: " + std::to_string(a) +
                          " " + std::to_string(b));
  }
  if (a == b) {
    throw StructuralError("self-loop at node " + std::to_string(a));
  }
  if (!(capacity_gbps > 0.0) || !std::isfinite(capacity_gbps)) {
    throw StructuralError("link capacity must be positive and finite");
  }
  const auto key = pair_key(a, b);
  if (pairs_.count(key) != 0) {
    throw StructuralError("duplicate link " + std::to_string(a) + " " +
                          std::to_string(b));
  }
  const auto id = static_cast<LinkId>(links_.size());
  links_.push_back(Link{a, b, capacity_gbps});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  pairs_.emplace(key, id);
  return id;
}

void Topology::set_capacity(LinkId id, double capacity_gbps) {
  if (!(capacity_gbps > 0.0) || !std::isfinite(capacity_gbps)) {
    throw StructuralError("link capacity must be positive and finite");
  }
  links_.at(id).capacity_gbps = capacity_gbps;
}

std::optional<LinkId> Topology::find_link(NodeId a, NodeId b) const {
  auto it = pairs_.find(pair_key(a, b));
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

double Topology::mean_degree() const {
  if (node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(link_count()) /
         static_cast<double>(node_count());
}

std::vector<int> Topology::hop_distances(NodeId from) const {
  std::vector<int> dist(node_count(), -1);
  std::queue<NodeId> frontier;
  dist.at(from) = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (LinkId l : adjacency_[u]) {
      const NodeId v = links_[l].other(u);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool Topology::connected() const {
  if (node_count() == 0) return true;
  const auto dist = hop_distances(0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

bool operator==(const Topology& x, const Topology& y) {
  if (x.node_count() != y.node_count() || x.link_count() != y.link_count()) {
    return false;
  }
  for (std::size_t i = 0; i < x.links_.size(); ++i) {
    const Link& l = x.links_[i];
    const Link& r = y.links_[i];
    if (l.a != r.a || l.b != r.b || l.capacity_gbps != r.capacity_gbps) {
      return false;
    }
  }
  return true;
}

namespace {

struct Point {
  double x;
  double y;
};

void check_waxman(const WaxmanParams& p) {
  if (p.n < 2) throw ParameterError("waxman: n must be >= 2");
  if (p.m_per_node < 1) throw ParameterError("waxman: m_per_node must be >= 1");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
    throw ParameterError("waxman: alpha must be in (0, 1]");
  }
  if (!(p.beta > 0.0 && p.beta <= 1.0)) {
    throw ParameterError("waxman: beta must be in (0, 1]");
  }
}

// Adds an incremental Waxman graph over `nodes` (ids into `topo`) placed at
// `pos`. Node k attaches to min(m, k) distinct earlier nodes.
void waxman_attach(Topology& topo, std::span<const NodeId> nodes,
                   std::span<const Point> pos, const WaxmanParams& p,
                   Rng& rng) {
  const double scale = p.beta * std::sqrt(2.0);
  std::vector<double> weight;
  std::vector<bool> used;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    weight.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const double d = std::hypot(pos[k].x - pos[j].x, pos[k].y - pos[j].y);
      weight[j] = p.alpha * std::exp(-d / scale);
    }
    const std::size_t picks = std::min(p.m_per_node, k);
    used.assign(k, false);
    for (std::size_t t = 0; t < picks; ++t) {
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (!used[j]) total += weight[j];
      }
      std::size_t chosen = k;
      if (total > 0.0) {
        double target = unit_uniform(rng) * total;
        for (std::size_t j = 0; j < k; ++j) {
          if (used[j] || weight[j] <= 0.0) continue;
          chosen = j;
          target -= weight[j];
          if (target < 0.0) break;
        }
      } else {
        // All remaining weights underflowed; pick uniformly.
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < k; ++j) {
          if (!used[j]) free.push_back(j);
        }
        chosen = free[uniform_index(rng, free.size())];
      }
      used[chosen] = true;
      topo.add_link(nodes[k], nodes[chosen]);
    }
  }
}

}  // namespace

Topology generate_waxman(const WaxmanParams& params, std::uint64_t seed) {
  check_waxman(params);
  Rng rng(seed);
  std::vector<Point> pos(params.n);
  for (auto& p : pos) {
    p.x = unit_uniform(rng);
    p.y = unit_uniform(rng);
  }
  std::vector<NodeId> ids(params.n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  Topology topo(params.n);
  waxman_attach(topo, ids, pos, params, rng);
  return topo;
}

Topology generate_transit_stub(std::size_t num_as, std::size_t nodes_per_as,
                               std::uint64_t seed, const WaxmanParams& intra) {
  if (num_as < 2) throw ParameterError("transit-stub: num_as must be >= 2");
  if (nodes_per_as < 2) {
    throw ParameterError("transit-stub: nodes_per_as must be >= 2");
  }
  WaxmanParams stub = intra;
  stub.n = nodes_per_as;
  check_waxman(stub);

  Rng rng(seed);
  Topology topo(num_as * nodes_per_as);
  std::vector<Point> pos(nodes_per_as);
  std::vector<NodeId> ids(nodes_per_as);
  for (std::size_t as = 0; as < num_as; ++as) {
    for (auto& p : pos) {
      p.x = unit_uniform(rng);
      p.y = unit_uniform(rng);
    }
    std::iota(ids.begin(), ids.end(),
              static_cast<NodeId>(as * nodes_per_as));
    waxman_attach(topo, ids, pos, stub, rng);
  }

  WaxmanParams core = intra;
  core.n = num_as;
  std::vector<Point> core_pos(num_as);
  std::vector<NodeId> borders(num_as);
  for (std::size_t as = 0; as < num_as; ++as) {
    core_pos[as] = {unit_uniform(rng), unit_uniform(rng)};
    borders[as] = static_cast<NodeId>(as * nodes_per_as);
  }
  waxman_attach(topo, borders, core_pos, core, rng);
  return topo;
}

Topology assign_capacities(Topology topology, const CapacityLaw& law,
                           std::uint64_t seed) {
  if (!(law.low_gbps > 0.0 && law.low_gbps < law.high_gbps)) {
    throw ParameterError("capacities: require 0 < low < high");
  }
  if (!(law.shape > 0.0)) throw ParameterError("capacities: shape must be > 0");
  if (topology.link_count() == 0) {
    throw StructuralError("capacities: topology has no links");
  }
  Rng rng(seed);
  for (LinkId id = 0; id < topology.link_count(); ++id) {
    double c;
    do {
      // Inverse CDF of Pareto(low, shape); 1 - u lies in (0, 1].
      const double u = 1.0 - unit_uniform(rng);
      c = law.low_gbps / std::pow(u, 1.0 / law.shape);
    } while (c > law.high_gbps);
    topology.set_capacity(id, c);
  }
  return topology;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void format_fail(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Topology read_topology(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::size_t, std::size_t>> header;
  struct RawLink {
    std::uint64_t u, v;
    double cap;
    std::size_t line_no;
  };
  std::vector<RawLink> raw;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (!header) {
      std::size_t n = 0, m = 0;
      if (tokens.size() != 4 || tokens[0] != "nodes" || tokens[2] != "links" ||
          !parse_number(tokens[1], n) || !parse_number(tokens[3], m)) {
        format_fail(line_no, "expected header 'nodes <N> links <M>'");
      }
      header = {n, m};
      continue;
    }
    RawLink r{0, 0, 0.0, line_no};
    if (tokens.size() != 3 || !parse_number(tokens[0], r.u) ||
        !parse_number(tokens[1], r.v) || !parse_number(tokens[2], r.cap)) {
      format_fail(line_no, "expected 'u v capacity_gbps'");
    }
    if (r.u == r.v) format_fail(line_no, "self-loop");
    if (!(r.cap > 0.0) || !std::isfinite(r.cap)) {
      format_fail(line_no, "capacity must be positive");
    }
    raw.push_back(r);
  }
  if (!header) throw FormatError("missing header 'nodes <N> links <M>'");
  const auto [n, m] = *header;
  if (raw.size() != m) {
    throw FormatError("header declares " + std::to_string(m) +
                      " links but file has " + std::to_string(raw.size()));
  }
  std::map<std::uint64_t, NodeId> remap;
  for (const auto& r : raw) {
    remap.emplace(r.u, 0);
    remap.emplace(r.v, 0);
  }
  if (remap.size() > n) {
    throw FormatError("header declares " + std::to_string(n) +
                      " nodes but links reference " +
                      std::to_string(remap.size()));
  }
  NodeId next = 0;
  for (auto& [id, dense] : remap) dense = next++;

  Topology topo(n);
  for (const auto& r : raw) {
    const NodeId a = remap[r.u];
    const NodeId b = remap[r.v];
    if (topo.find_link(a, b)) format_fail(r.line_no, "duplicate link");
    topo.add_link(a, b, r.cap);
  }
  return topo;
}

void write_topology(const Topology& topology, std::ostream& out) {
  out << "nodes " << topology.node_count() << " links "
      << topology.link_count() << '\n';
  char buf[64];
  for (const Link& l : topology.links()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, l.capacity_gbps);
    out << l.a << ' ' << l.b << ' ' << std::string_view(buf, end - buf)
        << '\n';
  }
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_topology(in);
}

void save_topology(const Topology& topology,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  write_topology(topology, out);
}

void MultihomeSetup::validate(const Topology& topology) const {
  if (server >= topology.node_count()) {
    throw ParameterError("setup: server out of range");
  }
  if (isp_egress.size() < 2) {
    throw ParameterError("setup: multihoming requires at least 2 ISPs");
  }
  for (std::size_t i = 0; i < isp_egress.size(); ++i) {
    const LinkId e = isp_egress[i];
    if (e >= topology.link_count() || !topology.link(e).touches(server)) {
      throw ParameterError("setup: egress link not incident to server");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (isp_egress[j] == e) {
        throw ParameterError("setup: egress links must be distinct");
      }
    }
  }
  if (clients.empty()) throw ParameterError("setup: no clients");
  const auto dist = topology.hop_distances(server);
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const NodeId c = clients[i];
    if (c >= topology.node_count() || c == server) {
      throw ParameterError("setup: client must be a non-server node");
    }
    if (dist[c] < 0) throw ParameterError("setup: client unreachable");
    for (std::size_t j = 0; j < i; ++j) {
      if (clients[j] == c) throw ParameterError("setup: duplicate client");
    }
  }
  if (demands.size() != clients.size()) {
    throw ParameterError("setup: one demand per client required");
  }
  for (double d : demands) {
    if (!(d >= 0.0)) throw ParameterError("setup: demands must be >= 0");
  }
  if (static_strategy.size() != clients.size()) {
    throw ParameterError("setup: static strategy length must equal clients");
  }
  for (std::size_t i = 0; i < static_strategy.size(); ++i) {
    if (static_strategy[i] >= isp_egress.size()) {
      throw ParameterError("setup: static strategy names unknown ISP");
    }
  }
}

MultihomeSetup sample_multihome_setup(const Topology& topology,
                                      std::size_t num_isps,
                                      std::size_t num_clients,
                                      std::uint64_t seed) {
  if (num_isps < 2) {
    throw ParameterError("setup: multihoming requires at least 2 ISPs");
  }
  if (num_clients < 1) throw ParameterError("setup: need at least 1 client");
  if (topology.node_count() <= num_clients) {
    throw ParameterError("setup: node count must exceed client count");
  }
  std::vector<NodeId> eligible;
  for (NodeId n = 0; n < topology.node_count(); ++n) {
    if (topology.degree(n) >= num_isps) eligible.push_back(n);
  }
  if (eligible.empty()) {
    throw SamplingError("setup: no node with degree >= " +
                        std::to_string(num_isps));
  }
  Rng rng(seed);
  MultihomeSetup setup;
  setup.server = eligible[uniform_index(rng, eligible.size())];

  std::vector<LinkId> incident(topology.incident(setup.server).begin(),
                               topology.incident(setup.server).end());
  // Partial Fisher-Yates keeps the draw order as the ISP label order.
  for (std::size_t i = 0; i < num_isps; ++i) {
    const auto j = i + uniform_index(rng, incident.size() - i);
    std::swap(incident[i], incident[j]);
    setup.isp_egress.push_back(incident[i]);
  }

  const auto dist = topology.hop_distances(setup.server);
  std::vector<NodeId> reachable;
  for (NodeId n = 0; n < topology.node_count(); ++n) {
    if (n != setup.server && dist[n] > 0) reachable.push_back(n);
  }
  if (reachable.size() < num_clients) {
    throw SamplingError("setup: fewer reachable nodes than clients");
  }
  for (std::size_t i = 0; i < num_clients; ++i) {
    const auto j = i + uniform_index(rng, reachable.size() - i);
    std::swap(reachable[i], reachable[j]);
    setup.clients.push_back(reachable[i]);
  }
  setup.demands.assign(num_clients, kUnbounded);
  setup.static_strategy = balanced_strategy(num_isps, num_clients);
  return setup;
}

}  // namespace mhsim
