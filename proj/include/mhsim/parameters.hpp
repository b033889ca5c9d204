#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mhsim/routing.hpp"

namespace mhsim {

enum class Param { P, E, O, B, W, BL1, BL2, BL3 };

inline constexpr std::array<Param, 8> kAllParams = {
    Param::P, Param::E, Param::O, Param::B,
    Param::W, Param::BL1, Param::BL2, Param::BL3};

std::string_view param_name(Param p);

// Per-strategy path and bottleneck observables.
//   P    links summed over all client paths
//   E    distinct links over all client paths
//   O    P - E, path overlap
//   B    distinct bottleneck links
//   W    summed available bandwidth of the distinct bottlenecks (Gbps)
//   BL1  bottlenecks in the server-side third of their path
//   BL2  bottlenecks in the middle third
//   BL3  bottlenecks in the client-side third
struct ParameterVector {
  int P = 0;
  int E = 0;
  int O = 0;
  int B = 0;
  double W = 0.0;
  int BL1 = 0;
  int BL2 = 0;
  int BL3 = 0;

  double get(Param p) const;
  friend bool operator==(const ParameterVector&,
                         const ParameterVector&) = default;
};

// Which part of each path is observable.
enum class Region {
  kAll,
  kServerSide,  // L-S: first ceil(2L/3) links
  kClientSide,  // L-C: last ceil(2L/3) links
  kEnds,        // L-SC: first ceil(L/3) plus last ceil(L/3) links
};

std::string_view region_name(Region r);
Region parse_region(std::string_view name);  // "All", "L-S", "L-C", "L-SC"

// 0-based positions of a path of `length` links that are visible in `region`.
std::vector<bool> known_positions(Region region, std::size_t length);

enum class PositionClass { kServerSide, kInNetwork, kClientSide };

// Thirds with ceilings: positions [0, ceil(L/3)) are server side, the last
// ceil(L/3) not already server side are client side, the rest in-network.
PositionClass position_class(std::size_t position, std::size_t length);

struct InfoView {
  std::vector<std::size_t> known_clients;  // sorted client indices
  Region region = Region::kAll;

  static InfoView full(std::size_t num_clients);
};

// Observables over the known clients' paths restricted to the known region.
// Throws ParameterError on an empty client set and InfeasibleStrategyError
// when a known client's selected path is unreachable.
ParameterVector compute_parameters(const Strategy& strategy,
                                   const PathTable& table,
                                   std::span<const double> residuals,
                                   const InfoView& view);

// Keeps ceil(fraction * |C|) of the view's clients, drawn uniformly
// (|C| = total clients in the view). fraction in (0, 1].
InfoView degrade_client_info(const InfoView& view, double fraction,
                             std::uint64_t seed);

InfoView degrade_link_info(const InfoView& view, Region mode);

}  // namespace mhsim
