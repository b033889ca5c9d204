#include "mhsim/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mhsim/flow.hpp"
#include "mhsim/rng.hpp"

namespace mhsim {

std::string_view param_name(Param p) {
  switch (p) {
    case Param::P: return "P";
    case Param::E: return "E";
    case Param::O: return "O";
    case Param::B: return "B";
    case Param::W: return "W";
    case Param::BL1: return "BL1";
    case Param::BL2: return "BL2";
    case Param::BL3: return "BL3";
  }
  return "?";
}

double ParameterVector::get(Param p) const {
  switch (p) {
    case Param::P: return P;
    case Param::E: return E;
    case Param::O: return O;
    case Param::B: return B;
    case Param::W: return W;
    case Param::BL1: return BL1;
    case Param::BL2: return BL2;
    case Param::BL3: return BL3;
  }
  return 0.0;
}

std::string_view region_name(Region r) {
  switch (r) {
    case Region::kAll: return "All";
    case Region::kServerSide: return "L-S";
    case Region::kClientSide: return "L-C";
    case Region::kEnds: return "L-SC";
  }
  return "?";
}

Region parse_region(std::string_view name) {
  if (name == "All") return Region::kAll;
  if (name == "L-S") return Region::kServerSide;
  if (name == "L-C") return Region::kClientSide;
  if (name == "L-SC") return Region::kEnds;
  throw ParameterError("unknown region '" + std::string(name) +
                       "' (expected All, L-S, L-C or L-SC)");
}

namespace {

std::size_t ceil_div(std::size_t num, std::size_t den) {
  return (num + den - 1) / den;
}

}  // namespace

std::vector<bool> known_positions(Region region, std::size_t length) {
  std::vector<bool> known(length, region == Region::kAll);
  const std::size_t two_thirds = ceil_div(2 * length, 3);
  const std::size_t third = ceil_div(length, 3);
  for (std::size_t pos = 0; pos < length; ++pos) {
    switch (region) {
      case Region::kAll:
        break;
      case Region::kServerSide:
        known[pos] = pos < two_thirds;
        break;
      case Region::kClientSide:
        known[pos] = pos >= length - two_thirds;
        break;
      case Region::kEnds:
        known[pos] = pos < third || pos >= length - third;
        break;
    }
  }
  return known;
}

PositionClass position_class(std::size_t position, std::size_t length) {
  const std::size_t third = ceil_div(length, 3);
  if (position < third) return PositionClass::kServerSide;
  if (position >= length - third) return PositionClass::kClientSide;
  return PositionClass::kInNetwork;
}

InfoView InfoView::full(std::size_t num_clients) {
  InfoView view;
  view.known_clients.resize(num_clients);
  std::iota(view.known_clients.begin(), view.known_clients.end(),
            std::size_t{0});
  return view;
}

ParameterVector compute_parameters(const Strategy& strategy,
                                   const PathTable& table,
                                   std::span<const double> residuals,
                                   const InfoView& view) {
  if (view.known_clients.empty()) {
    throw ParameterError("compute_parameters: no known clients");
  }
  ParameterVector pv;
  std::vector<LinkId> seen;
  struct Bottleneck {
    LinkId link;
    double available;
    PositionClass where;
  };
  std::vector<Bottleneck> chokes;

  for (std::size_t c : view.known_clients) {
    if (c >= table.client_count()) {
      throw ParameterError("compute_parameters: client index out of range");
    }
    const Path& path = table.selected(strategy, c);
    const auto known = known_positions(view.region, path.hop_count());
    for (std::size_t pos = 0; pos < path.hop_count(); ++pos) {
      if (!known[pos]) continue;
      ++pv.P;
      seen.push_back(path.links[pos]);
    }
    const auto choke = choke_link(path, residuals, known);
    if (!choke) continue;
    const bool dup = std::any_of(chokes.begin(), chokes.end(),
                                 [&](const Bottleneck& b) {
                                   return b.link == choke->link;
                                 });
    // A shared bottleneck is classified by the first client that sees it.
    if (!dup) {
      chokes.push_back({choke->link, choke->available_gbps,
                        position_class(choke->position, path.hop_count())});
    }
  }

  std::sort(seen.begin(), seen.end());
  pv.E = static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
  pv.O = pv.P - pv.E;

  std::sort(chokes.begin(), chokes.end(),
            [](const Bottleneck& a, const Bottleneck& b) {
              return a.link < b.link;
            });
  pv.B = static_cast<int>(chokes.size());
  for (const auto& b : chokes) {
    pv.W += b.available;
    switch (b.where) {
      case PositionClass::kServerSide: ++pv.BL1; break;
      case PositionClass::kInNetwork: ++pv.BL2; break;
      case PositionClass::kClientSide: ++pv.BL3; break;
    }
  }
  return pv;
}

InfoView degrade_client_info(const InfoView& view, double fraction,
                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ParameterError("degrade_client_info: fraction must be in (0, 1]");
  }
  const std::size_t total = view.known_clients.size();
  // Guard against 0.6 * 5 evaluating to 3.0000000000000004.
  const auto keep = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(total) - 1e-9));
  if (keep >= total) return view;
  std::vector<std::size_t> pool = view.known_clients;
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  InfoView out = view;
  out.known_clients.assign(pool.begin(), pool.begin() + static_cast<long>(keep));
  std::sort(out.known_clients.begin(), out.known_clients.end());
  return out;
}

InfoView degrade_link_info(const InfoView& view, Region mode) {
  InfoView out = view;
  out.region = mode;
  return out;
}

}  // namespace mhsim
