#include "mhsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace mhsim {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    throw FormatError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(where) + ": field '" + key + "': " +
                      e.what());
  }
}

int parse_clock(const std::string& text) {
  int h = 0, m = 0;
  char colon = 0;
  if (std::sscanf(text.c_str(), "%d%c%d", &h, &colon, &m) != 3 ||
      colon != ':' || h < 0 || h > 23 || m < 0 || m > 59) {
    throw FormatError("control config: topo_probe_time must be HH:MM, got '" +
                      text + "'");
  }
  return h * 60 + m;
}

}  // namespace

json setup_to_json(const MultihomeSetup& setup) {
  json demands = json::array();
  for (double d : setup.demands) {
    demands.push_back(std::isfinite(d) ? json(d) : json(nullptr));
  }
  return json{{"server", setup.server},
              {"isp_egress", setup.isp_egress},
              {"clients", setup.clients},
              {"demands", demands},
              {"static", setup.static_strategy.to_string()}};
}

MultihomeSetup setup_from_json(const json& j) {
  MultihomeSetup s;
  s.server = field<NodeId>(j, "server", "setup");
  s.isp_egress = field<std::vector<LinkId>>(j, "isp_egress", "setup");
  s.clients = field<std::vector<NodeId>>(j, "clients", "setup");
  s.demands.assign(s.clients.size(), kUnbounded);
  if (j.contains("demands")) {
    const auto& d = j.at("demands");
    if (!d.is_array() || d.size() != s.clients.size()) {
      throw FormatError("setup: 'demands' must have one entry per client");
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_null()) s.demands[i] = d[i].get<double>();
    }
  }
  s.static_strategy =
      j.contains("static")
          ? Strategy::parse(field<std::string>(j, "static", "setup"),
                            s.isp_egress.size(), s.clients.size())
          : balanced_strategy(s.isp_egress.size(), s.clients.size());
  return s;
}

json profile_to_json(const BackgroundProfile& profile) {
  return json{{"hourly_load", profile.hourly_load},
              {"jitter", profile.jitter_width},
              {"seed", profile.seed}};
}

BackgroundProfile profile_from_json(const json& j) {
  BackgroundProfile p;
  const auto load = field<std::vector<double>>(j, "hourly_load", "profile");
  if (load.size() != 24) {
    throw FormatError("profile: 'hourly_load' must have 24 entries");
  }
  std::copy(load.begin(), load.end(), p.hourly_load.begin());
  p.jitter_width = j.value("jitter", 0.0);
  p.seed = j.value("seed", std::uint64_t{0});
  p.validate();
  return p;
}

ControlPlaneConfig control_config_from_json(const json& j) {
  ControlPlaneConfig c;
  if (j.contains("topo_probe_time")) {
    c.topo_probe_minute = parse_clock(j.at("topo_probe_time").get<std::string>());
  }
  c.offpeak_period_min = j.value("offpeak_period_min", c.offpeak_period_min);
  c.peak_period_min = j.value("peak_period_min", c.peak_period_min);
  if (j.contains("peak_hours")) {
    c.peak_hours.fill(false);
    for (int h : j.at("peak_hours").get<std::vector<int>>()) {
      if (h < 0 || h > 23) throw FormatError("control config: bad peak hour");
      c.peak_hours[static_cast<std::size_t>(h)] = true;
    }
  }
  c.sampler_probability = j.value("sampler_probability", c.sampler_probability);
  c.probe_bytes = j.value("probe_bytes", c.probe_bytes);
  c.probe_seconds = j.value("probe_seconds", c.probe_seconds);
  c.probes_per_client = j.value("probes_per_client", c.probes_per_client);
  if (j.contains("combination")) {
    c.combination = Combination::parse(j.at("combination").get<std::string>());
  }
  if (j.contains("default_rule")) {
    c.default_rule = Strategy::parse(j.at("default_rule").get<std::string>());
  }
  if (j.contains("known_at_start")) {
    c.known_at_start = j.at("known_at_start").get<std::vector<std::size_t>>();
  }
  c.validate();
  return c;
}

json control_config_to_json(const ControlPlaneConfig& c) {
  std::vector<int> peak;
  for (int h = 0; h < 24; ++h) {
    if (c.peak_hours[static_cast<std::size_t>(h)]) peak.push_back(h);
  }
  char clock[32];
  std::snprintf(clock, sizeof clock, "%02d:%02d", c.topo_probe_minute / 60,
                c.topo_probe_minute % 60);
  json j{{"topo_probe_time", clock},
         {"offpeak_period_min", c.offpeak_period_min},
         {"peak_period_min", c.peak_period_min},
         {"peak_hours", peak},
         {"sampler_probability", c.sampler_probability},
         {"probe_bytes", c.probe_bytes},
         {"probe_seconds", c.probe_seconds},
         {"probes_per_client", c.probes_per_client},
         {"combination", c.combination.to_string()}};
  if (c.default_rule) j["default_rule"] = c.default_rule->to_string();
  if (c.known_at_start) j["known_at_start"] = *c.known_at_start;
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_path_table_csv(const PathTable& table, std::ostream& out) {
  out << "client,isp,hops,link_ids\n";
  for (std::size_t c = 0; c < table.client_count(); ++c) {
    for (std::size_t f = 0; f < table.isp_count(); ++f) {
      out << c << ',' << static_cast<char>('A' + f) << ',';
      const auto& p = table.at(c, f);
      if (!p) {
        out << "-1,\n";
        continue;
      }
      out << p->hop_count() << ',';
      for (std::size_t i = 0; i < p->links.size(); ++i) {
        out << (i ? ";" : "") << p->links[i];
      }
      out << '\n';
    }
  }
}

}  // namespace mhsim
