#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "mhsim/control_plane.hpp"
#include "mhsim/flow.hpp"
#include "mhsim/routing.hpp"
#include "mhsim/topology.hpp"

namespace mhsim {

// Setup JSON:
//   {"server": 12, "isp_egress": [40, 41, 57], "clients": [3, 9, 200, 7, 81],
//    "demands": [null, 2.5, null, null, null], "static": "AABBC"}
// A null or missing demand means unbounded.
nlohmann::json setup_to_json(const MultihomeSetup& setup);
MultihomeSetup setup_from_json(const nlohmann::json& j);

// Profile JSON: {"hourly_load": [24 numbers], "jitter": 0.2, "seed": 7}
nlohmann::json profile_to_json(const BackgroundProfile& profile);
BackgroundProfile profile_from_json(const nlohmann::json& j);

// Control-plane JSON; every field optional:
//   {"topo_probe_time": "04:00", "offpeak_period_min": 60,
//    "peak_period_min": 30, "peak_hours": [18, ..., 23],
//    "sampler_probability": 0.6, "probe_bytes": 33600, "probe_seconds": 2.5,
//    "probes_per_client": 3, "combination": "EOW", "default_rule": "AABBC",
//    "known_at_start": [0, 1]}
ControlPlaneConfig control_config_from_json(const nlohmann::json& j);
nlohmann::json control_config_to_json(const ControlPlaneConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

// Columns client,isp,hops,link_ids with link ids separated by ';'.
// Unreachable entries have hops -1 and an empty link list.
void write_path_table_csv(const PathTable& table, std::ostream& out);

}  // namespace mhsim
