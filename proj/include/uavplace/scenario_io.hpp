#pragma once

#include <string>

#include "json.hpp"
#include "uavplace/model.hpp"

// Serialization boundary. JSON and CSV are the only formats; power-like radio
// quantities cross it in dB/dBm, everything else stays in native units.
// Writers emit sorted keys and shortest round-trip doubles, so a fixed input
// always produces byte-identical files.

namespace uavplace::io {

// Sample a scenario from a crowd spec: hotspot draws first (truncated
// Gaussians, resampled then clamped into the area), then the uniform
// background, all from one seeded stream.
Scenario generate(const CrowdSpec& spec, std::uint64_t seed);

// Crowd spec JSON; may carry optional gbs/radio/env blocks that are applied
// to the generated scenario.
Scenario generate_from_spec_json(const nlohmann::json& spec, std::uint64_t seed);
Scenario generate_from_spec_file(const std::string& path, std::uint64_t seed);

nlohmann::json scenario_to_json(const Scenario& s);

// base_dir anchors a relative "ue_file" reference.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// CLI-style overrides ("radio.c_min=2e6", "env.a=9.61"); only the named
// fields change, dB keys convert exactly as in the JSON schema.
void apply_overrides(Scenario& s, const std::vector<std::string>& sets);

PointList load_ue_csv(const std::string& path);
void save_ue_csv(const PointList& ues, const std::string& path);

// Result files embed the scenario, so they are self-contained inputs for
// later export.
nlohmann::json result_to_json(const PlacementResult& r, const Scenario& s);
void save_result(const PlacementResult& r, const Scenario& s, const std::string& path);

struct LoadedResult {
    PlacementResult result;
    Scenario scenario;
};
LoadedResult load_result(const std::string& path);

}  // namespace uavplace::io
