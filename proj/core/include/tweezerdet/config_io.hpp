#pragma once

#include <string>

#include "tweezerdet/presets.hpp"

namespace tweezerdet {

inline constexpr int kConfigSchemaVersion = 1;

// Strict JSON scenario parsing: schema_version is required, unknown keys
// are rejected, and every error names the offending field path. All
// quantities are SI (Hz, s, K, m). The heating section is optional and
// defaults to the recoil model at the configured trap depth; optional
// scalar fields fall back to the documented defaults.
// Throws std::invalid_argument on any structural or validation problem.
ScenarioConfig scenario_from_json_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Emits every field explicitly in canonical form, so parse -> serialize
// is byte-stable.
std::string scenario_to_json_text(const ScenarioConfig& config);
void save_scenario_file(const std::string& path, const ScenarioConfig& config);

// Rewrites arbitrary JSON text in the canonical form used by all tool
// output: object keys sorted, two-space indent, doubles printed at 12
// significant digits, negative zero collapsed. Non-finite numbers and
// malformed input throw std::invalid_argument.
std::string canonical_json_from_text(const std::string& text);

// Single double in the same canonical form, shared by the CSV writers.
std::string canonical_double(double x);

}  // namespace tweezerdet
