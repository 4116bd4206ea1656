#pragma once

#include <string>
#include <vector>

#include "tweezerdet/count_model.hpp"
#include "tweezerdet/depump.hpp"
#include "tweezerdet/simulate.hpp"
#include "tweezerdet/trap.hpp"

namespace tweezerdet {

// Full description of one readout scenario: the physical configuration,
// the analytic detection model, and the Monte Carlo protocol.
struct ScenarioConfig {
    std::string preset_name;  // empty for hand-written configs
    TrapConfig trap;
    ProbeConfig probe;
    DetectionParams detection;
    AdaptiveProtocol protocol;
    HeatingModel heating;
};

void validate_scenario(const ScenarioConfig& config);

// Named configurations:
//   paper-sigma     sigma+/sigma- trap, transfer rates wired from the
//                   physics budget at 11.9 MHz depth
//   paper-pi        same geometry with the two-photon channel off
//   paper-final     transfer rates tuned to the measured readout errors
//   paper-lowdepth  tuned optics at 5.9 MHz depth, physics-wired
//                   transfer rates
std::vector<std::string> preset_names();
ScenarioConfig make_preset(const std::string& name);  // throws std::out_of_range

}  // namespace tweezerdet
