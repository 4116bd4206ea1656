#include "tweezerdet/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "tweezerdet/constants.hpp"
#include "tweezerdet/minimize.hpp"

namespace tweezerdet {

namespace {

// Shared optics of the built-in scenarios: collection efficiency,
// background rate, probe drive, pulse structure, and the two trap depths.
constexpr double kCe = 0.0037;
constexpr double kBackgroundRate = 60.0;      // counts/s
constexpr double kBrightRateBudget = 1.96e4;  // counts/s, lifetime-matched optics
constexpr double kBrightRateTuned = 2.5e4;    // counts/s, error-matched optics
constexpr double kProbeSat = 0.07;
constexpr double kProbeImpurity = 0.0075;     // sigma- and pi intensity fractions
constexpr double kFullDepth = 11.9e6;         // Hz
constexpr double kReducedDepth = 5.9e6;       // Hz
constexpr double kWindow = 5e-4;              // s
constexpr double kPulse = 5e-6;               // s

// Measured readout errors the tuned scenarios reproduce: 152 and 159
// misidentified shots per 1e5.
constexpr double kTargetEpsBright = 0.00152;
constexpr double kTargetEpsDark = 0.00159;

ScenarioConfig base_scenario(const std::string& name, TrapPolarization mode,
                             double depth, double bright_rate) {
    ScenarioConfig c{};
    c.preset_name = name;
    c.trap = make_trap(depth, mode);
    c.probe = make_probe(kProbeSat, kProbeImpurity, kProbeImpurity);
    c.detection.r_bright = bright_rate;
    c.detection.r_background = kBackgroundRate;
    c.detection.t_d = kWindow;
    c.detection.threshold = 2;
    c.detection.collection_efficiency = kCe;
    c.protocol = AdaptiveProtocol{kPulse, kWindow, 2, true};
    c.heating = make_heating(c.trap);
    return c;
}

// Wires both transfer rates from the physics budget: the bright state
// loses population through all three channels, the dark state only
// through trap photon scattering.
void wire_from_budget(ScenarioConfig& c) {
    const DLineConstants lines = cesium_d_lines(c.trap.wavelength);
    const DepumpBudget budget =
        depump_budget(c.trap, c.probe, lines, c.detection.r_bright, kCe);
    c.detection.r_dep_bright = budget.total_r * c.detection.r_bright;
    c.detection.r_dep_dark = budget.trap_rate;
}

// Dark transfer rate reproducing a target dark-state error under the
// analytic count model.
double solve_dark_rate(const DetectionParams& base, double target_eps_dark) {
    const auto eps_gap = [&](double r_dep_dark) {
        DetectionParams p = base;
        p.r_dep_dark = r_dep_dark;
        return error_report(p).eps_dark - target_eps_dark;
    };
    return bisect_root(eps_gap, 0.0, 100.0);
}

}  // namespace

void validate_scenario(const ScenarioConfig& config) {
    if (!(config.trap.depth_freq > 0.0)) {
        throw std::invalid_argument("trap.depth_freq: must be positive");
    }
    if (!(config.trap.wavelength > 0.0)) {
        throw std::invalid_argument("trap.wavelength: must be positive");
    }
    // depth_temp is the cached conversion of depth_freq; a mismatch means
    // the trap was edited inconsistently.
    if (!(config.trap.depth_temp > 0.0) ||
        std::abs(config.trap.depth_temp - depth_freq_to_temp(config.trap.depth_freq)) >
            1e-9 * config.trap.depth_temp) {
        throw std::invalid_argument("trap.depth_temp: must match depth_freq");
    }
    const ProbeConfig& probe = config.probe;
    if (probe.pol_fraction_sigma_plus < 0.0 || probe.pol_fraction_sigma_minus < 0.0 ||
        probe.pol_fraction_pi < 0.0) {
        throw std::invalid_argument("probe: polarization fractions must be non-negative");
    }
    const double total = probe.pol_fraction_sigma_plus + probe.pol_fraction_sigma_minus +
                         probe.pol_fraction_pi;
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("probe: polarization fractions must sum to 1");
    }
    if (std::abs(probe.polarization_purity - probe.pol_fraction_sigma_plus) > 1e-9) {
        throw std::invalid_argument(
            "probe.polarization_purity: must equal pol_fraction_sigma_plus");
    }
    if (probe.intensity_sat < 0.0) {
        throw std::invalid_argument("probe.intensity_sat: must be non-negative");
    }
    validate_detection(config.detection);
    validate_protocol(config.protocol);
    validate_heating(config.heating);
}

std::vector<std::string> preset_names() {
    return {"paper-sigma", "paper-pi", "paper-final", "paper-lowdepth"};
}

ScenarioConfig make_preset(const std::string& name) {
    if (name == "paper-sigma") {
        ScenarioConfig c = base_scenario(name, TrapPolarization::sigma_pm,
                                         kFullDepth, kBrightRateBudget);
        wire_from_budget(c);
        return c;
    }
    if (name == "paper-pi") {
        ScenarioConfig c = base_scenario(name, TrapPolarization::pi_aligned,
                                         kFullDepth, kBrightRateBudget);
        wire_from_budget(c);
        return c;
    }
    if (name == "paper-final") {
        // Transfer rates matched to the measured readout errors instead of
        // the ab-initio budget: the bright rate follows from inverting the
        // two-count error formula, the dark rate from the analytic model.
        ScenarioConfig c = base_scenario(name, TrapPolarization::pi_aligned,
                                         kFullDepth, kBrightRateTuned);
        c.detection.r_dep_bright =
            r_from_eps_bright(kTargetEpsBright) * c.detection.r_bright;
        c.detection.r_dep_dark = solve_dark_rate(c.detection, kTargetEpsDark);
        return c;
    }
    if (name == "paper-lowdepth") {
        // Error-matched optics operated at reduced depth; transfer rates
        // re-derived from the physics budget, which scales with depth.
        ScenarioConfig c = base_scenario(name, TrapPolarization::pi_aligned,
                                         kReducedDepth, kBrightRateTuned);
        wire_from_budget(c);
        return c;
    }
    throw std::out_of_range("unknown preset '" + name +
                            "'; expected paper-sigma, paper-pi, paper-final, or paper-lowdepth");
}

}  // namespace tweezerdet
