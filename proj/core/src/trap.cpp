#include "tweezerdet/trap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tweezerdet {

std::string to_string(TrapPolarization mode) {
    switch (mode) {
        case TrapPolarization::sigma_pm: return "sigma_pm";
        case TrapPolarization::pi_aligned: return "pi_aligned";
    }
    throw std::invalid_argument("unknown trap polarization value");
}

TrapPolarization trap_polarization_from_string(const std::string& s) {
    if (s == "sigma_pm") return TrapPolarization::sigma_pm;
    if (s == "pi_aligned") return TrapPolarization::pi_aligned;
    throw std::invalid_argument("trap polarization: expected sigma_pm or pi_aligned, got '" +
                                s + "'");
}

TrapConfig make_trap(double depth_freq_hz, TrapPolarization mode, double wavelength_m) {
    if (!(depth_freq_hz > 0.0)) {
        throw std::invalid_argument("trap.depth_freq: must be positive");
    }
    if (!(wavelength_m > 0.0)) {
        throw std::invalid_argument("trap.wavelength: must be positive");
    }
    TrapConfig t{};
    t.depth_freq = depth_freq_hz;
    t.depth_temp = depth_freq_to_temp(depth_freq_hz);
    t.wavelength = wavelength_m;
    t.polarization_mode = mode;
    return t;
}

double stark_shift(const DLineConstants& constants, double intensity) {
    if (!(intensity >= 0.0)) {
        throw std::domain_error("intensity must be non-negative");
    }
    if (constants.delta_d1 == 0.0 || constants.delta_d2 == 0.0) {
        throw std::domain_error("D-line detuning vanishes; light shift diverges");
    }
    const double w0 = constants.omega0;
    const double pref = std::numbers::pi * kSpeedOfLight * kSpeedOfLight * constants.gamma /
                        (2.0 * w0 * w0 * w0);
    return pref * (2.0 / constants.delta_d2 + 1.0 / constants.delta_d1) * intensity;
}

double intensity_for_depth(const DLineConstants& constants, double depth_freq_hz) {
    const double per_intensity = stark_shift(constants, 1.0);
    if (per_intensity == 0.0) {
        throw std::domain_error("light shift per intensity vanishes at this wavelength");
    }
    return std::abs(depth_freq_hz) * kPlanck / std::abs(per_intensity);
}

double rabi_squared_from_depth(const DLineConstants& constants, double depth_freq_hz) {
    if (depth_freq_hz < 0.0) {
        throw std::domain_error("trap depth must be non-negative");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double d1 = constants.delta_d1 / two_pi;
    const double d2 = constants.delta_d2 / two_pi;
    const double denom = 2.0 * d1 + d2;
    if (denom == 0.0) {
        throw std::domain_error("weighted D-line detuning vanishes");
    }
    const double coupling_per_depth = std::abs(2.0 * d1 * d2 / denom);
    return depth_freq_hz * coupling_per_depth;
}

}  // namespace tweezerdet
