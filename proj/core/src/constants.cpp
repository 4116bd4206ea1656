#include "tweezerdet/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tweezerdet {

DLineConstants cesium_d_lines(double trap_wavelength_m) {
    if (!(trap_wavelength_m > 0.0)) {
        throw std::domain_error("trap wavelength must be positive");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double nu_trap = kSpeedOfLight / trap_wavelength_m;
    DLineConstants c{};
    c.gamma = two_pi * kCsD2LinewidthHz;
    c.omega0 = two_pi * kCsD2Frequency;
    c.omega_trap = two_pi * nu_trap;
    c.delta_d1 = two_pi * (nu_trap - kCsD1Frequency);
    c.delta_d2 = two_pi * (nu_trap - kCsD2Frequency);
    c.hyperfine_ground_splitting = kCsGroundHyperfineSplitting;
    c.excited_splitting_45 = kCsExcitedSplitting45;
    if (2.0 * c.delta_d1 + c.delta_d2 == 0.0) {
        throw std::domain_error("trap wavelength sits on the zero of the weighted D-line detuning");
    }
    return c;
}

double depth_freq_to_temp(double depth_freq_hz) {
    return depth_freq_hz / kBoltzmannOverPlanck;
}

double depth_temp_to_freq(double depth_temp_k) {
    return depth_temp_k * kBoltzmannOverPlanck;
}

}  // namespace tweezerdet
