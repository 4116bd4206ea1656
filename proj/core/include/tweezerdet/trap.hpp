#pragma once

#include <string>

#include "tweezerdet/constants.hpp"

namespace tweezerdet {

// Polarization geometry of the two trap beams relative to the quantization
// axis. sigma_pm drives Raman transitions between the hyperfine ground
// states; pi_aligned suppresses them.
enum class TrapPolarization {
    sigma_pm,
    pi_aligned,
};

std::string to_string(TrapPolarization mode);
TrapPolarization trap_polarization_from_string(const std::string& s);  // throws std::invalid_argument

struct TrapConfig {
    double depth_freq;   // U0/h, Hz (positive)
    double depth_temp;   // U0/kB, K (positive, = depth_freq converted)
    double wavelength;   // m
    TrapPolarization polarization_mode;
};

// Throws std::invalid_argument on a non-positive depth.
TrapConfig make_trap(double depth_freq_hz,
                     TrapPolarization mode,
                     double wavelength_m = kDefaultTrapWavelength);

// Ground-state light shift (J) of a cesium atom in a far-detuned beam of
// the given intensity (W/m^2). Negative for red detuning (attractive).
double stark_shift(const DLineConstants& constants, double intensity);

// Intensity (W/m^2) producing a trap of the given depth |U0|/h (Hz).
// Throws std::domain_error if the shift-per-intensity coefficient vanishes.
double intensity_for_depth(const DLineConstants& constants, double depth_freq_hz);

// Squared single-beam Rabi frequency (Hz^2, i.e. (Omega/2pi)^2) at trap
// depth U0/h. Scales linearly with depth: the trap depth is the
// light-shift sum over both D lines while the Rabi rate is the bare
// dipole coupling, so the ratio is fixed by the detunings alone.
double rabi_squared_from_depth(const DLineConstants& constants, double depth_freq_hz);

}  // namespace tweezerdet
