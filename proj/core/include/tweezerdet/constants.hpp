#pragma once

namespace tweezerdet {

// SI defining constants (2019 redefinition, exact).
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kPlanck = 6.62607015e-34;           // J s
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kBoltzmannOverPlanck = kBoltzmann / kPlanck;  // Hz/K

// Cesium D-line data (Steck). Frequencies in Hz, linewidth in rad/s.
inline constexpr double kCsD2Frequency = 351.72571850e12;
inline constexpr double kCsD1Frequency = 335.116048807e12;
inline constexpr double kCsD2LinewidthHz = 5.2227e6;  // natural linewidth / 2pi
inline constexpr double kCsGroundHyperfineSplitting = 9.192631770e9;
// F'=4 to F'=5 splitting of the 6P3/2 manifold.
inline constexpr double kCsExcitedSplitting45 = 251.0e6;
inline constexpr double kCsRecoilTempD2 = 0.2e-6;  // K, single D2 photon

inline constexpr double kDefaultTrapWavelength = 937e-9;  // m

// Detunings of a trap laser relative to both cesium D lines.
// Angular frequencies (rad/s); negative means red of the transition.
struct DLineConstants {
    double gamma;        // D2 natural linewidth, rad/s
    double omega0;       // D2 transition angular frequency, rad/s
    double omega_trap;   // trap laser angular frequency, rad/s
    double delta_d1;     // trap detuning from D1, rad/s
    double delta_d2;     // trap detuning from D2, rad/s
    double hyperfine_ground_splitting;  // Hz
    double excited_splitting_45;        // Hz
};

// Throws std::domain_error if the wavelength is not strictly positive or the
// weighted-detuning denominator 2*delta_d1 + delta_d2 vanishes.
DLineConstants cesium_d_lines(double trap_wavelength_m = kDefaultTrapWavelength);

// Trap depth conversions between frequency (U0/h, Hz) and temperature
// (U0/kB, K). Linear, sign-preserving.
double depth_freq_to_temp(double depth_freq_hz);
double depth_temp_to_freq(double depth_temp_k);

}  // namespace tweezerdet
