#pragma once

#include <vector>

#include "tweezerdet/constants.hpp"
#include "tweezerdet/transitions.hpp"
#include "tweezerdet/trap.hpp"

namespace tweezerdet {

// Probe beam described by its saturation parameter on the cycling
// transition and the power fractions in each polarization component.
// Fractions sum to 1; sigma_plus carries the useful (cycling) power, so
// polarization_purity mirrors pol_fraction_sigma_plus.
struct ProbeConfig {
    double intensity_sat;          // I/I_sat on the cycling transition
    double pol_fraction_sigma_plus;
    double pol_fraction_sigma_minus;
    double pol_fraction_pi;
    double polarization_purity;    // = pol_fraction_sigma_plus for a nominal sigma+ probe
};

// Builds a probe from the impurity fractions; sigma_plus gets the rest.
// Throws std::domain_error on negative inputs or impurities above 1.
ProbeConfig make_probe(double intensity_sat, double f_sigma_minus, double f_pi);

// Depump rate (1/s) caused by off-resonant trap photon scattering.
// Empirical proportionality to trap depth.
double trap_depump_rate(double depth_freq_hz);

// Depump rate (1/s) from off-resonant probe excitation summed over the
// channel table, each row driven by its matching probe polarization
// fraction at its own saturation scaling. gamma is the natural linewidth
// in rad/s, matching the stored row detunings.
double probe_depump_rate(const ProbeConfig& probe,
                         const std::vector<TransitionEntry>& rows,
                         double gamma);

// Excited hyperfine level addressed by the two-photon coupling of a
// sigma+/sigma- trap.
struct RamanTarget {
    int f_prime;
    int m_f_prime;
};

// Effective two-photon Rabi rate (Hz, i.e. Omega_eff/2pi) for one target
// level. rabi_sq_hz2 is the squared single-beam rate (Omega/2pi)^2 and
// delta_d2_hz the D2 detuning (Hz, sign ignored). A pi-aligned trap has
// no sigma+/sigma- pair, so the coupling is zero. Unknown targets throw
// std::out_of_range.
double raman_effective_rabi(double rabi_sq_hz2, double delta_d2_hz,
                            RamanTarget target,
                            TrapPolarization mode = TrapPolarization::sigma_pm);

// Steady-state admixture 0.5 * Omega^2 / (detuning^2 + Omega^2) of the
// target level under the two-photon drive. Both arguments in Hz.
double raman_population_ratio(double omega_eff_hz, double raman_detuning_hz);

// Probability per scattered probe photon that trap-induced two-photon
// coupling routes the decay into the dark state, summed over the
// (4',3') and (3',3') channels of the table.
double raman_depump_probability(const TrapConfig& trap,
                                const DLineConstants& constants,
                                const std::vector<TransitionEntry>& table =
                                    cs_d2_depump_table());

enum class RateKind {
    per_second,
    per_scatter,
};

// Expresses a depump channel as dark-transfer probability per collected
// bright photon. per_second values divide by the bright count rate;
// per_scatter values divide by the collection efficiency.
// Throws std::domain_error unless bright_rate > 0 and 0 < ce <= 1.
double normalized_rate(double value, double bright_rate, double ce, RateKind kind);

// All bright-to-dark channels of one detection configuration, each as a
// raw rate or probability plus its normalized form, and the summed
// normalized budget.
struct DepumpBudget {
    double trap_rate;               // 1/s
    double probe_rate;              // 1/s
    double raman_prob_per_scatter;  // dimensionless
    double r_trap;                  // per collected bright photon
    double r_probe;
    double r_raman;
    double total_r;
};

DepumpBudget depump_budget(const TrapConfig& trap,
                           const ProbeConfig& probe,
                           const DLineConstants& constants,
                           double bright_rate, double ce,
                           const std::vector<TransitionEntry>& table =
                               cs_d2_depump_table());

}  // namespace tweezerdet
