#include "tweezerdet/depump.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tweezerdet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Depump rate per unit trap depth (1/s per Hz of U0/h), from the measured
// dark-state lifetime scaling.
constexpr double kTrapDepumpPerDepth = 2.5e-7;

double pol_fraction(const ProbeConfig& probe, Polarization p) {
    switch (p) {
        case Polarization::sigma_plus: return probe.pol_fraction_sigma_plus;
        case Polarization::sigma_minus: return probe.pol_fraction_sigma_minus;
        case Polarization::pi: return probe.pol_fraction_pi;
    }
    throw std::invalid_argument("unknown polarization value");
}

}  // namespace

ProbeConfig make_probe(double intensity_sat, double f_sigma_minus, double f_pi) {
    if (!(intensity_sat >= 0.0)) {
        throw std::domain_error("probe intensity_sat must be non-negative");
    }
    if (f_sigma_minus < 0.0 || f_pi < 0.0 || f_sigma_minus + f_pi > 1.0) {
        throw std::domain_error(
            "probe polarization impurities must be non-negative and sum to at most 1");
    }
    ProbeConfig p{};
    p.intensity_sat = intensity_sat;
    p.pol_fraction_sigma_minus = f_sigma_minus;
    p.pol_fraction_pi = f_pi;
    p.pol_fraction_sigma_plus = 1.0 - f_sigma_minus - f_pi;
    p.polarization_purity = p.pol_fraction_sigma_plus;
    return p;
}

double trap_depump_rate(double depth_freq_hz) {
    if (depth_freq_hz < 0.0) {
        throw std::domain_error("trap depth must be non-negative");
    }
    return kTrapDepumpPerDepth * depth_freq_hz;
}

double probe_depump_rate(const ProbeConfig& probe,
                         const std::vector<TransitionEntry>& rows,
                         double gamma) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("natural linewidth must be positive");
    }
    if (probe.intensity_sat < 0.0) {
        throw std::domain_error("probe intensity_sat must be non-negative");
    }
    double rate = 0.0;
    for (const auto& row : rows) {
        const double frac = pol_fraction(probe, row.polarization);
        if (frac < 0.0) {
            throw std::domain_error("probe polarization fraction must be non-negative");
        }
        const double s_row = frac * probe.intensity_sat / row.sat_ratio;
        const double delta = row.detuning;
        const double lorentz = s_row / (1.0 + s_row + (2.0 * delta / gamma) * (2.0 * delta / gamma));
        rate += row.branching_to_dark * (gamma / 2.0) * lorentz;
    }
    return rate;
}

double raman_effective_rabi(double rabi_sq_hz2, double delta_d2_hz,
                            RamanTarget target, TrapPolarization mode) {
    if (rabi_sq_hz2 < 0.0) {
        throw std::domain_error("squared Rabi rate must be non-negative");
    }
    if (mode == TrapPolarization::pi_aligned) {
        return 0.0;
    }
    const double abs_d2 = std::abs(delta_d2_hz);
    if (abs_d2 == 0.0) {
        throw std::domain_error("D2 detuning must be nonzero");
    }
    // Each leg carries the squared-matrix-element weight of its transition
    // relative to the scalar coupling: 3/2 for the sigma+ cycling leg,
    // 7/40 into (4',3'), 7/24 into (3',3'). The two-photon rate is the
    // product of the legs over twice the detuning.
    double coeff = 0.0;
    if (target.f_prime == 4 && target.m_f_prime == 3) {
        coeff = (3.0 / 2.0) * (7.0 / 40.0) / 2.0;
    } else if (target.f_prime == 3 && target.m_f_prime == 3) {
        coeff = (3.0 / 2.0) * (7.0 / 24.0) / 2.0;
    } else {
        throw std::out_of_range("no two-photon coupling coefficient for F'=" +
                                std::to_string(target.f_prime) + ", mF'=" +
                                std::to_string(target.m_f_prime));
    }
    return coeff * rabi_sq_hz2 / abs_d2;
}

double raman_population_ratio(double omega_eff_hz, double raman_detuning_hz) {
    const double w2 = omega_eff_hz * omega_eff_hz;
    const double d2 = raman_detuning_hz * raman_detuning_hz;
    if (w2 + d2 == 0.0) {
        throw std::domain_error("two-photon drive and detuning are both zero");
    }
    return 0.5 * w2 / (d2 + w2);
}

double raman_depump_probability(const TrapConfig& trap,
                                const DLineConstants& constants,
                                const std::vector<TransitionEntry>& table) {
    if (trap.polarization_mode == TrapPolarization::pi_aligned) {
        return 0.0;
    }
    const double rabi_sq = rabi_squared_from_depth(constants, trap.depth_freq);
    const double d2_hz = constants.delta_d2 / kTwoPi;
    double prob = 0.0;
    for (const RamanTarget target : {RamanTarget{4, 3}, RamanTarget{3, 3}}) {
        const auto& row = table_lookup(table, target.f_prime, target.m_f_prime);
        const double omega = raman_effective_rabi(rabi_sq, d2_hz, target,
                                                  trap.polarization_mode);
        const double ratio = raman_population_ratio(omega, row.detuning / kTwoPi);
        prob += row.branching_to_dark * ratio;
    }
    return prob;
}

double normalized_rate(double value, double bright_rate, double ce, RateKind kind) {
    if (!(bright_rate > 0.0)) {
        throw std::domain_error("bright_rate must be positive");
    }
    if (!(ce > 0.0) || ce > 1.0) {
        throw std::domain_error("collection efficiency must lie in (0, 1]");
    }
    switch (kind) {
        case RateKind::per_second: return value / bright_rate;
        case RateKind::per_scatter: return value / ce;
    }
    throw std::invalid_argument("unknown rate kind");
}

DepumpBudget depump_budget(const TrapConfig& trap,
                           const ProbeConfig& probe,
                           const DLineConstants& constants,
                           double bright_rate, double ce,
                           const std::vector<TransitionEntry>& table) {
    DepumpBudget b{};
    b.trap_rate = trap_depump_rate(trap.depth_freq);
    b.probe_rate = probe_depump_rate(probe, table, constants.gamma);
    b.raman_prob_per_scatter = raman_depump_probability(trap, constants, table);
    b.r_trap = normalized_rate(b.trap_rate, bright_rate, ce, RateKind::per_second);
    b.r_probe = normalized_rate(b.probe_rate, bright_rate, ce, RateKind::per_second);
    b.r_raman = normalized_rate(b.raman_prob_per_scatter, bright_rate, ce, RateKind::per_scatter);
    b.total_r = b.r_trap + b.r_probe + b.r_raman;
    return b;
}

}  // namespace tweezerdet
