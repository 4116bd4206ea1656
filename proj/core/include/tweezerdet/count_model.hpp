#pragma once

namespace tweezerdet {

enum class PreparedState {
    bright,
    dark,
};

// Collected-photon detection configuration. Rates are collected counts
// per second; transfer rates move the atom between fluorescence states
// during the window.
struct DetectionParams {
    double r_bright;               // bright-atom signal rate, 1/s
    double r_background;           // state-independent background rate, 1/s
    double r_dep_bright;           // bright -> dark transfer rate, 1/s
    double r_dep_dark = 0.0;       // dark -> bright transfer rate, 1/s
    double t_d;                    // detection window, s
    int threshold = 2;             // counts >= threshold label the atom bright
    double collection_efficiency;  // collected fraction of scattered photons
};

// Throws std::invalid_argument naming the offending field.
void validate_detection(const DetectionParams& params);

// exp(-mean) * mean^n / n!, evaluated in logs. Zero mean is the point
// mass at n = 0; an infinite mean has no finite-n mass.
double poisson_pmf(int n, double mean);

// P(X <= n) for X ~ Poisson(mean).
double poisson_cdf(int n, double mean);

// Probability of collecting n counts in a window of length t_d when the
// count rate starts at rate_before, a single transfer event arrives at
// rate transfer_rate, and the rate is rate_after from then on. The
// no-event branch carries weight exp(-transfer_rate * t_d); the event
// branch integrates the Poisson mixture over the arrival time.
double count_distribution_kernel(int n, double rate_before, double rate_after,
                                 double transfer_rate, double t_d);

// Kernel specialized to a prepared fluorescence state under params.
double count_distribution(int n, const DetectionParams& params, PreparedState prepared);

// P(label = bright | prepared) = P(n >= threshold).
double bright_label_prob(const DetectionParams& params, PreparedState prepared);

struct ErrorReport {
    double eps_bright;  // P(label dark | prepared bright)
    double eps_dark;    // P(label bright | prepared dark)
    double infidelity;  // (eps_bright + eps_dark) / 2
    double fidelity;    // 1 - infidelity
};

ErrorReport error_report(const DetectionParams& params);

struct ThresholdResult {
    int threshold;
    ErrorReport report;
};

// Minimizes infidelity over integer thresholds in [m_min, m_max];
// ties resolve to the smaller threshold.
ThresholdResult optimal_threshold(const DetectionParams& params, int m_min = 1,
                                  int m_max = 30);

struct TimeResult {
    double t_d;
    ErrorReport report;
    bool used_grid_fallback;  // golden-section result was not the global best
};

// Minimizes infidelity over the detection time at a fixed threshold.
// Golden-section search cross-checked against a coarse grid scan.
TimeResult optimal_time(const DetectionParams& params, double t_lo, double t_hi,
                        int threshold);

// Transfer-free optimum of the window length at integer threshold m:
// the crossing point of the two Poisson tails,
// t* = m * ln(rate_bright_side / rate_dark_side) / (rate difference).
// Requires rate_bright_side > rate_dark_side > 0.
double transfer_free_optimal_time(double rate_bright_side, double rate_dark_side,
                                  int threshold);

// Inverts the bright-error survival model eps = 1 - (1 - r)^threshold
// for the per-collected-photon dark-transfer probability r. Only the
// two-count threshold form is supported; other thresholds throw
// std::invalid_argument.
double r_from_eps_bright(double eps_bright, int threshold = 2);

}  // namespace tweezerdet
