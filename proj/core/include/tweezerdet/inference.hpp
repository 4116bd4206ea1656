#pragma once

#include <map>
#include <string>
#include <vector>

#include "tweezerdet/count_model.hpp"

namespace tweezerdet {

inline constexpr double kZOneSigma = 1.0;
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
    double low;
    double high;
    double center;  // point estimate successes / trials
};

// Wilson score interval for a binomial proportion. Throws
// std::domain_error unless 0 <= successes <= trials, trials > 0,
// and z > 0.
WilsonInterval wilson_interval(long successes, long trials, double z);

// Tally of collected counts over repeated shots of one prepared state.
struct CountHistogram {
    std::map<int, long> tallies;  // count value -> occurrences
    long n_shots = 0;
    PreparedState prepared = PreparedState::bright;
    std::string label;
};

CountHistogram histogram_from_records(const std::vector<int>& counts,
                                      PreparedState prepared,
                                      const std::string& label);

// CSV with header "n,count" plus a JSON sidecar (path + ".json") holding
// n_shots, prepared, and label. Reading tolerates a missing sidecar by
// deriving n_shots from the tallies; a present sidecar must agree.
// Parse failures throw std::invalid_argument naming file and line.
void write_histogram_csv(const std::string& path, const CountHistogram& hist);
CountHistogram read_histogram_csv(const std::string& path);

struct FitResult {
    double depump_prob = 0.0;       // per collected-photon-rate scatter, R * ce / r_p
    double depump_prob_low = 0.0;   // one-sigma profile-likelihood bounds
    double depump_prob_high = 0.0;
    double fitted_r_dep = 0.0;      // 1/s
    double fitted_r_dep_low = 0.0;
    double fitted_r_dep_high = 0.0;
    double fitted_r_p = 0.0;        // bright-state count rate incl. background, 1/s
    double r_np = 0.0;              // fixed background rate, 1/s
    double log_likelihood = 0.0;
    bool converged = false;
};

// Maximum-likelihood fit of the single-transfer count model to a
// bright-prepared histogram. The transfer rate is profiled; the bright
// count rate floats too unless float_count_rate is false. The background
// rate and window come from init; ce converts the fitted transfer rate
// into a per-scatter probability. One-sigma bounds are the
// profile-likelihood drop of 1/2. Throws tweezerdet::numerical_error on
// a degenerate histogram (all mass in one bin).
FitResult fit_depump(const CountHistogram& hist, const DetectionParams& init,
                     double ce, bool float_count_rate = true);

// Per-bin comparison of a histogram against the fitted model and against
// a plain Poisson of the same empirical mean, with Wilson one-sigma
// bands on the observed frequencies.
struct ResidualRow {
    int n = 0;
    double observed_freq = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    double poisson_ref = 0.0;
    double observed_minus_poisson = 0.0;
    double model_p = 0.0;
    double model_minus_poisson = 0.0;
};

std::vector<ResidualRow> histogram_residuals(const CountHistogram& hist,
                                             double r_p, double r_np,
                                             double r_dep, double t_d);

}  // namespace tweezerdet
