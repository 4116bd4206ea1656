#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tweezerdet/count_model.hpp"
#include "tweezerdet/rng.hpp"
#include "tweezerdet/trap.hpp"

namespace tweezerdet {

// Pulsed readout protocol. In adaptive mode the shot stops as soon as the
// cumulative count reaches the threshold; otherwise every pulse runs.
struct AdaptiveProtocol {
    double pulse_duration;   // s
    double max_total_time;   // s; quantized down to whole pulses
    int threshold = 2;
    bool adaptive = true;

    int max_pulses() const;
};

void validate_protocol(const AdaptiveProtocol& protocol);

// Recoil heating bookkeeping in temperature units. Every scattered
// photon deposits energy_per_scatter (two recoil kicks, so it must equal
// 2 * recoil_temp); the atom is lost once its accumulated energy exceeds
// the trap depth, checked at pulse boundaries. loss_enabled keeps the
// energy tally but disables the loss, for budget accounting runs.
struct HeatingModel {
    double recoil_temp = 0.2e-6;        // K per photon kick
    double energy_per_scatter = 0.4e-6; // K, absorption + emission
    double trap_depth_temp;             // K
    bool loss_enabled = true;
};

HeatingModel make_heating(const TrapConfig& trap, bool loss_enabled = true);

void validate_heating(const HeatingModel& heating);

struct ShotRecord {
    int collected_counts = 0;
    int pulses_used = 0;
    double wait_time = 0.0;               // pulses_used * pulse_duration
    long scattered_photons = 0;
    std::optional<double> depump_time;    // state-transfer instant, if reached
    double final_energy_temp = 0.0;       // K
    bool lost = false;
    bool label_bright = false;
};

// One readout shot of an atom prepared in the given state. The state
// transfer (bright -> dark or dark -> bright) is a single exponential
// event; atom photons are Poisson in each pulse, thinned binomially by
// the collection efficiency; background counts are Poisson and
// unaffected by the atom. A lost atom stops scattering.
ShotRecord simulate_shot(const DetectionParams& params,
                         const AdaptiveProtocol& protocol,
                         const HeatingModel& heating,
                         PreparedState prepared,
                         std::uint64_t root_seed,
                         std::uint64_t shot_index);

struct BatchSummary {
    long n_shots = 0;
    double mean_counts = 0.0;
    double mean_pulses = 0.0;
    double mean_wait_time = 0.0;
    double mean_scattered = 0.0;
    double mean_energy_temp = 0.0;
    double bright_label_fraction = 0.0;
    double bright_label_low = 0.0;   // one-sigma Wilson band on the label fraction
    double bright_label_high = 0.0;
    double loss_fraction = 0.0;
    double loss_low = 0.0;
    double loss_high = 0.0;
    double depump_fraction = 0.0;  // shots whose transfer event fell inside the readout
};

struct BatchResult {
    std::vector<ShotRecord> records;
    std::map<int, long> count_tallies;  // collected_counts histogram
    BatchSummary summary;
};

// Runs n_shots independent shots. Shot i always uses the stream
// (root_seed, i), so the records and summary are identical for any
// thread count. n_threads = 0 picks TWEEZERDET_THREADS or the hardware
// concurrency.
BatchResult run_batch(const DetectionParams& params,
                      const AdaptiveProtocol& protocol,
                      const HeatingModel& heating,
                      PreparedState prepared,
                      long n_shots,
                      std::uint64_t root_seed,
                      int n_threads = 0);

// Distribution of the stopping pulse index against the transfer-free,
// background-free reference: the threshold-th count of a Poisson
// process, discretized to pulse boundaries.
struct WaitTimeHistogram {
    std::vector<double> empirical_cdf;  // index k-1: P(pulses_used <= k)
    std::vector<double> reference_cdf;
    double ks_statistic = 0.0;
    double timeout_fraction = 0.0;  // shots that never reached threshold
};

WaitTimeHistogram wait_time_histogram(const std::vector<ShotRecord>& records,
                                      const AdaptiveProtocol& protocol,
                                      double signal_rate);

// Readout-induced loss, measured the way an experiment would: survival
// of bright-prepared shots relative to dark-prepared ones. Standard
// error by the delta method.
struct LossEstimate {
    double loss = 0.0;
    double std_error = 0.0;
    double survival_bright = 0.0;
    double survival_dark = 0.0;
};

LossEstimate detection_loss(const std::vector<ShotRecord>& bright_records,
                            const std::vector<ShotRecord>& dark_records);

}  // namespace tweezerdet
