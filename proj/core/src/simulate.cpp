#include "tweezerdet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "tweezerdet/errors.hpp"
#include "tweezerdet/inference.hpp"

namespace tweezerdet {

namespace {

// Largest per-pulse scatter expectation the samplers are trusted with;
// beyond this the configuration is unphysical for single-atom readout.
constexpr double kMaxScatterPerPulse = 1e6;

int default_thread_count() {
    if (const char* env = std::getenv("TWEEZERDET_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || parsed <= 0 || parsed > 4096) {
            throw std::invalid_argument(
                "TWEEZERDET_THREADS: must be a positive integer");
        }
        return static_cast<int>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void validate_heating(const HeatingModel& heating) {
    if (!(heating.recoil_temp >= 0.0)) {
        throw std::invalid_argument("heating.recoil_temp: must be non-negative");
    }
    const double expected = 2.0 * heating.recoil_temp;
    if (std::abs(heating.energy_per_scatter - expected) >
        1e-9 * std::max(expected, 1e-300)) {
        throw std::invalid_argument(
            "heating.energy_per_scatter: must equal twice recoil_temp");
    }
    if (!(heating.trap_depth_temp > 0.0)) {
        throw std::invalid_argument("heating.trap_depth_temp: must be positive");
    }
}

int AdaptiveProtocol::max_pulses() const {
    // Tolerate representation error in max_total_time / pulse_duration so
    // an exact multiple is never rounded down a pulse.
    const double ratio = max_total_time / pulse_duration;
    return static_cast<int>(std::floor(ratio * (1.0 + 1e-12) + 1e-12));
}

void validate_protocol(const AdaptiveProtocol& protocol) {
    if (!(protocol.pulse_duration > 0.0)) {
        throw std::invalid_argument("protocol.pulse_duration: must be positive");
    }
    if (!(protocol.max_total_time >= protocol.pulse_duration)) {
        throw std::invalid_argument(
            "protocol.max_total_time: must cover at least one pulse");
    }
    if (protocol.threshold < 1) {
        throw std::invalid_argument("protocol.threshold: must be at least 1");
    }
    if (protocol.max_pulses() > 10'000'000) {
        throw std::invalid_argument("protocol: more than 1e7 pulses per shot");
    }
}

HeatingModel make_heating(const TrapConfig& trap, bool loss_enabled) {
    HeatingModel h{};
    h.trap_depth_temp = trap.depth_temp;
    h.loss_enabled = loss_enabled;
    return h;
}

ShotRecord simulate_shot(const DetectionParams& params,
                         const AdaptiveProtocol& protocol,
                         const HeatingModel& heating,
                         PreparedState prepared,
                         std::uint64_t root_seed,
                         std::uint64_t shot_index) {
    validate_detection(params);
    validate_protocol(protocol);
    validate_heating(heating);

    Xoshiro256pp rng = shot_rng(root_seed, shot_index);
    const double ce = params.collection_efficiency;
    const double atom_rate = params.r_bright / ce;  // scattered photons/s
    const bool starts_bright = prepared == PreparedState::bright;
    const double transfer_rate = starts_bright ? params.r_dep_bright : params.r_dep_dark;
    const double rate_pre = starts_bright ? atom_rate : 0.0;
    const double rate_post = starts_bright ? 0.0 : atom_rate;
    const double t_transfer = exponential_draw(rng, transfer_rate);

    const int max_pulses = protocol.max_pulses();
    const double tau = protocol.pulse_duration;
    const double bg_mean = params.r_background * tau;

    ShotRecord rec{};
    double energy = 0.0;
    bool lost = false;
    long cumulative = 0;
    for (int i = 0; i < max_pulses; ++i) {
        const double t0 = i * tau;
        const double t1 = t0 + tau;
        double atom_mean = 0.0;
        if (!lost) {
            const double cut = std::clamp(t_transfer, t0, t1);
            atom_mean = rate_pre * (cut - t0) + rate_post * (t1 - cut);
        }
        if (atom_mean > kMaxScatterPerPulse) {
            throw numerical_error("expected scatter per pulse exceeds sampler range");
        }
        long scattered = 0;
        if (atom_mean > 0.0) {
            scattered = poisson_draw(rng, atom_mean);
        }
        long collected = 0;
        if (scattered > 0) {
            collected = binomial_draw(rng, scattered, ce);
        }
        long background = 0;
        if (bg_mean > 0.0) {
            background = poisson_draw(rng, bg_mean);
        }
        cumulative += collected + background;
        rec.scattered_photons += scattered;
        energy += static_cast<double>(scattered) * heating.energy_per_scatter;
        if (!lost && heating.loss_enabled && energy > heating.trap_depth_temp) {
            lost = true;
        }
        rec.pulses_used = i + 1;
        if (protocol.adaptive && cumulative >= protocol.threshold) {
            break;
        }
    }
    rec.collected_counts = static_cast<int>(cumulative);
    rec.wait_time = rec.pulses_used * tau;
    rec.final_energy_temp = energy;
    rec.lost = lost;
    rec.label_bright = cumulative >= protocol.threshold;
    if (std::isfinite(t_transfer) && t_transfer < rec.wait_time) {
        rec.depump_time = t_transfer;
    }
    return rec;
}

BatchResult run_batch(const DetectionParams& params,
                      const AdaptiveProtocol& protocol,
                      const HeatingModel& heating,
                      PreparedState prepared,
                      long n_shots,
                      std::uint64_t root_seed,
                      int n_threads) {
    if (n_shots < 0) {
        throw std::invalid_argument("n_shots: must be non-negative");
    }
    validate_detection(params);
    validate_protocol(protocol);
    validate_heating(heating);

    BatchResult result;
    result.records.resize(static_cast<std::size_t>(n_shots));
    int threads = n_threads > 0 ? n_threads : default_thread_count();
    threads = static_cast<int>(std::min<long>(threads, std::max<long>(n_shots, 1)));

    const auto worker = [&](long begin, long end, std::exception_ptr& error) {
        try {
            for (long i = begin; i < end; ++i) {
                result.records[static_cast<std::size_t>(i)] =
                    simulate_shot(params, protocol, heating, prepared, root_seed,
                                  static_cast<std::uint64_t>(i));
            }
        } catch (...) {
            error = std::current_exception();
        }
    };

    if (threads <= 1 || n_shots < 512) {
        std::exception_ptr error;
        worker(0, n_shots, error);
        if (error) std::rethrow_exception(error);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        const long chunk = (n_shots + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long begin = t * chunk;
            const long end = std::min<long>(begin + chunk, n_shots);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end, std::ref(errors[static_cast<std::size_t>(t)]));
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    BatchSummary& s = result.summary;
    s.n_shots = n_shots;
    if (n_shots > 0) {
        long labels = 0, losses = 0, transfers = 0;
        for (const auto& rec : result.records) {
            s.mean_counts += rec.collected_counts;
            s.mean_pulses += rec.pulses_used;
            s.mean_wait_time += rec.wait_time;
            s.mean_scattered += static_cast<double>(rec.scattered_photons);
            s.mean_energy_temp += rec.final_energy_temp;
            labels += rec.label_bright ? 1 : 0;
            losses += rec.lost ? 1 : 0;
            transfers += rec.depump_time.has_value() ? 1 : 0;
            ++result.count_tallies[rec.collected_counts];
        }
        const double inv_n = 1.0 / static_cast<double>(n_shots);
        s.mean_counts *= inv_n;
        s.mean_pulses *= inv_n;
        s.mean_wait_time *= inv_n;
        s.mean_scattered *= inv_n;
        s.mean_energy_temp *= inv_n;
        s.bright_label_fraction = labels * inv_n;
        s.loss_fraction = losses * inv_n;
        s.depump_fraction = transfers * inv_n;
        const WilsonInterval label_band = wilson_interval(labels, n_shots, kZOneSigma);
        s.bright_label_low = label_band.low;
        s.bright_label_high = label_band.high;
        const WilsonInterval loss_band = wilson_interval(losses, n_shots, kZOneSigma);
        s.loss_low = loss_band.low;
        s.loss_high = loss_band.high;
    }
    return result;
}

WaitTimeHistogram wait_time_histogram(const std::vector<ShotRecord>& records,
                                      const AdaptiveProtocol& protocol,
                                      double signal_rate) {
    if (records.empty()) {
        throw std::invalid_argument("wait_time_histogram: no records");
    }
    if (!(signal_rate > 0.0)) {
        throw std::invalid_argument("signal_rate: must be positive");
    }
    validate_protocol(protocol);
    const int max_p = protocol.max_pulses();
    std::vector<long> tally(static_cast<std::size_t>(max_p) + 1, 0);
    long timeouts = 0;
    for (const auto& rec : records) {
        const int k = std::clamp(rec.pulses_used, 1, max_p);
        ++tally[static_cast<std::size_t>(k)];
        if (!rec.label_bright) ++timeouts;
    }
    WaitTimeHistogram h;
    h.empirical_cdf.resize(static_cast<std::size_t>(max_p));
    h.reference_cdf.resize(static_cast<std::size_t>(max_p));
    const double inv_n = 1.0 / static_cast<double>(records.size());
    long running = 0;
    for (int k = 1; k <= max_p; ++k) {
        running += tally[static_cast<std::size_t>(k)];
        const double emp = running * inv_n;
        const double ref =
            1.0 - poisson_cdf(protocol.threshold - 1,
                              signal_rate * static_cast<double>(k) * protocol.pulse_duration);
        h.empirical_cdf[static_cast<std::size_t>(k - 1)] = emp;
        h.reference_cdf[static_cast<std::size_t>(k - 1)] = ref;
        h.ks_statistic = std::max(h.ks_statistic, std::abs(emp - ref));
    }
    h.timeout_fraction = timeouts * inv_n;
    return h;
}

LossEstimate detection_loss(const std::vector<ShotRecord>& bright_records,
                            const std::vector<ShotRecord>& dark_records) {
    if (bright_records.empty() || dark_records.empty()) {
        throw std::invalid_argument("detection_loss: need records for both prepared states");
    }
    const auto survival = [](const std::vector<ShotRecord>& records) {
        long kept = 0;
        for (const auto& rec : records) {
            kept += rec.lost ? 0 : 1;
        }
        return static_cast<double>(kept) / static_cast<double>(records.size());
    };
    LossEstimate est;
    est.survival_bright = survival(bright_records);
    est.survival_dark = survival(dark_records);
    if (est.survival_dark == 0.0) {
        throw std::domain_error("detection_loss: no dark-prepared shots survived");
    }
    const double ratio = est.survival_bright / est.survival_dark;
    est.loss = 1.0 - ratio;
    const double nb = static_cast<double>(bright_records.size());
    const double nd = static_cast<double>(dark_records.size());
    double var = 0.0;
    if (est.survival_bright > 0.0) {
        var += (1.0 - est.survival_bright) / (est.survival_bright * nb);
        var += (1.0 - est.survival_dark) / (est.survival_dark * nd);
        var *= ratio * ratio;
    }
    est.std_error = std::sqrt(var);
    return est;
}

}  // namespace tweezerdet
