#include "tweezerdet/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tweezerdet/errors.hpp"

namespace tweezerdet {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) {
        word = sm.next();
    }
}

Xoshiro256pp::result_type Xoshiro256pp::operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256pp::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

Xoshiro256pp shot_rng(std::uint64_t root_seed, std::uint64_t shot_index) {
    SplitMix64 root(root_seed);
    const std::uint64_t base = root.next();
    SplitMix64 mixed(base ^ (shot_index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    return Xoshiro256pp(mixed.next());
}

double exponential_draw(Xoshiro256pp& rng, double rate) {
    if (rate < 0.0 || std::isnan(rate)) {
        throw std::domain_error("exponential rate must be non-negative");
    }
    if (rate == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -std::log1p(-rng.uniform()) / rate;
}

long poisson_draw(Xoshiro256pp& rng, double mean) {
    if (!(mean >= 0.0) || std::isinf(mean)) {
        throw std::domain_error("Poisson mean must be finite and non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean < 10.0) {
        // Chop-down inversion.
        const double p0 = std::exp(-mean);
        double p = p0;
        double cum = p;
        double u = rng.uniform();
        long k = 0;
        while (u > cum) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
            if (k > 500) {
                throw numerical_error("Poisson inversion failed to terminate");
            }
        }
        return k;
    }
    // Transformed rejection with squeeze (PTRS).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<long>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) {
            return static_cast<long>(kf);
        }
    }
    throw numerical_error("Poisson rejection sampler failed to terminate");
}

long binomial_draw(Xoshiro256pp& rng, long n, double p) {
    if (n < 0) {
        throw std::domain_error("binomial trial count must be non-negative");
    }
    if (!(p >= 0.0) || p > 1.0) {
        throw std::domain_error("binomial probability must lie in [0, 1]");
    }
    if (n == 0 || p == 0.0) {
        return 0;
    }
    if (p == 1.0) {
        return n;
    }
    const bool flipped = p > 0.5;
    const double q = flipped ? 1.0 - p : p;
    const double log_one_minus_q = std::log1p(-q);
    double pmf = std::exp(static_cast<double>(n) * log_one_minus_q);
    if (pmf == 0.0) {
        throw numerical_error("binomial inversion underflowed; trial count too large");
    }
    const double ratio = q / (1.0 - q);
    double cum = pmf;
    double u = rng.uniform();
    long k = 0;
    while (u > cum && k < n) {
        pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
        ++k;
        cum += pmf;
    }
    return flipped ? n - k : k;
}

}  // namespace tweezerdet
