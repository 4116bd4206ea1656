#pragma once

#include <cstdint>

namespace tweezerdet {

// splitmix64; used to expand seeds into full generator state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

// xoshiro256++ by Blackman and Vigna. Fixed algorithm keeps streams
// identical across platforms and standard-library versions, which the
// std:: distributions do not guarantee.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }

    explicit Xoshiro256pp(std::uint64_t seed);
    result_type operator()();

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t s_[4];
};

// Generator for one Monte Carlo shot. Streams depend only on
// (root_seed, shot_index), so results are independent of how shots are
// distributed over threads.
Xoshiro256pp shot_rng(std::uint64_t root_seed, std::uint64_t shot_index);

// Exponential arrival time with the given rate (1/s); a zero rate means
// the event never happens (+infinity). Negative rates throw
// std::domain_error.
double exponential_draw(Xoshiro256pp& rng, double rate);

// Poisson sample: chop-down inversion for small means, transformed
// rejection (Hormann PTRS) for large ones. Throws std::domain_error on a
// negative or non-finite mean.
long poisson_draw(Xoshiro256pp& rng, double mean);

// Binomial sample by CDF inversion. Throws std::domain_error unless
// n >= 0 and p lies in [0, 1], and numerical_error when the pmf walk
// underflows (n * p far outside the supported range).
long binomial_draw(Xoshiro256pp& rng, long n, double p);

}  // namespace tweezerdet
