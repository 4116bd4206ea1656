#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "testutil.hpp"
#include "tweezerdet/count_model.hpp"
#include "tweezerdet/errors.hpp"
#include "tweezerdet/minimize.hpp"
#include "tweezerdet/quadrature.hpp"

using namespace tweezerdet;

namespace {

DetectionParams reference_params() {
    DetectionParams p{};
    p.r_bright = 2.5e4;
    p.r_background = 60.0;
    p.r_dep_bright = 19.00722549;
    p.r_dep_dark = 2.7306962295;
    p.t_d = 5e-4;
    p.threshold = 2;
    p.collection_efficiency = 0.0037;
    return p;
}

}  // namespace

TEST_CASE("poisson pmf and cdf agree with frozen and limiting values") {
    CHECK(close_rel(poisson_pmf(2, 9.23), 0.0041767197742, 1e-10));
    CHECK(poisson_pmf(0, 0.0) == 1.0);
    CHECK(poisson_pmf(3, 0.0) == 0.0);
    CHECK(close_rel(poisson_pmf(0, 2.0), std::exp(-2.0), 1e-14));
    CHECK(poisson_pmf(-1, 2.0) == 0.0);
    CHECK_THROWS_AS(poisson_pmf(2, -1.0), std::domain_error);

    // Far tail through the log-gamma path stays near the normal approximation.
    const double p_big = poisson_pmf(5000, 5000.0);
    CHECK(close_rel(p_big, 1.0 / std::sqrt(2.0 * 3.14159265358979 * 5000.0), 1e-3));

    CHECK(close_rel(1.0 - poisson_cdf(1, 9.23), 0.998996915393, 1e-10));
    // Threshold-2 crossing point of the bright tail.
    CHECK(close_rel(1.0 - poisson_cdf(1, 9.233413476), 0.999, 1e-6));
    CHECK(poisson_cdf(5, 0.0) == 1.0);
    CHECK(poisson_cdf(-1, 3.0) == 0.0);
}

TEST_CASE("count kernel reproduces the frozen distribution") {
    const double frozen[11] = {
        0.00125996330761304, 0.00169785947327822, 0.00348747304386093,
        0.0087074238122161,  0.0198914753859153,  0.0385248256086013,
        0.0633542626965397,  0.0899295855457022,  0.112029188587883,
        0.124229024436433,   0.124073465928499,
    };
    for (int n = 0; n <= 10; ++n) {
        CHECK(close_rel(count_distribution_kernel(n, 2e4, 60.0, 25.0, 5e-4), frozen[n], 1e-8));
    }
}

TEST_CASE("count kernel is normalized") {
    double sum = 0.0;
    for (int n = 0; n <= 60; ++n) {
        sum += count_distribution_kernel(n, 2e4, 60.0, 25.0, 5e-4);
    }
    CHECK(close_rel(sum, 1.0, 1e-9));
}

TEST_CASE("transfer-free kernel collapses to a poisson") {
    for (int n : {0, 3, 10, 25}) {
        CHECK(close_rel(count_distribution_kernel(n, 2e4, 60.0, 0.0, 5e-4),
                        poisson_pmf(n, 2e4 * 5e-4), 1e-12));
        // A vanishing transfer rate approaches the same limit smoothly.
        CHECK(close_rel(count_distribution_kernel(n, 2e4, 60.0, 1e-12, 5e-4),
                        poisson_pmf(n, 2e4 * 5e-4), 1e-10));
        // Equal rates make the transfer unobservable.
        CHECK(close_rel(count_distribution_kernel(n, 300.0, 300.0, 40.0, 5e-4),
                        poisson_pmf(n, 300.0 * 5e-4), 1e-12));
    }
}

TEST_CASE("instant transfer approaches the post-transfer poisson law") {
    // The pre-transfer head contributes at first order in 1/transfer, so
    // the gap to the pure Poisson limit shrinks tenfold per decade.
    for (int n : {0, 1, 2}) {
        const double ref = poisson_pmf(n, 60.0 * 5e-4);
        const double err_slow =
            std::abs(count_distribution_kernel(n, 2e4, 60.0, 1e7, 5e-4) - ref);
        const double err_fast =
            std::abs(count_distribution_kernel(n, 2e4, 60.0, 1e8, 5e-4) - ref);
        CHECK(err_fast < err_slow);
        CHECK(close_rel(err_slow / err_fast, 10.0, 0.15));
    }
    CHECK(close_rel(count_distribution_kernel(0, 2e4, 60.0, 1e8, 5e-4),
                    poisson_pmf(0, 60.0 * 5e-4), 5e-4));
}

TEST_CASE("background-free branch matches direct numerical integration") {
    // The dark side with no background has a closed form; cross-check it
    // against brute-force quadrature of the arrival-time mixture.
    const double rate_before = 2e4;
    const double transfer = 25.0;
    const double t_d = 5e-4;
    for (int n : {0, 1, 4, 9, 15}) {
        const double closed = count_distribution_kernel(n, rate_before, 0.0, transfer, t_d);
        auto integrand = [&](double t) {
            return poisson_pmf(n, rate_before * t) * transfer * std::exp(-transfer * t);
        };
        const double tail = std::exp(-transfer * t_d) * poisson_pmf(n, rate_before * t_d);
        const double direct =
            integrate_adaptive(integrand, 0.0, t_d, 1e-12, 1e-300, 256).value + tail;
        CHECK(close_rel(closed, direct, 1e-9));
    }
}

TEST_CASE("small transfer rates perturb the label tail at first order") {
    // Below threshold mass grows by about m * R for a transfer probability
    // R per collected photon.
    const double r_ratio = 1e-4;
    double excess = 0.0;
    for (int n = 0; n < 2; ++n) {
        excess += count_distribution_kernel(n, 19660.0, 60.0, r_ratio * 19660.0, 5.9e-4) -
                  poisson_pmf(n, 19660.0 * 5.9e-4);
    }
    CHECK(close_rel(excess, 1.9688621e-4, 1e-6));
    CHECK(close_rel(excess, 2.0 * r_ratio, 0.1));
}

TEST_CASE("a larger transfer rate shifts mass toward fewer counts") {
    for (int k = 0; k <= 20; ++k) {
        double cdf_lo = 0.0;
        double cdf_hi = 0.0;
        for (int n = 0; n <= k; ++n) {
            cdf_lo += count_distribution_kernel(n, 2e4, 60.0, 25.0, 5e-4);
            cdf_hi += count_distribution_kernel(n, 2e4, 60.0, 50.0, 5e-4);
        }
        CHECK(cdf_hi >= cdf_lo - 1e-12);
    }
}

TEST_CASE("prepared states map onto the kernel with swapped roles") {
    const auto p = reference_params();
    const double signal = p.r_bright + p.r_background;
    for (int n : {0, 1, 2, 7, 14}) {
        CHECK(count_distribution(n, p, PreparedState::bright) ==
              count_distribution_kernel(n, signal, p.r_background, p.r_dep_bright, p.t_d));
        CHECK(count_distribution(n, p, PreparedState::dark) ==
              count_distribution_kernel(n, p.r_background, signal, p.r_dep_dark, p.t_d));
    }
}

TEST_CASE("detection validation names the offending field") {
    auto p = reference_params();
    p.r_bright = -1.0;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("r_bright"),
                         std::invalid_argument);
    p = reference_params();
    p.r_background = -0.5;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("r_background"),
                         std::invalid_argument);
    p = reference_params();
    p.r_bright = 30.0;
    p.r_background = 60.0;
    CHECK_THROWS_AS(validate_detection(p), std::invalid_argument);
    p = reference_params();
    p.r_dep_bright = -1.0;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("r_dep_bright"),
                         std::invalid_argument);
    p = reference_params();
    p.t_d = 0.0;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("t_d"),
                         std::invalid_argument);
    p = reference_params();
    p.threshold = 0;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("threshold"),
                         std::invalid_argument);
    p = reference_params();
    p.collection_efficiency = 0.0;
    CHECK_THROWS_WITH_AS(validate_detection(p), doctest::Contains("collection_efficiency"),
                         std::invalid_argument);
}

TEST_CASE("label probability is the mass at and above threshold") {
    const auto p = reference_params();
    double below = 0.0;
    for (int n = 0; n < p.threshold; ++n) {
        below += count_distribution(n, p, PreparedState::bright);
    }
    CHECK(close_rel(bright_label_prob(p, PreparedState::bright), 1.0 - below, 1e-12));
}

TEST_CASE("error report at the tuned operating point matches frozen values") {
    const auto report = error_report(reference_params());
    CHECK(close_rel(report.eps_bright, 1.5445038296e-3, 1e-7));
    CHECK(close_rel(report.eps_dark, 1.59e-3, 1e-6));
    CHECK(close_rel(report.infidelity, 1.5672519148e-3, 1e-7));
    CHECK(close_rel(report.fidelity, 1.0 - report.infidelity, 1e-15));
}

TEST_CASE("error report in the transfer-free limit matches the poisson tails") {
    DetectionParams p{};
    p.r_bright = 19600.0;
    p.r_background = 60.0;
    p.r_dep_bright = 0.0;
    p.r_dep_dark = 0.0;
    p.t_d = 5.9e-4;
    p.threshold = 2;
    p.collection_efficiency = 0.0037;
    const auto report = error_report(p);
    CHECK(close_rel(report.eps_bright, 1.1555652e-4, 1e-7));
    CHECK(close_rel(report.eps_dark, 6.1198717e-4, 1e-7));
    CHECK(close_rel(report.infidelity, 3.6377185e-4, 1e-7));
}

TEST_CASE("optimal threshold agrees with a brute-force scan") {
    auto check_brute = [](const DetectionParams& p, int m_min, int m_max) {
        const auto best = optimal_threshold(p, m_min, m_max);
        int brute = m_min;
        double brute_inf = 2.0;
        for (int m = m_min; m <= m_max; ++m) {
            auto q = p;
            q.threshold = m;
            const double inf = error_report(q).infidelity;
            if (inf < brute_inf) {
                brute_inf = inf;
                brute = m;
            }
        }
        CHECK(best.threshold == brute);
        CHECK(close_rel(best.report.infidelity, brute_inf, 1e-12));
    };
    check_brute(reference_params(), 1, 8);

    DetectionParams weak = reference_params();
    weak.r_bright = 4000.0;
    check_brute(weak, 1, 8);

    DetectionParams noisy = reference_params();
    noisy.r_background = 900.0;
    check_brute(noisy, 1, 12);
}

TEST_CASE("optimal threshold validates its range") {
    CHECK_THROWS_AS(optimal_threshold(reference_params(), 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(optimal_threshold(reference_params(), 0, 5), std::invalid_argument);
}

TEST_CASE("transfer-free optimal time hits the tail crossing") {
    const double t_star = transfer_free_optimal_time(19660.0, 60.0, 2);
    CHECK(close_rel(t_star, 5.910200848e-4, 1e-9));
    // Closed form for threshold m: t* = m ln(rb/rd) / (rb - rd).
    const double direct = 2.0 * std::log(19660.0 / 60.0) / (19660.0 - 60.0);
    CHECK(close_rel(t_star, direct, 1e-12));
    CHECK(close_rel(transfer_free_optimal_time(500.0, 20.0, 1),
                    std::log(500.0 / 20.0) / 480.0, 1e-12));
    CHECK_THROWS_AS(transfer_free_optimal_time(60.0, 60.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(transfer_free_optimal_time(30.0, 60.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(transfer_free_optimal_time(19660.0, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(transfer_free_optimal_time(19660.0, 60.0, 0), std::invalid_argument);
}

TEST_CASE("optimal time matches the transfer-free crossing when transfer is off") {
    DetectionParams p{};
    p.r_bright = 19600.0;
    p.r_background = 60.0;
    p.r_dep_bright = 0.0;
    p.r_dep_dark = 0.0;
    p.t_d = 5e-4;
    p.threshold = 2;
    p.collection_efficiency = 0.0037;
    const auto result = optimal_time(p, 1e-4, 2e-3, 2);
    CHECK(close_rel(result.t_d, 5.910200848e-4, 1e-5));
    // No grid point of a fine scan beats the optimizer's minimum.
    double best_grid = 2.0;
    for (int i = 0; i <= 1000; ++i) {
        auto q = p;
        q.t_d = 1e-4 + (2e-3 - 1e-4) * i / 1000.0;
        best_grid = std::min(best_grid, error_report(q).infidelity);
    }
    CHECK(result.report.infidelity <= best_grid + 1e-12);
}

TEST_CASE("optimal time shortens when the bright state decays") {
    DetectionParams p = reference_params();
    const double with_transfer = optimal_time(p, 1e-4, 2e-3, 2).t_d;
    p.r_dep_bright = 0.0;
    p.r_dep_dark = 0.0;
    const double without = optimal_time(p, 1e-4, 2e-3, 2).t_d;
    CHECK(with_transfer < without);
}

TEST_CASE("survival inversion recovers the per-photon transfer probability") {
    CHECK(close_rel(r_from_eps_bright(0.00152), 7.60289019697e-4, 1e-10));
    CHECK(close_rel(r_from_eps_bright(0.0015), 7.50281461135e-4, 1e-10));
    CHECK(r_from_eps_bright(0.0) == 0.0);
    // Inverse of eps = 1 - (1 - r)^2.
    const double r = r_from_eps_bright(0.00152);
    CHECK(close_rel(1.0 - (1.0 - r) * (1.0 - r), 0.00152, 1e-12));
    CHECK_THROWS_AS(r_from_eps_bright(0.00152, 3), std::invalid_argument);
    CHECK_THROWS_AS(r_from_eps_bright(-0.1), std::domain_error);
    CHECK_THROWS_AS(r_from_eps_bright(1.0), std::domain_error);
}

TEST_CASE("adaptive quadrature integrates smooth and peaked functions") {
    auto square = [](double x) { return x * x; };
    CHECK(close_rel(integrate_adaptive(square, 0.0, 1.0).value, 1.0 / 3.0, 1e-12));

    auto sine = [](double x) { return std::sin(x); };
    CHECK(close_rel(integrate_adaptive(sine, 0.0, 3.14159265358979324).value, 2.0, 1e-12));

    // Sharp exponential against a slow oscillation.
    auto peaked = [](double x) { return std::exp(-200.0 * x) * std::cos(3.0 * x); };
    const double expected = 200.0 / (200.0 * 200.0 + 9.0);
    const auto result = integrate_adaptive(peaked, 0.0, 1.0, 1e-11);
    CHECK(close_rel(result.value, expected, 1e-9));
    CHECK(result.subdivisions > 0);

    CHECK(integrate_adaptive(square, 2.0, 2.0).value == 0.0);
}

TEST_CASE("quadrature reports when the subdivision budget is exhausted") {
    auto wiggly = [](double x) { return std::sin(1e4 * x * x); };
    CHECK_THROWS_AS(integrate_adaptive(wiggly, 0.0, 3.0, 1e-13, 1e-300, 2),
                    numerical_error);
}

TEST_CASE("golden-section minimization finds interior minima") {
    auto bowl = [](double x) { return (x - 3.7) * (x - 3.7) + 1.25; };
    const auto result = golden_minimize(bowl, 0.0, 10.0, 1e-12);
    // Resolution near a quadratic minimum with an offset value is
    // sqrt(eps * f / f''), about 2e-8 here.
    CHECK(close_abs(result.x, 3.7, 1e-6));
    CHECK(close_rel(result.value, 1.25, 1e-12));
    CHECK(result.iterations <= 200);
}

TEST_CASE("bisection finds a bracketed root and rejects a bad bracket") {
    auto f = [](double x) { return std::cos(x); };
    CHECK(close_abs(bisect_root(f, 0.0, 3.0), 1.5707963267948966, 1e-10));
    auto g = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(bisect_root(g, -1.0, 1.0), numerical_error);
}
