#include "tweezerdet/count_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tweezerdet/minimize.hpp"
#include "tweezerdet/quadrature.hpp"

namespace tweezerdet {

namespace {

double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(4097);
        for (std::size_t k = 0; k < t.size(); ++k) {
            t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        }
        return t;
    }();
    if (n < static_cast<int>(table.size())) {
        return table[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

void validate_detection(const DetectionParams& params) {
    if (!(params.r_bright > 0.0)) {
        throw std::invalid_argument("detection.r_bright: must be positive");
    }
    if (!(params.r_background >= 0.0)) {
        throw std::invalid_argument("detection.r_background: must be non-negative");
    }
    if (params.r_background >= params.r_bright) {
        throw std::invalid_argument(
            "detection.r_background: must be below detection.r_bright");
    }
    if (!(params.r_dep_bright >= 0.0)) {
        throw std::invalid_argument("detection.r_dep_bright: must be non-negative");
    }
    if (!(params.r_dep_dark >= 0.0)) {
        throw std::invalid_argument("detection.r_dep_dark: must be non-negative");
    }
    if (!(params.t_d > 0.0)) {
        throw std::invalid_argument("detection.t_d: must be positive");
    }
    if (params.threshold < 1) {
        throw std::invalid_argument("detection.threshold: must be at least 1");
    }
    if (!(params.collection_efficiency > 0.0) || params.collection_efficiency > 1.0) {
        throw std::invalid_argument(
            "detection.collection_efficiency: must lie in (0, 1]");
    }
}

double poisson_pmf(int n, double mean) {
    if (n < 0) return 0.0;
    if (std::isnan(mean) || mean < 0.0) {
        throw std::domain_error("Poisson mean must be non-negative");
    }
    if (std::isinf(mean)) return 0.0;
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(mean) - mean - log_factorial(n));
}

double poisson_cdf(int n, double mean) {
    if (n < 0) return 0.0;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        sum += poisson_pmf(k, mean);
    }
    return std::min(sum, 1.0);
}

double count_distribution_kernel(int n, double rate_before, double rate_after,
                                 double transfer_rate, double t_d) {
    if (rate_before < 0.0 || rate_after < 0.0) {
        throw std::domain_error("count rates must be non-negative");
    }
    if (transfer_rate < 0.0) {
        throw std::domain_error("transfer rate must be non-negative");
    }
    if (t_d < 0.0) {
        throw std::domain_error("window length must be non-negative");
    }
    if (n < 0) return 0.0;
    if (t_d == 0.0) return n == 0 ? 1.0 : 0.0;
    if (transfer_rate == 0.0 || rate_before == rate_after) {
        return poisson_pmf(n, rate_before * t_d);
    }

    const double no_event = std::exp(-transfer_rate * t_d) * poisson_pmf(n, rate_before * t_d);

    if (rate_after == 0.0) {
        // Counting stops at the event: the arrival-time integral reduces
        // to a Poisson tail. With a = rate_before + transfer_rate,
        //   integral = transfer_rate * rate_before^n / a^(n+1) * P(X > n),
        // X ~ Poisson(a * t_d).
        if (rate_before == 0.0) {
            return n == 0 ? 1.0 : 0.0;
        }
        const double a = rate_before + transfer_rate;
        const double tail = 1.0 - poisson_cdf(n, a * t_d);
        const double log_coeff = std::log(transfer_rate) + n * std::log(rate_before) -
                                 (n + 1.0) * std::log(a);
        return no_event + std::exp(log_coeff) * tail;
    }

    // Substituting w = 1 - exp(-transfer_rate * t) absorbs the arrival
    // density, leaving a bounded smooth integrand on [0, W].
    const double w_max = -std::expm1(-transfer_rate * t_d);
    const auto integrand = [&](double w) {
        const double t = std::min(-std::log1p(-w) / transfer_rate, t_d);
        const double mean = rate_after * t_d + (rate_before - rate_after) * t;
        return poisson_pmf(n, mean);
    };
    const QuadratureResult q = integrate_adaptive(integrand, 0.0, w_max, 1e-9);
    return no_event + q.value;
}

double count_distribution(int n, const DetectionParams& params, PreparedState prepared) {
    validate_detection(params);
    const double signal = params.r_bright + params.r_background;
    if (prepared == PreparedState::bright) {
        return count_distribution_kernel(n, signal, params.r_background,
                                         params.r_dep_bright, params.t_d);
    }
    return count_distribution_kernel(n, params.r_background, signal,
                                     params.r_dep_dark, params.t_d);
}

double bright_label_prob(const DetectionParams& params, PreparedState prepared) {
    validate_detection(params);
    double below = 0.0;
    for (int n = 0; n < params.threshold; ++n) {
        below += count_distribution(n, params, prepared);
    }
    return 1.0 - std::min(below, 1.0);
}

ErrorReport error_report(const DetectionParams& params) {
    validate_detection(params);
    ErrorReport r{};
    r.eps_bright = 1.0 - bright_label_prob(params, PreparedState::bright);
    r.eps_dark = bright_label_prob(params, PreparedState::dark);
    r.infidelity = 0.5 * (r.eps_bright + r.eps_dark);
    r.fidelity = 1.0 - r.infidelity;
    return r;
}

ThresholdResult optimal_threshold(const DetectionParams& params, int m_min, int m_max) {
    if (m_min < 1 || m_max < m_min) {
        throw std::invalid_argument("threshold scan range: need 1 <= m_min <= m_max");
    }
    ThresholdResult best{0, {}};
    DetectionParams p = params;
    for (int m = m_min; m <= m_max; ++m) {
        p.threshold = m;
        const ErrorReport r = error_report(p);
        if (best.threshold == 0 || r.infidelity < best.report.infidelity) {
            best.threshold = m;
            best.report = r;
        }
    }
    return best;
}

TimeResult optimal_time(const DetectionParams& params, double t_lo, double t_hi,
                        int threshold) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) {
        throw std::invalid_argument("time scan range: need 0 < t_lo < t_hi");
    }
    DetectionParams p = params;
    p.threshold = threshold;
    const auto infidelity_at = [&](double t) {
        DetectionParams q = p;
        q.t_d = t;
        return error_report(q).infidelity;
    };
    MinimizeResult best = golden_minimize(infidelity_at, t_lo, t_hi);
    bool fell_back = false;
    // Guard against a non-unimodal objective: coarse scan, refine any
    // grid point that beats the golden-section result.
    constexpr int kGridPoints = 64;
    const double step = (t_hi - t_lo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
        const double t = t_lo + i * step;
        if (infidelity_at(t) < best.value * (1.0 - 1e-12)) {
            const double lo = std::max(t_lo, t - step);
            const double hi = std::min(t_hi, t + step);
            const MinimizeResult local = golden_minimize(infidelity_at, lo, hi);
            if (local.value < best.value) {
                best = local;
                fell_back = true;
            }
        }
    }
    DetectionParams q = p;
    q.t_d = best.x;
    return {best.x, error_report(q), fell_back};
}

double transfer_free_optimal_time(double rate_bright_side, double rate_dark_side,
                                  int threshold) {
    if (!(rate_dark_side > 0.0) || !(rate_bright_side > rate_dark_side)) {
        throw std::invalid_argument(
            "transfer-free optimum needs rate_bright_side > rate_dark_side > 0");
    }
    if (threshold < 1) {
        throw std::invalid_argument("threshold: must be at least 1");
    }
    return threshold * std::log(rate_bright_side / rate_dark_side) /
           (rate_bright_side - rate_dark_side);
}

double r_from_eps_bright(double eps_bright, int threshold) {
    if (threshold != 2) {
        throw std::invalid_argument(
            "r_from_eps_bright: only the two-count threshold form is supported");
    }
    if (!(eps_bright >= 0.0) || eps_bright >= 1.0) {
        throw std::domain_error("eps_bright must lie in [0, 1)");
    }
    return 1.0 - std::sqrt(1.0 - eps_bright);
}

}  // namespace tweezerdet
