#pragma once

#include <cmath>
#include <utility>

#include "tweezerdet/errors.hpp"

namespace tweezerdet {

struct MinimizeResult {
    double x;
    double value;
    int iterations;
};

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
MinimizeResult golden_minimize(F&& f, double lo, double hi,
                               double x_tol_rel = 1e-10, int max_iters = 200) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int iters = 0;
    while (iters < max_iters && (b - a) > x_tol_rel * (std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        ++iters;
    }
    const double x = f1 <= f2 ? x1 : x2;
    return {x, f1 <= f2 ? f1 : f2, iters};
}

// Bisection root of f on [lo, hi]. Requires a sign change (or an exact
// zero at an endpoint); otherwise throws numerical_error.
template <typename F>
double bisect_root(F&& f, double lo, double hi,
                   double x_tol_rel = 1e-12, int max_iters = 200) {
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw numerical_error("bisection bracket does not straddle a root");
    }
    double a = lo, b = hi;
    for (int i = 0; i < max_iters; ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0 || (b - a) <= x_tol_rel * (std::abs(a) + std::abs(b))) {
            return mid;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace tweezerdet
