#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "tweezerdet/errors.hpp"

namespace tweezerdet {

struct QuadratureResult {
    double value;
    double error;      // estimated absolute error
    int subdivisions;  // intervals examined beyond the first
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (positive half; node 0 last).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename F>
std::pair<double, double> gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double kronrod = kKronrodWeights[7] * f_center;
    double gauss = kGaussWeights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double f_sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * f_sum;
        if (i % 2 == 1) {
            gauss += kGaussWeights[i / 2] * f_sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    const double err = std::abs(kronrod - gauss);
    return {kronrod, err};
}

}  // namespace detail

// Globally adaptive quadrature: repeatedly bisects the interval with the
// largest error estimate. Throws numerical_error when the subdivision
// budget runs out before reaching max(rel_tol * |value|, abs_tol).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double rel_tol = 1e-9,
                                    double abs_tol = 1e-300,
                                    int max_subdivisions = 64) {
    struct Segment {
        double a, b, value, error;
    };
    if (a == b) {
        return {0.0, 0.0, 0};
    }
    auto [v0, e0] = detail::gauss_kronrod_15(f, a, b);
    std::vector<Segment> segments{{a, b, v0, e0}};
    double total_value = v0;
    double total_error = e0;
    int splits = 0;
    while (total_error > std::max(rel_tol * std::abs(total_value), abs_tol)) {
        if (splits >= max_subdivisions) {
            throw numerical_error("adaptive quadrature failed to converge");
        }
        auto worst = std::max_element(segments.begin(), segments.end(),
                                      [](const Segment& x, const Segment& y) {
                                          return x.error < y.error;
                                      });
        const Segment seg = *worst;
        segments.erase(worst);
        const double mid = 0.5 * (seg.a + seg.b);
        auto [vl, el] = detail::gauss_kronrod_15(f, seg.a, mid);
        auto [vr, er] = detail::gauss_kronrod_15(f, mid, seg.b);
        segments.push_back({seg.a, mid, vl, el});
        segments.push_back({mid, seg.b, vr, er});
        total_value += vl + vr - seg.value;
        total_error += el + er - seg.error;
        ++splits;
    }
    return {total_value, total_error, splits};
}

}  // namespace tweezerdet
