#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta step for fixed-size real systems.
// Coefficients from Dormand & Prince (1980); error norm and controller follow
// Hairer, Norsett & Wanner, "Solving ODEs I", II.4.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace nonstatq::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct StepResult {
    State<N> y;        ///< 5th-order solution at t + h
    State<N> dydt;     ///< f(t + h, y), reusable as the next step's first stage
    double error = 0;  ///< scaled max-norm error estimate; accept when <= 1
};

struct Tolerance {
    double abs = 1e-9;
    double rel = 1e-9;
};

/// One Dormand-Prince step from (t, y) with slope k1 = f(t, y).
template <std::size_t N, class Rhs>
StepResult<N> dopri5_step(const Rhs& f, double t, const State<N>& y, const State<N>& k1, double h,
                          const Tolerance& tol) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // error coefficients: b5 - b4
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State<N> tmp;
    auto stage = [&](auto&& combine) {
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
        return tmp;
    };

    const State<N> k2 = f(t + c2 * h, stage([&](std::size_t i) { return a21 * k1[i]; }));
    const State<N> k3 =
        f(t + c3 * h, stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }));
    const State<N> k4 = f(t + c4 * h, stage([&](std::size_t i) {
                              return a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
                          }));
    const State<N> k5 = f(t + c5 * h, stage([&](std::size_t i) {
                              return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                          }));
    const State<N> k6 = f(t + h, stage([&](std::size_t i) {
                              return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                     a65 * k5[i];
                          }));
    StepResult<N> out;
    out.y = stage([&](std::size_t i) {
        return a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i];
    });
    out.dydt = f(t + h, out.y);

    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * out.dydt[i]);
        const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(out.y[i]));
        const double scaled = std::abs(err) / sc;
        worst = std::isfinite(scaled) ? std::max(worst, scaled) : HUGE_VAL;
    }
    out.error = worst;
    return out;
}

/// Step-size factor for the next attempt given a scaled error.
inline double dopri5_step_factor(double error) {
    constexpr double safety = 0.9;
    constexpr double fac_min = 0.2;
    constexpr double fac_max = 5.0;
    if (error == 0.0) return fac_max;
    return std::clamp(safety * std::pow(error, -0.2), fac_min, fac_max);
}

}  // namespace nonstatq::ode
