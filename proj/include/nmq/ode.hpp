// ode.hpp — Dormand–Prince 5(4) integrator with continuous output
//
// Fixed-size real state. Output times are served from the 4th-order dense
// interpolant of each accepted step, so step control is independent of the
// output grid.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>

#include "nmq/errors.hpp"

namespace nmq::ode {

struct Options {
    double rtol{1e-10};
    double atol{1e-12};
    double max_step{0.0};      // 0 means unbounded
    double initial_step{0.0};  // 0 picks a default
    std::size_t max_steps{50'000'000};
};

struct Stats {
    std::size_t accepted{0};
    std::size_t rejected{0};
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<void(double, const State<N>&, State<N>&)>;

// Integrates from t0 through every time in `outputs` (non-decreasing, >= t0),
// calling observe(index, t, y) for each. after_step(t, y) runs on every
// accepted step.
template <std::size_t N, class Observe, class AfterStep>
Stats dopri5(const Rhs<N>& f, State<N> y, double t0, std::span<const double> outputs,
             const Options& opt, Observe&& observe, AfterStep&& after_step) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                     b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;

    Stats stats;
    if (outputs.empty()) return stats;
    const double t_end = outputs.back();
    std::size_t next = 0;
    while (next < outputs.size() && outputs[next] <= t0) observe(next++, t0, y);
    if (next == outputs.size()) return stats;

    State<N> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    f(t0, y, k1);
    double t = t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * std::max(1.0, t_end - t0);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    double err_prev = 1e-4;

    while (next < outputs.size()) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            throw NumericalError("ODE integration exceeded the maximum number of steps");
        }
        h = std::min(h, t_end - t);
        if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg << "step size underflow at t=" << t << " (stiff or singular right-hand side)";
            throw NumericalError(msg.str());
        }
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        const double t_new = (h == t_end - t) ? t_end : t + h;
        f(t_new, tmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t_new, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sk) * (e / sk);
        }
        err = std::sqrt(err / static_cast<double>(N));
        if (!std::isfinite(err)) {
            h *= 0.1;
            ++stats.rejected;
            continue;
        }

        if (err <= 1.0) {
            // Dense output on [t, t_new].
            State<N> r1 = y, r2, r3, r4, r5;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                r2[i] = ydiff;
                r3[i] = bspl;
                r4[i] = ydiff - h * k7[i] - bspl;
                r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
            }
            while (next < outputs.size() && outputs[next] <= t_new) {
                const double theta = (outputs[next] - t) / h;
                const double th1 = 1.0 - theta;
                State<N> yo;
                for (std::size_t i = 0; i < N; ++i) {
                    yo[i] = r1[i] +
                            theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
                }
                observe(next, outputs[next], yo);
                ++next;
            }
            t = t_new;
            y = ynew;
            k1 = k7;
            ++stats.accepted;
            after_step(t, y);
            // PI step-size controller.
            const double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            err_prev = std::max(err, 1e-4);
            h *= std::clamp(fac, 0.2, 10.0);
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    }
    return stats;
}

} // namespace nmq::ode
