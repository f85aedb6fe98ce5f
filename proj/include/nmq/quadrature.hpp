// quadrature.hpp — Adaptive quadrature for the bath-kernel and rate integrals
//
// Finite intervals use adaptive Gauss–Kronrod (7/15) bisection. Half-line
// Fourier integrals are split into oscillation-aware panels (width at most a
// quarter of a half period) and summed cycle by cycle; slowly decaying tails
// are extrapolated with Wynn's epsilon algorithm.

#pragma once

#include <functional>
#include <limits>
#include <span>

namespace nmq::quad {

struct Tolerance {
    double abs{1e-10};
    double rel{1e-8};
};

struct Estimate {
    double value{0.0};
    double error{0.0};
    double l1{0.0};  // integral of |f| where available
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss–Kronrod on [a, b]. Throws NumericalError when the bisection
// depth is exhausted before the tolerance is met.
Estimate integrate(const Integrand& f, double a, double b, Tolerance tol = {},
                   int max_depth = 40);

// Same as integrate(), for integrands behaving like (x - a)^p near a with
// p > -1. Substitutes u = (x - a)^(p + 1) to remove the endpoint singularity.
Estimate integrate_power_endpoint(const Integrand& f, double a, double b, double p,
                                  Tolerance tol = {});

// Non-oscillatory integral over [a, inf) (exp-sinh rule).
Estimate integrate_to_infinity(const Integrand& f, double a, Tolerance tol = {});

enum class Trig { Cos, Sin };

struct FourierOptions {
    double lower{0.0};
    double upper{std::numeric_limits<double>::infinity()};
    // Integrand behaves like (w - lower)^low_exponent near the lower limit.
    double low_exponent{0.0};
    // Apply Wynn-epsilon extrapolation to the half-period partial sums.
    bool accelerate{true};
    long max_cycles{400000};
    Tolerance tol{};
};

// Integral of f(w) * trig(w * tau) over [lower, upper]. tau must be > 0.
Estimate fourier_integral(const Integrand& f, double tau, Trig kind,
                          const FourierOptions& options = {});

// Wynn epsilon extrapolation of a sequence of partial sums. Returns the best
// even-column estimate; *error receives the difference of the last two.
double wynn_epsilon(std::span<const double> partial_sums, double* error = nullptr);

} // namespace nmq::quad
