// quadrature.cpp — Adaptive Gauss–Kronrod and panel-wise Fourier integrals

#include "nmq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmq/errors.hpp"

namespace nmq::quad {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
    double a, b, value, error, l1;
    int depth;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b, int depth) {
    double err = 0.0, l1 = 0.0;
    // max_depth = 0: a single 15-point Kronrod rule with the embedded 7-point
    // Gauss estimate as the error.
    const double v = GK15::integrate(f, a, b, 0, 0.0, &err, &l1);
    return {a, b, v, err, l1, depth};
}

// Errors below this fraction of the integral of |f| are roundoff (for example
// the absolute phase error of cos(w tau) at large w tau) and count as converged.
constexpr double kRoundoffFloor = 1e-13;

bool converged(double total_err, double total, double total_l1, Tolerance tol) {
    return total_err <= std::max({tol.abs, tol.rel * std::abs(total), kRoundoffFloor * total_l1});
}

} // namespace

Estimate integrate(const Integrand& f, double a, double b, Tolerance tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("quad::integrate requires finite limits");
    }
    const double sign = b > a ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    std::priority_queue<Panel> heap;
    Panel first = evaluate_panel(f, a, b, 0);
    double total = first.value;
    double total_err = first.error;
    double total_l1 = first.l1;
    heap.push(first);

    // Globally adaptive: always bisect the panel with the largest error.
    constexpr std::size_t max_panels = 20000;
    int roundoff_events = 0;
    while (!converged(total_err, total, total_l1, tol)) {
        Panel worst = heap.top();
        if (worst.depth >= max_depth || heap.size() >= max_panels ||
            (worst.b - worst.a) < 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(worst.a))) {
            // Accept an error that bisection no longer reduces (roundoff bound).
            if (roundoff_events >= 6 ||
                total_err <= 100.0 * std::numeric_limits<double>::epsilon() * total_l1) {
                break;
            }
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b
                << "] did not converge (error estimate " << total_err << ")";
            throw NumericalError(msg.str(), total_err);
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1);
        Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1);
        const double children = left.value + right.value;
        if (std::abs(children - worst.value) <= 1e-5 * std::abs(children) &&
            left.error + right.error >= 0.99 * worst.error) {
            ++roundoff_events;
        }
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the accumulated cancellation in the running totals.
    double sum = 0.0, err = 0.0, l1 = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        l1 += heap.top().l1;
        heap.pop();
    }
    return {sign * sum, err, l1};
}

Estimate integrate_power_endpoint(const Integrand& f, double a, double b, double p,
                                  Tolerance tol) {
    if (p <= -1.0) throw DomainError("endpoint exponent must exceed -1");
    if (p == 0.0) return integrate(f, a, b, tol);
    const double q = 1.0 / (p + 1.0);
    const double umax = std::pow(b - a, p + 1.0);
    auto g = [&](double u) {
        const double x = a + std::pow(u, q);
        return f(x) * q * std::pow(u, q - 1.0);
    };
    return integrate(g, 0.0, umax, tol);
}

Estimate integrate_to_infinity(const Integrand& f, double a, Tolerance tol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator.integrate(f, a, std::numeric_limits<double>::infinity(),
                                          std::max(tol.rel, 1e-14), &err, &l1, &levels);
    if (!std::isfinite(v) || err > std::max(tol.abs, tol.rel * std::max(std::abs(v), l1)) * 10.0) {
        std::ostringstream msg;
        msg << "half-line quadrature from " << a << " did not converge (error estimate " << err
            << ")";
        throw NumericalError(msg.str(), err);
    }
    return {v, err, l1};
}

double wynn_epsilon(std::span<const double> s, double* error) {
    const std::size_t n = s.size();
    if (n == 0) {
        if (error) *error = 0.0;
        return 0.0;
    }
    if (n < 3) {
        if (error) *error = n == 2 ? std::abs(s[1] - s[0]) : 0.0;
        return s.back();
    }
    std::vector<double> e_prev(n + 1, 0.0);  // epsilon_{-1}
    std::vector<double> e_cur(s.begin(), s.end());
    double best = s.back();
    double previous_best = s[n - 2];
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> e_next(n - k);
        bool broke = false;
        for (std::size_t j = 0; j + 1 < e_cur.size(); ++j) {
            const double diff = e_cur[j + 1] - e_cur[j];
            if (diff == 0.0) {
                broke = true;
                break;
            }
            e_next[j] = e_prev[j + 1] + 1.0 / diff;
        }
        if (broke) break;
        if (k % 2 == 0) {
            previous_best = e_next.size() >= 2 ? e_next[e_next.size() - 2] : best;
            best = e_next.back();
        }
        e_prev = std::move(e_cur);
        e_cur = std::move(e_next);
    }
    if (error) *error = std::abs(best - previous_best);
    return best;
}

Estimate fourier_integral(const Integrand& f, double tau, Trig kind,
                          const FourierOptions& options) {
    using std::numbers::pi;
    if (!(tau > 0.0)) throw DomainError("fourier_integral requires tau > 0");

    auto g = [&](double w) {
        const double phase = w * tau;
        return f(w) * (kind == Trig::Cos ? std::cos(phase) : std::sin(phase));
    };

    const double half = pi / tau;
    const double offset = kind == Trig::Cos ? 0.5 * half : 0.0;
    const Tolerance panel_tol{options.tol.abs * 1e-2, options.tol.rel};

    // Integrates [lo, hi] as four oscillation-aware sub-panels.
    auto integrate_cycle = [&](double lo, double hi, bool first) {
        Estimate acc;
        const double width = (hi - lo) / 4.0;
        for (int i = 0; i < 4; ++i) {
            const double a = lo + i * width;
            const double b = (i == 3) ? hi : a + width;
            const bool singular = first && i == 0 && options.low_exponent != 0.0;
            // cos(w tau) carries an absolute phase error ~ eps * w * tau; do
            // not ask for more than that allows.
            Tolerance t = panel_tol;
            if (!singular) {
                const double env = std::abs(f(0.5 * (a + b)));
                const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(1.0, b * tau) * env * (b - a);
                t.abs = std::max(t.abs, noise);
            }
            Estimate e = singular ? integrate_power_endpoint(g, a, b, options.low_exponent, t)
                                  : integrate(g, a, b, t);
            acc.value += e.value;
            acc.error += e.error;
            acc.l1 += e.l1;
        }
        return acc;
    };

    // First zero of the trigonometric factor strictly above the lower limit.
    double k0 = std::floor((options.lower - offset) / half) + 1.0;
    double boundary = offset + k0 * half;

    Estimate total;
    double lo = options.lower;
    bool first = true;
    std::vector<double> partial;
    std::vector<double> contributions;
    std::vector<double> magnitudes;  // cycle integrals of |f trig|
    double last_extrapolation = std::numeric_limits<double>::quiet_NaN();
    int agreements = 0;
    int negligible = 0;

    for (long cycle = 0; cycle < options.max_cycles; ++cycle) {
        const double hi = std::min(boundary, options.upper);
        if (hi > lo) {
            Estimate c = integrate_cycle(lo, hi, first);
            first = false;
            total.value += c.value;
            total.error += c.error;
            partial.push_back(total.value);
            contributions.push_back(c.value);
            magnitudes.push_back(c.l1);
        }
        if (hi >= options.upper) return total;
        lo = hi;
        boundary += half;

        const double target = std::max(options.tol.abs, options.tol.rel * std::abs(total.value));
        // Judged on |f| so that roundoff in the signed cycle sums cannot stall it.
        if (!magnitudes.empty() && magnitudes.back() <= 1e-3 * target) {
            if (++negligible >= 4) return total;
        } else {
            negligible = 0;
        }

        const std::size_t m = contributions.size();
        if (options.accelerate && m >= 12) {
            // Only extrapolate once the cycle contributions decay.
            const bool decaying = std::abs(contributions[m - 1]) < std::abs(contributions[m - 3]) &&
                                  std::abs(contributions[m - 2]) < std::abs(contributions[m - 4]);
            if (!decaying) {
                agreements = 0;
                continue;
            }
            const std::size_t window = std::min<std::size_t>(m, 40);
            double wynn_err = 0.0;
            const double ext = wynn_epsilon(
                std::span<const double>(partial.data() + (m - window), window), &wynn_err);
            if (std::isfinite(last_extrapolation) &&
                std::abs(ext - last_extrapolation) <= target &&
                wynn_err <= 10.0 * target) {
                if (++agreements >= 2) {
                    return {ext, total.error + std::abs(ext - last_extrapolation)};
                }
            } else {
                agreements = 0;
            }
            last_extrapolation = ext;
        }
    }
    std::ostringstream msg;
    msg << "Fourier integral at tau=" << tau << " did not converge after " << options.max_cycles
        << " cycles";
    const double achieved = contributions.empty() ? 0.0 : std::abs(contributions.back());
    throw NumericalError(msg.str(), achieved);
}

} // namespace nmq::quad
