// rates.cpp — TCL2 rate integrals, canonical rates and the rate table

#include "nmq/rates.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "nmq/errors.hpp"

namespace nmq {

namespace {

using std::numbers::pi;

constexpr double kTwoOverPi = 2.0 / pi;
const quad::Tolerance kOuterTol{1e-13, 1e-11};

struct Integrands {
    const KernelFunctions& k;
    double w;
    double plus(double tau) const {
        return kTwoOverPi * (std::cos(w * tau) * k.C(tau) + std::sin(w * tau) * k.S(tau));
    }
    double minus(double tau) const {
        return kTwoOverPi * (std::cos(w * tau) * k.C(tau) - std::sin(w * tau) * k.S(tau));
    }
    double lamb(double tau) const { return kTwoOverPi * std::sin(w * tau) * k.C(tau); }
};

double max_panel(double omega_q) { return pi / (4.0 * omega_q); }

// Integral over [a, b] split into panels no wider than a quarter half-period.
template <class F>
double panel_integral(F&& f, double a, double b, double omega_q, double p) {
    if (b <= a) return 0.0;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel(omega_q))));
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lo = a + i * h;
        const double hi = i + 1 == n ? b : lo + h;
        if (lo == 0.0 && p != 0.0) {
            sum += quad::integrate_power_endpoint(f, lo, hi, p, kOuterTol).value;
        } else {
            sum += quad::integrate(f, lo, hi, kOuterTol).value;
        }
    }
    return sum;
}

void check_omega(double omega_q) {
    if (!(omega_q > 0.0)) throw DomainError("omega_q must be > 0");
}

// Leading coefficients of C and S as tau -> 0 for the 1/f family.
KernelValue singular_coefficients(const OneOverF& f) {
    const double g = f.A * std::tgamma(1.0 - f.alpha);
    const double h = 0.5 * pi * f.alpha;
    return {g * std::sin(h), g * std::cos(h)};
}

} // namespace

KernelFunctions delta_kernel(double weight) {
    KernelFunctions k;
    k.C = [](double) { return 0.0; };
    k.S = [](double) { return 0.0; };
    k.delta_weight = weight;
    return k;
}

KernelFunctions kernel_functions(const BathSpectrum& spec, quad::Tolerance tol) {
    KernelFunctions k;
    k.endpoint_exponent = spec.kernel_endpoint_exponent();
    if (spec.has_closed_form()) {
        if (auto* o = std::get_if<Ohmic>(&spec.model())) {
            const double scale = o->R * o->omega_c * o->omega_c;
            const double wc = o->omega_c;
            k.C = [=](double tau) {
                const double x = wc * tau, d = 1.0 + x * x;
                return scale * (1.0 - x * x) / (d * d);
            };
            k.S = [=](double tau) {
                const double x = wc * tau, d = 1.0 + x * x;
                return scale * 2.0 * x / (d * d);
            };
        } else {
            const auto& f = std::get<OneOverF>(spec.model());
            const KernelValue c = singular_coefficients(f);
            const double e = f.alpha - 1.0;
            k.C = [=](double tau) { return c.C * std::pow(tau, e); };
            k.S = [=](double tau) { return c.S * std::pow(tau, e); };
        }
        return k;
    }

    // Sample tau^-p C and tau^-p S on a uniform grid; the regular factor is
    // what gets spline-interpolated.
    const double p = k.endpoint_exponent;
    KernelValue lead{0.0, 0.0};
    if (auto* f = std::get_if<OneOverF>(&spec.model())) lead = singular_coefficients(*f);

    constexpr double h = 0.02;
    constexpr double tau_cap = 200.0;
    constexpr double chunk = 20.0;
    std::vector<double> cs, ss;
    double peak = 0.0;
    double tau = 0.0;
    for (;;) {
        double chunk_peak = 0.0;
        const double chunk_end = tau + chunk;
        for (; tau < chunk_end - 0.5 * h; tau += h) {
            double c, s;
            if (tau == 0.0) {
                if (p != 0.0) {
                    c = lead.C;
                    s = lead.S;
                } else {
                    c = kernel_transforms(spec, 0.0, tol).C;
                    s = 0.0;
                }
            } else {
                const KernelValue v = kernel_transforms(spec, tau, tol);
                const double scale = p != 0.0 ? std::pow(tau, -p) : 1.0;
                c = v.C * scale;
                s = v.S * scale;
            }
            const double scale = tau > 0.0 && p != 0.0 ? std::pow(tau, p) : 1.0;
            chunk_peak = std::max({chunk_peak, std::abs(c * scale), std::abs(s * scale)});
            cs.push_back(c);
            ss.push_back(s);
        }
        peak = std::max(peak, chunk_peak);
        if (chunk_peak < 1e-7 * peak || tau >= tau_cap) break;
    }
    const double tau_end = h * static_cast<double>(cs.size() - 1);
    auto c_spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        cs.begin(), cs.end(), 0.0, h);
    auto s_spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        ss.begin(), ss.end(), 0.0, h);
    k.C = [=](double t) {
        if (t > tau_end) return 0.0;
        return (*c_spline)(t) * (p != 0.0 ? std::pow(t, p) : 1.0);
    };
    k.S = [=](double t) {
        if (t > tau_end) return 0.0;
        return (*s_spline)(t) * (p != 0.0 ? std::pow(t, p) : 1.0);
    };
    return k;
}

RatePair gamma_pm(const KernelFunctions& k, double omega_q, double t) {
    check_omega(omega_q);
    if (t < 0.0) throw DomainError("gamma_pm requires t >= 0");
    if (t == 0.0) return {0.0, 0.0};
    Integrands in{k, omega_q};
    const double p = k.endpoint_exponent;
    const double d = k.delta_weight / pi;
    return {d + panel_integral([&](double x) { return in.plus(x); }, 0.0, t, omega_q, p),
            d + panel_integral([&](double x) { return in.minus(x); }, 0.0, t, omega_q, p)};
}

RatePair gamma_pm(const BathSpectrum& spec, double omega_q, double t) {
    return gamma_pm(kernel_functions(spec), omega_q, t);
}

double lamb_shift(const KernelFunctions& k, double omega_q, double t) {
    check_omega(omega_q);
    if (t < 0.0) throw DomainError("lamb_shift requires t >= 0");
    if (t == 0.0) return 0.0;
    Integrands in{k, omega_q};
    return panel_integral([&](double x) { return in.lamb(x); }, 0.0, t, omega_q,
                          k.endpoint_exponent);
}

double lamb_shift(const BathSpectrum& spec, double omega_q, double t) {
    return lamb_shift(kernel_functions(spec), omega_q, t);
}

CanonicalRates canonical_rates(double gp, double gm, double ls) {
    const double mean = 0.5 * (gp + gm);
    const double half_diff = 0.5 * (gp - gm);
    const double root = std::sqrt(mean * mean + half_diff * half_diff + ls * ls);
    return {mean + root, mean - root};
}

Eigen::Matrix2cd decoherence_matrix(double gp, double gm, double ls) {
    Eigen::Matrix2cd d;
    const std::complex<double> off(-0.5 * (gp + gm), -ls);
    d << gp, off, std::conj(off), gm;
    return d;
}

double lamb_shift_excised(const BathSpectrum& spec, double omega_q, double delta) {
    check_omega(omega_q);
    const double w0 = omega_q;
    const double lo = spec.support_lower();
    const double hi = spec.support_upper();
    const quad::Tolerance tol{1e-14, 1e-12};
    auto g = [&](double w) { return symmetrized_psd(spec, w) / (w0 * w0 - w * w); };
    const bool singular_low = lo == 0.0 && spec.kernel_endpoint_exponent() != 0.0;

    auto piece = [&](double a, double b) -> double {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (!(b > a)) return 0.0;
        if (a == 0.0 && singular_low) {
            const double alpha = std::get<OneOverF>(spec.model()).alpha;
            return quad::integrate_power_endpoint(g, a, b, -alpha, tol).value;
        }
        return quad::integrate(g, a, b, tol).value;
    };

    double sum = piece(0.0, 0.5 * w0) + piece(0.5 * w0, w0 - delta) + piece(w0 + delta, 2.0 * w0);
    if (std::isfinite(hi)) {
        sum += piece(2.0 * w0, hi);
    } else {
        sum += quad::integrate_to_infinity(g, std::max(2.0 * w0, lo), tol).value;
    }
    return w0 * (2.0 / pi) * sum;
}

MarkovLimits markovian_limits(const BathSpectrum& spec, double omega_q) {
    check_omega(omega_q);
    const double s = symmetrized_psd(spec, omega_q);
    const double j = spectral_density(spec, omega_q);
    // I(delta) = PV + a delta + b delta^3: eliminate the linear then the
    // cubic term.
    const double d0 = 0.1 * omega_q;
    const double i0 = lamb_shift_excised(spec, omega_q, d0);
    const double i1 = lamb_shift_excised(spec, omega_q, 0.5 * d0);
    const double i2 = lamb_shift_excised(spec, omega_q, 0.25 * d0);
    const double r1a = 2.0 * i1 - i0;
    const double r1b = 2.0 * i2 - i1;
    const double pv = (8.0 * r1b - r1a) / 7.0;
    if (!std::isfinite(pv)) throw NumericalError("principal-value Lamb shift did not converge");
    return {s + j, s - j, pv};
}

// ---------------------------------------------------------------------------
// RateTable

namespace {

RateSample combine(const RateSample& a, double ca, const RateSample& b, double cb) {
    return {ca * a.gamma_plus + cb * b.gamma_plus, ca * a.gamma_minus + cb * b.gamma_minus,
            ca * a.lamb_shift + cb * b.lamb_shift};
}

RateSample hermite(const RateSample& f0, const RateSample& d0, const RateSample& f1,
                   const RateSample& d1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    auto one = [&](double a0, double b0, double a1, double b1) {
        return h00 * a0 + h10 * h * b0 + h01 * a1 + h11 * h * b1;
    };
    return {one(f0.gamma_plus, d0.gamma_plus, f1.gamma_plus, d1.gamma_plus),
            one(f0.gamma_minus, d0.gamma_minus, f1.gamma_minus, d1.gamma_minus),
            one(f0.lamb_shift, d0.lamb_shift, f1.lamb_shift, d1.lamb_shift)};
}

// Integral of the Hermite cubic from s = 0 to s (in units of t).
RateSample hermite_integral(const RateSample& f0, const RateSample& d0, const RateSample& f1,
                            const RateSample& d1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double H00 = 0.5 * s4 - s3 + s, H10 = 0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2;
    const double H01 = -0.5 * s4 + s3, H11 = 0.25 * s4 - s3 / 3.0;
    auto one = [&](double a0, double b0, double a1, double b1) {
        return h * (H00 * a0 + H10 * h * b0 + H01 * a1 + H11 * h * b1);
    };
    return {one(f0.gamma_plus, d0.gamma_plus, f1.gamma_plus, d1.gamma_plus),
            one(f0.gamma_minus, d0.gamma_minus, f1.gamma_minus, d1.gamma_minus),
            one(f0.lamb_shift, d0.lamb_shift, f1.lamb_shift, d1.lamb_shift)};
}

} // namespace

RateTable::RateTable(std::vector<Node> nodes, RateSample jump, double endpoint_exponent,
                     double kappa, double omega_q)
    : nodes_(std::move(nodes)), jump_(jump), endpoint_exponent_(endpoint_exponent),
      kappa_(kappa), omega_q_(omega_q) {
    if (nodes_.size() < 2) throw GridError("rate table needs at least two nodes");
    if (nodes_.front().t != 0.0) throw GridError("rate table grid must start at t = 0");
    times_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i > 0 && !(nodes_[i].t > nodes_[i - 1].t)) {
            throw GridError("rate table grid must be strictly increasing");
        }
        times_.push_back(nodes_[i].t);
    }
    cumulative_.resize(nodes_.size());
    cumulative_[0] = {};
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const RateSample part = integral_within(i - 1, nodes_[i].t);
        cumulative_[i] = combine(cumulative_[i - 1], 1.0, part, 1.0);
    }
}

RateTable RateTable::constant(double gp, double gm, double ls, double t_max, double kappa,
                              double omega_q) {
    if (!(t_max > 0.0)) throw DomainError("t_max must be > 0");
    std::vector<Node> nodes{{0.0, {}, {}}, {t_max, {}, {}}};
    return RateTable(std::move(nodes), {gp, gm, ls}, 0.0, kappa, omega_q);
}

RateSample RateTable::node(std::size_t i) const {
    RateSample v = nodes_.at(i).value;
    if (nodes_[i].t > 0.0) v = combine(v, 1.0, jump_, 1.0);
    return v;
}

CanonicalRates RateTable::canonical(std::size_t i) const {
    const RateSample v = node(i);
    return canonical_rates(v.gamma_plus, v.gamma_minus, v.lamb_shift);
}

std::size_t RateTable::interval(double t) const {
    if (t < 0.0 || t > times_.back() * (1.0 + 1e-12) || std::isnan(t)) {
        std::ostringstream msg;
        msg << "time " << t << " outside rate table range [0, " << times_.back() << "]";
        throw RangeError(msg.str());
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto i = static_cast<std::size_t>(it - times_.begin());
    return std::min(i == 0 ? 0 : i - 1, times_.size() - 2);
}

RateSample RateTable::eval_first(double t) const {
    // Hermite in sigma = (t / t1)^q; node 0 stores d/dsigma, node 1 d/dt.
    const double q = endpoint_exponent_ + 1.0;
    const Node& a = nodes_[0];
    const Node& b = nodes_[1];
    const double t1 = b.t;
    const double sigma = std::pow(t / t1, q);
    const RateSample d1 = combine(b.derivative, t1 / q, {}, 0.0);
    return hermite(a.value, a.derivative, b.value, d1, 1.0, sigma);
}

RateSample RateTable::integral_within(std::size_t i, double t) const {
    const Node& a = nodes_[i];
    const Node& b = nodes_[i + 1];
    if (t <= a.t) return {};
    if (i == 0 && endpoint_exponent_ != 0.0) {
        const quad::Tolerance tol{1e-14, 1e-12};
        auto part = [&](auto pick) {
            return quad::integrate([&](double x) { return pick(eval_first(x)); }, 0.0, t, tol)
                .value;
        };
        return {part([](const RateSample& r) { return r.gamma_plus; }),
                part([](const RateSample& r) { return r.gamma_minus; }),
                part([](const RateSample& r) { return r.lamb_shift; })};
    }
    const double h = b.t - a.t;
    return hermite_integral(a.value, a.derivative, b.value, b.derivative, h, (t - a.t) / h);
}

RateSample RateTable::operator()(double t) const {
    const std::size_t i = interval(t);
    RateSample v;
    if (i == 0 && endpoint_exponent_ != 0.0) {
        v = eval_first(t);
    } else {
        const Node& a = nodes_[i];
        const Node& b = nodes_[i + 1];
        const double h = b.t - a.t;
        v = hermite(a.value, a.derivative, b.value, b.derivative, h, (t - a.t) / h);
    }
    if (t > 0.0) v = combine(v, 1.0, jump_, 1.0);
    return v;
}

RateSample RateTable::integral(double t) const {
    const std::size_t i = interval(t);
    const RateSample base = combine(cumulative_[i], 1.0, integral_within(i, t), 1.0);
    return combine(base, 1.0, jump_, t);
}

std::vector<double> default_time_grid(double t_max, double omega_q) {
    check_omega(omega_q);
    if (!(t_max > 0.0)) throw DomainError("t_max must be > 0");
    std::vector<double> grid{0.0};
    const double segments[][2] = {{2.0, 0.01}, {100.0, 0.05}, {1e300, 0.2}};
    double t = 0.0;
    for (const auto& seg : segments) {
        const double end = std::min(seg[0] / omega_q, t_max);
        const double h = seg[1] / omega_q;
        if (end <= t) continue;
        const auto n = static_cast<std::size_t>(std::ceil((end - t) / h - 1e-9));
        const double start = t;
        for (std::size_t k = 1; k <= n; ++k) grid.push_back(start + (end - start) * k / n);
        t = end;
        if (t >= t_max) break;
    }
    return grid;
}

RateTable build_rate_table(const KernelFunctions& k, double omega_q,
                           const std::vector<double>& grid, double kappa) {
    check_omega(omega_q);
    if (grid.size() < 2 || grid.front() != 0.0) {
        throw GridError("rate grid needs at least two points starting at t = 0");
    }
    Integrands in{k, omega_q};
    const double p = k.endpoint_exponent;
    auto derivative = [&](double t) -> RateSample {
        return {in.plus(t), in.minus(t), in.lamb(t)};
    };

    std::vector<RateTable::Node> nodes(grid.size());
    nodes[0].t = 0.0;
    if (p != 0.0) {
        // d/dsigma at sigma = 0 as the limit of f'(t) dt/dsigma.
        const double t1 = grid[1], q = p + 1.0;
        const double te = 1e-9 * t1;
        const double factor = (t1 / q) * std::pow(te / t1, 1.0 - q);
        nodes[0].derivative = combine(derivative(te), factor, {}, 0.0);
    } else {
        nodes[0].derivative = derivative(0.0);
    }

    // Incremental: each interval adds its own panels to the running sums.
    RateSample acc;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = grid[i - 1], b = grid[i];
        if (!(b > a)) throw GridError("rate grid must be strictly increasing");
        try {
            acc.gamma_plus += panel_integral([&](double x) { return in.plus(x); }, a, b, omega_q,
                                             a == 0.0 ? p : 0.0);
            acc.gamma_minus += panel_integral([&](double x) { return in.minus(x); }, a, b,
                                              omega_q, a == 0.0 ? p : 0.0);
            acc.lamb_shift += panel_integral([&](double x) { return in.lamb(x); }, a, b, omega_q,
                                             a == 0.0 ? p : 0.0);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "rate integral on [" << a << ", " << b << "]: " << e.what();
            throw NumericalError(msg.str(), e.achieved_error());
        }
        nodes[i].t = b;
        nodes[i].value = acc;
        nodes[i].derivative = derivative(b);
    }
    const double d = k.delta_weight / pi;
    return RateTable(std::move(nodes), {d, d, 0.0}, p, kappa, omega_q);
}

RateTable build_rate_table(const BathSpectrum& spec, double omega_q,
                           const std::vector<double>& grid, double kappa) {
    return build_rate_table(kernel_functions(spec), omega_q, grid, kappa);
}

RateTable build_rate_table(const BathSpectrum& spec, double omega_q, double t_max,
                           std::size_t n_points, double kappa) {
    if (n_points < 2) throw GridError("n_points must be >= 2");
    if (!(t_max > 0.0)) throw DomainError("t_max must be > 0");
    std::vector<double> grid(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    return build_rate_table(spec, omega_q, grid, kappa);
}

} // namespace nmq
