// rates.hpp — Time-dependent TCL2 rates, Lamb shift and their tables
//
// Rates are computed without the coupling group kappa; the propagator applies
// it once. The qubit frequency omega_q enters through the cos/sin factors of
// the outer time integral.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nmq/bath_spectrum.hpp"

namespace nmq {

// Kernel pair in the time domain. C may additionally carry a weight times
// delta(tau), which contributes half its weight to integrals starting at 0.
struct KernelFunctions {
    std::function<double(double)> C;
    std::function<double(double)> S;
    double delta_weight{0.0};
    // C, S ~ tau^p near tau = 0.
    double endpoint_exponent{0.0};
};

// Closed forms when available; otherwise C and S are sampled by quadrature,
// spline-interpolated, and truncated once their envelope is negligible.
KernelFunctions kernel_functions(const BathSpectrum& spec, quad::Tolerance tol = {});

// A memoryless bath: C = weight * delta(tau), S = 0.
KernelFunctions delta_kernel(double weight);

struct RatePair {
    double plus{0.0};
    double minus{0.0};
};

RatePair gamma_pm(const BathSpectrum& spec, double omega_q, double t);
RatePair gamma_pm(const KernelFunctions& k, double omega_q, double t);
double lamb_shift(const BathSpectrum& spec, double omega_q, double t);
double lamb_shift(const KernelFunctions& k, double omega_q, double t);

struct CanonicalRates {
    double first{0.0};   // >= 0
    double second{0.0};  // <= 0
};

CanonicalRates canonical_rates(double gamma_plus, double gamma_minus, double lamb_shift);

Eigen::Matrix2cd decoherence_matrix(double gamma_plus, double gamma_minus, double lamb_shift);

struct MarkovLimits {
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    double lamb_shift{0.0};
};

MarkovLimits markovian_limits(const BathSpectrum& spec, double omega_q);

// Principal value of the Lamb-shift integral by symmetric excision of radius
// delta around omega_q (no extrapolation). Exposed for testing.
double lamb_shift_excised(const BathSpectrum& spec, double omega_q, double delta);

struct RateSample {
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    double lamb_shift{0.0};
};

// Rates sampled on an increasing grid from t = 0, interpolated by cubic
// Hermite polynomials built from the exact node derivatives. For kernels
// singular at tau = 0 the first interval is interpolated in (t / t_1)^(p + 1).
class RateTable {
public:
    struct Node {
        double t;
        RateSample value;       // continuous part
        RateSample derivative;  // d/dt of the continuous part
    };

    RateTable(std::vector<Node> nodes, RateSample jump, double endpoint_exponent, double kappa,
              double omega_q);

    // Constant rates for t > 0 (zero at t = 0) on [0, t_max].
    static RateTable constant(double gamma_plus, double gamma_minus, double lamb_shift,
                              double t_max, double kappa, double omega_q = 1.0);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& times() const { return times_; }
    double t_max() const { return times_.back(); }
    double kappa() const { return kappa_; }
    double omega_q() const { return omega_q_; }
    double endpoint_exponent() const { return endpoint_exponent_; }

    // Node values including any constant part.
    RateSample node(std::size_t i) const;
    CanonicalRates canonical(std::size_t i) const;

    // Interpolated value; RangeError outside [0, t_max].
    RateSample operator()(double t) const;

    // Integral from 0 to t of each interpolated quantity.
    RateSample integral(double t) const;

private:
    std::size_t interval(double t) const;
    RateSample eval_first(double t) const;
    RateSample integral_within(std::size_t i, double t) const;

    std::vector<Node> nodes_;
    std::vector<double> times_;
    std::vector<RateSample> cumulative_;
    RateSample jump_;
    double endpoint_exponent_;
    double kappa_;
    double omega_q_;
};

// Grid dense near t = 0 and coarser later, suited to the interpolation above.
std::vector<double> default_time_grid(double t_max, double omega_q = 1.0);

RateTable build_rate_table(const BathSpectrum& spec, double omega_q, double t_max,
                           std::size_t n_points, double kappa);
RateTable build_rate_table(const BathSpectrum& spec, double omega_q,
                           const std::vector<double>& grid, double kappa);
RateTable build_rate_table(const KernelFunctions& k, double omega_q,
                           const std::vector<double>& grid, double kappa);

} // namespace nmq
