// bath_spectrum.hpp — Bath spectral densities and their time-domain kernels
//
// All frequencies are in units of the qubit frequency, times in its inverse.
// C(tau) is the cosine transform of the symmetrized PSD, S(tau) the sine
// transform of J itself.

#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "nmq/quadrature.hpp"

namespace nmq {

inline constexpr double kZeroTemperature = std::numeric_limits<double>::infinity();

// J(w) = R w exp(-w / omega_c)
struct Ohmic {
    double R{1.0};
    double omega_c{5.0};
};

// J(w) = A w^-alpha for w >= omega_ir (zero below; omega_ir = 0 means no cutoff)
struct OneOverF {
    double A{1.0};
    double alpha{0.95};
    double omega_ir{0.0};
};

using Impedance = std::function<std::complex<double>(double)>;

// J(w) obtained from a coupling impedance and the transmon capacitances.
struct ImpedanceDerived {
    Impedance Z;
    double C_e{0.0};
    double C_J{0.0};
    double C_g{0.0};
};

// Sampled (w, J) pairs, interpolated log-log and zero outside the grid.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> J;
};

using BathModel = std::variant<Ohmic, OneOverF, ImpedanceDerived, Tabulated>;

class BathSpectrum {
public:
    static BathSpectrum ohmic(double R, double omega_c, double beta = kZeroTemperature);
    static BathSpectrum one_over_f(double A, double alpha, double beta = kZeroTemperature,
                                   double omega_ir = 0.0);
    static BathSpectrum impedance(Impedance Z, double C_e, double C_J, double C_g,
                                  double beta = kZeroTemperature);
    static BathSpectrum tabulated(std::vector<double> omega, std::vector<double> J,
                                  double beta = kZeroTemperature);

    const BathModel& model() const { return model_; }
    double beta() const { return beta_; }
    bool zero_temperature() const { return beta_ == kZeroTemperature; }
    std::string kind_name() const;

    // Frequency support [lower, upper] outside which J vanishes.
    double support_lower() const;
    double support_upper() const;

    // True when C and S are available in closed form.
    bool has_closed_form() const;

    // C, S ~ tau^p as tau -> 0 (p = alpha - 1 for the T=0 1/f model, else 0).
    double kernel_endpoint_exponent() const;

private:
    BathSpectrum(BathModel model, double beta);
    BathModel model_;
    double beta_;
};

double spectral_density(const BathSpectrum& spec, double omega);
double symmetrized_psd(const BathSpectrum& spec, double omega);

struct KernelValue {
    double C{0.0};
    double S{0.0};
};

// Closed form where available, otherwise oscillatory quadrature.
KernelValue kernel_transforms(const BathSpectrum& spec, double tau, quad::Tolerance tol = {});

// Always by quadrature (used to validate the closed forms).
KernelValue kernel_transforms_quadrature(const BathSpectrum& spec, double tau,
                                         quad::Tolerance tol = {});

enum class KernelMethod { ClosedForm, Quadrature };

struct KernelSamples {
    std::vector<double> tau;
    std::vector<double> C;
    std::vector<double> S;
    KernelMethod method{KernelMethod::ClosedForm};
};

KernelSamples sample_kernels(const BathSpectrum& spec, const std::vector<double>& tau_grid,
                             quad::Tolerance tol = {});

double impedance_to_spectral_density(const Impedance& Z, double C_e, double C_J, double C_g,
                                     double omega);

// Two-column CSV (omega, J) with one header line.
BathSpectrum load_tabulated_csv(const std::string& path, double beta = kZeroTemperature);

} // namespace nmq
