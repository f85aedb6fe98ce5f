// bath_spectrum.cpp — Spectral densities, PSD and kernel transforms

#include "nmq/bath_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nmq/errors.hpp"

namespace nmq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double tabulated_value(const Tabulated& tab, double omega) {
    const auto& w = tab.omega;
    if (omega < w.front() || omega > w.back()) return 0.0;
    auto it = std::upper_bound(w.begin(), w.end(), omega);
    std::size_t i = it == w.end() ? w.size() - 1 : static_cast<std::size_t>(it - w.begin());
    const std::size_t lo = i - 1;
    const double w0 = w[lo], w1 = w[i];
    const double j0 = tab.J[lo], j1 = tab.J[i];
    if (j0 <= 0.0 || j1 <= 0.0 || w0 <= 0.0) {
        const double s = (omega - w0) / (w1 - w0);
        return j0 + s * (j1 - j0);
    }
    const double s = std::log(omega / w0) / std::log(w1 / w0);
    return std::exp(std::log(j0) + s * std::log(j1 / j0));
}

} // namespace

BathSpectrum::BathSpectrum(BathModel model, double beta) : model_(std::move(model)), beta_(beta) {
    if (!(beta_ > 0.0)) throw DomainError("inverse temperature beta must be > 0");
}

BathSpectrum BathSpectrum::ohmic(double R, double omega_c, double beta) {
    if (!(omega_c > 0.0)) throw DomainError("Ohmic omega_c must be > 0");
    if (!(R >= 0.0)) throw DomainError("Ohmic R must be >= 0");
    return BathSpectrum(Ohmic{R, omega_c}, beta);
}

BathSpectrum BathSpectrum::one_over_f(double A, double alpha, double beta, double omega_ir) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("1/f exponent alpha must lie in (0, 1)");
    if (!(A >= 0.0)) throw DomainError("1/f amplitude A must be >= 0");
    if (!(omega_ir >= 0.0)) throw DomainError("1/f omega_ir must be >= 0");
    if (beta != kZeroTemperature && !(omega_ir > 0.0)) {
        throw DomainError("finite-temperature 1/f bath is infrared divergent; supply omega_ir > 0");
    }
    return BathSpectrum(OneOverF{A, alpha, omega_ir}, beta);
}

BathSpectrum BathSpectrum::impedance(Impedance Z, double C_e, double C_J, double C_g, double beta) {
    if (!Z) throw DomainError("impedance function is empty");
    if (C_e < 0.0 || C_J < 0.0 || C_g < 0.0) throw DomainError("capacitances must be >= 0");
    if (!(C_e + C_J + C_g > 0.0)) throw DomainError("total capacitance must be > 0");
    return BathSpectrum(ImpedanceDerived{std::move(Z), C_e, C_J, C_g}, beta);
}

BathSpectrum BathSpectrum::tabulated(std::vector<double> omega, std::vector<double> J, double beta) {
    if (omega.size() != J.size()) throw GridError("tabulated spectrum: column lengths differ");
    if (omega.size() < 2) throw GridError("tabulated spectrum needs at least two samples");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (omega[i] < 0.0) throw GridError("tabulated spectrum: negative frequency");
        if (J[i] < 0.0) throw DomainError("tabulated spectrum: negative J");
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw GridError("tabulated spectrum: frequencies must be strictly increasing");
        }
    }
    return BathSpectrum(Tabulated{std::move(omega), std::move(J)}, beta);
}

std::string BathSpectrum::kind_name() const {
    return std::visit(overloaded{[](const Ohmic&) { return std::string("ohmic"); },
                                 [](const OneOverF&) { return std::string("one_over_f"); },
                                 [](const ImpedanceDerived&) { return std::string("impedance"); },
                                 [](const Tabulated&) { return std::string("tabulated"); }},
                      model_);
}

double BathSpectrum::support_lower() const {
    if (auto* f = std::get_if<OneOverF>(&model_)) return f->omega_ir;
    if (auto* t = std::get_if<Tabulated>(&model_)) return t->omega.front();
    return 0.0;
}

double BathSpectrum::support_upper() const {
    if (auto* t = std::get_if<Tabulated>(&model_)) return t->omega.back();
    return std::numeric_limits<double>::infinity();
}

bool BathSpectrum::has_closed_form() const {
    if (!zero_temperature()) return false;
    if (std::holds_alternative<Ohmic>(model_)) return true;
    if (auto* f = std::get_if<OneOverF>(&model_)) return f->omega_ir == 0.0;
    return false;
}

double BathSpectrum::kernel_endpoint_exponent() const {
    if (auto* f = std::get_if<OneOverF>(&model_)) return f->alpha - 1.0;
    return 0.0;
}

double impedance_to_spectral_density(const Impedance& Z, double C_e, double C_J, double C_g,
                                     double omega) {
    if (omega < 0.0) throw DomainError("impedance spectral density requires omega >= 0");
    if (C_e < 0.0 || C_J < 0.0 || C_g < 0.0) throw DomainError("capacitances must be >= 0");
    const double total = C_J + C_e + C_g;
    const double c_eff = total > 0.0 ? C_e + C_e * C_e / total : C_e;
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> z = Z(omega);
    const std::complex<double> den = 1.0 + i * omega * c_eff * z;
    if (std::abs(den) < 1e-12) {
        std::ostringstream msg;
        msg << "impedance spectral density has a resonant pole at omega=" << omega;
        throw NumericalError(msg.str(), std::abs(den));
    }
    return std::imag(i * omega * z / den);
}

double spectral_density(const BathSpectrum& spec, double omega) {
    if (omega < 0.0 || std::isnan(omega)) throw DomainError("spectral density requires omega >= 0");
    return std::visit(
        overloaded{
            [&](const Ohmic& o) { return o.R * omega * std::exp(-omega / o.omega_c); },
            [&](const OneOverF& f) {
                if (f.omega_ir == 0.0 && omega == 0.0) {
                    throw DomainError("1/f spectral density diverges at omega = 0");
                }
                if (omega < f.omega_ir) return 0.0;
                return f.A * std::pow(omega, -f.alpha);
            },
            [&](const ImpedanceDerived& z) {
                const double j = impedance_to_spectral_density(z.Z, z.C_e, z.C_J, z.C_g, omega);
                if (j < -1e-14 * std::max(1.0, std::abs(j))) {
                    throw DomainError("impedance yields negative J; is it passive?");
                }
                return std::max(j, 0.0);
            },
            [&](const Tabulated& t) { return tabulated_value(t, omega); }},
        spec.model());
}

double symmetrized_psd(const BathSpectrum& spec, double omega) {
    if (!(omega > 0.0)) throw DomainError("symmetrized PSD requires omega > 0");
    const double j = spectral_density(spec, omega);
    if (spec.zero_temperature()) return j;
    return j / std::tanh(0.5 * spec.beta() * omega);
}

namespace {

KernelValue closed_form(const BathSpectrum& spec, double tau) {
    if (auto* o = std::get_if<Ohmic>(&spec.model())) {
        const double x = o->omega_c * tau;
        const double d = 1.0 + x * x;
        const double scale = o->R * o->omega_c * o->omega_c / (d * d);
        return {scale * (1.0 - x * x), scale * 2.0 * x};
    }
    const auto& f = std::get<OneOverF>(spec.model());
    const double g = std::tgamma(1.0 - f.alpha) * f.A * std::pow(tau, f.alpha - 1.0);
    const double h = 0.5 * std::numbers::pi * f.alpha;
    return {g * std::sin(h), g * std::cos(h)};
}

} // namespace

KernelValue kernel_transforms_quadrature(const BathSpectrum& spec, double tau,
                                         quad::Tolerance tol) {
    if (tau < 0.0) throw DomainError("kernel transforms require tau >= 0");
    const double p = spec.kernel_endpoint_exponent();
    if (p != 0.0 && tau == 0.0) {
        throw DomainError("1/f kernels diverge at tau = 0");
    }
    const double lo = spec.support_lower();
    const double hi = spec.support_upper();
    // Only the T=0 1/f model without IR cutoff is singular at the lower limit.
    const double low_exponent = (p != 0.0 && lo == 0.0) ? -std::get<OneOverF>(spec.model()).alpha
                                                        : 0.0;
    auto psd = [&](double w) { return symmetrized_psd(spec, w); };
    auto j = [&](double w) { return spectral_density(spec, w); };

    if (tau == 0.0) {
        quad::Estimate c;
        if (std::isfinite(hi)) {
            c = quad::integrate(psd, lo, hi, tol);
        } else {
            c = quad::integrate_to_infinity(psd, lo, tol);
        }
        return {c.value, 0.0};
    }

    quad::FourierOptions opt;
    opt.lower = lo;
    opt.upper = hi;
    opt.low_exponent = low_exponent;
    opt.tol = tol;
    const double C = quad::fourier_integral(psd, tau, quad::Trig::Cos, opt).value;
    const double S = quad::fourier_integral(j, tau, quad::Trig::Sin, opt).value;
    return {C, S};
}

KernelValue kernel_transforms(const BathSpectrum& spec, double tau, quad::Tolerance tol) {
    if (tau < 0.0) throw DomainError("kernel transforms require tau >= 0");
    if (spec.has_closed_form()) {
        if (std::holds_alternative<OneOverF>(spec.model()) && tau == 0.0) {
            throw DomainError("1/f kernels diverge at tau = 0");
        }
        return closed_form(spec, tau);
    }
    return kernel_transforms_quadrature(spec, tau, tol);
}

KernelSamples sample_kernels(const BathSpectrum& spec, const std::vector<double>& tau_grid,
                             quad::Tolerance tol) {
    KernelSamples out;
    out.method = spec.has_closed_form() ? KernelMethod::ClosedForm : KernelMethod::Quadrature;
    out.tau = tau_grid;
    out.C.reserve(tau_grid.size());
    out.S.reserve(tau_grid.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) {
            throw GridError("kernel tau grid must be strictly increasing");
        }
        const KernelValue k = kernel_transforms(spec, tau_grid[i], tol);
        out.C.push_back(k.C);
        out.S.push_back(tau_grid[i] == 0.0 ? 0.0 : k.S);
    }
    return out;
}

BathSpectrum load_tabulated_csv(const std::string& path, double beta) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tabulated spectrum file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> w, J;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (!(row >> a >> b)) {
            throw GridError(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
        }
        w.push_back(a);
        J.push_back(b);
    }
    return BathSpectrum::tabulated(std::move(w), std::move(J), beta);
}

} // namespace nmq
