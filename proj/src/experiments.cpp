// experiments.cpp — Bloch traces, FFT spectra and the Ramsey protocol

#include "nmq/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "nmq/errors.hpp"

namespace nmq {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd rotation(RamseyAxis axis, double theta) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    Eigen::Matrix2cd r;
    if (axis == RamseyAxis::Y) {
        r << c, -s, s, c;
    } else {
        r << c, cd(0.0, -s), cd(0.0, -s), c;
    }
    return r;
}

} // namespace

Bloch sigma_expectations(const PropagatorState& ps, const QubitState& rho0) {
    const cd r01 = std::polar(std::exp(-0.5 * ps.Gamma), ps.phi) *
                   (rho0.rho01() * ps.x_plus + rho0.rho10() * ps.x_minus);
    const double z0 = (rho0.matrix()(0, 0) - rho0.matrix()(1, 1)).real();
    return {2.0 * r01.real(), -2.0 * r01.imag(), ps.Z + std::exp(-ps.Gamma) * z0};
}

SigmaSeries sigma_expectations(const std::vector<PropagatorState>& traj, const QubitState& rho0) {
    SigmaSeries s;
    s.t.reserve(traj.size());
    s.x.reserve(traj.size());
    s.y.reserve(traj.size());
    s.z.reserve(traj.size());
    for (const auto& ps : traj) {
        const Bloch b = sigma_expectations(ps, rho0);
        s.t.push_back(ps.t);
        s.x.push_back(b.x);
        s.y.push_back(b.y);
        s.z.push_back(b.z);
    }
    return s;
}

Spectrum precession_spectrum(const std::vector<double>& t, const std::vector<double>& values,
                             Window window, int zero_padding, double omega_q) {
    if (t.size() != values.size()) throw GridError("trace and time grid lengths differ");
    if (t.size() < 4) throw GridError("trace too short for a spectrum");
    if (zero_padding < 1) throw DomainError("zero padding factor must be >= 1");
    const std::size_t n = t.size();
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt) {
            std::ostringstream msg;
            msg << "spectrum requires a uniform time grid (step " << t[i] - t[i - 1] << " at index "
                << i << ", expected " << dt << ")";
            throw GridError(msg.str());
        }
    }
    const double periods = (t.back() - t.front()) * omega_q / (2.0 * std::numbers::pi);
    if (periods < 20.0) {
        throw DomainError("spectrum needs a record of at least 20 precession periods");
    }

    const std::size_t m = n * static_cast<std::size_t>(zero_padding);
    double* in = fftw_alloc_real(m);
    fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
    for (std::size_t i = 0; i < m; ++i) {
        double w = 1.0;
        if (window == Window::Hann && i < n) {
            w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1)));
        }
        in[i] = i < n ? w * values[i] : 0.0;
    }
    fftw_execute(plan);

    Spectrum s;
    s.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt) / omega_q;
    s.omega.resize(m / 2 + 1);
    s.magnitude.resize(m / 2 + 1);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        s.omega[k] = static_cast<double>(k) * s.bin_width;
        s.magnitude[k] = std::hypot(out[k][0], out[k][1]) * dt;
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return s;
}

double ramsey_delta_p(const PropagatorState& ps) {
    return std::exp(-0.5 * ps.Gamma) *
           (std::cos(ps.phi) * ps.x_minus.real() - std::sin(ps.phi) * ps.x_minus.imag());
}

double ramsey_protocol_direct(const Eigen::Matrix4cd& choi, RamseyAxis axis, double t_d,
                              RamseyFrame frame, double omega_q) {
    // Y: R_y(pi/2)|0> ~ |0> + |1>; X: R_x(-pi/2)|0> ~ |0> + i|1>.
    const double angle = axis == RamseyAxis::Y ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
    const Eigen::Matrix2cd r = rotation(axis, angle);
    Eigen::Matrix2cd ground = Eigen::Matrix2cd::Zero();
    ground(0, 0) = 1.0;
    const Eigen::Matrix2cd prepared = r * ground * r.adjoint();
    Eigen::Matrix2cd rho = apply_map(choi, prepared);
    if (frame == RamseyFrame::Rotating) {
        const cd undo = std::polar(1.0, -omega_q * t_d);
        rho(0, 1) *= undo;
        rho(1, 0) *= std::conj(undo);
    }
    const Eigen::Matrix2cd back = r.adjoint() * rho * r;
    return back(0, 0).real();
}

void ExperimentResult::validate() const {
    for (std::size_t i = 1; i < abscissa.size(); ++i) {
        if (!(abscissa[i] > abscissa[i - 1])) {
            throw GridError("experiment abscissa must be strictly increasing");
        }
    }
    if (column_names.size() != columns.size()) {
        throw GridError("experiment column names and data disagree");
    }
    for (const auto& c : columns) {
        if (c.size() != abscissa.size()) throw GridError("experiment column length mismatch");
    }
}

std::string to_string(ExperimentResult::Kind kind) {
    switch (kind) {
        case ExperimentResult::Kind::Trace: return "trace";
        case ExperimentResult::Kind::Spectrum: return "spectrum";
        case ExperimentResult::Kind::Ramsey: return "ramsey";
    }
    return "unknown";
}

} // namespace nmq
