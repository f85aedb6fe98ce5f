// propagator.cpp — Augmented-state integration and Choi-matrix assembly

#include "nmq/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmq/errors.hpp"
#include "nmq/ode.hpp"

namespace nmq {

namespace {

using cd = std::complex<double>;

// State layout: Re x+, Im x+, Re x-, Im x-, Gamma, phi - omega_q t, G+, G-,
// where G+- = e^-Gamma f+-. The scaled form stays bounded for long horizons.
using Aug = ode::State<8>;

void check_grid(const RateTable& rt, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw GridError("time grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0) throw GridError("time grid must be nonnegative");
        if (i > 0 && t_grid[i] < t_grid[i - 1]) throw GridError("time grid must be increasing");
    }
    if (t_grid.back() > rt.t_max() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "time " << t_grid.back() << " beyond rate table range " << rt.t_max();
        throw RangeError(msg.str());
    }
}

PropagatorState unpack(double t, const Aug& y, double omega_q) {
    PropagatorState ps;
    ps.t = t;
    ps.x_plus = cd(y[0], y[1]);
    ps.x_minus = cd(y[2], y[3]);
    ps.Gamma = y[4];
    ps.phi = omega_q * t + y[5];
    ps.Z = y[6] - y[7];
    const double eg = std::exp(ps.Gamma);
    ps.f_plus = eg * y[6];
    ps.f_minus = eg * y[7];
    ps.choi = choi_matrix(ps);
    return ps;
}

double norm_defect(const Aug& y) {
    return std::abs(y[0] * y[0] + y[1] * y[1] - y[2] * y[2] - y[3] * y[3] - 1.0);
}

} // namespace

Trajectory propagate(const RateTable& rt, double kappa, double omega_q,
                     const std::vector<double>& t_grid, const PropagatorOptions& opt) {
    check_grid(rt, t_grid);
    const bool secular = opt.secular;
    ode::Rhs<8> rhs = [&](double t, const Aug& y, Aug& dy) {
        const RateSample r = rt(std::min(t, rt.t_max()));
        const double sum = r.gamma_plus + r.gamma_minus;
        dy[4] = kappa * sum;
        dy[5] = kappa * r.lamb_shift;
        dy[6] = kappa * (r.gamma_plus - sum * y[6]);
        dy[7] = kappa * (r.gamma_minus - sum * y[7]);
        if (secular) {
            dy[0] = dy[1] = dy[2] = dy[3] = 0.0;
            return;
        }
        const double phi = omega_q * t + y[5];
        const cd k = kappa * cd(-0.5 * sum, -r.lamb_shift) * std::polar(1.0, -2.0 * phi);
        const cd dxp = k * cd(y[2], -y[3]);
        const cd dxm = k * cd(y[0], -y[1]);
        dy[0] = dxp.real();
        dy[1] = dxp.imag();
        dy[2] = dxm.real();
        dy[3] = dxm.imag();
    };

    Trajectory traj;
    traj.states.resize(t_grid.size());
    ode::Options o;
    o.rtol = opt.rtol;
    o.atol = opt.atol;
    o.max_step = opt.max_step / omega_q;
    Aug y0{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const auto stats = ode::dopri5<8>(
        rhs, y0, 0.0, std::span<const double>(t_grid), o,
        [&](std::size_t i, double t, const Aug& y) {
            traj.states[i] = unpack(t, y, omega_q);
            traj.max_norm_defect = std::max(traj.max_norm_defect, norm_defect(y));
        },
        [&](double t, const Aug& y) {
            const double d = norm_defect(y);
            traj.max_norm_defect = std::max(traj.max_norm_defect, d);
            if (d > opt.norm_tolerance) {
                std::ostringstream msg;
                msg << "|x+|^2 - |x-|^2 deviates from 1 by " << d << " at t=" << t;
                throw NumericalError(msg.str(), d);
            }
        });
    traj.steps = stats.accepted;
    return traj;
}

double decay_function(const RateTable& rt, double kappa, double t) {
    const RateSample i = rt.integral(t);
    return kappa * (i.gamma_plus + i.gamma_minus);
}

double phase_function(const RateTable& rt, double kappa, double omega_q, double t) {
    return omega_q * t + kappa * rt.integral(t).lamb_shift;
}

double relaxation_function(const RateTable& rt, double kappa, double t) {
    if (t == 0.0) return 0.0;
    const double gamma_t = decay_function(rt, kappa, t);
    auto f = [&](double s) {
        const RateSample r = rt(s);
        return std::exp(decay_function(rt, kappa, s) - gamma_t) * (r.gamma_plus - r.gamma_minus);
    };
    const double w = std::numbers::pi / (4.0 * rt.omega_q());
    const int n = std::max(1, static_cast<int>(std::ceil(t / w)));
    const double h = t / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = i * h, b = i + 1 == n ? t : a + h;
        if (a == 0.0 && rt.endpoint_exponent() != 0.0) {
            sum += quad::integrate_power_endpoint(f, a, b, rt.endpoint_exponent() + 1.0,
                                                  {1e-14, 1e-11})
                       .value;
        } else {
            sum += quad::integrate(f, a, b, {1e-14, 1e-11}).value;
        }
    }
    return kappa * sum;
}

Coherence solve_coherence(const RateTable& rt, double kappa, double omega_q,
                          const std::vector<double>& t_grid, const PropagatorOptions& opt) {
    const Trajectory traj = propagate(rt, kappa, omega_q, t_grid, opt);
    Coherence c;
    c.max_norm_defect = traj.max_norm_defect;
    for (const auto& s : traj.states) {
        c.x_plus.push_back(s.x_plus);
        c.x_minus.push_back(s.x_minus);
    }
    return c;
}

Eigen::Matrix4cd choi_matrix(const PropagatorState& ps) {
    const double e = std::exp(-ps.Gamma);
    const double Z = ps.Z;
    const cd rot = std::polar(std::exp(-0.5 * ps.Gamma), ps.phi);
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    c(0, 0) = 0.5 * (1.0 + Z + e);
    c(1, 1) = 0.5 * (1.0 + Z - e);
    c(2, 2) = 0.5 * (1.0 - Z - e);
    c(3, 3) = 0.5 * (1.0 - Z + e);
    c(0, 3) = rot * ps.x_plus;
    c(3, 0) = std::conj(c(0, 3));
    c(1, 2) = rot * ps.x_minus;
    c(2, 1) = std::conj(c(1, 2));
    return c;
}

Eigen::Matrix2cd apply_map(const Eigen::Matrix4cd& choi, const Eigen::Matrix2cd& rho0) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int j1 = 0; j1 < 2; ++j1)
        for (int k1 = 0; k1 < 2; ++k1)
            for (int j2 = 0; j2 < 2; ++j2)
                for (int k2 = 0; k2 < 2; ++k2)
                    out(j1, k1) += choi(2 * j1 + j2, 2 * k1 + k2) * rho0(j2, k2);
    return out;
}

QubitState apply_map(const Eigen::Matrix4cd& choi, const QubitState& rho0) {
    return QubitState::unchecked(apply_map(choi, rho0.matrix()));
}

CpReport cp_certificate(const PropagatorState& ps, double f_plus, double f_minus) {
    CpReport r;
    const double e = std::exp(-ps.Gamma);
    const double Z2 = ps.Z * ps.Z;
    const double rp = std::sqrt(Z2 + 4.0 * e * std::norm(ps.x_plus));
    const double rm = std::sqrt(Z2 + 4.0 * e * std::norm(ps.x_minus));
    r.lambda = {0.5 * (1.0 + e + rp), 0.5 * (1.0 + e - rp), 0.5 * (1.0 - e + rm),
                0.5 * (1.0 - e - rm)};
    r.necessary_ok = ps.Gamma >= -kCpTolerance;
    r.sufficient_margin = e * f_plus * f_minus - std::norm(ps.x_minus);
    r.sufficient_ok = r.sufficient_margin >= -kCpTolerance;
    return r;
}

CpReport cp_certificate(const PropagatorState& ps) {
    return cp_certificate(ps, ps.f_plus, ps.f_minus);
}

PropagatorState markovian_propagator(double gp, double gm, double ls, double kappa,
                                     double omega_q, double t) {
    if (t < 0.0) throw DomainError("markovian_propagator requires t >= 0");
    PropagatorState ps;
    ps.t = t;
    const double sum = gp + gm;
    ps.Gamma = kappa * sum * t;
    const double one_minus = -std::expm1(-ps.Gamma);
    if (sum != 0.0) {
        ps.Z = (gp - gm) / sum * one_minus;
        const double growth = std::expm1(ps.Gamma);
        ps.f_plus = gp / sum * growth;
        ps.f_minus = gm / sum * growth;
    } else {
        ps.Z = kappa * (gp - gm) * t;
        ps.f_plus = kappa * gp * t;
        ps.f_minus = kappa * gm * t;
    }
    ps.phi = (omega_q + kappa * ls) * t;
    ps.choi = choi_matrix(ps);
    return ps;
}

Trajectory markovian_nonsecular(double gp, double gm, double ls, double kappa, double omega_q,
                                const std::vector<double>& t_grid,
                                const PropagatorOptions& opt) {
    if (t_grid.empty()) throw GridError("time grid is empty");
    const double t_max = std::max(t_grid.back(), 1e-12);
    const RateTable rt = RateTable::constant(gp, gm, ls, t_max, kappa, omega_q);
    return propagate(rt, kappa, omega_q, t_grid, opt);
}

} // namespace nmq
