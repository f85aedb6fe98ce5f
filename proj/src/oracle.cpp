// oracle.cpp — Master-equation integration and brute-force kernel checks

#include "nmq/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "nmq/errors.hpp"

namespace nmq::oracle {

namespace {

using cd = std::complex<double>;
using Dofs = std::array<double, 4>;  // rho00, rho11, Re rho01, Im rho01

Eigen::Matrix2cd sigma(int k) {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    if (k == 0) {
        s(0, 1) = 1.0;  // s_+ = |0><1|
    } else {
        s(1, 0) = 1.0;  // s_- = |1><0|
    }
    return s;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Matrix2cd rho_of(const Dofs& x) {
    Eigen::Matrix2cd r;
    const cd r01(x[2], x[3]);
    r << x[0], r01, std::conj(r01), x[1];
    return r;
}

Eigen::Matrix2cd lindblad_rhs(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& d,
                              double kappa, double omega) {
    Eigen::Matrix2cd H = Eigen::Matrix2cd::Zero();
    H(0, 0) = -0.5 * omega;
    H(1, 1) = 0.5 * omega;
    const cd i(0.0, 1.0);
    Eigen::Matrix2cd out = -i * (H * rho - rho * H);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const Eigen::Matrix2cd sk = sigma(k), sl_dag = sigma(l).adjoint();
            const Eigen::Matrix2cd prod = sl_dag * sk;
            out += kappa * d(k, l) * (sk * rho * sl_dag - 0.5 * (prod * rho + rho * prod));
        }
    }
    return out;
}

double neville_at_zero(const std::vector<double>& x, std::vector<double> y) {
    const std::size_t n = x.size();
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            y[i] = (-x[i + m] * y[i] + x[i] * y[i + 1]) / (x[i] - x[i + m]);
        }
    }
    return y[0];
}

} // namespace

bool OracleReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

nlohmann::ordered_json OracleReport::to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = passed();
    j["max_deviation"] = max_deviation;
    j["location"] = location;
    j["location_detail"] = location_detail;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        j["checks"].push_back(
            {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
    }
    j["tolerances"] = tolerances;
    return j;
}

Eigen::Matrix4cd generator(double gp, double gm, double ls, double kappa, double omega_q) {
    const Eigen::Matrix2cd d = decoherence_matrix(gp, gm, ls);
    const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd H = Eigen::Matrix2cd::Zero();
    H(0, 0) = -0.5 * (omega_q + kappa * ls);
    H(1, 1) = 0.5 * (omega_q + kappa * ls);
    const cd i(0.0, 1.0);
    // vec(A X B) = (B^T kron A) vec(X)
    Eigen::Matrix4cd L = -i * (kron(I, H) - kron(H.transpose(), I));
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const Eigen::Matrix2cd sk = sigma(k), sl_dag = sigma(l).adjoint();
            const Eigen::Matrix2cd prod = sl_dag * sk;
            L += kappa * d(k, l) *
                 (kron(sl_dag.transpose(), sk) - 0.5 * kron(I, prod) -
                  0.5 * kron(prod.transpose(), I));
        }
    }
    return L;
}

std::vector<Eigen::Matrix2cd> integrate_master_equation(const RateTable& rt, double kappa,
                                                        double omega_q,
                                                        const Eigen::Matrix2cd& rho0,
                                                        const std::vector<double>& t_grid,
                                                        const MasterEquationOptions& opt) {
    namespace odeint = boost::numeric::odeint;
    if (t_grid.empty()) return {};
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw GridError("oracle grid must be strictly increasing");
    }
    if (t_grid.front() < 0.0) throw GridError("oracle grid must be nonnegative");
    if (t_grid.back() > rt.t_max() * (1.0 + 1e-12)) {
        throw RangeError("oracle grid extends beyond the rate table");
    }

    auto system = [&](const Dofs& x, Dofs& dx, double t) {
        const RateSample r = rt(std::min(t, rt.t_max()));
        const Eigen::Matrix2cd d = decoherence_matrix(r.gamma_plus, r.gamma_minus, r.lamb_shift);
        const Eigen::Matrix2cd out =
            lindblad_rhs(rho_of(x), d, kappa, omega_q + kappa * r.lamb_shift);
        dx[0] = out(0, 0).real();
        dx[1] = out(1, 1).real();
        dx[2] = out(0, 1).real();
        dx[3] = out(0, 1).imag();
    };

    std::vector<double> times;
    const bool prepend = t_grid.front() > 0.0;
    if (prepend) times.push_back(0.0);
    times.insert(times.end(), t_grid.begin(), t_grid.end());

    Dofs x{rho0(0, 0).real(), rho0(1, 1).real(), rho0(0, 1).real(), rho0(0, 1).imag()};
    std::vector<Eigen::Matrix2cd> out;
    out.reserve(t_grid.size());
    auto stepper = odeint::make_controlled(opt.atol, opt.rtol,
                                           odeint::runge_kutta_fehlberg78<Dofs>());
    std::size_t seen = 0;
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), 0.01 / omega_q,
                            [&](const Dofs& s, double) {
                                if (prepend && seen++ == 0) return;
                                out.push_back(rho_of(s));
                            });
    return out;
}

OracleReport map_vs_master_equation(const RateTable& rt, double kappa, double omega_q,
                                    const std::vector<QubitState>& initial,
                                    const std::vector<double>& t_grid, double tolerance,
                                    const MasterEquationOptions& me,
                                    const PropagatorOptions& prop) {
    OracleReport rep;
    rep.tolerances["entrywise"] = tolerance;
    rep.tolerances["me_rtol"] = me.rtol;
    rep.tolerances["me_atol"] = me.atol;
    rep.tolerances["map_rtol"] = prop.rtol;
    const Trajectory traj = propagate(rt, kappa, omega_q, t_grid, prop);
    double trace_drift = 0.0, herm = 0.0, min_eig = 1.0;
    for (std::size_t s = 0; s < initial.size(); ++s) {
        const auto series =
            integrate_master_equation(rt, kappa, omega_q, initial[s].matrix(), t_grid, me);
        for (std::size_t i = 0; i < series.size(); ++i) {
            const Eigen::Matrix2cd via_map = apply_map(traj.states[i].choi, initial[s].matrix());
            const double dev = (via_map - series[i]).cwiseAbs().maxCoeff();
            if (dev > rep.max_deviation) {
                rep.max_deviation = dev;
                rep.location = t_grid[i];
                rep.location_detail = "initial state " + std::to_string(s);
            }
            const Validity v = check_density_matrix(series[i]);
            trace_drift = std::max(trace_drift, v.trace_error);
            herm = std::max(herm, v.hermiticity_error);
            min_eig = std::min(min_eig, v.min_eigenvalue);
        }
    }
    rep.checks.push_back({"map_vs_master_equation", rep.max_deviation < tolerance,
                          rep.max_deviation, tolerance});
    rep.checks.push_back({"oracle_trace_drift", trace_drift < 1e-10, trace_drift, 1e-10});
    rep.checks.push_back({"oracle_hermiticity", herm <= 1e-12, herm, 1e-12});
    rep.checks.push_back({"norm_defect", traj.max_norm_defect <= 1e-6, traj.max_norm_defect, 1e-6});
    rep.checks.push_back({"oracle_min_eigenvalue", min_eig >= -1e-10, min_eig, -1e-10});
    return rep;
}

KernelValue brute_force_ohmic(double R, double omega_c, double tau) {
    if (tau == 0.0) {
        auto f = [&](double w) { return R * w * std::exp(-w / omega_c); };
        return {quad::integrate_to_infinity(f, 0.0, {1e-14, 1e-12}).value, 0.0};
    }
    auto j = [&](double w) { return R * w * std::exp(-w / omega_c); };
    quad::FourierOptions opt;
    opt.accelerate = false;
    opt.tol = {1e-14, 1e-12};
    return {quad::fourier_integral(j, tau, quad::Trig::Cos, opt).value,
            quad::fourier_integral(j, tau, quad::Trig::Sin, opt).value};
}

KernelValue regularized_one_over_f(double A, double alpha, double tau) {
    if (!(tau > 0.0)) throw DomainError("regularized 1/f transform requires tau > 0");
    const std::vector<double> ratios{0.08, 0.04, 0.02, 0.01, 0.005};
    std::vector<double> eps, cs, ss;
    for (double r : ratios) {
        const double e = r * tau;
        auto f = [&](double w) { return A * std::pow(w, -alpha) * std::exp(-e * w); };
        quad::FourierOptions opt;
        opt.accelerate = false;
        opt.low_exponent = -alpha;
        opt.tol = {1e-15, 1e-13};
        eps.push_back(e);
        cs.push_back(quad::fourier_integral(f, tau, quad::Trig::Cos, opt).value);
        ss.push_back(quad::fourier_integral(f, tau, quad::Trig::Sin, opt).value);
    }
    return {neville_at_zero(eps, cs), neville_at_zero(eps, ss)};
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        g[i] = lo * std::pow(hi / lo, s);
    }
    return g;
}

OracleReport quadrature_crosscheck(const BathSpectrum& spec, const std::vector<double>& tau_grid,
                                   double tolerance) {
    OracleReport rep;
    rep.tolerances["relative"] = tolerance;
    if (!spec.has_closed_form()) {
        throw DomainError("quadrature_crosscheck needs a spectrum with closed-form kernels");
    }
    for (double tau : tau_grid) {
        if (!(tau > 0.0)) throw GridError("crosscheck tau grid must be positive");
        const KernelValue closed = kernel_transforms(spec, tau);
        KernelValue brute;
        if (auto* o = std::get_if<Ohmic>(&spec.model())) {
            brute = brute_force_ohmic(o->R, o->omega_c, tau);
        } else {
            const auto& f = std::get<OneOverF>(spec.model());
            brute = regularized_one_over_f(f.A, f.alpha, tau);
        }
        const double scale = std::hypot(closed.C, closed.S);
        const double dev = std::max(std::abs(closed.C - brute.C), std::abs(closed.S - brute.S)) /
                           scale;
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.location = tau;
        }
    }
    std::ostringstream name;
    name << spec.kind_name() << "_closed_form_vs_quadrature";
    rep.location_detail = "tau";
    rep.checks.push_back({name.str(), rep.max_deviation < tolerance, rep.max_deviation, tolerance});
    return rep;
}

OracleReport tabulated_crosscheck(const BathSpectrum& reference, const std::vector<double>& omega,
                                  const std::vector<double>& tau_grid) {
    std::vector<double> J;
    J.reserve(omega.size());
    for (double w : omega) J.push_back(spectral_density(reference, w));
    const BathSpectrum tab = BathSpectrum::tabulated(omega, J, reference.beta());

    // L1 distance between the two densities bounds the kernel differences.
    const quad::Tolerance tol{1e-15, 1e-10};
    double bound = 0.0;
    for (std::size_t i = 1; i < omega.size(); ++i) {
        bound += quad::integrate(
                     [&](double w) {
                         return std::abs(symmetrized_psd(tab, w) - symmetrized_psd(reference, w));
                     },
                     omega[i - 1], omega[i], tol)
                     .value;
    }
    if (omega.front() > 0.0) {
        bound += quad::integrate([&](double w) { return symmetrized_psd(reference, w); }, 0.0,
                                 omega.front(), tol)
                     .value;
    }
    bound += quad::integrate_to_infinity([&](double w) { return symmetrized_psd(reference, w); },
                                         omega.back(), tol)
                 .value;

    OracleReport rep;
    const double allowed = bound + 1e-9;
    rep.tolerances["l1_bound"] = bound;
    // The bound is nearly saturated at small tau, so the tabulated transform
    // needs a quadrature error well below the 1e-9 slack.
    const quad::Tolerance kernel_tol{1e-13, 1e-12};
    for (double tau : tau_grid) {
        const KernelValue a = kernel_transforms(tab, tau, kernel_tol);
        const KernelValue b = kernel_transforms(reference, tau);
        const double dev = std::max(std::abs(a.C - b.C), std::abs(a.S - b.S));
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.location = tau;
        }
    }
    rep.location_detail = "tau";
    rep.checks.push_back({"tabulated_vs_closed_form", rep.max_deviation <= allowed,
                          rep.max_deviation, allowed});
    return rep;
}

} // namespace nmq::oracle
