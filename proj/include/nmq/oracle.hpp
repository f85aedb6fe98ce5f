// oracle.hpp — Independent verification paths
//
// Direct integration of the time-local master equation (Runge–Kutta–Fehlberg
// 7(8) on the four real degrees of freedom of rho) and brute-force kernel
// quadratures, for comparison with the analytic map and closed forms.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nmq/propagator.hpp"

namespace nmq::oracle {

struct OracleCheck {
    std::string name;
    bool passed{false};
    double value{0.0};
    double tolerance{0.0};
};

struct OracleReport {
    double max_deviation{0.0};
    double location{0.0};      // time (or tau) of the maximum
    std::string location_detail;
    std::vector<OracleCheck> checks;
    nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();

    bool passed() const;
    nlohmann::ordered_json to_json() const;
};

struct MasterEquationOptions {
    double rtol{1e-12};
    double atol{1e-13};
};

// rho' = -i[H(t), rho] + kappa sum_kl d_kl(t) (s_k rho s_l^+ - {s_l^+ s_k, rho}/2)
// with s_+ = |0><1|, s_- = |1><0| and H(t) = -(omega_q + kappa omega_LS(t)) sigma_z / 2.
std::vector<Eigen::Matrix2cd> integrate_master_equation(const RateTable& rt, double kappa,
                                                        double omega_q,
                                                        const Eigen::Matrix2cd& rho0,
                                                        const std::vector<double>& t_grid,
                                                        const MasterEquationOptions& opt = {});

// The same generator as a 4x4 superoperator on vec(rho) (column stacking).
Eigen::Matrix4cd generator(double gamma_plus, double gamma_minus, double lamb_shift,
                           double kappa, double omega_q);

// Max entrywise |rho_map - rho_ME| over the grid for each initial state.
OracleReport map_vs_master_equation(const RateTable& rt, double kappa, double omega_q,
                                    const std::vector<QubitState>& initial,
                                    const std::vector<double>& t_grid, double tolerance = 1e-6,
                                    const MasterEquationOptions& me = {},
                                    const PropagatorOptions& prop = {});

// 1/f transforms by exponentially regularized quadrature, extrapolated to a
// vanishing regulator.
KernelValue regularized_one_over_f(double A, double alpha, double tau);

// Ohmic T=0 transforms by plain panel summation (no acceleration).
KernelValue brute_force_ohmic(double R, double omega_c, double tau);

// Closed forms against the brute-force routes above. Deviations are relative
// to the kernel magnitude hypot(C, S) at each tau.
OracleReport quadrature_crosscheck(const BathSpectrum& spec, const std::vector<double>& tau_grid,
                                   double tolerance);

// Tabulated copy of `reference` on `omega` compared with the reference closed
// form; the tolerance is the L1 interpolation-plus-truncation error of J.
OracleReport tabulated_crosscheck(const BathSpectrum& reference, const std::vector<double>& omega,
                                  const std::vector<double>& tau_grid);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

} // namespace nmq::oracle
