// propagator.hpp — Analytic TCL2 dynamical map: Gamma, Z, phi, x+- and Choi
//
// The coupling group kappa enters here and only here. f+- returned with a
// state already include one factor of kappa each.

#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "nmq/qubit_state.hpp"
#include "nmq/rates.hpp"

namespace nmq {

struct PropagatorState {
    double t{0.0};
    double Gamma{0.0};
    double Z{0.0};
    double phi{0.0};
    std::complex<double> x_plus{1.0, 0.0};
    std::complex<double> x_minus{0.0, 0.0};
    double f_plus{0.0};   // kappa * int_0^t e^Gamma gamma_+
    double f_minus{0.0};  // kappa * int_0^t e^Gamma gamma_-
    Eigen::Matrix4cd choi{Eigen::Matrix4cd::Zero()};
};

struct PropagatorOptions {
    double rtol{1e-11};
    double atol{1e-13};
    double max_step{std::numbers::pi / 8.0};  // in units of 1/omega_q
    // Freeze the x+- coupling (secular approximation): x+ = 1, x- = 0.
    bool secular{false};
    // Throw if | |x+|^2 - |x-|^2 - 1 | exceeds this after any step.
    double norm_tolerance{1e-6};
};

struct Trajectory {
    std::vector<PropagatorState> states;
    double max_norm_defect{0.0};
    std::size_t steps{0};
};

// Single pass over the augmented state (x+-, Gamma, phi, f+-).
Trajectory propagate(const RateTable& rt, double kappa, double omega_q,
                     const std::vector<double>& t_grid, const PropagatorOptions& opt = {});

// Gamma(t) = kappa int_0^t (gamma_+ + gamma_-) ds
double decay_function(const RateTable& rt, double kappa, double t);
// Z(t) = kappa e^-Gamma(t) int_0^t e^Gamma(s) (gamma_+ - gamma_-) ds
double relaxation_function(const RateTable& rt, double kappa, double t);
// phi(t) = omega_q t + kappa int_0^t omega_LS ds
double phase_function(const RateTable& rt, double kappa, double omega_q, double t);

struct Coherence {
    std::vector<std::complex<double>> x_plus;
    std::vector<std::complex<double>> x_minus;
    double max_norm_defect{0.0};
};

Coherence solve_coherence(const RateTable& rt, double kappa, double omega_q,
                          const std::vector<double>& t_grid, const PropagatorOptions& opt = {});

// Choi matrix with index a = 2 j1 + j2 for the pair (j1, j2).
Eigen::Matrix4cd choi_matrix(const PropagatorState& ps);

// rho(t) = sum_ab C_ab tau_a rho0 tau_b^dagger, tau_a = |j1><j2|
Eigen::Matrix2cd apply_map(const Eigen::Matrix4cd& choi, const Eigen::Matrix2cd& rho0);
QubitState apply_map(const Eigen::Matrix4cd& choi, const QubitState& rho0);

struct CpReport {
    std::array<double, 4> lambda{};  // analytic Choi eigenvalues
    bool necessary_ok{false};         // Gamma >= 0
    bool sufficient_ok{false};        // e^-Gamma f+ f- >= |x-|^2
    double sufficient_margin{0.0};    // e^-Gamma f+ f- - |x-|^2
};

inline constexpr double kCpTolerance = 1e-10;

CpReport cp_certificate(const PropagatorState& ps, double f_plus, double f_minus);
CpReport cp_certificate(const PropagatorState& ps);

// Constant-rate secular map.
PropagatorState markovian_propagator(double gamma_plus, double gamma_minus, double lamb_shift,
                                     double kappa, double omega_q, double t);

// Constant rates without the secular approximation (x- evolves).
Trajectory markovian_nonsecular(double gamma_plus, double gamma_minus, double lamb_shift,
                                double kappa, double omega_q, const std::vector<double>& t_grid,
                                const PropagatorOptions& opt = {});

} // namespace nmq
