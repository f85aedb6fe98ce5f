// test_propagator.cpp — Gamma, Z, phi, coherences, Choi matrix, CP certificates

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "nmq/errors.hpp"
#include "nmq/oracle.hpp"
#include "nmq/propagator.hpp"

using namespace nmq;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

Eigen::Vector4d sorted_eigenvalues(const Eigen::Matrix4cd& m) {
    Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(m).eigenvalues();
    std::sort(ev.data(), ev.data() + 4);
    return ev;
}

} // namespace

TEST_CASE("t = 0 is the identity channel") {
    const RateTable rt = build_rate_table(BathSpectrum::ohmic(1.0, 5.0), 1.0, default_time_grid(1.0), 1e-3);
    const Trajectory tr = propagate(rt, 1e-3, 1.0, {0.0});
    const PropagatorState& ps = tr.states[0];
    CHECK(ps.Gamma == 0.0);
    CHECK(ps.Z == 0.0);
    CHECK(ps.phi == 0.0);
    CHECK(ps.x_plus == cd(1.0, 0.0));
    CHECK(ps.x_minus == cd(0.0, 0.0));
    CHECK(ps.choi(0, 0) == cd(1.0));
    CHECK(ps.choi(3, 3) == cd(1.0));
    CHECK(ps.choi(0, 3) == cd(1.0));
    CHECK(ps.choi(1, 1) == cd(0.0));
    const Eigen::Vector4d ev = sorted_eigenvalues(ps.choi);
    CHECK(ev(3) == doctest::Approx(2.0));
    CHECK(std::abs(ev(0)) < 1e-15);
    const CpReport cp = cp_certificate(ps);
    CHECK(cp.necessary_ok);
    CHECK(cp.sufficient_ok);
    CHECK(cp.sufficient_margin == 0.0);
    CHECK(cp.lambda[0] == doctest::Approx(2.0));
}

TEST_CASE("coherence normalization, Choi trace and Hermiticity along trajectories") {
    for (const BathSpectrum& spec : {BathSpectrum::ohmic(1.0, 5.0), BathSpectrum::one_over_f(1.0, 0.95)}) {
        const double kappa = 1e-3;
        const RateTable rt = build_rate_table(spec, 1.0, default_time_grid(300.0), kappa);
        const Trajectory tr = propagate(rt, kappa, 1.0, linspace(0.0, 300.0, 601));
        CHECK(tr.max_norm_defect < 1e-6);
        for (const PropagatorState& ps : tr.states) {
            CHECK(std::abs(std::norm(ps.x_plus) - std::norm(ps.x_minus) - 1.0) < 1e-6);
            CHECK(std::abs(ps.choi.trace() - cd(2.0)) < 1e-10);
            CHECK((ps.choi - ps.choi.adjoint()).norm() == 0.0);
            // analytic spectrum against a numerical eigensolver (sum = 2)
            const CpReport cp = cp_certificate(ps);
            std::array<double, 4> l = cp.lambda;
            std::sort(l.begin(), l.end());
            const Eigen::Vector4d ev = sorted_eigenvalues(ps.choi);
            for (int k = 0; k < 4; ++k) CHECK(std::abs(l[k] - ev(k)) < 1e-10);
            CHECK(std::abs(l[0] + l[1] + l[2] + l[3] - 2.0) < 1e-10);
        }
    }
}

TEST_CASE("decay, relaxation and phase functions against the augmented integration") {
    const double kappa = 2e-3;
    const RateTable rt = build_rate_table(BathSpectrum::ohmic(1.0, 3.0), 1.0, default_time_grid(80.0), kappa);
    const std::vector<double> grid = linspace(0.0, 80.0, 9);
    const Trajectory tr = propagate(rt, kappa, 1.0, grid);
    for (const PropagatorState& ps : tr.states) {
        CHECK(decay_function(rt, kappa, ps.t) == doctest::Approx(ps.Gamma).epsilon(1e-9));
        CHECK(relaxation_function(rt, kappa, ps.t) == doctest::Approx(ps.Z).epsilon(1e-8));
        CHECK(phase_function(rt, kappa, 1.0, ps.t) == doctest::Approx(ps.phi).epsilon(1e-12));
    }
    CHECK(decay_function(rt, kappa, 0.0) == 0.0);
    CHECK(relaxation_function(rt, kappa, 0.0) == 0.0);
    CHECK(phase_function(rt, 0.0, 1.0, 12.5) == 12.5);
    CHECK_THROWS_AS(decay_function(rt, kappa, 81.0), RangeError);
    // d phi / dt = omega_q + kappa omega_LS(t)
    for (double t : {0.5, 10.0, 55.0}) {
        const double h = 1e-4;
        const double d = (phase_function(rt, kappa, 1.0, t + h) - phase_function(rt, kappa, 1.0, t - h)) / (2 * h);
        CHECK(std::abs(d - (1.0 + kappa * rt(t).lamb_shift)) < 1e-6);
    }
}

TEST_CASE("constant rates: closed forms for Gamma and Z") {
    const double gp = 1.3, gm = 0.4, ls = -0.2, kappa = 0.01;
    const RateTable rt = RateTable::constant(gp, gm, ls, 500.0, kappa);
    for (double t : {0.0, 3.0, 250.0, 500.0}) {
        const double G = kappa * (gp + gm) * t;
        CHECK(decay_function(rt, kappa, t) == doctest::Approx(G).epsilon(1e-14));
        CHECK(relaxation_function(rt, kappa, t) ==
              doctest::Approx((gp - gm) / (gp + gm) * (1.0 - std::exp(-G))).epsilon(1e-10));
    }
    // T = 0 (gamma_- = 0): full relaxation to |0>
    const PropagatorState late = markovian_propagator(2.0, 0.0, 0.0, 0.1, 1.0, 500.0);
    CHECK(late.Z == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-secular constant-rate coherences match a frozen independent ODE solution") {
    // Frozen from an 8th-order Runge-Kutta solution at rtol 1e-13 of the coherence system.
    const double kappa = 0.05, gp = 1.6374615061559637, ls = -0.68950677276386873;
    const Trajectory tr = markovian_nonsecular(gp, 0.0, ls, kappa, 1.0, {0.0, 10.0, 37.3});
    const cd xp10(0.9999650809543508, -0.014523243030769127), xm10(-0.007097314700024592, 0.009524486349349236);
    const cd xp37(0.9999753012482137, -0.05516880572133295), xm37(0.030247082198294726, 0.045599498348783025);
    CHECK(std::abs(tr.states[1].x_plus - xp10) < 1e-9);
    CHECK(std::abs(tr.states[1].x_minus - xm10) < 1e-9);
    CHECK(std::abs(tr.states[2].x_plus - xp37) < 1e-9);
    CHECK(std::abs(tr.states[2].x_minus - xm37) < 1e-9);
}

TEST_CASE("secular mode freezes the coherences") {
    const double kappa = 1e-3;
    const RateTable rt = build_rate_table(BathSpectrum::one_over_f(1.0, 0.95), 1.0, default_time_grid(50.0), kappa);
    PropagatorOptions o;
    o.secular = true;
    const Coherence c = solve_coherence(rt, kappa, 1.0, linspace(0.0, 50.0, 11), o);
    for (std::size_t i = 0; i < c.x_plus.size(); ++i) {
        CHECK(c.x_plus[i] == cd(1.0));
        CHECK(c.x_minus[i] == cd(0.0));
    }
}

TEST_CASE("noiseless limit: pure precession") {
    const RateTable rt = RateTable::constant(0.0, 0.0, 0.0, 20.0, 0.0);
    const Trajectory tr = propagate(rt, 0.0, 1.0, linspace(0.0, 20.0, 21));
    const QubitState rho0 = QubitState::from_bloch(0.6, -0.3, 0.2);
    for (const PropagatorState& ps : tr.states) {
        const QubitState r = apply_map(ps.choi, rho0);
        CHECK(std::abs(r.rho01() - std::polar(1.0, ps.t) * rho0.rho01()) < 1e-12);
        CHECK(std::abs(r.matrix()(0, 0) - rho0.matrix()(0, 0)) < 1e-15);
    }
}

TEST_CASE("apply_map examples") {
    const double kappa = 1e-3;
    const RateTable rt = build_rate_table(BathSpectrum::ohmic(1.0, 5.0), 1.0, default_time_grid(40.0), kappa);
    const Trajectory tr = propagate(rt, kappa, 1.0, linspace(0.0, 40.0, 5));
    Eigen::Matrix2cd mixed = 0.5 * Eigen::Matrix2cd::Identity();
    for (const PropagatorState& ps : tr.states) {
        const Eigen::Matrix2cd r = apply_map(ps.choi, mixed);
        CHECK(std::abs(r(0, 0) - 0.5 * (1.0 + ps.Z)) < 1e-15);
        CHECK(std::abs(r(1, 1) - 0.5 * (1.0 - ps.Z)) < 1e-15);
        CHECK(std::abs(r(0, 1)) < 1e-15);
        std::mt19937_64 rng(7);
        for (int k = 0; k < 10; ++k) {
            const QubitState s = random_state(rng);
            CHECK(std::abs(apply_map(ps.choi, s.matrix()).trace() - cd(1.0)) < 1e-14);
        }
    }
}

TEST_CASE("map outputs are valid states (100 states x 100 times, both baths)") {
    std::mt19937_64 rng(20240601);
    for (const BathSpectrum& spec : {BathSpectrum::ohmic(1.0, 5.0), BathSpectrum::one_over_f(1.0, 0.95)}) {
        const double kappa = 1e-4;
        const double t_end = 200.0;
        const RateTable rt = build_rate_table(spec, 1.0, default_time_grid(t_end), kappa);
        std::uniform_real_distribution<double> ut(0.0, t_end);
        std::vector<double> times(100);
        for (double& t : times) t = ut(rng);
        std::sort(times.begin(), times.end());
        const Trajectory tr = propagate(rt, kappa, 1.0, times);
        for (const PropagatorState& ps : tr.states) {
            for (int k = 0; k < 100; ++k) {
                const QubitState out = apply_map(ps.choi, random_state(rng));
                CHECK(out.validity().ok());
            }
        }
    }
}

TEST_CASE("T = 0 Markovian map without the secular approximation fails the sufficient condition") {
    const MarkovLimits m = markovian_limits(BathSpectrum::ohmic(1.0, 5.0), 1.0);
    const Trajectory tr = markovian_nonsecular(m.gamma_plus, m.gamma_minus, m.lamb_shift, 1e-3, 1.0,
                                               linspace(0.0, 50.0, 101));
    bool any_fail = false;
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
        any_fail = any_fail || !cp_certificate(tr.states[i]).sufficient_ok;
    }
    CHECK(any_fail);
    CHECK(tr.states[50].f_minus == 0.0);
    CHECK(std::abs(tr.states[50].x_minus) > 0.0);
}

TEST_CASE("delta-kernel rates reproduce the constant Lindblad generator") {
    // gamma_+ = gamma_- = w / pi, no Lamb shift: compare with exp(t L) applied to vec(rho)
    const double w = 0.6, kappa = 0.2;
    const RateTable rt = build_rate_table(delta_kernel(w), 1.0, default_time_grid(12.0), kappa);
    const Trajectory tr = propagate(rt, kappa, 1.0, linspace(0.0, 12.0, 7));
    const Eigen::Matrix4cd L = oracle::generator(w / pi, w / pi, 0.0, kappa, 1.0);
    const QubitState rho0 = QubitState::from_bloch(0.2, 0.5, -0.7);
    Eigen::Vector4cd v0;
    v0 << rho0.matrix()(0, 0), rho0.matrix()(1, 0), rho0.matrix()(0, 1), rho0.matrix()(1, 1);
    for (const PropagatorState& ps : tr.states) {
        const Eigen::Vector4cd v = (L * ps.t).exp() * v0;
        const Eigen::Matrix2cd r = apply_map(ps.choi, rho0.matrix());
        CHECK(std::abs(r(0, 0) - v(0)) < 1e-9);
        CHECK(std::abs(r(1, 0) - v(1)) < 1e-9);
        CHECK(std::abs(r(0, 1) - v(2)) < 1e-9);
        CHECK(std::abs(r(1, 1) - v(3)) < 1e-9);
    }
}

TEST_CASE("Markovian propagator: T2 envelope and shifted precession") {
    const MarkovLimits m = markovian_limits(BathSpectrum::ohmic(1.0, 5.0), 1.0);
    const double kappa = 1e-3;
    const double T2 = 2.0 / (kappa * (m.gamma_plus + m.gamma_minus));
    const PropagatorState ps = markovian_propagator(m.gamma_plus, m.gamma_minus, m.lamb_shift, kappa, 1.0, T2);
    CHECK(std::exp(-0.5 * ps.Gamma) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(ps.phi == doctest::Approx((1.0 + kappa * m.lamb_shift) * T2).epsilon(1e-14));
    CHECK(ps.x_plus == cd(1.0));
    CHECK(ps.x_minus == cd(0.0));
    CHECK_THROWS_AS(markovian_propagator(1.0, 0.0, 0.0, 1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("grid and tolerance errors") {
    const RateTable rt = RateTable::constant(1.0, 0.0, 0.0, 10.0, 0.1);
    CHECK_THROWS_AS(propagate(rt, 0.1, 1.0, {0.0, 11.0}), RangeError);
    CHECK_THROWS_AS(propagate(rt, 0.1, 1.0, {0.0, 5.0, 2.0}), GridError);
    PropagatorOptions strict;
    strict.norm_tolerance = 1e-30;
    CHECK_THROWS_AS(propagate(rt, 0.1, 1.0, {0.0, 10.0}, strict), NumericalError);
}
