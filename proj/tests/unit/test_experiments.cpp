// test_experiments.cpp — Bloch traces, precession spectra, Ramsey protocol

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nmq/errors.hpp"
#include "nmq/experiments.hpp"

using namespace nmq;
using std::numbers::pi;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = b;
    return v;
}

const QubitState plus_state = QubitState::from_bloch(1.0, 0.0, 0.0);

} // namespace

TEST_CASE("noiseless trace is cos(omega_q t)") {
    const RateTable rt = RateTable::constant(0.0, 0.0, 0.0, 30.0, 0.0);
    const Trajectory tr = propagate(rt, 0.0, 1.0, linspace(0.0, 30.0, 301));
    const SigmaSeries s = sigma_expectations(tr.states, plus_state);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        CHECK(std::abs(s.x[i] - std::cos(s.t[i])) < 1e-12);
        CHECK(std::abs(s.y[i] + std::sin(s.t[i])) < 1e-12);
        CHECK(std::abs(s.z[i]) < 1e-15);
    }
}

TEST_CASE("Markovian trace: exponential damping at the shifted frequency") {
    const MarkovLimits m = markovian_limits(BathSpectrum::ohmic(1.0, 5.0), 1.0);
    const double kappa = 1e-3;
    const double T2 = 2.0 / (kappa * (m.gamma_plus + m.gamma_minus));
    for (double t : {0.0, 17.0, 600.0, 2500.0}) {
        const PropagatorState ps = markovian_propagator(m.gamma_plus, m.gamma_minus, m.lamb_shift, kappa, 1.0, t);
        const Bloch b = sigma_expectations(ps, plus_state);
        CHECK(std::abs(b.x - std::exp(-t / T2) * std::cos((1.0 + kappa * m.lamb_shift) * t)) < 1e-12);
    }
}

TEST_CASE("Bloch components agree with the map") {
    const double kappa = 1e-3;
    const RateTable rt = build_rate_table(BathSpectrum::one_over_f(1.0, 0.95), 1.0, default_time_grid(60.0), kappa);
    const Trajectory tr = propagate(rt, kappa, 1.0, linspace(0.0, 60.0, 31));
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
        const QubitState rho0 = random_state(rng);
        for (const PropagatorState& ps : tr.states) {
            const Bloch b = sigma_expectations(ps, rho0);
            const Bloch ref = apply_map(ps.choi, rho0).bloch();
            CHECK(std::abs(b.x - ref.x) < 1e-10);
            CHECK(std::abs(b.y - ref.y) < 1e-10);
            CHECK(std::abs(b.z - ref.z) < 1e-10);
        }
    }
}

TEST_CASE("spectrum: grid and record-length errors") {
    std::vector<double> t = linspace(0.0, 200.0, 2001);
    std::vector<double> x(t.size(), 0.0);
    t[5] += 1e-3;
    CHECK_THROWS_AS(precession_spectrum(t, x), GridError);
    const std::vector<double> short_t = linspace(0.0, 50.0, 501);
    CHECK_THROWS_AS(precession_spectrum(short_t, std::vector<double>(501, 0.0)), DomainError);
}

TEST_CASE("Markovian spectrum peaks at omega_q + kappa omega_LS within one bin") {
    const MarkovLimits m = markovian_limits(BathSpectrum::ohmic(1.0, 5.0), 1.0);
    const double kappa = 1e-3;
    const std::vector<double> t = linspace(0.0, 5000.0, 100001);
    std::vector<double> x;
    for (double ti : t) {
        x.push_back(sigma_expectations(
                        markovian_propagator(m.gamma_plus, m.gamma_minus, m.lamb_shift, kappa, 1.0, ti), plus_state)
                        .x);
    }
    for (Window w : {Window::Hann, Window::None}) {
        const Spectrum s = precession_spectrum(t, x, w, 8);
        std::size_t peak = 0;
        for (std::size_t k = 1; k < s.magnitude.size(); ++k) {
            if (s.magnitude[k] > s.magnitude[peak]) peak = k;
        }
        CHECK(std::abs(s.omega[peak] - (1.0 + kappa * m.lamb_shift)) <= s.bin_width);
        // no second feature: away from the peak the magnitude stays far below it
        double off_peak = 0.0;
        for (std::size_t k = 0; k < s.omega.size(); ++k) {
            if (std::abs(s.omega[k] - 1.0) > 0.5) off_peak = std::max(off_peak, s.magnitude[k]);
        }
        CHECK(off_peak < 1e-2 * s.magnitude[peak]);
    }
}

TEST_CASE("Ramsey: direct protocol equals the closed form") {
    const double kappa = 1e-3;
    const RateTable rt = build_rate_table(BathSpectrum::one_over_f(1.0, 0.95), 1.0, default_time_grid(40.0), kappa);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    std::vector<double> td(50);
    for (double& t : td) t = u(rng);
    std::sort(td.begin(), td.end());
    const Trajectory tr = propagate(rt, kappa, 1.0, td);
    bool differ = false;
    for (const PropagatorState& ps : tr.states) {
        const double yy = ramsey_protocol_direct(ps.choi, RamseyAxis::Y, ps.t);
        const double xx = ramsey_protocol_direct(ps.choi, RamseyAxis::X, ps.t);
        CHECK(std::abs((yy - xx) - ramsey_delta_p(ps)) < 1e-10);
        differ = differ || std::abs(yy - xx) > 1e-8;
    }
    // the Z-rotation symmetry is broken when x_- != 0
    CHECK(differ);
}

TEST_CASE("Ramsey: trivial cases") {
    const RateTable rt = RateTable::constant(0.0, 0.0, 0.0, 10.0, 0.0);
    const Trajectory tr = propagate(rt, 0.0, 1.0, {0.0, 1.3, 7.7});
    for (const PropagatorState& ps : tr.states) {
        for (RamseyAxis a : {RamseyAxis::X, RamseyAxis::Y}) {
            CHECK(ramsey_protocol_direct(ps.choi, a, ps.t, RamseyFrame::Rotating) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    const PropagatorState& zero = tr.states[0];
    CHECK(ramsey_protocol_direct(zero.choi, RamseyAxis::X, 0.0) == doctest::Approx(1.0));
    CHECK(ramsey_protocol_direct(zero.choi, RamseyAxis::Y, 0.0) == doctest::Approx(1.0));
    CHECK(ramsey_delta_p(zero) == 0.0);
}

TEST_CASE("Ramsey: Markovian mode is symmetric, non-Markovian decays to zero by 20 T2") {
    const MarkovLimits m = markovian_limits(BathSpectrum::ohmic(1.0, 5.0), 1.0);
    const double kappa = 1e-3;
    for (double t : {0.3, 3.1, 40.0}) {
        const PropagatorState ps = markovian_propagator(m.gamma_plus, m.gamma_minus, m.lamb_shift, kappa, 1.0, t);
        CHECK(ramsey_delta_p(ps) == 0.0);
        CHECK(std::abs(ramsey_protocol_direct(ps.choi, RamseyAxis::X, t) -
                       ramsey_protocol_direct(ps.choi, RamseyAxis::Y, t)) < 1e-15);
    }
    const double T2 = 2.0 / (kappa * (m.gamma_plus + m.gamma_minus));
    const RateTable rt = build_rate_table(BathSpectrum::ohmic(1.0, 5.0), 1.0, default_time_grid(20.0 * T2), kappa);
    const Trajectory tr = propagate(rt, kappa, 1.0, {0.0, 20.0 * T2});
    CHECK(std::abs(ramsey_delta_p(tr.states[1])) < 1e-8);
}

TEST_CASE("experiment results validate their abscissa") {
    ExperimentResult r;
    r.kind = ExperimentResult::Kind::Ramsey;
    r.abscissa = {0.0, 0.5, 1.0};
    r.column_names = {"delta_p"};
    r.columns = {{0.0, 1e-3, 0.0}};
    CHECK_NOTHROW(r.validate());
    r.abscissa = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(r.validate(), GridError);
    CHECK(to_string(ExperimentResult::Kind::Spectrum) == "spectrum");
}
