// test_bath_spectrum.cpp — spectral densities, PSD, kernel transforms

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "nmq/bath_spectrum.hpp"
#include "nmq/errors.hpp"
#include "nmq/oracle.hpp"

using namespace nmq;
using std::numbers::pi;

TEST_CASE("spectral density examples") {
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    CHECK(spectral_density(o, 0.0) == 0.0);
    CHECK(spectral_density(o, 5.0) == doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-15));
    const auto o2 = BathSpectrum::ohmic(2.0, 3.0);
    CHECK(spectral_density(o2, 3.0) == doctest::Approx(2.0 * 3.0 * std::exp(-1.0)).epsilon(1e-15));
    const auto f = BathSpectrum::one_over_f(1.0, 0.95);
    CHECK(spectral_density(f, 1.0) == 1.0);
    CHECK_THROWS_AS(spectral_density(f, 0.0), DomainError);
    CHECK_THROWS_AS(spectral_density(o, -1.0), DomainError);
}

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(BathSpectrum::ohmic(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(BathSpectrum::ohmic(-1.0, 5.0), DomainError);
    CHECK_THROWS_AS(BathSpectrum::one_over_f(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BathSpectrum::one_over_f(1.0, 0.0), DomainError);
    // finite temperature 1/f needs an infrared cutoff
    CHECK_THROWS_AS(BathSpectrum::one_over_f(1.0, 0.5, 10.0), DomainError);
    CHECK_NOTHROW(BathSpectrum::one_over_f(1.0, 0.5, 10.0, 0.01));
}

TEST_CASE("symmetrized PSD") {
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    CHECK(symmetrized_psd(o, 5.0) == doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(symmetrized_psd(o, 0.0), DomainError);
    // T = 0: S = J on a log grid, all models
    const auto f = BathSpectrum::one_over_f(2.0, 0.7);
    for (double w : oracle::log_grid(1e-4, 1e3, 50)) {
        CHECK(symmetrized_psd(o, w) == spectral_density(o, w));
        CHECK(symmetrized_psd(f, w) == spectral_density(f, w));
    }
    // beta w << 1: coth(beta w / 2) J -> 2 J / (beta w)
    const double beta = 1e-3;
    const auto hot = BathSpectrum::ohmic(1.0, 5.0, beta);
    const double w = 0.1;
    CHECK(symmetrized_psd(hot, w) == doctest::Approx(2.0 / (beta * w) * spectral_density(hot, w)).epsilon(1e-8));
}

TEST_CASE("Ohmic kernels match frozen quadrature values") {
    // Frozen from an independent 30-digit oscillatory quadrature of the definitions.
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    struct Row { double tau, C, S; };
    const Row rows[] = {
        {0.1, 12.0, 16.0},
        {1.0, -0.88757396449704142, 0.36982248520710059},
        {7.3, -0.018723043432292148, 0.0010266908323435319},
    };
    for (const Row& r : rows) {
        const KernelValue k = kernel_transforms(o, r.tau);
        CHECK(k.C == doctest::Approx(r.C).epsilon(1e-12));
        CHECK(k.S == doctest::Approx(r.S).epsilon(1e-12));
    }
    // tau -> 0: C -> R omega_c^2, S(0) = 0 exactly
    const KernelValue k0 = kernel_transforms(o, 0.0);
    CHECK(k0.C == doctest::Approx(25.0));
    CHECK(k0.S == 0.0);
}

TEST_CASE("1/f kernels match frozen quadrature values") {
    const auto f = BathSpectrum::one_over_f(1.0, 0.95);
    struct Row { double tau, C, S; };
    const Row rows[] = {
        {0.5, 20.094560018938454, 1.5814761713801935},
        {2.0, 18.748887448086071, 1.4755694432270387},
    };
    for (const Row& r : rows) {
        const KernelValue k = kernel_transforms(f, r.tau);
        CHECK(k.C == doctest::Approx(r.C).epsilon(1e-12));
        CHECK(k.S == doctest::Approx(r.S).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernel_transforms(f, 0.0), DomainError);
}

TEST_CASE("closed forms agree with quadrature on tau in [1e-3, 50]") {
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    for (double tau : oracle::log_grid(1e-3, 50.0, 12)) {
        const KernelValue a = kernel_transforms(o, tau);
        const KernelValue b = kernel_transforms_quadrature(o, tau, {1e-13, 1e-11});
        const double scale = std::hypot(a.C, a.S);
        CHECK(std::abs(a.C - b.C) <= 1e-6 * scale);
        CHECK(std::abs(a.S - b.S) <= 1e-6 * scale);
    }
}

TEST_CASE("S(tau) >= 0 for the T=0 models") {
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    const auto f = BathSpectrum::one_over_f(1.0, 0.95);
    for (double tau : oracle::log_grid(1e-3, 50.0, 40)) {
        CHECK(kernel_transforms(o, tau).S >= 0.0);
        CHECK(kernel_transforms(f, tau).S >= 0.0);
    }
}

TEST_CASE("finite temperature Ohmic kernel by quadrature") {
    // At tau = 0 the cosine transform is int coth(beta w/2) J dw; compare with a plain integral.
    const double beta = 2.0;
    const auto hot = BathSpectrum::ohmic(1.0, 5.0, beta);
    const double tau = 0.3;
    const KernelValue k = kernel_transforms(hot, tau);
    const auto ref = quad::integrate_to_infinity(
        [&](double w) { return w > 0 ? symmetrized_psd(hot, w) * std::cos(w * tau) : 2.0 / beta; }, 0.0,
        {1e-12, 1e-12});
    CHECK(k.C == doctest::Approx(ref.value).epsilon(1e-6));
    CHECK(hot.has_closed_form() == false);
}

TEST_CASE("impedance-derived spectral density") {
    const double Ce = 0.2, CJ = 1.0, Cg = 0.1;
    const double Ct = Ce + Ce * Ce / (CJ + Ce + Cg);
    CHECK(impedance_to_spectral_density([](double) { return std::complex<double>(0.0); }, Ce, CJ, Cg, 1.3) == 0.0);
    // lossless inductor, off resonance
    const double L = 0.7;
    for (double w : {0.1, 0.5, 3.0}) {
        CHECK(std::abs(impedance_to_spectral_density(
                  [L](double x) { return std::complex<double>(0.0, x * L); }, Ce, CJ, Cg, w)) < 1e-15);
    }
    // resistor: J = w R / (1 + (w Ct R)^2) to 1e-12 over [0, 10]
    const double R = 2.5;
    for (int i = 0; i <= 100; ++i) {
        const double w = 0.1 * i;
        const double J = impedance_to_spectral_density([R](double) { return std::complex<double>(R); },
                                                       Ce, CJ, Cg, w);
        CHECK(std::abs(J - w * R / (1.0 + std::pow(w * Ct * R, 2))) <= 1e-12);
    }
    const auto spec = BathSpectrum::impedance([R](double) { return std::complex<double>(R); }, Ce, CJ, Cg);
    CHECK(spectral_density(spec, 1e-6) == doctest::Approx(R * 1e-6).epsilon(1e-9));
}

TEST_CASE("tabulated spectra: log-log interpolation, zero outside, CSV loading") {
    const auto t = BathSpectrum::tabulated({1.0, 4.0}, {2.0, 8.0});
    CHECK(spectral_density(t, 2.0) == doctest::Approx(4.0).epsilon(1e-14));  // power law through the nodes
    CHECK(spectral_density(t, 0.5) == 0.0);
    CHECK(spectral_density(t, 5.0) == 0.0);

    const auto path = std::filesystem::temp_directory_path() / "nmq_test_tab.csv";
    {
        std::ofstream f(path);
        f << "omega,J\n0.5,1.0\n1.0,2.0\n2.0,3.0\n";
    }
    const auto loaded = load_tabulated_csv(path.string());
    CHECK(spectral_density(loaded, 1.0) == doctest::Approx(2.0));
    std::filesystem::remove(path);
    CHECK_THROWS(load_tabulated_csv("/nonexistent/file.csv"));
}

TEST_CASE("sampled kernels carry the method tag") {
    const auto o = BathSpectrum::ohmic(1.0, 5.0);
    const KernelSamples s = sample_kernels(o, {0.0, 0.5, 1.0});
    CHECK(s.method == KernelMethod::ClosedForm);
    CHECK(s.S[0] == 0.0);
    const auto hot = BathSpectrum::ohmic(1.0, 5.0, 3.0);
    CHECK(sample_kernels(hot, {0.5}).method == KernelMethod::Quadrature);
}
