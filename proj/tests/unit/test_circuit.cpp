// test_circuit.cpp — qubit frequency, coupling eta, regime warning

#include <doctest.h>

#include <cmath>

#include "nmq/circuit.hpp"
#include "nmq/errors.hpp"

using namespace nmq;

TEST_CASE("qubit frequency") {
    CHECK(qubit_frequency({1.0, 50.0, 0, 1, 0}) == doctest::Approx(20.0 - 1.0));
    CHECK(qubit_frequency({0.5, 32.0, 0, 1, 0}) == doctest::Approx(std::sqrt(8.0 * 16.0) - 0.5));
}

TEST_CASE("coupling eta") {
    const TransmonCircuit c{1.0, 64.0, 1.0, 8.0, 1.0};
    // (2 * 1 / 10) * (64 / 4)^(1/4) = 0.2 * 2
    CHECK(coupling_eta(c) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(coupling_eta({1.0, 64.0, 0.0, 8.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(coupling_eta({0.0, 64.0, 1.0, 8.0, 1.0}), DomainError);
}

TEST_CASE("regime warning below E_J/E_C = 20") {
    CHECK(regime_warning({1.0, 10.0, 0, 1, 0}).has_value());
    CHECK_FALSE(regime_warning({1.0, 50.0, 0, 1, 0}).has_value());
}
