// circuit.hpp — Qubit frequency and coupling from lumped transmon parameters

#pragma once

#include <optional>
#include <string>

namespace nmq {

struct TransmonCircuit {
    double E_C{0.0};
    double E_J{0.0};
    double C_e{0.0};  // coupling capacitance
    double C_J{0.0};  // shunt plus junction capacitance
    double C_g{0.0};  // gate capacitance
};

// sqrt(8 E_C E_J) - E_C
double qubit_frequency(const TransmonCircuit& c);

// (2 C_e / (C_J + C_g + C_e)) * (E_J / (4 E_C))^(1/4)
double coupling_eta(const TransmonCircuit& c);

// Message when E_J/E_C < 20 (outside the transmon regime), empty otherwise.
std::optional<std::string> regime_warning(const TransmonCircuit& c);

} // namespace nmq
