// circuit.cpp — Transmon frequency and coupling

#include "nmq/circuit.hpp"

#include <cmath>
#include <sstream>

#include "nmq/errors.hpp"

namespace nmq {

namespace {

void check_capacitances(const TransmonCircuit& c) {
    if (c.C_e < 0.0 || c.C_J < 0.0 || c.C_g < 0.0) {
        throw DomainError("capacitances must be >= 0");
    }
    if (!(c.C_e + c.C_J + c.C_g > 0.0)) throw DomainError("total capacitance must be > 0");
}

} // namespace

double qubit_frequency(const TransmonCircuit& c) {
    if (c.E_C < 0.0 || c.E_J < 0.0) throw DomainError("E_C and E_J must be >= 0");
    return std::sqrt(8.0 * c.E_C * c.E_J) - c.E_C;
}

double coupling_eta(const TransmonCircuit& c) {
    check_capacitances(c);
    if (!(c.E_C > 0.0)) throw DomainError("coupling_eta requires E_C > 0");
    if (c.E_J < 0.0) throw DomainError("E_J must be >= 0");
    const double ratio = 2.0 * c.C_e / (c.C_J + c.C_g + c.C_e);
    return ratio * std::pow(c.E_J / (4.0 * c.E_C), 0.25);
}

std::optional<std::string> regime_warning(const TransmonCircuit& c) {
    if (c.E_C > 0.0 && c.E_J / c.E_C < 20.0) {
        std::ostringstream msg;
        msg << "E_J/E_C = " << c.E_J / c.E_C << " is below 20; the two-level transmon "
            << "truncation may be inaccurate";
        return msg.str();
    }
    return std::nullopt;
}

} // namespace nmq
