// qubit_state.cpp — Density-matrix checks and constructors

#include "nmq/qubit_state.hpp"

#include <cmath>
#include <sstream>

#include "nmq/errors.hpp"

namespace nmq {

Validity check_density_matrix(const Eigen::Matrix2cd& rho) {
    Validity v;
    v.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    v.trace_error = std::abs(rho.trace() - 1.0);
    const Eigen::Matrix2cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(herm, Eigen::EigenvaluesOnly);
    v.min_eigenvalue = es.eigenvalues().minCoeff();
    return v;
}

QubitState::QubitState(const Eigen::Matrix2cd& rho) : rho_(rho) {
    const Validity v = check_density_matrix(rho);
    if (!v.ok()) {
        std::ostringstream msg;
        msg << "invalid density matrix (hermiticity " << v.hermiticity_error << ", trace "
            << v.trace_error << ", min eigenvalue " << v.min_eigenvalue << ")";
        throw DomainError(msg.str());
    }
}

QubitState QubitState::unchecked(const Eigen::Matrix2cd& rho) { return QubitState(rho, Unchecked{}); }

QubitState QubitState::from_bloch(double x, double y, double z) {
    Eigen::Matrix2cd rho;
    const std::complex<double> r01(0.5 * x, -0.5 * y);
    rho << 0.5 * (1.0 + z), r01, std::conj(r01), 0.5 * (1.0 - z);
    return QubitState(rho);
}

QubitState QubitState::pure(std::complex<double> a0, std::complex<double> a1) {
    const double n = std::sqrt(std::norm(a0) + std::norm(a1));
    if (!(n > 0.0)) throw DomainError("pure state amplitudes are zero");
    Eigen::Vector2cd psi(a0 / n, a1 / n);
    Eigen::Matrix2cd rho = psi * psi.adjoint();
    rho(0, 0) = rho(0, 0).real();
    rho(1, 1) = rho(1, 1).real();
    return QubitState(rho);
}

Bloch QubitState::bloch() const {
    return {2.0 * rho_(0, 1).real(), -2.0 * rho_(0, 1).imag(), (rho_(0, 0) - rho_(1, 1)).real()};
}

QubitState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    double x = normal(rng), y = normal(rng), z = normal(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    const double r = std::cbrt(uniform(rng));
    return QubitState::from_bloch(r * x / n, r * y / n, r * z / n);
}

} // namespace nmq
