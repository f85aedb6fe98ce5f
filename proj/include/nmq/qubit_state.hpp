// qubit_state.hpp — Two-level density matrix in the (|0>, |1>) basis
//
// |0> is the sigma_z = +1 eigenstate and the ground state.

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace nmq {

struct Bloch {
    double x{0.0};
    double y{0.0};
    double z{0.0};
};

struct Validity {
    double hermiticity_error{0.0};  // max |rho - rho^dagger|
    double trace_error{0.0};        // |tr rho - 1|
    double min_eigenvalue{0.0};

    bool ok(double herm_tol = 1e-12, double trace_tol = 1e-12, double psd_tol = 1e-10) const {
        return hermiticity_error <= herm_tol && trace_error <= trace_tol &&
               min_eigenvalue >= -psd_tol;
    }
};

Validity check_density_matrix(const Eigen::Matrix2cd& rho);

class QubitState {
public:
    // Validates Hermiticity, unit trace and positivity; throws DomainError.
    explicit QubitState(const Eigen::Matrix2cd& rho);

    // No validation (map outputs of non-CP evolutions are still reported).
    static QubitState unchecked(const Eigen::Matrix2cd& rho);
    static QubitState from_bloch(double x, double y, double z);
    static QubitState pure(std::complex<double> a0, std::complex<double> a1);

    const Eigen::Matrix2cd& matrix() const { return rho_; }
    std::complex<double> rho01() const { return rho_(0, 1); }
    std::complex<double> rho10() const { return rho_(1, 0); }
    Bloch bloch() const;
    Validity validity() const { return check_density_matrix(rho_); }

private:
    struct Unchecked {};
    QubitState(const Eigen::Matrix2cd& rho, Unchecked) : rho_(rho) {}
    Eigen::Matrix2cd rho_;
};

// Bloch vector drawn uniformly from the unit ball.
QubitState random_state(std::mt19937_64& rng);

} // namespace nmq
