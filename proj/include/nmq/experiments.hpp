// experiments.hpp — Observable signatures: Bloch traces, spectra, Ramsey X/Y

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nmq/propagator.hpp"

namespace nmq {

struct SigmaSeries {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
};

Bloch sigma_expectations(const PropagatorState& ps, const QubitState& rho0);
SigmaSeries sigma_expectations(const std::vector<PropagatorState>& traj, const QubitState& rho0);

enum class Window { None, Hann };

struct Spectrum {
    std::vector<double> omega;      // in units of omega_q
    std::vector<double> magnitude;  // |sum_n w_n x_n e^{-i omega t_n}| dt
    double bin_width{0.0};
};

// One-sided magnitude spectrum of a uniformly sampled real trace.
Spectrum precession_spectrum(const std::vector<double>& t, const std::vector<double>& values,
                             Window window = Window::Hann, int zero_padding = 8,
                             double omega_q = 1.0);

// Closed-form probability difference p(|0>|YY) - p(|0>|XX).
double ramsey_delta_p(const PropagatorState& ps);

enum class RamseyAxis { X, Y };

// Lab: the inverse rotation acts on the lab-frame state. Rotating: the free
// precession at omega_q is removed before the inverse rotation.
enum class RamseyFrame { Lab, Rotating };

// pi/2 rotation, map, inverse rotation; returns <0|rho|0>.
double ramsey_protocol_direct(const Eigen::Matrix4cd& choi, RamseyAxis axis, double t_d,
                              RamseyFrame frame = RamseyFrame::Lab, double omega_q = 1.0);

struct ExperimentResult {
    enum class Kind { Trace, Spectrum, Ramsey };
    Kind kind{Kind::Trace};
    std::string abscissa_name;
    std::vector<double> abscissa;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    // Checks strictly increasing abscissa and matching column lengths.
    void validate() const;
};

std::string to_string(ExperimentResult::Kind kind);

} // namespace nmq
