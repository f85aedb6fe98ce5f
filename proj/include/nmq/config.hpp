// config.hpp — Run configuration files (a TOML subset) and their validation
//
// Accepted syntax: `# comments`, `[table]`, `[[bath]]` array tables, and
// `key = value` with value one of: number (including inf), "string", true,
// false, or a single-line array of numbers. All frequencies are in units of
// omega_q and all times in units of 1/omega_q.

#pragma once

#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nmq/bath_spectrum.hpp"
#include "nmq/circuit.hpp"
#include "nmq/experiments.hpp"

namespace nmq {

namespace toml {

using Value = std::variant<bool, double, std::string, std::vector<double>>;

struct Entry {
    std::string key;
    Value value;
    int line{0};
};

struct Table {
    std::string name;  // empty for the root table
    bool array_element{false};
    int line{0};
    std::vector<Entry> entries;

    const Entry* find(std::string_view key) const;
};

struct Document {
    std::vector<Table> tables;  // root table first
};

// Throws ConfigError with the line number on syntax errors.
Document parse(std::string_view text);

} // namespace toml

enum class CouplingKind { GOhmic, GOneOverF, Kappa, ChargeSquared };

struct CouplingSpec {
    CouplingKind kind{CouplingKind::Kappa};
    double value{0.0};
};

struct BathConfig {
    std::string label;
    std::string kind;  // ohmic | one_over_f | impedance | tabulated
    double R{1.0};
    double omega_c{5.0};
    double A{1.0};
    double alpha{0.95};
    double omega_ir{0.0};
    // impedance: a resistor Z(w) = resistance with the capacitances below
    double resistance{0.0};
    double C_e{0.0};
    double C_J{0.0};
    double C_g{0.0};
    std::string file;  // tabulated: two-column CSV (omega, J)
    double beta{kZeroTemperature};
    CouplingSpec coupling;
};

struct GridConfig {
    double t_max{100.0};
    std::size_t n_points{1001};
    std::string spacing{"uniform"};  // uniform | log
    double t_min{0.01};              // first nonzero time for log spacing
};

struct StateConfig {
    double rho00{0.5};
    double rho01_re{0.5};
    double rho01_im{0.0};
};

struct SpectrumConfig {
    Window window{Window::Hann};
    int zero_padding{8};
    double omega_max{5.0};
};

struct RamseyConfig {
    double periods{6.0};
    std::size_t n_points{601};
    RamseyFrame frame{RamseyFrame::Lab};
};

struct SolverConfig {
    double rtol{1e-11};
    double atol{1e-13};
    double max_step{std::numbers::pi / 8.0};
    double norm_tolerance{1e-6};
    double me_rtol{1e-12};
    double me_atol{1e-13};
};

struct VerifyConfig {
    double horizon_t2{10.0};  // map vs master equation over [0, horizon_t2 * T2]
    std::size_t n_points{4001};
    double map_tolerance{1e-6};
};

struct RunConfig {
    std::string name{"run"};
    std::string output_dir;
    std::vector<BathConfig> baths;
    std::optional<TransmonCircuit> circuit;
    GridConfig grid;
    StateConfig state;
    SpectrumConfig spectrum;
    RamseyConfig ramsey;
    SolverConfig solver;
    VerifyConfig verify;
};

// Parses and validates. `source` names the file in diagnostics.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Canonical text form; parse_config(to_toml(c)) reproduces c exactly.
std::string to_toml(const RunConfig& c);

// Throws ConfigError naming the offending field.
void validate(const RunConfig& c);

// Multiplies every solver tolerance by `scale` (> 0).
void scale_tolerances(RunConfig& c, double scale);

BathSpectrum make_spectrum(const BathConfig& b);

// kappa = e^2 eta^2 implied by the bath's coupling specification.
double coupling_kappa(const BathConfig& b, const std::optional<TransmonCircuit>& circuit);

std::string to_string(CouplingKind kind);

} // namespace nmq
