// pipeline.cpp — rates → evolve → experiments, per bath, with file output

#include "nmq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nmq/errors.hpp"
#include "nmq/experiments.hpp"
#include "nmq/oracle.hpp"
#include "nmq/propagator.hpp"
#include "nmq/rates.hpp"

namespace nmq {

namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

// Carries the stage name out of a failing computation.
struct StageFailure {
    std::string stage;
    std::string label;
    std::string message;
};

template <class F>
auto stage(const std::string& name, const std::string& label, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageFailure{name, label, e.what()};
    }
}

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

struct BathContext {
    const BathConfig* config;
    BathSpectrum spectrum;
    double kappa;
    MarkovLimits markov;
    double markov_rate;  // kappa (gamma_+^M + gamma_-^M)
};

BathContext prepare(const RunConfig& c, const BathConfig& b) {
    BathSpectrum spec = make_spectrum(b);
    const double kappa = coupling_kappa(b, c.circuit);
    const MarkovLimits m = stage("markov-limits", b.label, [&] { return markovian_limits(spec, 1.0); });
    return {&b, std::move(spec), kappa, m, kappa * (m.gamma_plus + m.gamma_minus)};
}

Provenance base_provenance(Command cmd, const BathContext& ctx) {
    Provenance p{
        {"nmq_version", quoted(kVersion)},
        {"command", quoted(to_string(cmd))},
        {"bath", quoted(ctx.config->label)},
        {"units", quoted("omega_q = 1, time in 1/omega_q")},
        {"kappa", num(ctx.kappa)},
        {"kernel_method", quoted(ctx.spectrum.has_closed_form() ? "closed_form" : "quadrature")},
        {"markov_gamma_plus", num(ctx.markov.gamma_plus)},
        {"markov_gamma_minus", num(ctx.markov.gamma_minus)},
        {"markov_lamb_shift", num(ctx.markov.lamb_shift)},
        {"markov_rate", num(ctx.markov_rate)},
    };
    if (ctx.markov_rate > 0.0) p.emplace_back("t2_markov", num(2.0 / ctx.markov_rate));
    return p;
}

RateTable table_for(const BathContext& ctx, double t_end) {
    return stage("rates", ctx.config->label, [&] {
        return build_rate_table(ctx.spectrum, 1.0, default_time_grid(t_end), ctx.kappa);
    });
}

PropagatorOptions propagator_options(const SolverConfig& s) {
    PropagatorOptions o;
    o.rtol = s.rtol;
    o.atol = s.atol;
    o.max_step = s.max_step;
    o.norm_tolerance = s.norm_tolerance;
    return o;
}

Trajectory evolve_on(const BathContext& ctx, const RateTable& rt, const std::vector<double>& grid,
                     const SolverConfig& s) {
    return stage("propagate", ctx.config->label,
                 [&] { return propagate(rt, ctx.kappa, 1.0, grid, propagator_options(s)); });
}

QubitState initial_state(const StateConfig& s) {
    Eigen::Matrix2cd rho;
    const std::complex<double> r01(s.rho01_re, s.rho01_im);
    rho << s.rho00, r01, std::conj(r01), 1.0 - s.rho00;
    return QubitState(rho);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

fs::path csv_path(const fs::path& dir, const RunConfig& c, Command cmd, const BathConfig& b) {
    return dir / (c.name + "_" + to_string(cmd) + "_" + b.label + ".csv");
}

std::vector<Column> rate_columns(const RateTable& rt, const std::vector<double>& grid) {
    std::vector<Column> cols{{"t", {}}, {"gamma_plus", {}}, {"gamma_minus", {}},
                             {"lamb_shift", {}}, {"gamma_tilde_1", {}}, {"gamma_tilde_2", {}}};
    for (double t : grid) {
        const RateSample r = rt(t);
        const CanonicalRates cr = canonical_rates(r.gamma_plus, r.gamma_minus, r.lamb_shift);
        cols[0].values.push_back(t);
        cols[1].values.push_back(r.gamma_plus);
        cols[2].values.push_back(r.gamma_minus);
        cols[3].values.push_back(r.lamb_shift);
        cols[4].values.push_back(cr.first);
        cols[5].values.push_back(cr.second);
    }
    return cols;
}

struct CpSummary {
    bool necessary{true};
    bool sufficient{true};
    bool choi_psd{true};
    double min_lambda{0.0};
    double min_lambda_t{0.0};
    double first_necessary_failure{-1.0};
    double first_sufficient_failure{-1.0};
};

std::vector<Column> cp_columns(const Trajectory& traj, CpSummary& summary) {
    std::vector<Column> cols{{"t", {}},        {"Gamma", {}},         {"lambda_1", {}},
                             {"lambda_2", {}}, {"lambda_3", {}},      {"lambda_4", {}},
                             {"necessary_ok", {}}, {"sufficient_ok", {}}, {"sufficient_margin", {}}};
    for (const PropagatorState& ps : traj.states) {
        const CpReport cp = cp_certificate(ps);
        cols[0].values.push_back(ps.t);
        cols[1].values.push_back(ps.Gamma);
        for (int k = 0; k < 4; ++k) cols[2 + k].values.push_back(cp.lambda[k]);
        cols[6].values.push_back(cp.necessary_ok ? 1.0 : 0.0);
        cols[7].values.push_back(cp.sufficient_ok ? 1.0 : 0.0);
        cols[8].values.push_back(cp.sufficient_margin);
        for (double l : cp.lambda) {
            if (l < summary.min_lambda) {
                summary.min_lambda = l;
                summary.min_lambda_t = ps.t;
            }
        }
        if (!cp.necessary_ok && summary.necessary) {
            summary.necessary = false;
            summary.first_necessary_failure = ps.t;
        }
        if (!cp.sufficient_ok && summary.sufficient) {
            summary.sufficient = false;
            summary.first_sufficient_failure = ps.t;
        }
    }
    summary.choi_psd = summary.min_lambda >= -kCpTolerance;
    return cols;
}

std::string verdict(const CpSummary& s) {
    std::ostringstream v;
    v << "necessary " << (s.necessary ? "PASS" : "FAIL");
    if (!s.necessary) v << " (first failure at t=" << num(s.first_necessary_failure) << ")";
    v << ", sufficient " << (s.sufficient ? "PASS" : "FAIL");
    if (!s.sufficient) v << " (first failure at t=" << num(s.first_sufficient_failure) << ")";
    v << ", choi spectrum " << (s.choi_psd ? "PASS" : "FAIL") << " (min eigenvalue "
      << num(s.min_lambda) << " at t=" << num(s.min_lambda_t) << ")";
    return v.str();
}

// Fixed, well-spread initial states for the oracle comparison.
std::vector<QubitState> oracle_states() {
    return {QubitState::from_bloch(0.3, -0.5, 0.6), QubitState::from_bloch(0.9, 0.1, -0.2),
            QubitState::from_bloch(-0.4, 0.7, 0.1), QubitState::from_bloch(0.0, 0.0, -1.0),
            QubitState::from_bloch(0.5, 0.5, 0.5)};
}

int run_bath(Command cmd, const RunConfig& c, const BathContext& ctx, const fs::path& dir,
             RunOutcome& outcome, std::ostream& out, nlohmann::ordered_json& verify_json) {
    const BathConfig& b = *ctx.config;
    Provenance prov = base_provenance(cmd, ctx);
    if (c.circuit) prov.emplace_back("circuit_qubit_frequency", num(qubit_frequency(*c.circuit)));
    std::vector<Column> cols;
    int code = kExitOk;

    switch (cmd) {
        case Command::Rates: {
            const std::vector<double> grid = output_grid(c.grid);
            const RateTable rt = table_for(ctx, c.grid.t_max);
            prov.emplace_back("table_nodes", std::to_string(rt.size()));
            cols = stage("rates", b.label, [&] { return rate_columns(rt, grid); });
            break;
        }
        case Command::Evolve:
        case Command::CpCheck: {
            const std::vector<double> grid = output_grid(c.grid);
            const RateTable rt = table_for(ctx, c.grid.t_max);
            const Trajectory traj = evolve_on(ctx, rt, grid, c.solver);
            prov.emplace_back("max_norm_defect", num(traj.max_norm_defect));
            prov.emplace_back("steps", std::to_string(traj.steps));
            CpSummary summary;
            std::vector<Column> cp = cp_columns(traj, summary);
            prov.emplace_back("verdict", quoted(verdict(summary)));
            if (cmd == Command::CpCheck) {
                cols = std::move(cp);
                out << "cp-check " << c.name << "/" << b.label << ": " << verdict(summary) << "\n";
                if (!summary.necessary || !summary.sufficient || !summary.choi_psd) {
                    code = kExitCheckFailed;
                }
                break;
            }
            const SigmaSeries s = sigma_expectations(traj.states, initial_state(c.state));
            cols = {{"t", {}},          {"Gamma", {}},      {"Z", {}},          {"phi", {}},
                    {"re_x_plus", {}},  {"im_x_plus", {}},  {"re_x_minus", {}}, {"im_x_minus", {}}};
            for (const PropagatorState& ps : traj.states) {
                cols[0].values.push_back(ps.t);
                cols[1].values.push_back(ps.Gamma);
                cols[2].values.push_back(ps.Z);
                cols[3].values.push_back(ps.phi);
                cols[4].values.push_back(ps.x_plus.real());
                cols[5].values.push_back(ps.x_plus.imag());
                cols[6].values.push_back(ps.x_minus.real());
                cols[7].values.push_back(ps.x_minus.imag());
            }
            for (std::size_t k = 2; k < cp.size(); ++k) cols.push_back(std::move(cp[k]));
            cols.push_back({"sigma_x", s.x});
            cols.push_back({"sigma_y", s.y});
            cols.push_back({"sigma_z", s.z});
            // Gamma(t)/t relative to the Markovian rate (0 at t = 0, where the rates vanish).
            Column ratio{"gamma_over_markov", {}};
            for (const PropagatorState& ps : traj.states) {
                ratio.values.push_back(ps.t > 0.0 && ctx.markov_rate > 0.0
                                           ? ps.Gamma / (ps.t * ctx.markov_rate)
                                           : 0.0);
            }
            cols.push_back(std::move(ratio));
            break;
        }
        case Command::Spectrum: {
            const std::vector<double> grid = output_grid(c.grid);
            const RateTable rt = table_for(ctx, c.grid.t_max);
            const Trajectory traj = evolve_on(ctx, rt, grid, c.solver);
            const QubitState rho0 = initial_state(c.state);
            const SigmaSeries s = sigma_expectations(traj.states, rho0);
            std::vector<double> markov_x;
            markov_x.reserve(grid.size());
            for (double t : grid) {
                const PropagatorState m = markovian_propagator(
                    ctx.markov.gamma_plus, ctx.markov.gamma_minus, ctx.markov.lamb_shift, ctx.kappa,
                    1.0, t);
                markov_x.push_back(sigma_expectations(m, rho0).x);
            }
            const auto [nm, mk] = stage("spectrum", b.label, [&] {
                return std::make_pair(
                    precession_spectrum(grid, s.x, c.spectrum.window, c.spectrum.zero_padding),
                    precession_spectrum(grid, markov_x, c.spectrum.window, c.spectrum.zero_padding));
            });
            prov.emplace_back("bin_width", num(nm.bin_width));
            cols = {{"omega", {}}, {"fft_non_markovian", {}}, {"fft_markovian", {}}};
            for (std::size_t k = 0; k < nm.omega.size() && nm.omega[k] <= c.spectrum.omega_max; ++k) {
                cols[0].values.push_back(nm.omega[k]);
                cols[1].values.push_back(nm.magnitude[k]);
                cols[2].values.push_back(mk.magnitude[k]);
            }
            break;
        }
        case Command::Ramsey: {
            const double period = 2.0 * pi;
            const double t_end = c.ramsey.periods * period;
            std::vector<double> delays(c.ramsey.n_points);
            for (std::size_t k = 0; k < delays.size(); ++k) {
                delays[k] = k + 1 == delays.size()
                                ? t_end
                                : t_end * static_cast<double>(k) / static_cast<double>(delays.size() - 1);
            }
            const RateTable rt = table_for(ctx, t_end);
            const Trajectory traj = evolve_on(ctx, rt, delays, c.solver);
            prov.emplace_back("frame", quoted(c.ramsey.frame == RamseyFrame::Lab ? "lab" : "rotating"));
            cols = {{"t_over_period", {}}, {"delta_p", {}}, {"p_yy", {}}, {"p_xx", {}}};
            for (const PropagatorState& ps : traj.states) {
                cols[0].values.push_back(ps.t / period);
                cols[1].values.push_back(ramsey_delta_p(ps));
                cols[2].values.push_back(
                    ramsey_protocol_direct(ps.choi, RamseyAxis::Y, ps.t, c.ramsey.frame));
                cols[3].values.push_back(
                    ramsey_protocol_direct(ps.choi, RamseyAxis::X, ps.t, c.ramsey.frame));
            }
            break;
        }
        case Command::Verify: {
            nlohmann::ordered_json j;
            j["label"] = b.label;
            j["kappa"] = ctx.kappa;
            bool ok = true;
            if (ctx.spectrum.has_closed_form()) {
                const double tol = std::holds_alternative<Ohmic>(ctx.spectrum.model()) ? 1e-6 : 1e-5;
                const oracle::OracleReport q = stage("oracle", b.label, [&] {
                    return oracle::quadrature_crosscheck(ctx.spectrum, oracle::log_grid(1e-3, 50.0, 40),
                                                         tol);
                });
                j["quadrature_crosscheck"] = q.to_json();
                ok = ok && q.passed();
                out << "verify " << c.name << "/" << b.label << ": quadrature_crosscheck "
                    << (q.passed() ? "PASS" : "FAIL") << " (max deviation " << num(q.max_deviation)
                    << ", tolerance " << num(tol) << ")\n";
            }
            const double horizon = ctx.markov_rate > 0.0 ? c.verify.horizon_t2 * 2.0 / ctx.markov_rate
                                                         : c.grid.t_max;
            j["horizon"] = horizon;
            std::vector<double> grid(c.verify.n_points);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                grid[k] = horizon * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
            }
            grid.back() = horizon;
            const RateTable rt = table_for(ctx, horizon);
            oracle::MasterEquationOptions me;
            me.rtol = c.solver.me_rtol;
            me.atol = c.solver.me_atol;
            const oracle::OracleReport m = stage("oracle", b.label, [&] {
                return oracle::map_vs_master_equation(rt, ctx.kappa, 1.0, oracle_states(), grid,
                                                      c.verify.map_tolerance, me,
                                                      propagator_options(c.solver));
            });
            j["map_vs_master_equation"] = m.to_json();
            ok = ok && m.passed();
            for (const oracle::OracleCheck& chk : m.checks) {
                out << "verify " << c.name << "/" << b.label << ": " << chk.name << " "
                    << (chk.passed ? "PASS" : "FAIL") << " (value " << num(chk.value)
                    << ", tolerance " << num(chk.tolerance) << ")\n";
            }
            j["passed"] = ok;
            verify_json["baths"].push_back(j);
            return ok ? kExitOk : kExitCheckFailed;
        }
    }

    const fs::path path = csv_path(dir, c, cmd, b);
    stage("output", b.label, [&] {
        write_file(path, format_csv(c, prov, cols));
        return 0;
    });
    outcome.files.push_back(path);
    out << "wrote " << path.string() << "\n";
    return code;
}

} // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "rates") return Command::Rates;
    if (name == "evolve") return Command::Evolve;
    if (name == "cp-check") return Command::CpCheck;
    if (name == "spectrum") return Command::Spectrum;
    if (name == "ramsey") return Command::Ramsey;
    if (name == "verify") return Command::Verify;
    return std::nullopt;
}

std::string to_string(Command c) {
    switch (c) {
        case Command::Rates: return "rates";
        case Command::Evolve: return "evolve";
        case Command::CpCheck: return "cp-check";
        case Command::Spectrum: return "spectrum";
        case Command::Ramsey: return "ramsey";
        case Command::Verify: return "verify";
    }
    return "unknown";
}

std::vector<double> output_grid(const GridConfig& g) {
    std::vector<double> t(g.n_points);
    const std::size_t n = g.n_points;
    if (g.spacing == "log") {
        // 0, then n - 1 geometric points from t_min to t_max
        t[0] = 0.0;
        const double ratio = std::log(g.t_max / g.t_min);
        for (std::size_t k = 1; k < n; ++k) {
            t[k] = n == 2 ? g.t_max
                          : g.t_min * std::exp(ratio * static_cast<double>(k - 1) /
                                               static_cast<double>(n - 2));
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            t[k] = g.t_max * static_cast<double>(k) / static_cast<double>(n - 1);
        }
    }
    t.back() = g.t_max;
    return t;
}

std::string format_csv(const RunConfig& config, const Provenance& provenance,
                       const std::vector<Column>& columns) {
    std::ostringstream o;
    auto comment = [&](const std::string& text) {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) o << (line.empty() ? "#" : "# " + line) << "\n";
    };
    comment(to_toml(config));
    o << "#\n# [provenance]\n";
    for (const auto& [k, v] : provenance) o << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i].name;
    o << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            o << (i ? "," : "") << num(columns[i].values[r]);
        }
        o << "\n";
    }
    return o.str();
}

std::string csv_header_config(std::string_view csv) {
    std::string text;
    std::size_t pos = 0;
    while (pos < csv.size() && csv[pos] == '#') {
        const std::size_t eol = std::min(csv.find('\n', pos), csv.size());
        std::string_view line = csv.substr(pos + 1, eol - pos - 1);
        if (line.starts_with(" ")) line.remove_prefix(1);
        text.append(line);
        text += '\n';
        pos = eol + 1;
    }
    return text;
}

RunOutcome run(Command command, const RunConfig& config, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
    RunOutcome outcome;
    try {
        validate(config);
        if (command == Command::Spectrum) {
            if (config.grid.spacing != "uniform") {
                throw ConfigError("field 'grid.spacing': spectrum needs a uniform time grid",
                                  "grid.spacing");
            }
            if (config.grid.t_max < 20.0 * 2.0 * pi) {
                throw ConfigError("field 'grid.t_max': spectrum needs at least 20 precession periods",
                                  "grid.t_max");
            }
        }
        if (config.circuit) {
            if (auto w = regime_warning(*config.circuit)) err << "warning: " << *w << "\n";
        }
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) {
            throw StageFailure{"output", "", "cannot create output directory '" + out_dir.string() +
                                                 "': " + ec.message()};
        }

        std::vector<BathContext> contexts;
        for (const BathConfig& b : config.baths) contexts.push_back(prepare(config, b));

        nlohmann::ordered_json verify_json;
        verify_json["name"] = config.name;
        verify_json["nmq_version"] = kVersion;
        verify_json["config"] = to_toml(config);
        verify_json["baths"] = nlohmann::ordered_json::array();
        for (const BathContext& ctx : contexts) {
            const int code = run_bath(command, config, ctx, out_dir, outcome, out, verify_json);
            outcome.exit_code = std::max(outcome.exit_code, code);
        }
        if (command == Command::Verify) {
            verify_json["passed"] = outcome.exit_code == kExitOk;
            const fs::path path = out_dir / (config.name + "_verify.json");
            stage("output", "", [&] {
                write_file(path, verify_json.dump(2) + "\n");
                return 0;
            });
            outcome.files.push_back(path);
            out << "verify " << config.name << ": " << (outcome.exit_code == kExitOk ? "PASS" : "FAIL")
                << "\nwrote " << path.string() << "\n";
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        outcome.exit_code = kExitConfig;
    } catch (const StageFailure& f) {
        err << "numerical failure in stage '" << f.stage << "'";
        if (!f.label.empty()) err << " (bath '" << f.label << "')";
        err << ": " << f.message << "\n";
        outcome.exit_code = kExitNumerical;
    }
    return outcome;
}

} // namespace nmq
