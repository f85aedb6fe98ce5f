// nmq.cpp — Command-line front end

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nmq/config.hpp"
#include "nmq/errors.hpp"
#include "nmq/pipeline.hpp"
#include "nmq/presets.hpp"

namespace {

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    double tolerance_scale{1.0};
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Run configuration file");
    sub->add_option("--preset", c.preset, "Built-in parameter set (see list-presets)");
    sub->add_option("--out", c.out, "Output directory (default: $NMQ_OUT_DIR, then [run] output_dir, then .)");
    sub->add_option("--tolerance-scale", c.tolerance_scale, "Multiply the propagator and master-equation rtol/atol");
}

int execute(nmq::Command cmd, const Common& c) {
    try {
        if (c.config.empty() == c.preset.empty()) {
            throw nmq::ConfigError("give exactly one of --config or --preset", "--config");
        }
        nmq::RunConfig config =
            c.preset.empty() ? nmq::load_config(c.config) : nmq::find_preset(c.preset).config;
        nmq::scale_tolerances(config, c.tolerance_scale);
        std::string dir = c.out;
        if (dir.empty()) {
            if (const char* env = std::getenv("NMQ_OUT_DIR"); env && *env) dir = env;
        }
        if (dir.empty()) dir = config.output_dir.empty() ? "." : config.output_dir;
        return nmq::run(cmd, config, dir, std::cout, std::cerr).exit_code;
    } catch (const nmq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return nmq::kExitConfig;
    }
}

int list_presets() {
    for (const nmq::Preset& p : nmq::presets()) {
        std::cout << p.name << "  " << p.description << "\n";
        for (const nmq::BathConfig& b : p.config.baths) {
            std::cout << "    bath " << b.label << ": kind=" << b.kind;
            if (b.kind == "ohmic") std::cout << " omega_c=" << b.omega_c << " R=" << b.R;
            if (b.kind == "one_over_f") std::cout << " alpha=" << b.alpha << " A=" << b.A;
            std::cout << " " << nmq::to_string(b.coupling.kind) << "=" << b.coupling.value
                      << (std::isinf(b.beta) ? " T=0" : "") << "\n";
        }
        std::cout << "    grid: t_max=" << p.config.grid.t_max << " n_points=" << p.config.grid.n_points
                  << " spacing=" << p.config.grid.spacing << "\n";
    }
    return nmq::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian qubit dynamics: rates, dynamical map, CP checks and signatures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nmq::kVersion);

    const std::pair<const char*, const char*> commands[] = {
        {"rates", "Time-dependent rates and canonical rates (CSV)"},
        {"evolve", "Decay, relaxation, phase, coherences, Choi spectrum and Bloch vector (CSV)"},
        {"cp-check", "Complete-positivity certificates with a verdict line (CSV)"},
        {"spectrum", "|FFT| of <sigma_x>, non-Markovian and Markovian (CSV)"},
        {"ramsey", "Ramsey X/Y probability difference over delay (CSV)"},
        {"verify", "Oracle suite: quadrature cross-checks and master-equation comparison (JSON)"},
    };
    Common common;
    std::vector<std::pair<CLI::App*, nmq::Command>> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, common);
        subs.emplace_back(sub, *nmq::parse_command(name));
    }
    CLI::App* lp = app.add_subcommand("list-presets", "Built-in presets and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nmq::kExitConfig;
    }
    if (lp->parsed()) return list_presets();
    for (const auto& [sub, cmd] : subs) {
        if (sub->parsed()) return execute(cmd, common);
    }
    return nmq::kExitConfig;
}
