// test_config.cpp — config parsing, validation, round trip, presets

#include <doctest.h>

#include <cmath>

#include "nmq/config.hpp"
#include "nmq/errors.hpp"
#include "nmq/presets.hpp"

using namespace nmq;

namespace {

const char* kMinimal = R"(# comment
[run]
name = "demo"   # trailing comment

[[bath]]
kind = "ohmic"
omega_c = 3
g_o = 1e-4
)";

ConfigError error_of(const std::string& text) {
    try {
        parse_config(text, "test.toml");
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a config error");
    return ConfigError("");
}

} // namespace

TEST_CASE("TOML subset parser") {
    const toml::Document d = toml::parse("[a]\nx = 1.5\ns = \"q\\\"uote\" # c\nb = true\nv = [1, 2.5, -3]\n[[t]]\ny = inf\n[[t]]\ny = 2\n");
    REQUIRE(d.tables.size() == 4);
    CHECK(std::get<double>(d.tables[1].find("x")->value) == 1.5);
    CHECK(std::get<std::string>(d.tables[1].find("s")->value) == "q\"uote");
    CHECK(std::get<bool>(d.tables[1].find("b")->value));
    CHECK(std::get<std::vector<double>>(d.tables[1].find("v")->value) == std::vector<double>{1, 2.5, -3});
    CHECK(std::isinf(std::get<double>(d.tables[2].find("y")->value)));
    CHECK(d.tables[3].array_element);
    CHECK_THROWS_AS(toml::parse("[a]\nx = \n"), ConfigError);
    CHECK_THROWS_AS(toml::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(toml::parse("[a]\n[a]\n"), ConfigError);
    CHECK_THROWS_AS(toml::parse("[a\n"), ConfigError);
    CHECK_THROWS_AS(toml::parse("[a]\nx = \"open\n"), ConfigError);
    CHECK_THROWS_AS(toml::parse("[a]\nx = 1.2.3\n"), ConfigError);
}

TEST_CASE("minimal config and defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.name == "demo");
    REQUIRE(c.baths.size() == 1);
    CHECK(c.baths[0].label == "ohmic");
    CHECK(c.baths[0].omega_c == 3.0);
    CHECK(c.baths[0].coupling.kind == CouplingKind::GOhmic);
    CHECK(std::isinf(c.baths[0].beta));
    CHECK(c.solver.rtol == 1e-11);
    // g_O = kappa R e^{-1/omega_c}
    CHECK(coupling_kappa(c.baths[0], c.circuit) == doctest::Approx(1e-4 * std::exp(1.0 / 3.0)));
}

TEST_CASE("diagnostics name the field and line") {
    const ConfigError a = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"gaussian\"\ng_o = 1\n");
    CHECK(a.field() == "bath[0].kind");
    CHECK(a.line() == 4);
    CHECK(std::string(a.what()).find("gaussian") != std::string::npos);

    const ConfigError b = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"ohmic\"\ng_o = 1\nkappa = 2\n");
    CHECK(b.field() == "bath[0].kappa");

    const ConfigError c = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"ohmic\"\n");
    CHECK(c.field() == "bath[0].coupling");

    const ConfigError d = error_of(std::string(kMinimal) + "[grid]\nt_max = 0\n");
    CHECK(d.field() == "grid.t_max");
    CHECK(d.line() == 10);

    const ConfigError e = error_of(std::string(kMinimal) + "[solver]\nrtol = -1\n");
    CHECK(e.field() == "solver.rtol");

    const ConfigError f = error_of(std::string(kMinimal) + "[grid]\nbogus = 1\n");
    CHECK(f.field() == "grid.bogus");

    const ConfigError g = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"ohmic\"\nalpha = 0.5\ng_o = 1\n");
    CHECK(g.field() == "bath[0].alpha");

    const ConfigError h = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"one_over_f\"\ng_o = 1\n");
    CHECK(h.field() == "bath[0].g_o");

    const ConfigError i = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"one_over_f\"\nbeta = 3\ng_f = 1\n");
    CHECK(i.field() == "bath[0].omega_ir");

    const ConfigError j = error_of("[run]\nname = \"x\"\n[[bath]]\nkind = \"ohmic\"\ncharge_squared = 1\n");
    CHECK(j.field() == "bath[0].charge_squared");

    const ConfigError k = error_of("[nonsense]\n");
    CHECK(k.field() == "nonsense");

    const ConfigError l = error_of("[run]\nname = \"x\"\n");
    CHECK(l.field() == "bath");
}

TEST_CASE("circuit-derived coupling") {
    const RunConfig c = parse_config(
        "[run]\nname = \"c\"\n[[bath]]\nkind = \"impedance\"\nresistance = 0.02\nC_e = 0.1\nC_J = 1\ncharge_squared = 0.5\n"
        "[circuit]\nE_C = 1\nE_J = 64\nC_e = 1\nC_J = 8\nC_g = 1\n");
    REQUIRE(c.circuit.has_value());
    CHECK(coupling_kappa(c.baths[0], c.circuit) == doctest::Approx(0.5 * 0.4 * 0.4));
    const BathSpectrum s = make_spectrum(c.baths[0]);
    CHECK(s.kind_name() == "impedance");
}

TEST_CASE("round trip: to_toml re-parses to an identical config") {
    for (const Preset& p : presets()) {
        const std::string once = to_toml(p.config);
        const RunConfig again = parse_config(once);
        CHECK(to_toml(again) == once);
    }
    RunConfig c = parse_config(kMinimal);
    c.baths[0].beta = 0.1234567890123456789;
    c.state.rho01_re = 0.3;
    c.state.rho01_im = -0.1;
    c.ramsey.frame = RamseyFrame::Rotating;
    c.spectrum.window = Window::None;
    const RunConfig back = parse_config(to_toml(c));
    CHECK(back.baths[0].beta == c.baths[0].beta);
    CHECK(back.ramsey.frame == RamseyFrame::Rotating);
    CHECK(back.spectrum.window == Window::None);
    CHECK(to_toml(back) == to_toml(c));
}

TEST_CASE("tolerance scaling") {
    RunConfig c = parse_config(kMinimal);
    scale_tolerances(c, 10.0);
    CHECK(c.solver.rtol == doctest::Approx(1e-10));
    CHECK(c.solver.me_atol == doctest::Approx(1e-12));
    CHECK_THROWS_AS(scale_tolerances(c, 0.0), ConfigError);
}

TEST_CASE("presets: sorted, validated, parameter echo") {
    const auto& all = presets();
    std::vector<std::string> names;
    for (const auto& p : all) names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"fig2-f", "fig2-ohmic", "fig3", "fig4a", "fig4b", "fig5"});
    for (const auto& p : all) CHECK_NOTHROW(validate(p.config));

    const RunConfig& f5 = find_preset("fig5").config;
    REQUIRE(f5.baths.size() == 2);
    CHECK(f5.baths[0].kind == "ohmic");
    CHECK(f5.baths[0].omega_c == 3.0);
    CHECK(f5.baths[0].coupling.value == 1e-4);
    CHECK(f5.baths[1].alpha == 0.95);
    CHECK(f5.baths[1].coupling.kind == CouplingKind::GOneOverF);
    CHECK(f5.baths[1].coupling.value == 1e-4);

    const RunConfig& f4a = find_preset("fig4a").config;
    CHECK(f4a.baths[0].coupling.value == 1e-3);
    CHECK(f4a.baths[0].alpha == 0.95);
    CHECK(f4a.state.rho01_re == 0.5);

    const RunConfig& f2 = find_preset("fig2-ohmic").config;
    CHECK(f2.baths[0].omega_c == 5.0);
    CHECK(f2.baths[0].coupling.value == 1e-4);

    CHECK_THROWS_AS(find_preset("fig9"), ConfigError);
}
