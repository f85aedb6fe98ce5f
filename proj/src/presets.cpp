// presets.cpp — Figure presets, stored as config text so they parse like user files

#include "nmq/presets.hpp"

#include <algorithm>

#include "nmq/errors.hpp"

namespace nmq {

namespace {

struct Source {
    const char* name;
    const char* description;
    const char* text;
};

// fig2-* horizon: 20 T2 with T2 = 1e4 at coupling 1e-4.
constexpr Source kSources[] = {
    {"fig2-ohmic", "canonical rates, Ohmic bath",
     R"([run]
name = "fig2-ohmic"

[[bath]]
label = "ohmic"
kind = "ohmic"
omega_c = 5
g_o = 1e-4

[grid]
t_max = 2e5
n_points = 2001
spacing = "log"
t_min = 0.01
)"},
    {"fig2-f", "canonical rates, 1/f bath",
     R"([run]
name = "fig2-f"

[[bath]]
label = "one_over_f"
kind = "one_over_f"
alpha = 0.95
g_f = 1e-4

[grid]
t_max = 2e5
n_points = 2001
spacing = "log"
t_min = 0.01
)"},
    {"fig3", "decay function over time, both baths",
     R"([run]
name = "fig3"

[[bath]]
label = "ohmic"
kind = "ohmic"
omega_c = 3
g_o = 1e-4

[[bath]]
label = "one_over_f"
kind = "one_over_f"
alpha = 0.95
g_f = 1e-4

[grid]
t_max = 200
n_points = 4001
)"},
    {"fig4a", "precession spectrum, 1/f bath",
     R"([run]
name = "fig4a"

[[bath]]
label = "one_over_f"
kind = "one_over_f"
alpha = 0.95
g_f = 1e-3

[grid]
t_max = 5000
n_points = 100001

[state]
rho00 = 0.5
rho01_re = 0.5
rho01_im = 0

[spectrum]
window = "hann"
zero_padding = 8
omega_max = 5
)"},
    {"fig4b", "precession spectrum, Ohmic bath",
     R"([run]
name = "fig4b"

[[bath]]
label = "ohmic"
kind = "ohmic"
omega_c = 5
g_o = 1e-3

[grid]
t_max = 5000
n_points = 100001

[state]
rho00 = 0.5
rho01_re = 0.5
rho01_im = 0

[spectrum]
window = "hann"
zero_padding = 8
omega_max = 5
)"},
    {"fig5", "Ramsey X/Y imbalance, both baths",
     R"([run]
name = "fig5"

[[bath]]
label = "ohmic"
kind = "ohmic"
omega_c = 3
g_o = 1e-4

[[bath]]
label = "one_over_f"
kind = "one_over_f"
alpha = 0.95
g_f = 1e-4

[grid]
t_max = 37.699111843077517
n_points = 1201

[ramsey]
periods = 6
n_points = 1201
frame = "lab"
)"},
};

std::vector<Preset> build() {
    std::vector<Preset> out;
    for (const Source& s : kSources) {
        out.push_back({s.name, s.description, s.text,
                       parse_config(s.text, std::string("preset ") + s.name)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Preset& a, const Preset& b) { return a.name < b.name; });
    return out;
}

} // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const Preset& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown preset '" + name + "' (available: " + known + ")", "--preset");
}

} // namespace nmq
