// config.cpp — TOML-subset parser, RunConfig mapping and validation

#include "nmq/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nmq/errors.hpp"

namespace nmq {

namespace toml {

const Entry* Table::find(std::string_view key) const {
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

namespace {

[[noreturn]] void syntax_error(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw ConfigError(msg.str(), {}, line);
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Removes a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && quoted) {
            ++i;
        } else if (s[i] == '"') {
            quoted = !quoted;
        } else if (s[i] == '#' && !quoted) {
            return s.substr(0, i);
        }
    }
    return s;
}

double parse_number(std::string_view tok, int line) {
    const std::string t(tok);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    if (t.empty() || t.find_first_not_of("+-.0123456789eE") != std::string::npos) {
        syntax_error(line, "cannot parse value '" + t + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) syntax_error(line, "cannot parse number '" + t + "'");
    return v;
}

std::string parse_string(std::string_view s, int line) {
    // s starts with a quote
    std::string out;
    std::size_t i = 1;
    for (; i < s.size() && s[i] != '"'; ++i) {
        if (s[i] == '\\') {
            if (++i >= s.size()) break;
            switch (s[i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: syntax_error(line, std::string("unknown escape \\") + s[i]);
            }
        } else {
            out += s[i];
        }
    }
    if (i >= s.size()) syntax_error(line, "unterminated string");
    if (!trim(s.substr(i + 1)).empty()) syntax_error(line, "trailing characters after string");
    return out;
}

Value parse_value(std::string_view s, int line) {
    s = trim(s);
    if (s.empty()) syntax_error(line, "missing value");
    if (s.front() == '"') return parse_string(s, line);
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.front() == '[') {
        if (s.back() != ']') syntax_error(line, "unterminated array");
        std::vector<double> values;
        std::string_view body = trim(s.substr(1, s.size() - 2));
        while (!body.empty()) {
            const std::size_t comma = body.find(',');
            values.push_back(parse_number(trim(body.substr(0, comma)), line));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));
        }
        return values;
    }
    return parse_number(s, line);
}

} // namespace

Document parse(std::string_view text) {
    Document doc;
    doc.tables.push_back(Table{});
    std::set<std::string> seen_tables;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            const bool array = line.starts_with("[[");
            const std::size_t open = array ? 2 : 1;
            const std::string_view close = array ? "]]" : "]";
            if (!line.ends_with(close) || line.size() <= open + close.size()) {
                syntax_error(line_no, "malformed table header");
            }
            const std::string name(trim(line.substr(open, line.size() - open - close.size())));
            if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char)) {
                syntax_error(line_no, "invalid table name '" + name + "'");
            }
            if (!array && !seen_tables.insert(name).second) {
                syntax_error(line_no, "table [" + name + "] defined twice");
            }
            doc.tables.push_back(Table{name, array, line_no, {}});
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) syntax_error(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty() || !std::all_of(key.begin(), key.end(), is_name_char)) {
            syntax_error(line_no, "invalid key '" + key + "'");
        }
        Table& table = doc.tables.back();
        if (table.find(key)) syntax_error(line_no, "duplicate key '" + key + "'");
        table.entries.push_back(Entry{key, parse_value(line.substr(eq + 1), line_no), line_no});
    }
    return doc;
}

} // namespace toml

namespace {

[[noreturn]] void field_error(const std::string& source, int line, const std::string& field,
                              const std::string& what) {
    std::ostringstream msg;
    msg << source;
    if (line > 0) msg << ":" << line;
    msg << ": field '" << field << "': " << what;
    throw ConfigError(msg.str(), field, line);
}

// Typed access to one table with unknown-key detection.
class Reader {
public:
    Reader(const toml::Table& t, std::string prefix, std::string source)
        : table_(t), prefix_(std::move(prefix)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return table_.find(key) != nullptr; }

    int line_of(const std::string& key) const {
        const toml::Entry* e = table_.find(key);
        return e ? e->line : table_.line;
    }

    std::string field(const std::string& key) const { return prefix_ + key; }

    void number(const std::string& key, double& out) {
        if (const toml::Entry* e = take(key)) {
            if (!std::holds_alternative<double>(e->value)) fail(*e, "expected a number");
            out = std::get<double>(e->value);
        }
    }

    void count(const std::string& key, std::size_t& out) {
        if (const toml::Entry* e = take(key)) {
            if (!std::holds_alternative<double>(e->value)) fail(*e, "expected an integer");
            const double v = std::get<double>(e->value);
            if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) fail(*e, "expected a nonnegative integer");
            out = static_cast<std::size_t>(v);
        }
    }

    void text(const std::string& key, std::string& out) {
        if (const toml::Entry* e = take(key)) {
            if (!std::holds_alternative<std::string>(e->value)) fail(*e, "expected a string");
            out = std::get<std::string>(e->value);
        }
    }

    // Keys present in the table but never read.
    void reject_unknown() const {
        for (const auto& e : table_.entries) {
            if (!used_.count(e.key)) fail(e, "unknown key");
        }
    }

    [[noreturn]] void fail(const toml::Entry& e, const std::string& what) const {
        field_error(source_, e.line, prefix_ + e.key, what);
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        field_error(source_, line_of(key), prefix_ + key, what);
    }

private:
    const toml::Entry* take(const std::string& key) {
        used_.insert(key);
        return table_.find(key);
    }

    const toml::Table& table_;
    std::string prefix_;
    std::string source_;
    std::set<std::string> used_;
};

const std::map<std::string, std::set<std::string>>& kind_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"ohmic", {"R", "omega_c", "g_o"}},
        {"one_over_f", {"A", "alpha", "omega_ir", "g_f"}},
        {"impedance", {"resistance", "C_e", "C_J", "C_g"}},
        {"tabulated", {"file"}},
    };
    return keys;
}

BathConfig read_bath(const toml::Table& t, std::size_t index, const std::string& source) {
    const std::string prefix = "bath[" + std::to_string(index) + "].";
    Reader r(t, prefix, source);
    BathConfig b;
    r.text("kind", b.kind);
    if (b.kind.empty()) field_error(source, t.line, prefix + "kind", "missing bath kind");
    const auto& kinds = kind_keys();
    const auto it = kinds.find(b.kind);
    if (it == kinds.end()) {
        r.fail("kind", "unknown bath kind '" + b.kind +
                           "' (expected ohmic, one_over_f, impedance or tabulated)");
    }
    // Parameters belonging to another kind are rejected rather than ignored.
    for (const auto& [kind, keys] : kinds) {
        if (kind == b.kind) continue;
        for (const auto& key : keys) {
            if (r.has(key) && !it->second.count(key)) {
                r.fail(key, "not a parameter of bath kind '" + b.kind + "'");
            }
        }
    }
    r.text("label", b.label);
    r.number("R", b.R);
    r.number("omega_c", b.omega_c);
    r.number("A", b.A);
    r.number("alpha", b.alpha);
    r.number("omega_ir", b.omega_ir);
    r.number("resistance", b.resistance);
    r.number("C_e", b.C_e);
    r.number("C_J", b.C_J);
    r.number("C_g", b.C_g);
    r.text("file", b.file);
    r.number("beta", b.beta);

    const std::pair<const char*, CouplingKind> couplings[] = {
        {"g_o", CouplingKind::GOhmic},
        {"g_f", CouplingKind::GOneOverF},
        {"kappa", CouplingKind::Kappa},
        {"charge_squared", CouplingKind::ChargeSquared},
    };
    int found = 0;
    for (const auto& [key, kind] : couplings) {
        if (!r.has(key)) continue;
        if (++found > 1) r.fail(key, "more than one coupling given (use exactly one of g_o, g_f, kappa, charge_squared)");
        b.coupling.kind = kind;
        r.number(key, b.coupling.value);
    }
    if (found == 0) {
        field_error(source, t.line, prefix + "coupling",
                    "no coupling given (use exactly one of g_o, g_f, kappa, charge_squared)");
    }
    r.reject_unknown();
    if (b.label.empty()) b.label = b.kind;
    return b;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

const char* coupling_key(CouplingKind k) {
    switch (k) {
        case CouplingKind::GOhmic: return "g_o";
        case CouplingKind::GOneOverF: return "g_f";
        case CouplingKind::Kappa: return "kappa";
        case CouplingKind::ChargeSquared: return "charge_squared";
    }
    return "kappa";
}

} // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
    const toml::Document doc = toml::parse(text);
    RunConfig c;
    const toml::Table& root = doc.tables.front();
    if (!root.entries.empty()) {
        const auto& e = root.entries.front();
        field_error(source, e.line, e.key, "keys must appear inside a table such as [run]");
    }
    for (std::size_t i = 1; i < doc.tables.size(); ++i) {
        const toml::Table& t = doc.tables[i];
        const std::string prefix = t.name + ".";
        if (t.name == "bath") {
            if (!t.array_element) field_error(source, t.line, "bath", "use [[bath]] for bath blocks");
            c.baths.push_back(read_bath(t, c.baths.size(), source));
            continue;
        }
        if (t.array_element) field_error(source, t.line, t.name, "only [[bath]] may repeat");
        Reader r(t, prefix, source);
        if (t.name == "run") {
            r.text("name", c.name);
            r.text("output_dir", c.output_dir);
        } else if (t.name == "circuit") {
            TransmonCircuit tc;
            r.number("E_C", tc.E_C);
            r.number("E_J", tc.E_J);
            r.number("C_e", tc.C_e);
            r.number("C_J", tc.C_J);
            r.number("C_g", tc.C_g);
            c.circuit = tc;
        } else if (t.name == "grid") {
            r.number("t_max", c.grid.t_max);
            r.count("n_points", c.grid.n_points);
            r.text("spacing", c.grid.spacing);
            r.number("t_min", c.grid.t_min);
        } else if (t.name == "state") {
            r.number("rho00", c.state.rho00);
            r.number("rho01_re", c.state.rho01_re);
            r.number("rho01_im", c.state.rho01_im);
        } else if (t.name == "spectrum") {
            std::string window = c.spectrum.window == Window::Hann ? "hann" : "none";
            r.text("window", window);
            if (window == "hann") {
                c.spectrum.window = Window::Hann;
            } else if (window == "none") {
                c.spectrum.window = Window::None;
            } else {
                r.fail("window", "expected \"hann\" or \"none\"");
            }
            std::size_t pad = static_cast<std::size_t>(c.spectrum.zero_padding);
            r.count("zero_padding", pad);
            if (pad > 64) r.fail("zero_padding", "at most 64");
            c.spectrum.zero_padding = static_cast<int>(pad);
            r.number("omega_max", c.spectrum.omega_max);
        } else if (t.name == "ramsey") {
            r.number("periods", c.ramsey.periods);
            r.count("n_points", c.ramsey.n_points);
            std::string frame = c.ramsey.frame == RamseyFrame::Lab ? "lab" : "rotating";
            r.text("frame", frame);
            if (frame == "lab") {
                c.ramsey.frame = RamseyFrame::Lab;
            } else if (frame == "rotating") {
                c.ramsey.frame = RamseyFrame::Rotating;
            } else {
                r.fail("frame", "expected \"lab\" or \"rotating\"");
            }
        } else if (t.name == "solver") {
            r.number("rtol", c.solver.rtol);
            r.number("atol", c.solver.atol);
            r.number("max_step", c.solver.max_step);
            r.number("norm_tolerance", c.solver.norm_tolerance);
            r.number("me_rtol", c.solver.me_rtol);
            r.number("me_atol", c.solver.me_atol);
        } else if (t.name == "verify") {
            r.number("horizon_t2", c.verify.horizon_t2);
            r.count("n_points", c.verify.n_points);
            r.number("map_tolerance", c.verify.map_tolerance);
        } else if (t.name == "provenance") {
            continue;  // written into output headers; informational only
        } else {
            field_error(source, t.line, t.name, "unknown table [" + t.name + "]");
        }
        r.reject_unknown();
    }

    // Labels name output files, so they must be distinct.
    std::set<std::string> labels;
    for (std::size_t i = 0; i < c.baths.size(); ++i) {
        if (!labels.insert(c.baths[i].label).second) {
            field_error(source, 0, "bath[" + std::to_string(i) + "].label",
                        "duplicate bath label '" + c.baths[i].label + "'");
        }
    }

    try {
        validate(c);
    } catch (const ConfigError& e) {
        // Attach the source name and, where possible, a line.
        int line = 0;
        std::size_t bath_index = 0;
        for (const auto& t : doc.tables) {
            std::string prefix = t.name + ".";
            if (t.name == "bath") prefix = "bath[" + std::to_string(bath_index++) + "].";
            for (const auto& entry : t.entries) {
                if (e.field() == prefix + entry.key) line = entry.line;
            }
        }
        std::ostringstream msg;
        msg << source;
        if (line > 0) msg << ":" << line;
        msg << ": " << e.what();
        throw ConfigError(msg.str(), e.field(), line);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", "--config");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& field, const std::string& what) {
        throw ConfigError("field '" + field + "': " + what, field);
    };
    if (c.name.empty() || !std::all_of(c.name.begin(), c.name.end(), [](char ch) {
            return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
        })) {
        fail("run.name", "must be a nonempty file-name-safe string");
    }
    if (c.baths.empty()) fail("bath", "at least one [[bath]] block is required");
    for (std::size_t i = 0; i < c.baths.size(); ++i) {
        const BathConfig& b = c.baths[i];
        const std::string p = "bath[" + std::to_string(i) + "].";
        if (!std::all_of(b.label.begin(), b.label.end(), [](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
            })) {
            fail(p + "label", "use letters, digits, '_' or '-'");
        }
        if (!(b.beta > 0.0)) fail(p + "beta", "inverse temperature must be > 0 (inf for T=0)");
        if (b.kind == "ohmic") {
            if (!(b.R >= 0.0) || !std::isfinite(b.R)) fail(p + "R", "must be >= 0");
            if (!(b.omega_c > 0.0) || !std::isfinite(b.omega_c)) fail(p + "omega_c", "must be > 0");
        } else if (b.kind == "one_over_f") {
            if (!(b.A >= 0.0) || !std::isfinite(b.A)) fail(p + "A", "must be >= 0");
            if (!(b.alpha > 0.0 && b.alpha < 1.0)) fail(p + "alpha", "must lie in (0, 1)");
            if (!(b.omega_ir >= 0.0)) fail(p + "omega_ir", "must be >= 0");
            if (std::isfinite(b.beta) && !(b.omega_ir > 0.0)) {
                fail(p + "omega_ir", "finite temperature 1/f baths need omega_ir > 0");
            }
        } else if (b.kind == "impedance") {
            if (!(b.resistance >= 0.0)) fail(p + "resistance", "must be >= 0");
            if (!(b.C_e >= 0.0)) fail(p + "C_e", "must be >= 0");
            if (!(b.C_J >= 0.0)) fail(p + "C_J", "must be >= 0");
            if (!(b.C_g >= 0.0)) fail(p + "C_g", "must be >= 0");
        } else if (b.kind == "tabulated") {
            if (b.file.empty()) fail(p + "file", "tabulated baths need a CSV file");
        } else {
            fail(p + "kind", "unknown bath kind '" + b.kind + "'");
        }
        const std::string key = p + coupling_key(b.coupling.kind);
        if (!(b.coupling.value >= 0.0) || !std::isfinite(b.coupling.value)) {
            fail(key, "coupling must be finite and >= 0");
        }
        if (b.coupling.kind == CouplingKind::GOhmic && b.kind != "ohmic") {
            fail(key, "g_o applies to ohmic baths only");
        }
        if (b.coupling.kind == CouplingKind::GOhmic && b.R == 0.0) {
            fail(p + "R", "g_o needs R > 0");
        }
        if (b.coupling.kind == CouplingKind::GOneOverF && b.kind != "one_over_f") {
            fail(key, "g_f applies to one_over_f baths only");
        }
        if (b.coupling.kind == CouplingKind::GOneOverF && b.A == 0.0) {
            fail(p + "A", "g_f needs A > 0");
        }
        if (b.coupling.kind == CouplingKind::ChargeSquared && !c.circuit) {
            fail(key, "charge_squared needs a [circuit] block");
        }
    }
    if (c.circuit) {
        const TransmonCircuit& tc = *c.circuit;
        if (!(tc.E_C > 0.0)) fail("circuit.E_C", "must be > 0");
        if (!(tc.E_J > 0.0)) fail("circuit.E_J", "must be > 0");
        if (!(tc.C_e >= 0.0)) fail("circuit.C_e", "must be >= 0");
        if (!(tc.C_J >= 0.0)) fail("circuit.C_J", "must be >= 0");
        if (!(tc.C_g >= 0.0)) fail("circuit.C_g", "must be >= 0");
        if (!(tc.C_e + tc.C_J + tc.C_g > 0.0)) fail("circuit.C_J", "total capacitance must be > 0");
    }
    if (!(c.grid.t_max > 0.0) || !std::isfinite(c.grid.t_max)) fail("grid.t_max", "must be > 0");
    if (c.grid.n_points < 2) fail("grid.n_points", "must be >= 2");
    if (c.grid.spacing != "uniform" && c.grid.spacing != "log") {
        fail("grid.spacing", "expected \"uniform\" or \"log\"");
    }
    if (!(c.grid.t_min > 0.0 && c.grid.t_min < c.grid.t_max)) {
        fail("grid.t_min", "must lie in (0, t_max)");
    }
    const double r = std::hypot(c.state.rho01_re, c.state.rho01_im);
    if (!(c.state.rho00 >= 0.0 && c.state.rho00 <= 1.0) ||
        r * r > c.state.rho00 * (1.0 - c.state.rho00) + 1e-12) {
        fail("state.rho01_re", "initial state is not a valid density matrix");
    }
    if (c.spectrum.zero_padding < 1) fail("spectrum.zero_padding", "must be >= 1");
    if (!(c.spectrum.omega_max > 0.0)) fail("spectrum.omega_max", "must be > 0");
    if (!(c.ramsey.periods > 0.0) || !std::isfinite(c.ramsey.periods)) fail("ramsey.periods", "must be > 0");
    if (c.ramsey.n_points < 2) fail("ramsey.n_points", "must be >= 2");
    const std::pair<const char*, double> tolerances[] = {
        {"solver.rtol", c.solver.rtol},
        {"solver.atol", c.solver.atol},
        {"solver.max_step", c.solver.max_step},
        {"solver.norm_tolerance", c.solver.norm_tolerance},
        {"solver.me_rtol", c.solver.me_rtol},
        {"solver.me_atol", c.solver.me_atol},
        {"verify.map_tolerance", c.verify.map_tolerance},
        {"verify.horizon_t2", c.verify.horizon_t2},
    };
    for (const auto& [name, v] : tolerances) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(name, "must be > 0");
    }
    if (c.verify.n_points < 2) fail("verify.n_points", "must be >= 2");
}

void scale_tolerances(RunConfig& c, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("--tolerance-scale must be a positive number", "--tolerance-scale");
    }
    c.solver.rtol *= scale;
    c.solver.atol *= scale;
    c.solver.me_rtol *= scale;
    c.solver.me_atol *= scale;
}

std::string to_toml(const RunConfig& c) {
    std::ostringstream o;
    o << "[run]\n";
    o << "name = " << quote(c.name) << "\n";
    if (!c.output_dir.empty()) o << "output_dir = " << quote(c.output_dir) << "\n";
    for (const BathConfig& b : c.baths) {
        o << "\n[[bath]]\n";
        o << "label = " << quote(b.label) << "\n";
        o << "kind = " << quote(b.kind) << "\n";
        if (b.kind == "ohmic") {
            o << "R = " << fmt(b.R) << "\n";
            o << "omega_c = " << fmt(b.omega_c) << "\n";
        } else if (b.kind == "one_over_f") {
            o << "A = " << fmt(b.A) << "\n";
            o << "alpha = " << fmt(b.alpha) << "\n";
            o << "omega_ir = " << fmt(b.omega_ir) << "\n";
        } else if (b.kind == "impedance") {
            o << "resistance = " << fmt(b.resistance) << "\n";
            o << "C_e = " << fmt(b.C_e) << "\n";
            o << "C_J = " << fmt(b.C_J) << "\n";
            o << "C_g = " << fmt(b.C_g) << "\n";
        } else {
            o << "file = " << quote(b.file) << "\n";
        }
        o << "beta = " << fmt(b.beta) << "\n";
        o << coupling_key(b.coupling.kind) << " = " << fmt(b.coupling.value) << "\n";
    }
    if (c.circuit) {
        o << "\n[circuit]\n";
        o << "E_C = " << fmt(c.circuit->E_C) << "\n";
        o << "E_J = " << fmt(c.circuit->E_J) << "\n";
        o << "C_e = " << fmt(c.circuit->C_e) << "\n";
        o << "C_J = " << fmt(c.circuit->C_J) << "\n";
        o << "C_g = " << fmt(c.circuit->C_g) << "\n";
    }
    o << "\n[grid]\n";
    o << "t_max = " << fmt(c.grid.t_max) << "\n";
    o << "n_points = " << c.grid.n_points << "\n";
    o << "spacing = " << quote(c.grid.spacing) << "\n";
    o << "t_min = " << fmt(c.grid.t_min) << "\n";
    o << "\n[state]\n";
    o << "rho00 = " << fmt(c.state.rho00) << "\n";
    o << "rho01_re = " << fmt(c.state.rho01_re) << "\n";
    o << "rho01_im = " << fmt(c.state.rho01_im) << "\n";
    o << "\n[spectrum]\n";
    o << "window = " << quote(c.spectrum.window == Window::Hann ? "hann" : "none") << "\n";
    o << "zero_padding = " << c.spectrum.zero_padding << "\n";
    o << "omega_max = " << fmt(c.spectrum.omega_max) << "\n";
    o << "\n[ramsey]\n";
    o << "periods = " << fmt(c.ramsey.periods) << "\n";
    o << "n_points = " << c.ramsey.n_points << "\n";
    o << "frame = " << quote(c.ramsey.frame == RamseyFrame::Lab ? "lab" : "rotating") << "\n";
    o << "\n[solver]\n";
    o << "rtol = " << fmt(c.solver.rtol) << "\n";
    o << "atol = " << fmt(c.solver.atol) << "\n";
    o << "max_step = " << fmt(c.solver.max_step) << "\n";
    o << "norm_tolerance = " << fmt(c.solver.norm_tolerance) << "\n";
    o << "me_rtol = " << fmt(c.solver.me_rtol) << "\n";
    o << "me_atol = " << fmt(c.solver.me_atol) << "\n";
    o << "\n[verify]\n";
    o << "horizon_t2 = " << fmt(c.verify.horizon_t2) << "\n";
    o << "n_points = " << c.verify.n_points << "\n";
    o << "map_tolerance = " << fmt(c.verify.map_tolerance) << "\n";
    return o.str();
}

BathSpectrum make_spectrum(const BathConfig& b) {
    if (b.kind == "ohmic") return BathSpectrum::ohmic(b.R, b.omega_c, b.beta);
    if (b.kind == "one_over_f") return BathSpectrum::one_over_f(b.A, b.alpha, b.beta, b.omega_ir);
    if (b.kind == "impedance") {
        const double R = b.resistance;
        return BathSpectrum::impedance([R](double) { return std::complex<double>(R, 0.0); }, b.C_e,
                                       b.C_J, b.C_g, b.beta);
    }
    if (b.kind == "tabulated") {
        try {
            return load_tabulated_csv(b.file, b.beta);
        } catch (const std::exception& e) {
            throw ConfigError("field 'bath." + b.label + ".file': " + e.what(), "file");
        }
    }
    throw ConfigError("unknown bath kind '" + b.kind + "'", "kind");
}

double coupling_kappa(const BathConfig& b, const std::optional<TransmonCircuit>& circuit) {
    switch (b.coupling.kind) {
        case CouplingKind::GOhmic:
            // g_O = kappa R exp(-omega_q / omega_c) with omega_q = 1
            return b.coupling.value * std::exp(1.0 / b.omega_c) / b.R;
        case CouplingKind::GOneOverF:
            // g_f = kappa A / omega_q^(alpha + 1)
            return b.coupling.value / b.A;
        case CouplingKind::Kappa:
            return b.coupling.value;
        case CouplingKind::ChargeSquared: {
            if (!circuit) throw ConfigError("charge_squared needs a [circuit] block", "circuit");
            const double eta = coupling_eta(*circuit);
            return b.coupling.value * eta * eta;
        }
    }
    return 0.0;
}

std::string to_string(CouplingKind kind) { return coupling_key(kind); }

} // namespace nmq
