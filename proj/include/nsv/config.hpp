#pragma once

// Scenario configuration: named presets and the flat key=value file format.
//
//   # comment
//   preset = torus-relaxation
//   cells = 128
//   init.rho.amp = 0.2
//
// Keys may appear in any order; `preset` is applied first and the remaining
// keys override it. Unknown keys are rejected.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/error.hpp"

namespace nsv {

class UnknownKey : public Error {
public:
    UnknownKey(std::size_t line, const std::string& name)
        : Error(ErrorKind::UnknownKey, "line " + std::to_string(line) + ": unknown key '" +
                                           name + "'"),
          name_(name), line_(line) {}

    const std::string& name() const noexcept { return name_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string name_;
    std::size_t line_;
};

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline Scenario preset_torus_relaxation() {
    Scenario s;
    s.name = "torus-relaxation";
    s.domain = DomainSpec{Torus{1.0}, 256};
    s.params = PhysParams{1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.init.rho = FieldRecipe{Profile::Sine, 1.0, 0.3};
    s.init.u = FieldRecipe{Profile::Sine, 0.0, 0.5};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.mass = 1.0;
    s.init.f.v_lo = -1.0;
    s.init.f.v_hi = 1.0;
    s.particles_per_cell = 16;
    s.v_cells = 32;
    s.v_support = 1.0;
    s.dt_cfl_fraction = 0.5;
    s.t_end = 20.0;
    s.output_every = 10;
    return s;
}

inline Scenario preset_torus_two_stream() {
    Scenario s;
    s.name = "torus-two-stream";
    s.domain = DomainSpec{Torus{1.0}, 128};
    s.params = PhysParams{1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.init.rho = FieldRecipe{Profile::Constant, 1.0};
    s.init.u = FieldRecipe{Profile::Constant, 0.0};
    s.init.f.profile = KineticProfile::TwoStream;
    s.init.f.mass = 1.0;
    s.init.f.beam_velocity = 0.6;
    s.init.f.half_width = 0.2;
    s.particles_per_cell = 16;
    s.v_cells = 32;
    s.v_support = 1.0;
    s.t_end = 10.0;
    s.output_every = 10;
    return s;
}

inline Scenario preset_line_relaxation() {
    Scenario s;
    s.name = "line-relaxation";
    s.domain = DomainSpec{Line{-20.0, 20.0}, 512};
    s.params = PhysParams{1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.init.rho = FieldRecipe{Profile::Bump, 1.0, 0.3, 1, 0.0, 1.0};
    s.init.u = FieldRecipe{Profile::Bump, 0.0, 0.3, 1, 0.0, 1.0};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.mass = 1.0;
    s.init.f.x_lo = -2.0;
    s.init.f.x_hi = 2.0;
    s.init.f.v_lo = -0.5;
    s.init.f.v_hi = 0.5;
    s.particles_per_cell = 4;
    s.v_cells = 16;
    s.v_support = 0.5;
    s.t_end = 10.0;
    s.output_every = 10;
    return s;
}

inline Scenario preset_fluid_mms() {
    Scenario s;
    s.name = "fluid-mms";
    s.domain = DomainSpec{Torus{1.0}, 64};
    s.params = PhysParams{1.0, 1.4, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.init.rho = FieldRecipe{Profile::Sine, 2.0, 0.5};
    s.init.u = FieldRecipe{Profile::Sine, 0.0, 0.5};
    s.init.manufactured = "traveling-wave";
    s.dt_cfl_fraction = 0.5;
    s.t_end = 0.25;
    s.output_every = 10;
    return s;
}

inline Scenario preset_two_resolution_q() {
    Scenario s;
    s.name = "two-resolution-q";
    s.domain = DomainSpec{Torus{1.0}, 32};
    s.params = PhysParams{1.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0};
    s.init.rho = FieldRecipe{Profile::Sine, 1.0, 0.2};
    s.init.u = FieldRecipe{Profile::Sine, 0.0, 0.3};
    s.init.f.profile = KineticProfile::Smooth;
    s.init.f.mass = 0.5;
    s.init.f.half_width = 0.8;
    s.init.f.modulation = 0.5;
    s.init.lattice_cells = 32;
    s.particles_per_cell = 8;
    s.v_cells = 16;
    s.v_support = 1.0;
    s.t_end = 2.0;
    s.output_every = 10;
    return s;
}

struct PresetEntry {
    std::string_view name;
    std::string_view summary;
    Scenario (*make)();
};

inline const std::vector<PresetEntry>& preset_registry() {
    static const std::vector<PresetEntry> reg = {
        {"torus-relaxation", "unit torus, N=256, box f0 on |v|<=1, relaxation to t=20",
         preset_torus_relaxation},
        {"torus-two-stream", "unit torus, uniform fluid at rest, two particle beams at +-0.6",
         preset_torus_two_stream},
        {"line-relaxation", "line [-20,20] with far-field density 1, compact particle cloud",
         preset_line_relaxation},
        {"fluid-mms", "fluid only with manufactured forcing, for convergence order",
         preset_fluid_mms},
        {"two-resolution-q", "coarse torus run sharing a particle lattice across resolutions",
         preset_two_resolution_q},
    };
    return reg;
}

inline Scenario make_preset(std::string_view name) {
    for (const auto& e : preset_registry())
        if (e.name == name) return e.make();
    throw Error(ErrorKind::UnknownCase, "no preset named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// key=value parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline double parse_double(const std::string& v, std::size_t line, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(line, key + ": expected a number, got '" + v + "'");
    return out;
}

inline long long parse_int(const std::string& v, std::size_t line, const std::string& key) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& v, std::size_t line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(line, key + ": expected true or false, got '" + v + "'");
}

inline Profile parse_profile(const std::string& v, std::size_t line, const std::string& key) {
    if (v == "constant") return Profile::Constant;
    if (v == "sine") return Profile::Sine;
    if (v == "bump") return Profile::Bump;
    throw ConfigError(line, key + ": expected constant, sine or bump, got '" + v + "'");
}

inline KineticProfile parse_kinetic_profile(const std::string& v, std::size_t line,
                                            const std::string& key) {
    if (v == "none") return KineticProfile::None;
    if (v == "box") return KineticProfile::Box;
    if (v == "two-stream") return KineticProfile::TwoStream;
    if (v == "smooth") return KineticProfile::Smooth;
    throw ConfigError(line,
                      key + ": expected none, box, two-stream or smooth, got '" + v + "'");
}

/// Domain keys are collected first and assembled once all lines are read.
struct DomainDraft {
    bool line = false;
    double length = 1.0;
    double x_min = -1.0;
    double x_max = 1.0;
    bool rho_tilde_given = false;
};

using Setter = std::function<void(Scenario&, DomainDraft&, const std::string&, std::size_t,
                                  const std::string&)>;

inline Setter real(double Scenario::*m) {
    return [m](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
               const std::string& k) { s.*m = parse_double(v, l, k); };
}

inline Setter param(double PhysParams::*m) {
    return [m](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
               const std::string& k) { s.params.*m = parse_double(v, l, k); };
}

inline Setter integer(int Scenario::*m) {
    return [m](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
               const std::string& k) { s.*m = static_cast<int>(parse_int(v, l, k)); };
}

inline void add_field_keys(std::map<std::string, Setter>& t, const std::string& prefix,
                           FieldRecipe InitRecipe::*field) {
    t[prefix + ".profile"] = [field](Scenario& s, DomainDraft&, const std::string& v,
                                     std::size_t l, const std::string& k) {
        (s.init.*field).profile = parse_profile(v, l, k);
    };
    auto num = [&](const char* name, double FieldRecipe::*m) {
        t[prefix + "." + name] = [field, m](Scenario& s, DomainDraft&, const std::string& v,
                                            std::size_t l, const std::string& k) {
            (s.init.*field).*m = parse_double(v, l, k);
        };
    };
    num("base", &FieldRecipe::base);
    num("amp", &FieldRecipe::amp);
    num("center", &FieldRecipe::center);
    num("width", &FieldRecipe::width);
    t[prefix + ".wavenumber"] = [field](Scenario& s, DomainDraft&, const std::string& v,
                                        std::size_t l, const std::string& k) {
        (s.init.*field).wavenumber = static_cast<int>(parse_int(v, l, k));
    };
}

inline const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["domain"] = [](Scenario&, DomainDraft& d, const std::string& v, std::size_t l,
                         const std::string&) {
            if (v == "torus") d.line = false;
            else if (v == "line") d.line = true;
            else throw ConfigError(l, "domain: expected torus or line, got '" + v + "'");
        };
        t["length"] = [](Scenario&, DomainDraft& d, const std::string& v, std::size_t l,
                         const std::string& k) { d.length = parse_double(v, l, k); };
        t["x_min"] = [](Scenario&, DomainDraft& d, const std::string& v, std::size_t l,
                        const std::string& k) { d.x_min = parse_double(v, l, k); };
        t["x_max"] = [](Scenario&, DomainDraft& d, const std::string& v, std::size_t l,
                        const std::string& k) { d.x_max = parse_double(v, l, k); };
        t["rho_tilde"] = [](Scenario& s, DomainDraft& d, const std::string& v, std::size_t l,
                            const std::string& k) {
            s.params.rho_tilde = parse_double(v, l, k);
            d.rho_tilde_given = true;
        };
        t["cells"] = [](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
                        const std::string& k) {
            s.domain.cells = static_cast<int>(parse_int(v, l, k));
        };
        t["particles_per_cell"] = integer(&Scenario::particles_per_cell);
        t["v_cells"] = integer(&Scenario::v_cells);
        t["v_support"] = real(&Scenario::v_support);
        t["A"] = param(&PhysParams::A);
        t["gamma"] = param(&PhysParams::gamma);
        t["mu0"] = param(&PhysParams::mu0);
        t["mu1"] = param(&PhysParams::mu1);
        t["beta"] = param(&PhysParams::beta);
        t["kappa"] = param(&PhysParams::kappa);
        t["dt"] = real(&Scenario::dt);
        t["dt_cfl_fraction"] = real(&Scenario::dt_cfl_fraction);
        t["t_end"] = real(&Scenario::t_end);
        t["coupling"] = [](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
                           const std::string&) {
            if (v == "strang") s.coupling = CouplingMode::Strang;
            else if (v == "picard") s.coupling = CouplingMode::Picard;
            else throw ConfigError(l, "coupling: expected strang or picard, got '" + v + "'");
        };
        t["picard_tol"] = real(&Scenario::picard_tol);
        t["picard_max_iter"] = integer(&Scenario::picard_max_iter);
        t["output_every"] = integer(&Scenario::output_every);
        t["seed"] = [](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
                       const std::string& k) {
            s.seed = static_cast<std::uint64_t>(parse_int(v, l, k));
        };

        add_field_keys(t, "init.rho", &InitRecipe::rho);
        add_field_keys(t, "init.u", &InitRecipe::u);
        t["init.f.profile"] = [](Scenario& s, DomainDraft&, const std::string& v,
                                 std::size_t l, const std::string& k) {
            s.init.f.profile = parse_kinetic_profile(v, l, k);
        };
        auto fnum = [&t](const char* name, double KineticRecipe::*m) {
            t[std::string("init.f.") + name] = [m](Scenario& s, DomainDraft&,
                                                   const std::string& v, std::size_t l,
                                                   const std::string& k) {
                s.init.f.*m = parse_double(v, l, k);
            };
        };
        fnum("mass", &KineticRecipe::mass);
        fnum("level", &KineticRecipe::level);
        fnum("x_lo", &KineticRecipe::x_lo);
        fnum("x_hi", &KineticRecipe::x_hi);
        fnum("v_lo", &KineticRecipe::v_lo);
        fnum("v_hi", &KineticRecipe::v_hi);
        fnum("beam_velocity", &KineticRecipe::beam_velocity);
        fnum("half_width", &KineticRecipe::half_width);
        fnum("v_center", &KineticRecipe::v_center);
        fnum("modulation", &KineticRecipe::modulation);
        t["init.lattice_cells"] = [](Scenario& s, DomainDraft&, const std::string& v,
                                     std::size_t l, const std::string& k) {
            s.init.lattice_cells = static_cast<int>(parse_int(v, l, k));
        };
        t["init.jitter"] = [](Scenario& s, DomainDraft&, const std::string& v, std::size_t l,
                              const std::string& k) { s.init.jitter = parse_double(v, l, k); };
        t["init.manufactured"] = [](Scenario& s, DomainDraft&, const std::string& v,
                                    std::size_t, const std::string&) {
            s.init.manufactured = v == "none" ? "" : v;
        };
        t["init.oracle_test"] = [](Scenario& s, DomainDraft&, const std::string& v,
                                   std::size_t l, const std::string& k) {
            s.init.oracle_test = parse_bool(v, l, k);
        };
        return t;
    }();
    return table;
}

} // namespace detail

/// Every accepted key, sorted (the `preset` key included).
inline std::vector<std::string> config_keys() {
    std::vector<std::string> keys{"preset"};
    for (const auto& [k, _] : detail::key_table()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    return keys;
}

/// Parses config text. Errors carry the 1-based line number; validation
/// failures of the assembled scenario are reported against the line that set
/// the offending key (0 when it came from a default).
inline Scenario parse_config_text(std::string_view text) {
    struct Entry {
        std::size_t line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string body = detail::trim(std::string_view(raw).substr(0, hash));
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected key = value");
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        if (value.empty()) throw ConfigError(lineno, key + ": empty value");
        entries.push_back({lineno, std::move(key), std::move(value)});
    }

    Scenario s;
    detail::DomainDraft draft;
    std::map<std::string, std::size_t> seen;
    for (const auto& e : entries) {
        if (e.key != "preset") continue;
        try {
            s = make_preset(e.value);
        } catch (const Error& err) {
            throw ConfigError(e.line, err.what());
        }
        seen["preset"] = e.line;
    }
    if (s.domain.is_torus()) {
        draft.line = false;
        draft.length = s.domain.length();
    } else {
        draft.line = true;
        draft.x_min = s.domain.x_min();
        draft.x_max = s.domain.x_max();
        draft.rho_tilde_given = true;
    }

    const auto& table = detail::key_table();
    for (const auto& e : entries) {
        if (e.key == "preset") continue;
        auto it = table.find(e.key);
        if (it == table.end()) throw UnknownKey(e.line, e.key);
        if (seen.count(e.key))
            throw ConfigError(e.line, e.key + ": duplicate key (first set on line " +
                                          std::to_string(seen[e.key]) + ")");
        seen[e.key] = e.line;
        it->second(s, draft, e.value, e.line, e.key);
    }

    if (draft.line) {
        if (!draft.rho_tilde_given)
            throw ConfigError(seen.count("domain") ? seen["domain"] : 0,
                              "domain=line requires rho_tilde");
        s.domain.kind = Line{draft.x_min, draft.x_max};
    } else {
        s.domain.kind = Torus{draft.length};
    }

    try {
        validate_scenario(s);
    } catch (const InvalidParameter& err) {
        std::string key = err.name();
        for (const char* prefix : {"", "init."}) {
            if (seen.count(prefix + key)) {
                throw ConfigError(seen[prefix + key], err.what());
            }
        }
        if (key == "x_min" || key == "x_max" || key == "length") key = "domain";
        throw ConfigError(seen.count(key) ? seen[key] : 0, err.what());
    } catch (const Error& err) {
        std::size_t l = 0;
        for (const char* k : {"x_min", "x_max", "length", "domain"})
            if (seen.count(k)) l = std::max(l, seen[k]);
        throw ConfigError(l, err.what());
    }
    return s;
}

inline Scenario parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace nsv
