#pragma once
// Dielectric response at imaginary frequency and the Matsubara ladder.

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "constants.hpp"
#include "error.hpp"
#include "toml.hpp"

namespace curvecp {

struct ImaginaryFrequency {
    double xi = 0.0;    // eV
    double kappa = 0.0; // 1/um

    static ImaginaryFrequency from_xi(double xi) {
        if (!(xi >= 0.0)) throw Error(Errc::NegativeFrequency, "xi = " + std::to_string(xi));
        return {xi, xi / hbar_c};
    }
    static ImaginaryFrequency from_kappa(double kappa) { return from_xi(kappa * hbar_c); }
};

struct Oscillator {
    double omega = 0.0; // eV
    double f = 0.0;     // eV^2
    double g = 0.0;     // eV
};

struct DrudePlusOscillators {
    double omega_p = 0.0;
    double gamma = 0.0;
    std::vector<Oscillator> oscillators;
};
struct OscillatorsOnly {
    std::vector<Oscillator> oscillators;
};
struct DebyeSingle {
    double eps_inf = 1.0;
    double eps_static = 1.0;
    double omega_uv = 1.0;
};
struct TwoBand {
    double c_ir = 0.0, omega_ir = 1.0, c_uv = 0.0, omega_uv = 1.0;
};
struct Constant {
    double eps = 1.0;
    double mu = 1.0;
};
struct PerfectConductor {};

using MaterialModel = std::variant<DrudePlusOscillators, OscillatorsOnly, DebyeSingle, TwoBand, Constant, PerfectConductor>;

inline constexpr double pec_sentinel = std::numeric_limits<double>::infinity();

inline bool is_pec(const MaterialModel& m) { return std::holds_alternative<PerfectConductor>(m); }
inline bool is_drude(const MaterialModel& m) { return std::holds_alternative<DrudePlusOscillators>(m); }
inline bool is_pec_value(double eps) { return std::isinf(eps); }

namespace detail {
inline double oscillator_sum(const std::vector<Oscillator>& os, double xi) {
    double s = 0.0;
    for (auto& o : os) s += o.f / (o.omega * o.omega + o.g * xi + xi * xi);
    return s;
}
} // namespace detail

// Returns pec_sentinel for PerfectConductor.
inline double permittivity(const MaterialModel& model, const ImaginaryFrequency& freq) {
    const double xi = freq.xi;
    if (!(xi >= 0.0)) throw Error(Errc::NegativeFrequency, "xi = " + std::to_string(xi));
    struct Visitor {
        double xi;
        double operator()(const DrudePlusOscillators& m) const {
            if (xi == 0.0) throw Error(Errc::StaticDrudeDivergence, "Drude permittivity at xi = 0");
            return 1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma)) + detail::oscillator_sum(m.oscillators, xi);
        }
        double operator()(const OscillatorsOnly& m) const { return 1.0 + detail::oscillator_sum(m.oscillators, xi); }
        double operator()(const DebyeSingle& m) const {
            return m.eps_inf + (m.eps_static - m.eps_inf) / (1.0 + xi * xi / (m.omega_uv * m.omega_uv));
        }
        double operator()(const TwoBand& m) const {
            return 1.0 + m.c_ir / (1.0 + xi * xi / (m.omega_ir * m.omega_ir)) +
                   m.c_uv / (1.0 + xi * xi / (m.omega_uv * m.omega_uv));
        }
        double operator()(const Constant& m) const { return m.eps; }
        double operator()(const PerfectConductor&) const { return pec_sentinel; }
    };
    return std::visit(Visitor{xi}, model);
}

inline double permeability(const MaterialModel& model, const ImaginaryFrequency&) {
    if (auto* c = std::get_if<Constant>(&model)) return c->mu;
    return 1.0;
}

// Permittivity with the Drude static divergence mapped to the PEC sentinel.
inline double permittivity_or_pec(const MaterialModel& model, const ImaginaryFrequency& freq) {
    if (freq.xi == 0.0 && is_drude(model)) return pec_sentinel;
    return permittivity(model, freq);
}

struct MediumResponse {
    double eps0 = 1.0, mu0 = 1.0;
    double eps1 = 1.0, mu1 = 1.0; // eps1 may be pec_sentinel

    bool body_pec() const { return is_pec_value(eps1); }
    static MediumResponse pec(double eps0 = 1.0, double mu0 = 1.0) { return {eps0, mu0, pec_sentinel, 1.0}; }
};

struct MaterialPair {
    MaterialModel medium = Constant{};
    MaterialModel body = PerfectConductor{};

    MediumResponse at(const ImaginaryFrequency& f) const {
        if (is_pec(medium)) throw Error(Errc::PECUnsupportedSector, "embedding medium cannot be a perfect conductor");
        if (f.xi == 0.0 && is_drude(medium)) throw Error(Errc::StaticDrudeDivergence, "Drude embedding medium");
        return {permittivity(medium, f), permeability(medium, f), permittivity_or_pec(body, f),
                is_pec(body) ? 1.0 : permeability(body, f)};
    }
};

struct FiniteTemperature {
    double T = 300.0; // K
};
struct ZeroTemperature {};
using ThermalState = std::variant<FiniteTemperature, ZeroTemperature>;

inline bool is_zero_temperature(const ThermalState& t) { return std::holds_alternative<ZeroTemperature>(t); }

inline double matsubara_spacing(double T) { return 2.0 * pi * k_boltzmann * T; }

inline std::vector<ImaginaryFrequency> matsubara_ladder(const ThermalState& thermal, int n_max) {
    auto* ft = std::get_if<FiniteTemperature>(&thermal);
    if (!ft) throw Error(Errc::ZeroTemperature, "Matsubara ladder is undefined at T = 0");
    if (n_max < 0) throw Error(Errc::NegativeFrequency, "n_max < 0");
    const double step = matsubara_spacing(ft->T);
    std::vector<ImaginaryFrequency> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out.push_back(ImaginaryFrequency::from_xi(n * step));
    return out;
}

inline MaterialModel builtin(const std::string& name) {
    if (name == "Au" || name == "gold") {
        return DrudePlusOscillators{9.0, 0.035,
                                    {{3.05, 7.091, 0.75},
                                     {4.15, 41.46, 1.85},
                                     {5.4, 2.7, 1.0},
                                     {8.5, 154.7, 7.0},
                                     {13.5, 44.55, 6.0},
                                     {21.5, 309.6, 9.0}}};
    }
    if (name == "Si" || name == "silicon") return DebyeSingle{1.035, 11.87, 4.34};
    if (name == "polystyrene" || name == "PS")
        return OscillatorsOnly{{{6.35, 14.6, 0.65}, {14.0, 96.9, 5.0}, {11.0, 44.4, 3.5}, {20.1, 136.9, 11.5}}};
    if (name == "bromobenzene" || name == "Br") return TwoBand{2.967, 0.360, 1.335, 8.465};
    if (name == "vacuum" || name == "V") return Constant{1.0, 1.0};
    if (name == "PEC") return PerfectConductor{};
    throw Error(Errc::UnknownMaterial, "'" + name + "'");
}

inline std::string model_kind(const MaterialModel& m) {
    switch (m.index()) {
    case 0: return "drude_oscillators";
    case 1: return "oscillators";
    case 2: return "debye";
    case 3: return "two_band";
    case 4: return "constant";
    default: return "pec";
    }
}

// Material table file:
//   kind = "drude_oscillators" | "oscillators" | "debye" | "two_band" | "constant" | "pec"
//   [drude] omega_p_eV, gamma_eV ; [[oscillators]] omega_eV, f_eV2, g_eV
//   [debye] eps_inf, eps_static, omega_uv_eV ; [two_band] c_ir, omega_ir_eV, c_uv, omega_uv_eV
//   [constant] eps, mu
inline toml::Value material_to_toml(const MaterialModel& m) {
    using toml::Value;
    Value root = Value::table();
    root.set("kind", Value::of(model_kind(m)));
    auto put_osc = [&](const std::vector<Oscillator>& os) {
        Value a = Value::array();
        a.array_of_tables = true;
        for (auto& o : os) {
            Value t = Value::table();
            t.set("omega_eV", Value::of(o.omega));
            t.set("f_eV2", Value::of(o.f));
            t.set("g_eV", Value::of(o.g));
            a.arr.push_back(t);
        }
        root.set("oscillators", a);
    };
    if (auto* d = std::get_if<DrudePlusOscillators>(&m)) {
        Value t = Value::table();
        t.set("omega_p_eV", Value::of(d->omega_p));
        t.set("gamma_eV", Value::of(d->gamma));
        root.set("drude", t);
        put_osc(d->oscillators);
    } else if (auto* o = std::get_if<OscillatorsOnly>(&m)) {
        put_osc(o->oscillators);
    } else if (auto* s = std::get_if<DebyeSingle>(&m)) {
        Value t = Value::table();
        t.set("eps_inf", Value::of(s->eps_inf));
        t.set("eps_static", Value::of(s->eps_static));
        t.set("omega_uv_eV", Value::of(s->omega_uv));
        root.set("debye", t);
    } else if (auto* b = std::get_if<TwoBand>(&m)) {
        Value t = Value::table();
        t.set("c_ir", Value::of(b->c_ir));
        t.set("omega_ir_eV", Value::of(b->omega_ir));
        t.set("c_uv", Value::of(b->c_uv));
        t.set("omega_uv_eV", Value::of(b->omega_uv));
        root.set("two_band", t);
    } else if (auto* c = std::get_if<Constant>(&m)) {
        Value t = Value::table();
        t.set("eps", Value::of(c->eps));
        t.set("mu", Value::of(c->mu));
        root.set("constant", t);
    }
    return root;
}

namespace detail {
inline double need(const toml::Value& t, const std::string& table, const std::string& key) {
    const toml::Value* v = t.find(key);
    if (!v) throw Error(Errc::ConfigError, "missing key '" + table + "." + key + "'");
    return v->as_double(table + "." + key);
}
inline const toml::Value& need_table(const toml::Value& root, const std::string& name) {
    const toml::Value* v = root.find(name);
    if (!v || !v->is_table()) throw Error(Errc::ConfigError, "missing table [" + name + "]");
    return *v;
}
inline std::vector<Oscillator> read_osc(const toml::Value& root) {
    std::vector<Oscillator> out;
    const toml::Value* a = root.find("oscillators");
    if (!a) return out;
    if (!a->array_of_tables) throw Error(Errc::ConfigError, "'oscillators' must be [[oscillators]] tables");
    for (auto& t : a->arr)
        out.push_back({need(t, "oscillators", "omega_eV"), need(t, "oscillators", "f_eV2"), need(t, "oscillators", "g_eV")});
    return out;
}
} // namespace detail

inline void validate_material(const MaterialModel& m) {
    auto bad = [](const std::string& what) { throw Error(Errc::ConfigError, "invalid material: " + what); };
    auto check_osc = [&](const std::vector<Oscillator>& os) {
        for (auto& o : os)
            if (!(o.omega > 0 && o.f >= 0 && o.g >= 0)) bad("oscillator needs omega > 0, f >= 0, g >= 0");
    };
    if (auto* d = std::get_if<DrudePlusOscillators>(&m)) {
        if (!(d->omega_p > 0 && d->gamma > 0)) bad("drude needs omega_p > 0, gamma > 0");
        check_osc(d->oscillators);
    } else if (auto* o = std::get_if<OscillatorsOnly>(&m)) {
        check_osc(o->oscillators);
    } else if (auto* s = std::get_if<DebyeSingle>(&m)) {
        if (!(s->eps_static >= s->eps_inf && s->eps_inf >= 1 && s->omega_uv > 0)) bad("debye needs eps_static >= eps_inf >= 1");
    } else if (auto* b = std::get_if<TwoBand>(&m)) {
        if (!(b->c_ir >= 0 && b->c_uv >= 0 && b->omega_ir > 0 && b->omega_uv > 0)) bad("two_band parameters");
    } else if (auto* c = std::get_if<Constant>(&m)) {
        if (!(c->eps >= 1 && c->mu >= 1 && std::isfinite(c->eps) && std::isfinite(c->mu))) bad("constant needs finite eps, mu >= 1");
    }
}

inline MaterialModel material_from_toml(const toml::Value& root) {
    const toml::Value* k = root.find("kind");
    if (!k) throw Error(Errc::ConfigError, "material table needs 'kind'");
    const std::string& kind = k->as_string("kind");
    MaterialModel m;
    if (kind == "drude_oscillators") {
        auto& d = detail::need_table(root, "drude");
        m = DrudePlusOscillators{detail::need(d, "drude", "omega_p_eV"), detail::need(d, "drude", "gamma_eV"),
                                 detail::read_osc(root)};
    } else if (kind == "oscillators") {
        m = OscillatorsOnly{detail::read_osc(root)};
    } else if (kind == "debye") {
        auto& d = detail::need_table(root, "debye");
        m = DebyeSingle{detail::need(d, "debye", "eps_inf"), detail::need(d, "debye", "eps_static"),
                        detail::need(d, "debye", "omega_uv_eV")};
    } else if (kind == "two_band") {
        auto& d = detail::need_table(root, "two_band");
        m = TwoBand{detail::need(d, "two_band", "c_ir"), detail::need(d, "two_band", "omega_ir_eV"),
                    detail::need(d, "two_band", "c_uv"), detail::need(d, "two_band", "omega_uv_eV")};
    } else if (kind == "constant") {
        auto& d = detail::need_table(root, "constant");
        const toml::Value* mu = d.find("mu");
        m = Constant{detail::need(d, "constant", "eps"), mu ? mu->as_double("constant.mu") : 1.0};
    } else if (kind == "pec") {
        m = PerfectConductor{};
    } else {
        throw Error(Errc::ConfigError, "unknown material kind '" + kind + "'");
    }
    validate_material(m);
    return m;
}

inline std::string material_to_string(const MaterialModel& m) { return toml::dump(material_to_toml(m)); }
inline MaterialModel material_from_string(const std::string& s) { return material_from_toml(toml::parse(s)); }

} // namespace curvecp
