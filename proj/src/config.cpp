#include "curvecp/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curvecp/hash.hpp"

namespace curvecp {

Task task_from_string(const std::string& s) {
    if (s == "epsilon") return Task::Epsilon;
    if (s == "beta") return Task::Beta;
    if (s == "cp") return Task::Cp;
    if (s == "sphere") return Task::Sphere;
    if (s == "stability") return Task::Stability;
    if (s == "validate") return Task::Validate;
    throw Error(Errc::ConfigError, "unknown task '" + s + "'");
}

const char* task_name(Task t) {
    switch (t) {
    case Task::Epsilon: return "epsilon";
    case Task::Beta: return "beta";
    case Task::Cp: return "cp";
    case Task::Sphere: return "sphere";
    case Task::Stability: return "stability";
    default: return "validate";
    }
}

ThermalState RunConfig::thermal() const {
    if (T == 0.0) return ZeroTemperature{};
    return FiniteTemperature{T};
}

ParticlePolarizability RunConfig::particle() const {
    if (ellipsoid) return Ellipsoid{particle_material, volume, n_z};
    return GenericUniaxial::constant(alpha_perp_tilde, alpha_3_tilde);
}

std::string config_hash(const std::string& text) { return fingerprint(text); }

std::vector<double> log_grid(double lo, double hi, int points) {
    if (points == 1) return {lo};
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = i + 1 == points ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return g;
}

std::vector<double> lin_grid(double lo, double hi, int points) {
    if (points == 1) return {lo};
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    // exact zero for symmetric grids
    for (auto& v : g)
        if (std::abs(v) < 1e-14 * std::max(std::abs(lo), std::abs(hi))) v = 0.0;
    return g;
}

namespace {

using toml::Value;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"", {"task", "output_dir", "cache_dir", "allow_extrapolation", "materials", "thermal", "particle", "geometry",
              "epsilon", "beta", "sphere", "tolerances"}},
        {"materials", {"medium", "body"}},
        {"thermal", {"T_K"}},
        {"particle", {"kind", "material", "volume_um3", "n_z", "alpha_perp", "alpha_3"}},
        {"geometry", {"d_um", "d_min_um", "d_max_um", "d_points", "c1", "c2", "c_min", "c_max", "c_points", "theta", "phi"}},
        {"epsilon", {"xi_min_eV", "xi_max_eV", "xi_points"}},
        {"beta", {"curvature", "nodes", "order", "kappabar_min", "kappabar_max"}},
        {"sphere", {"R_um", "alpha", "d_over_R"}},
        {"tolerances", {"rel_tol", "tie_tol", "audit_tol"}},
    };
    return s;
}

const std::set<std::string> material_keys{"kind", "drude", "oscillators", "debye", "two_band", "constant"};

void check_keys(const Value& t, const std::string& name) {
    const auto& allowed = schema().at(name);
    for (auto& kv : t.tab) {
        const std::string full = name.empty() ? kv.first : name + "." + kv.first;
        if (!allowed.count(kv.first)) throw Error(Errc::ConfigError, "unknown key '" + full + "'");
        if (name.empty() && schema().count(kv.first) && !kv.second.is_table())
            throw Error(Errc::ConfigError, "'" + full + "' must be a table");
    }
}

const Value* sub(const Value& root, const std::string& name) {
    const Value* t = root.find(name);
    if (t) check_keys(*t, name);
    return t;
}

double num(const Value* t, const std::string& table, const std::string& key, double def) {
    if (!t) return def;
    const Value* v = t->find(key);
    return v ? v->as_double(table + "." + key) : def;
}

int integer(const Value* t, const std::string& table, const std::string& key, int def) {
    if (!t) return def;
    const Value* v = t->find(key);
    if (!v) return def;
    if (v->kind != Value::Kind::Int) throw Error(Errc::ConfigError, "'" + table + "." + key + "' must be an integer");
    return static_cast<int>(v->i);
}

std::vector<double> numbers(const Value& v, const std::string& ctx) {
    if (v.kind != Value::Kind::Array) throw Error(Errc::ConfigError, "'" + ctx + "' must be an array");
    std::vector<double> out;
    for (auto& x : v.arr) out.push_back(x.as_double(ctx));
    return out;
}

MaterialModel material(const Value& v, const std::string& ctx, std::string& name) {
    if (v.kind == Value::Kind::String) {
        name = v.s;
        try {
            return builtin(v.s);
        } catch (const Error& e) {
            throw Error(Errc::ConfigError, "'" + ctx + "': " + e.what());
        }
    }
    if (!v.is_table()) throw Error(Errc::ConfigError, "'" + ctx + "' must be a material name or table");
    for (auto& kv : v.tab)
        if (!material_keys.count(kv.first)) throw Error(Errc::ConfigError, "unknown key '" + ctx + "." + kv.first + "'");
    name = "inline";
    return material_from_toml(v);
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw Error(Errc::ConfigError, "'" + key + "' " + what);
}

void require_increasing(const std::vector<double>& g, const std::string& key) {
    require(!g.empty(), key, "must not be empty");
    for (std::size_t i = 1; i < g.size(); ++i) require(g[i] > g[i - 1], key, "must be strictly increasing");
}

} // namespace

RunConfig parse_config(const std::string& text, bool allow_extrapolation) {
    Value root = toml::parse(text);
    check_keys(root, "");
    RunConfig c;
    c.canonical = toml::dump(root);
    c.hash = config_hash(c.canonical);

    if (const Value* t = root.find("task")) c.task = task_from_string(t->as_string("task"));
    if (const Value* v = root.find("output_dir")) c.output_dir = v->as_string("output_dir");
    if (const Value* v = root.find("cache_dir")) c.cache_dir = v->as_string("cache_dir");
    if (const Value* v = root.find("allow_extrapolation")) c.allow_extrapolation = v->as_bool("allow_extrapolation");
    c.allow_extrapolation = c.allow_extrapolation || allow_extrapolation;

    if (const Value* m = sub(root, "materials")) {
        if (const Value* v = m->find("medium")) c.pair.medium = material(*v, "materials.medium", c.medium_name);
        if (const Value* v = m->find("body")) c.pair.body = material(*v, "materials.body", c.body_name);
    }
    require(!is_pec(c.pair.medium) && !is_drude(c.pair.medium), "materials.medium",
            "must be a non-conducting medium");

    const Value* th = sub(root, "thermal");
    c.T = num(th, "thermal", "T_K", 300.0);
    require(c.T >= 0.0 && std::isfinite(c.T), "thermal.T_K", "must be >= 0");

    const Value* p = sub(root, "particle");
    c.particle_material = c.pair.body;
    if (p) {
        if (const Value* k = p->find("kind")) {
            const std::string& kind = k->as_string("particle.kind");
            require(kind == "ellipsoid" || kind == "generic", "particle.kind", "must be \"ellipsoid\" or \"generic\"");
            c.ellipsoid = kind == "ellipsoid";
        }
        if (const Value* v = p->find("material"))
            c.particle_material = material(*v, "particle.material", c.particle_material_name);
    }
    c.volume = num(p, "particle", "volume_um3", c.volume);
    c.n_z = num(p, "particle", "n_z", c.n_z);
    c.alpha_perp_tilde = num(p, "particle", "alpha_perp", c.alpha_perp_tilde);
    c.alpha_3_tilde = num(p, "particle", "alpha_3", c.alpha_3_tilde);
    require(c.volume > 0.0, "particle.volume_um3", "must be positive");
    require(c.n_z > 0.0 && c.n_z < 1.0, "particle.n_z", "must lie in (0, 1)");

    const Value* g = sub(root, "geometry");
    if (g && g->find("d_um")) {
        c.d_um = numbers(*g->find("d_um"), "geometry.d_um");
    } else {
        const double lo = num(g, "geometry", "d_min_um", 0.1), hi = num(g, "geometry", "d_max_um", 10.0);
        const int n = integer(g, "geometry", "d_points", 21);
        require(lo > 0.0, "geometry.d_min_um", "must be positive");
        require(hi >= lo, "geometry.d_max_um", "must not be below geometry.d_min_um");
        require(n >= 1 && (n == 1 || hi > lo), "geometry.d_points", "must be >= 1 (and 1 when d_min = d_max)");
        c.d_um = log_grid(lo, hi, n);
    }
    require_increasing(c.d_um, "geometry.d_um");
    require(c.d_um.front() > 0.0, "geometry.d_um", "must be positive");
    c.c1 = num(g, "geometry", "c1", 0.0);
    c.c2 = num(g, "geometry", "c2", 0.0);
    c.theta = num(g, "geometry", "theta", 0.0);
    c.phi = num(g, "geometry", "phi", 0.0);
    {
        const double lo = num(g, "geometry", "c_min", -0.1), hi = num(g, "geometry", "c_max", 0.1);
        const int n = integer(g, "geometry", "c_points", 41);
        require(n >= 1 && (n == 1 || hi > lo), "geometry.c_points", "needs c_max > c_min when > 1");
        c.c_grid = lin_grid(lo, hi, n);
    }
    if (!c.allow_extrapolation) {
        auto within = [](double v) { return std::abs(v) <= SurfaceGeometry::soft_limit; };
        require(within(c.c1), "geometry.c1", "exceeds the curvature soft limit (use --allow-extrapolation)");
        require(within(c.c2), "geometry.c2", "exceeds the curvature soft limit (use --allow-extrapolation)");
        require(within(c.c_grid.front()) && within(c.c_grid.back()), "geometry.c_min",
                "grid exceeds the curvature soft limit (use --allow-extrapolation)");
    }

    const Value* e = sub(root, "epsilon");
    {
        const double lo = num(e, "epsilon", "xi_min_eV", 0.0), hi = num(e, "epsilon", "xi_max_eV", 50.0);
        const int n = integer(e, "epsilon", "xi_points", 101);
        require(lo >= 0.0, "epsilon.xi_min_eV", "must be >= 0");
        require(n >= 1 && (n == 1 || hi > lo), "epsilon.xi_points", "needs xi_max_eV > xi_min_eV when > 1");
        c.xi_eV = lin_grid(lo, hi, n);
    }

    const Value* b = sub(root, "beta");
    if (b)
        if (const Value* v = b->find("curvature")) c.curvature = v->as_bool("beta.curvature");
    c.grid.nodes = integer(b, "beta", "nodes", c.grid.nodes);
    c.grid.order = integer(b, "beta", "order", c.grid.order);
    c.grid.kmin = num(b, "beta", "kappabar_min", c.grid.kmin);
    c.grid.kmax = num(b, "beta", "kappabar_max", c.grid.kmax);
    require(c.grid.kmin > 0.0, "beta.kappabar_min", "must be positive");
    require(c.grid.kmax > c.grid.kmin, "beta.kappabar_max", "must exceed beta.kappabar_min");
    require(c.grid.order >= 2, "beta.order", "must be >= 2");
    require(c.grid.nodes >= c.grid.order, "beta.nodes", "must be >= beta.order");

    const Value* s = sub(root, "sphere");
    c.R_um = num(s, "sphere", "R_um", 30.0);
    c.sphere_alpha = num(s, "sphere", "alpha", 1.0);
    if (s && s->find("d_over_R"))
        c.d_over_R = numbers(*s->find("d_over_R"), "sphere.d_over_R");
    else
        c.d_over_R = {0.07, 0.1, 0.15, 0.2, 0.25, 0.3};
    require(c.R_um > 0.0, "sphere.R_um", "must be positive");
    require_increasing(c.d_over_R, "sphere.d_over_R");
    require(c.d_over_R.front() > 0.0, "sphere.d_over_R", "must be positive");

    const Value* tol = sub(root, "tolerances");
    c.rel_tol = num(tol, "tolerances", "rel_tol", c.rel_tol);
    c.tie_tol = num(tol, "tolerances", "tie_tol", c.tie_tol);
    c.audit_tol = num(tol, "tolerances", "audit_tol", c.audit_tol);
    require(c.rel_tol > 0.0 && c.rel_tol < 1.0, "tolerances.rel_tol", "must lie in (0, 1)");
    require(c.tie_tol >= 0.0, "tolerances.tie_tol", "must be >= 0");
    require(c.audit_tol > 0.0, "tolerances.audit_tol", "must be positive");
    return c;
}

RunConfig load_config(const std::filesystem::path& path, bool allow_extrapolation) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), allow_extrapolation);
}

} // namespace curvecp
