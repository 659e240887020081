#include "curvecp/harness.hpp"

#include <fstream>
#include <sstream>

#include "curvecp/acceptance.hpp"
#include "curvecp/curvecp.hpp"
#include "curvecp/hash.hpp"

namespace curvecp {

namespace {

std::string header(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# curvecp " << task_name(cfg.task) << "\n# config_hash = " << cfg.hash << "\n";
    return os.str();
}

void write_file(const RunConfig& cfg, const std::string& name, const std::string& body) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(Errc::CacheWriteFailure, "cannot create output directory " + cfg.output_dir.string());
    write_atomic(cfg.output_dir / name, body);
}

void say(const RunOptions& opt, const std::string& s) {
    if (opt.log) *opt.log << s << std::endl;
}

std::string describe_materials(const RunConfig& cfg) {
    return "# medium = " + cfg.medium_name + ", body = " + cfg.body_name + ", T_K = " + fmt17(cfg.T) + "\n";
}

std::string describe_particle(const RunConfig& cfg) {
    if (!cfg.ellipsoid)
        return "# particle = generic, alpha_perp = " + fmt17(cfg.alpha_perp_tilde) + ", alpha_3 = " + fmt17(cfg.alpha_3_tilde) + "\n";
    return "# particle = ellipsoid, material = " +
           (cfg.particle_material_name.empty() ? cfg.body_name : cfg.particle_material_name) +
           ", volume_um3 = " + fmt17(cfg.volume) + ", n_z = " + fmt17(cfg.n_z) + "\n";
}

TableSpec table_spec(const RunConfig& cfg, double d, bool curvature) {
    TableSpec s;
    s.pair = cfg.pair;
    s.d_um = d;
    s.grid = cfg.grid;
    s.curvature = curvature;
    s.audit_tol = cfg.audit_tol;
    s.opt.rel_tol = cfg.rel_tol;
    return s;
}

// Curved geometries read cached tables; flat ones evaluate the two radial
// integrals directly.
std::shared_ptr<const BetaSource> source_for(const RunConfig& cfg, const RunOptions& opt, double d, bool curvature) {
    if (curvature)
        return std::make_shared<TableBetas>(
            std::make_shared<const BetaTable>(load_or_build(table_spec(cfg, d, true), opt.cache_dir, 1)));
    CurvatureOptions co;
    co.rel_tol = cfg.rel_tol;
    return std::make_shared<MemoBetas>(std::make_shared<DirectBetas>(cfg.pair, d, false, co));
}

SumOptions sum_options(const RunConfig& cfg) {
    SumOptions s;
    s.rel_tol = cfg.rel_tol;
    return s;
}

int task_epsilon(const RunConfig& cfg) {
    std::ostringstream os;
    os << header(cfg) << describe_materials(cfg) << "xi_eV,eps_medium,mu_medium,eps_body,mu_body\n";
    for (double xi : cfg.xi_eV) {
        const auto f = ImaginaryFrequency::from_xi(xi);
        const MediumResponse m = cfg.pair.at(f);
        os << fmt17(xi) << "," << fmt17(m.eps0) << "," << fmt17(m.mu0) << "," << fmt17(m.eps1) << "," << fmt17(m.mu1) << "\n";
    }
    write_file(cfg, "epsilon.csv", os.str());
    return 0;
}

int task_beta(const RunConfig& cfg, const RunOptions& opt) {
    std::vector<BetaTable> tables(cfg.d_um.size());
    parallel_for(static_cast<int>(cfg.d_um.size()), opt.jobs, [&](int i) {
        tables[i] = load_or_build(table_spec(cfg, cfg.d_um[i], cfg.curvature), opt.cache_dir, 1);
    });
    std::ostringstream os;
    os << header(cfg) << describe_materials(cfg);
    for (auto& t : tables) os << "# d_um = " << fmt17(t.spec.d_um) << ": table " << t.key << ", audit_error = " << fmt17(t.audit_error) << "\n";
    os << "d_um,kappabar,beta1_0,beta2_0,beta1_2,beta2_2,beta3_2\n";
    for (auto& t : tables) {
        auto row = [&](double kb, const BetaSet& b) {
            os << fmt17(t.spec.d_um) << "," << fmt17(kb);
            for (double v : b.values()) os << "," << fmt17(v);
            os << "\n";
        };
        row(0.0, t.static_row);
        for (std::size_t j = 0; j < t.kappabar.size(); ++j) row(t.kappabar[j], t.node[j]);
    }
    write_file(cfg, "beta.csv", os.str());
    return 0;
}

int task_cp(const RunConfig& cfg, const RunOptions& opt) {
    const bool curved = cfg.c1 != 0.0 || cfg.c2 != 0.0;
    const ParticlePolarizability particle = cfg.particle();
    const Orientation o{cfg.theta, cfg.phi};
    struct Row {
        double U = 0, Uo = 0;
        StableAxis axis;
        std::string error;
    };
    std::vector<Row> rows(cfg.d_um.size());
    parallel_for(static_cast<int>(cfg.d_um.size()), opt.jobs, [&](int i) {
        const double d = cfg.d_um[i];
        const SurfaceGeometry g{d, cfg.c1, cfg.c2};
        try {
            auto src = source_for(cfg, opt, d, curved);
            rows[i].U = cp_potential(g, *src, cfg.pair, particle, o, cfg.thermal(), sum_options(cfg));
            const auto s = orientation_sums(*src, cfg.pair, particle, cfg.thermal(), curved, sum_options(cfg));
            rows[i].Uo = s.energy(g, o);
            rows[i].axis = classify_axis(s, g, cfg.tie_tol);
        } catch (const Error& e) {
            rows[i].error = e.what();
        }
    });
    std::ostringstream os;
    os << header(cfg) << describe_materials(cfg) << describe_particle(cfg);
    os << "d_um,c1,c2,theta,phi,U_eV,U_orient_eV,U_z,U_x,U_y,axis_code\n";
    int failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << fmt17(cfg.d_um[i]) << "," << fmt17(cfg.c1) << "," << fmt17(cfg.c2) << "," << fmt17(cfg.theta) << ","
           << fmt17(cfg.phi) << ",";
        if (!rows[i].error.empty()) {
            os << "FAILED,,,,,\n";
            say(opt, "d = " + fmt17(cfg.d_um[i]) + ": " + rows[i].error);
            ++failed;
            continue;
        }
        const auto& r = rows[i];
        os << fmt17(r.U) << "," << fmt17(r.Uo) << "," << fmt17(r.axis.U_z) << "," << fmt17(r.axis.U_x) << ","
           << fmt17(r.axis.U_y) << "," << axis_code(r.axis.axis) << "\n";
    }
    write_file(cfg, "cp.csv", os.str());
    return failed ? 3 : 0;
}

int task_sphere(const RunConfig& cfg, const RunOptions& opt) {
    const double alpha = cfg.sphere_alpha;
    const ParticlePolarizability iso = GenericUniaxial::isotropic(alpha);
    struct Row {
        double Us = 0, U0 = 0, U1 = 0;
        int lmax = 0;
    };
    std::vector<Row> rows(cfg.d_over_R.size());
    SphereOptions so;
    so.rel_tol = cfg.rel_tol;
    parallel_for(static_cast<int>(rows.size()), opt.jobs, [&](int i) {
        const double q = cfg.d_over_R[i], d = q * cfg.R_um;
        auto res = sphere_cp(cfg.R_um, d, cfg.thermal(), [&](const ImaginaryFrequency&) { return alpha; }, cfg.pair, so);
        CurvatureOptions co;
        co.rel_tol = cfg.rel_tol;
        MemoBetas src(std::make_shared<DirectBetas>(cfg.pair, d, true, co));
        // outside a sphere the surface curves away from the particle
        rows[i].Us = res.energy;
        rows[i].lmax = res.lmax;
        rows[i].U0 = cp_potential({d, 0.0, 0.0}, src, cfg.pair, iso, orient_z, cfg.thermal(), sum_options(cfg));
        rows[i].U1 = cp_potential({d, -q, -q}, src, cfg.pair, iso, orient_z, cfg.thermal(), sum_options(cfg));
    });
    std::ostringstream os;
    os << header(cfg) << describe_materials(cfg) << "# R_um = " << fmt17(cfg.R_um) << ", alpha = " << fmt17(alpha) << "\n";
    os << "d_over_R,d_um,U_sphere_eV,U0_eV,U1_eV,rel_err_U0,rel_err_U1,l_max\n";
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double e0 = std::abs(r.U0 / r.Us - 1.0), e1 = std::abs(r.U1 / r.Us - 1.0);
        if (i > 0) {
            const auto& p = rows[i - 1];
            monotone = monotone && std::abs(p.U0 / p.Us - 1.0) <= e0 && std::abs(p.U1 / p.Us - 1.0) <= e1;
        }
        os << fmt17(cfg.d_over_R[i]) << "," << fmt17(cfg.d_over_R[i] * cfg.R_um) << "," << fmt17(r.Us) << ","
           << fmt17(r.U0) << "," << fmt17(r.U1) << "," << fmt17(e0) << "," << fmt17(e1) << "," << r.lmax << "\n";
    }
    say(opt, std::string("errors grow monotonically with d/R: ") + (monotone ? "yes" : "no"));
    write_file(cfg, "sphere.csv", os.str());
    return 0;
}

int task_stability(const RunConfig& cfg, const RunOptions& opt) {
    const StabilityGrid g = stability_scan(cfg, opt);
    const std::size_t nc = g.c.size();
    std::ostringstream os;
    os << header(cfg) << describe_materials(cfg) << describe_particle(cfg);
    os << "# tie_tol = " << fmt17(cfg.tie_tol) << "; axis codes: 0 Z, 1 X, 2 Y, 3 tangential-free, 4 degenerate\n";
    os << "# mirror_violations = " << mirror_violations(g) << "\n";
    os << "d_um,c1,c2,axis_code,U_z,U_x,U_y\n";
    int failed = 0;
    for (std::size_t id = 0; id < g.d.size(); ++id)
        for (std::size_t i1 = 0; i1 < nc; ++i1)
            for (std::size_t i2 = 0; i2 < nc; ++i2) {
                const std::size_t k = (id * nc + i1) * nc + i2;
                os << fmt17(g.d[id]) << "," << fmt17(g.c[i1]) << "," << fmt17(g.c[i2]) << ",";
                if (g.code[k] < 0) {
                    os << "FAILED,,,\n";
                    ++failed;
                    continue;
                }
                os << g.code[k] << "," << fmt17(g.U_z[k]) << "," << fmt17(g.U_x[k]) << "," << fmt17(g.U_y[k]) << "\n";
            }
    for (std::size_t id = 0; id < g.d.size(); ++id)
        if (!g.failure[id].empty()) say(opt, "d = " + fmt17(g.d[id]) + ": " + g.failure[id]);
    write_file(cfg, "stability.csv", os.str());

    // Region boundaries: for every c2 (one block each) the switching distances
    // along d, bracketed by neighbouring grid points and placed at their
    // geometric mean.
    std::ostringstream bs;
    bs << header(cfg) << "# blocks separated by blank lines, one per c2\n";
    bs << "c2,c1,d_switch_um,axis_before,axis_after\n";
    for (std::size_t i2 = 0; i2 < nc; ++i2) {
        if (i2 > 0) bs << "\n";
        for (std::size_t i1 = 0; i1 < nc; ++i1)
            for (std::size_t id = 1; id < g.d.size(); ++id) {
                const int a = g.at(id - 1, i1, i2), b = g.at(id, i1, i2);
                if (a < 0 || b < 0 || a == b) continue;
                bs << fmt17(g.c[i2]) << "," << fmt17(g.c[i1]) << "," << fmt17(std::sqrt(g.d[id - 1] * g.d[id])) << "," << a
                   << "," << b << "\n";
            }
    }
    write_file(cfg, "stability_boundary.csv", bs.str());
    return failed ? 3 : 0;
}

int task_validate(const RunConfig& cfg, const RunOptions& opt) {
    AcceptanceOptions ao;
    ao.cache_dir = opt.cache_dir;
    ao.jobs = opt.jobs;
    ao.log = opt.log;
    const auto results = run_acceptance(ao);
    std::ostringstream os;
    os << header(cfg);
    bool all = true;
    for (auto& r : results) {
        os << report_line(r) << "\n";
        all = all && r.pass;
    }
    write_file(cfg, "validate.txt", os.str());
    return all ? 0 : 4;
}

} // namespace

StabilityGrid stability_scan(const RunConfig& cfg, const RunOptions& opt) {
    StabilityGrid g;
    g.d = cfg.d_um;
    g.c = cfg.c_grid;
    const std::size_t nc = g.c.size(), cells = g.d.size() * nc * nc;
    g.code.assign(cells, -1);
    g.U_z.assign(cells, 0.0);
    g.U_x.assign(cells, 0.0);
    g.U_y.assign(cells, 0.0);
    g.failure.assign(g.d.size(), "");
    bool curved = false;
    for (double c : g.c) curved = curved || c != 0.0;
    const ParticlePolarizability particle = cfg.particle();
    parallel_for(static_cast<int>(g.d.size()), opt.jobs, [&](int id) {
        const double d = g.d[id];
        try {
            auto src = source_for(cfg, opt, d, curved);
            const auto s = orientation_sums(*src, cfg.pair, particle, cfg.thermal(), curved, sum_options(cfg));
            for (std::size_t i1 = 0; i1 < nc; ++i1)
                for (std::size_t i2 = 0; i2 < nc; ++i2) {
                    const std::size_t k = (id * nc + i1) * nc + i2;
                    const StableAxis a = classify_axis(s, {d, g.c[i1], g.c[i2]}, cfg.tie_tol);
                    g.code[k] = axis_code(a.axis);
                    g.U_z[k] = a.U_z;
                    g.U_x[k] = a.U_x;
                    g.U_y[k] = a.U_y;
                }
        } catch (const Error& e) {
            g.failure[id] = e.what();
        }
    });
    return g;
}

int mirror_violations(const StabilityGrid& g) {
    auto mirror = [](int a) {
        if (a == axis_code(Axis::X)) return axis_code(Axis::Y);
        if (a == axis_code(Axis::Y)) return axis_code(Axis::X);
        return a;
    };
    int bad = 0;
    for (std::size_t id = 0; id < g.d.size(); ++id)
        for (std::size_t i1 = 0; i1 < g.c.size(); ++i1)
            for (std::size_t i2 = 0; i2 < g.c.size(); ++i2) {
                const int a = g.at(id, i1, i2), b = g.at(id, i2, i1);
                if (a >= 0 && b >= 0 && mirror(a) != b) ++bad;
            }
    return bad;
}

int run_task(const RunConfig& cfg, const RunOptions& opt) {
    switch (cfg.task) {
    case Task::Epsilon: return task_epsilon(cfg);
    case Task::Beta: return task_beta(cfg, opt);
    case Task::Cp: return task_cp(cfg, opt);
    case Task::Sphere: return task_sphere(cfg, opt);
    case Task::Stability: return task_stability(cfg, opt);
    case Task::Validate: return task_validate(cfg, opt);
    }
    return 2;
}

} // namespace curvecp
