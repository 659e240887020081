#pragma once
// Cached beta coefficients on a log-spaced kappabar grid for one material
// pair at one separation.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "curvature.hpp"
#include "hash.hpp"
#include "materials.hpp"
#include "parallel.hpp"

namespace curvecp {

inline constexpr int beta_table_schema = 1;

struct TableGrid {
    double kmin = 1e-4;
    double kmax = 40.0;
    int nodes = 120;
    int order = 8; // Lagrange points in log(kappabar)
};

struct TableSpec {
    MaterialPair pair;
    double d_um = 1.0;
    TableGrid grid;
    bool curvature = true;
    bool audit = true;
    double audit_tol = 1e-6;
    CurvatureOptions opt;
};

// Medium response at kappabar for separation d.
inline MediumResponse media_at(const MaterialPair& pair, double d_um, double kappabar) {
    return pair.at(ImaginaryFrequency::from_kappa(kappabar / d_um));
}

inline std::string table_description(const TableSpec& s) {
    std::ostringstream os;
    os << "schema=" << beta_table_schema << "\nmedium=" << material_to_string(s.pair.medium)
       << "\nbody=" << material_to_string(s.pair.body) << "\nd_um=" << fmt17(s.d_um) << "\ngrid=" << fmt17(s.grid.kmin)
       << "," << fmt17(s.grid.kmax) << "," << s.grid.nodes << "," << s.grid.order << "\ncurvature=" << s.curvature
       << "\nrel_tol=" << fmt17(s.opt.rel_tol) << "\nazimuth=" << s.opt.azimuth_points
       << "\ntail=" << fmt17(s.opt.tail_span) << "\naudit_tol=" << fmt17(s.audit_tol);
    return os.str();
}

inline std::string material_hash(const MaterialPair& p) {
    return fingerprint(material_to_string(p.medium) + "|" + material_to_string(p.body));
}

class BetaTable {
public:
    TableSpec spec;
    std::string key;
    std::vector<double> kappabar;
    std::vector<BetaSet> node;
    BetaSet static_row;
    double audit_error = -1.0; // < 0 when not audited

    double log_step() const { return std::log(spec.grid.kmax / spec.grid.kmin) / (spec.grid.nodes - 1); }

    MediumResponse media(double kb) const { return media_at(spec.pair, spec.d_um, kb); }

    // Exact node values at nodes; static row at kappabar = 0; node 0 held
    // constant on (0, kmin) (a Drude body is not continuous there).
    BetaSet at(double kb) const {
        if (kb == 0.0) return static_row;
        if (!(kb > 0.0)) throw Error(Errc::NegativeFrequency, "kappabar < 0");
        if (kb <= kappabar.front()) return node.front();
        if (kb > kappabar.back() * (1.0 + 1e-12))
            throw Error(Errc::TableCoverage, "kappabar " + fmt17(kb) + " beyond table maximum " + fmt17(kappabar.back()));
        auto it = std::lower_bound(kappabar.begin(), kappabar.end(), kb);
        if (it != kappabar.end() && *it == kb) return node[it - kappabar.begin()];
        const int n = static_cast<int>(kappabar.size());
        const double t = std::log(kb / spec.grid.kmin) / log_step();
        const int cell = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
        return interpolate(kb, t, cell);
    }

    // Integral of every coefficient over (0, kmax], used by the zero-temperature path.
    template <class F>
    std::array<double, 5> integrate(F&& weight) const;

private:
    BetaSet interpolate(double kb, double t, int cell) const {
        const int n = static_cast<int>(kappabar.size());
        const int p = std::min(spec.grid.order, n);
        const int first = std::clamp(cell - p / 2 + 1, 0, n - p);
        std::array<double, 5> acc{};
        for (int j = first; j < first + p; ++j) {
            double w = 1.0;
            for (int m = first; m < first + p; ++m)
                if (m != j) w *= (t - m) / static_cast<double>(j - m);
            const double env = std::exp(2.0 * index0(kappabar[j]) * kappabar[j]);
            auto v = node[j].values();
            for (int c = 0; c < 5; ++c) acc[c] += w * v[c] * env;
        }
        const double back = std::exp(-2.0 * index0(kb) * kb);
        BetaSet s;
        s.beta1_0 = acc[0] * back;
        s.beta2_0 = acc[1] * back;
        s.beta1_2 = acc[2] * back;
        s.beta2_2 = acc[3] * back;
        s.beta3_2 = acc[4] * back;
        return s;
    }
    double index0(double kb) const {
        MediumResponse m = media(kb);
        return std::sqrt(m.eps0 * m.mu0);
    }
};

template <class F>
std::array<double, 5> BetaTable::integrate(F&& weight) const {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& x = GK::abscissa();
    const auto& w = GK::weights();
    std::array<double, 5> out{};
    auto add = [&](double kb, double wt) {
        auto v = at(kb).values();
        const double f = wt * weight(kb);
        for (int c = 0; c < 5; ++c) out[c] += f * v[c];
    };
    add(kappabar.front(), kappabar.front()); // (0, kmin]
    const double h = log_step();
    const double t0 = std::log(spec.grid.kmin);
    for (std::size_t cell = 0; cell + 1 < kappabar.size(); ++cell) {
        const double a = t0 + cell * h, c = a + 0.5 * h;
        for (std::size_t j = 0; j < x.size(); ++j) {
            for (int sgn : {-1, 1}) {
                if (j == 0 && sgn > 0) continue;
                const double t = c + sgn * 0.5 * h * x[j];
                const double kb = std::exp(t);
                add(std::clamp(kb, kappabar[cell], kappabar[cell + 1]), 0.5 * h * w[j] * kb);
            }
        }
    }
    return out;
}

namespace detail {

inline BetaSet direct_betas(const TableSpec& s, double kb) {
    return beta_set(kb, media_at(s.pair, s.d_um, kb), s.curvature, s.opt);
}

} // namespace detail

inline BetaTable build_table(const TableSpec& spec, int jobs = 1) {
    const TableGrid& g = spec.grid;
    if (!(g.kmin > 0 && g.kmax > g.kmin && g.nodes >= std::max(2, g.order) && g.order >= 2))
        throw Error(Errc::ConfigError, "invalid beta table grid");
    BetaTable t;
    t.spec = spec;
    t.key = fingerprint(table_description(spec));
    const double h = std::log(g.kmax / g.kmin) / (g.nodes - 1);
    t.kappabar.resize(g.nodes);
    for (int j = 0; j < g.nodes; ++j) t.kappabar[j] = j + 1 == g.nodes ? g.kmax : g.kmin * std::exp(j * h);
    t.node.resize(g.nodes);
    const int audits = spec.audit ? g.nodes - 1 : 0;
    std::vector<BetaSet> mid(audits);
    parallel_for(g.nodes + audits + 1, jobs, [&](int i) {
        if (i < g.nodes)
            t.node[i] = detail::direct_betas(spec, t.kappabar[i]);
        else if (i < g.nodes + audits)
            mid[i - g.nodes] = detail::direct_betas(spec, g.kmin * std::exp((i - g.nodes + 0.5) * h));
        else
            t.static_row = beta_set(0.0, spec.pair.at(ImaginaryFrequency::from_xi(0.0)), spec.curvature, spec.opt);
    });
    if (spec.audit) {
        double worst = 0.0;
        for (int j = 0; j < audits; ++j) {
            const double kb = g.kmin * std::exp((j + 0.5) * h);
            auto a = t.at(kb).values(), b = mid[j].values();
            // scale over the neighbouring nodes, so that zero crossings of
            // index-matched pairs do not blow up the relative error
            double scale = 0.0, diff = 0.0;
            for (int c = 0; c < 5; ++c) {
                scale = std::max(scale, std::abs(b[c]));
                diff = std::max(diff, std::abs(a[c] - b[c]));
            }
            const int half = g.order / 2;
            for (int k = std::max(0, j + 1 - half); k <= std::min(g.nodes - 1, j + half); ++k)
                for (double v : t.node[k].values()) scale = std::max(scale, std::abs(v));
            if (scale > 0.0) worst = std::max(worst, diff / scale);
        }
        t.audit_error = worst;
        if (worst > spec.audit_tol)
            throw Error(Errc::GridTooCoarse, "midpoint interpolation error " + fmt17(worst) + " exceeds " +
                                                 fmt17(spec.audit_tol));
    }
    return t;
}

// ---------------------------------------------------------------------------
// CSV cache: '#' header lines, then kappabar,beta1_0,beta2_0,beta1_2,beta2_2,beta3_2.
// The first data row is the static (kappabar = 0) row.

inline std::string table_csv(const BetaTable& t) {
    std::ostringstream os;
    os << "# curvecp beta table\n";
    os << "# schema = " << beta_table_schema << "\n";
    os << "# key = " << t.key << "\n";
    os << "# material_hash = " << material_hash(t.spec.pair) << "\n";
    os << "# d_um = " << fmt17(t.spec.d_um) << "\n";
    os << "# grid = log " << fmt17(t.spec.grid.kmin) << " " << fmt17(t.spec.grid.kmax) << " " << t.spec.grid.nodes
       << " order " << t.spec.grid.order << "\n";
    os << "# tolerances = rel_tol " << fmt17(t.spec.opt.rel_tol) << " audit_tol " << fmt17(t.spec.audit_tol) << "\n";
    os << "# audit_error = " << fmt17(t.audit_error) << "\n";
    os << "kappabar,beta1_0,beta2_0,beta1_2,beta2_2,beta3_2\n";
    auto row = [&](double kb, const BetaSet& s) {
        os << fmt17(kb);
        for (double v : s.values()) os << "," << fmt17(v);
        os << "\n";
    };
    row(0.0, t.static_row);
    for (std::size_t j = 0; j < t.node.size(); ++j) row(t.kappabar[j], t.node[j]);
    return os.str();
}

// Parses a cache file written for `spec`; returns false on any mismatch.
inline bool parse_table_csv(const std::string& text, const TableSpec& spec, BetaTable& out) {
    BetaTable t;
    t.spec = spec;
    t.key = fingerprint(table_description(spec));
    std::istringstream is(text);
    std::string line;
    bool key_ok = false, header_seen = false;
    std::vector<std::array<double, 6>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# key = ", 0) == 0) key_ok = line.substr(8) == t.key;
            if (line.rfind("# audit_error = ", 0) == 0) t.audit_error = std::strtod(line.c_str() + 16, nullptr);
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line != "kappabar,beta1_0,beta2_0,beta1_2,beta2_2,beta3_2") return false;
            continue;
        }
        std::array<double, 6> r{};
        const char* p = line.c_str();
        for (int c = 0; c < 6; ++c) {
            char* end = nullptr;
            r[c] = std::strtod(p, &end);
            if (end == p) return false;
            p = end;
            if (c < 5) {
                if (*p != ',') return false;
                ++p;
            }
        }
        if (*p != '\0') return false;
        rows.push_back(r);
    }
    if (!key_ok || static_cast<int>(rows.size()) != spec.grid.nodes + 1 || rows[0][0] != 0.0) return false;
    auto to_set = [](const std::array<double, 6>& r) {
        BetaSet s;
        s.beta1_0 = r[1];
        s.beta2_0 = r[2];
        s.beta1_2 = r[3];
        s.beta2_2 = r[4];
        s.beta3_2 = r[5];
        return s;
    };
    t.static_row = to_set(rows[0]);
    for (std::size_t j = 1; j < rows.size(); ++j) {
        t.kappabar.push_back(rows[j][0]);
        t.node.push_back(to_set(rows[j]));
    }
    out = std::move(t);
    return true;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(Errc::CacheWriteFailure, "cannot open " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw Error(Errc::CacheWriteFailure, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::CacheWriteFailure, "cannot rename into " + path.string());
    }
}

inline std::filesystem::path table_path(const std::filesystem::path& dir, const TableSpec& spec) {
    return dir / ("beta_" + fingerprint(table_description(spec)) + ".csv");
}

namespace detail {

// Exclusive advisory lock held for the lifetime of the object.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& p) {
        fd_ = ::open(p.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

inline bool read_file(const std::filesystem::path& p, std::string& out) {
    std::ifstream f(p, std::ios::binary);
    if (!f) return false;
    std::ostringstream os;
    os << f.rdbuf();
    out = os.str();
    return true;
}

} // namespace detail

// Returns the cached table for spec, building and persisting it if needed.
inline BetaTable load_or_build(const TableSpec& spec, const std::filesystem::path& cache_dir, int jobs = 1) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (ec) throw Error(Errc::CacheWriteFailure, "cannot create cache directory " + cache_dir.string());
    const auto path = table_path(cache_dir, spec);
    detail::FileLock lock(path.string() + ".lock");
    std::string text;
    BetaTable t;
    if (detail::read_file(path, text) && parse_table_csv(text, spec, t)) return t;
    t = build_table(spec, jobs);
    write_atomic(path, table_csv(t));
    return t;
}

} // namespace curvecp
