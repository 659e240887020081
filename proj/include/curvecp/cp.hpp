#pragma once
// Casimir-Polder potential to linear order in the surface curvature, its
// orientation-dependent part, and the stable orientation of uniaxial particles.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "beta_table.hpp"
#include "constants.hpp"
#include "curvature.hpp"
#include "materials.hpp"
#include "parallel.hpp"

namespace curvecp {

struct SurfaceGeometry {
    double d = 1.0;  // um
    double c1 = 0.0; // d / R1, positive when the surface curves toward the particle
    double c2 = 0.0; // d / R2

    static constexpr double soft_limit = 0.3;
    bool beyond_soft_limit() const { return std::abs(c1) > soft_limit || std::abs(c2) > soft_limit; }
    bool flat() const { return c1 == 0.0 && c2 == 0.0; }
};

struct Orientation {
    double theta = 0.0; // angle between particle axis and surface normal
    double phi = 0.0;   // azimuth of the projected axis, from principal direction 1
};

struct RotatedPolarizability {
    double alpha_perp = 0.0;         // alpha_xx + alpha_yy
    double alpha_zz = 0.0;
    double alpha_xx_minus_yy = 0.0;
};

// alpha_ij = (alpha_perp_tilde / 2) delta_ij + sigma n_i n_j, sigma = alpha_3_tilde - alpha_perp_tilde / 2.
inline RotatedPolarizability rotate_polarizability(double alpha_perp_tilde, double alpha_3_tilde, const Orientation& o) {
    const double sigma = alpha_3_tilde - 0.5 * alpha_perp_tilde;
    const double s = std::sin(o.theta), c = std::cos(o.theta);
    return {alpha_perp_tilde + sigma * s * s, 0.5 * alpha_perp_tilde + sigma * c * c, sigma * s * s * std::cos(2.0 * o.phi)};
}

struct UniaxialResponse {
    double perp_tilde = 0.0; // sum of the two transverse principal values
    double axis_tilde = 0.0; // principal value along the symmetry axis
    double sigma() const { return axis_tilde - 0.5 * perp_tilde; }
};

// Principal polarizabilities of an ellipsoid (depolarisation factors n_z and (1-n_z)/2).
inline UniaxialResponse ellipsoid_response(double eps0, double eps1, double V, double n_z) {
    if (!(n_z > 0.0 && n_z < 1.0)) throw Error(Errc::ConfigError, "n_z must lie in (0, 1)");
    if (!(V > 0.0)) throw Error(Errc::ConfigError, "ellipsoid volume must be positive");
    const double n_x = 0.5 * (1.0 - n_z);
    auto principal = [&](double n) {
        if (is_pec_value(eps1)) return eps0 * V / n;
        return eps0 * V * (eps1 - eps0) / (eps0 + n * (eps1 - eps0));
    };
    return {2.0 * principal(n_x), principal(n_z)};
}

inline double ellipsoid_sigma(double eps0, double eps1, double V, double n_z) {
    if (!(n_z > 0.0 && n_z < 1.0)) throw Error(Errc::ConfigError, "n_z must lie in (0, 1)");
    if (is_pec_value(eps1)) return eps0 * (1.0 - 3.0 * n_z) * V / (n_z * (1.0 - n_z));
    const double de = eps1 - eps0;
    return eps0 * de * de * (1.0 - 3.0 * n_z) * V /
           ((eps0 * (1.0 - n_z) + eps1 * n_z) * (eps0 * (1.0 + n_z) + eps1 * (1.0 - n_z)));
}

using FrequencyFunction = std::function<double(const ImaginaryFrequency&)>;

struct GenericUniaxial {
    FrequencyFunction alpha_perp_tilde;
    FrequencyFunction alpha_3_tilde;

    static GenericUniaxial constant(double perp_tilde, double axis_tilde) {
        return {[=](const ImaginaryFrequency&) { return perp_tilde; }, [=](const ImaginaryFrequency&) { return axis_tilde; }};
    }
    static GenericUniaxial isotropic(double alpha) { return constant(2.0 * alpha, alpha); }
};

struct Ellipsoid {
    MaterialModel material;
    double volume = 1e-3; // um^3
    double n_z = 1.0 / 3.0;
};

using ParticlePolarizability = std::variant<GenericUniaxial, Ellipsoid>;

// Particle response at one frequency; the embedding medium comes from the pair.
inline UniaxialResponse particle_response(const ParticlePolarizability& p, const MaterialPair& pair,
                                          const ImaginaryFrequency& f) {
    if (auto* g = std::get_if<GenericUniaxial>(&p)) return {g->alpha_perp_tilde(f), g->alpha_3_tilde(f)};
    const auto& e = std::get<Ellipsoid>(p);
    MediumResponse m = pair.at(f);
    return ellipsoid_response(m.eps0, permittivity_or_pec(e.material, f), e.volume, e.n_z);
}

// ---------------------------------------------------------------------------
// Sources of beta coefficients at a fixed separation.

class BetaSource {
public:
    virtual ~BetaSource() = default;
    virtual BetaSet at(double kappabar) const = 0;
    virtual double d_um() const = 0;
    virtual bool has_curvature() const = 0;
    virtual double kappabar_max() const { return INFINITY; }
    // log-spaced cell boundaries for the zero-temperature integral
    virtual std::vector<double> cells() const {
        std::vector<double> c;
        const int n = 60;
        for (int j = 0; j <= n; ++j) c.push_back(1e-4 * std::pow(4e5, static_cast<double>(j) / n));
        return c;
    }
};

class DirectBetas final : public BetaSource {
public:
    DirectBetas(MaterialPair pair, double d_um, bool curvature, CurvatureOptions opt = {})
        : pair_(std::move(pair)), d_(d_um), curvature_(curvature), opt_(opt) {}
    BetaSet at(double kb) const override { return beta_set(kb, media_at(pair_, d_, kb), curvature_, opt_); }
    double d_um() const override { return d_; }
    bool has_curvature() const override { return curvature_; }

private:
    MaterialPair pair_;
    double d_;
    bool curvature_;
    CurvatureOptions opt_;
};

class TableBetas final : public BetaSource {
public:
    explicit TableBetas(std::shared_ptr<const BetaTable> t) : t_(std::move(t)) {}
    BetaSet at(double kb) const override { return t_->at(kb); }
    double d_um() const override { return t_->spec.d_um; }
    bool has_curvature() const override { return t_->spec.curvature; }
    double kappabar_max() const override { return t_->kappabar.back(); }
    std::vector<double> cells() const override { return t_->kappabar; }
    const BetaTable& table() const { return *t_; }

private:
    std::shared_ptr<const BetaTable> t_;
};

// Remembers every coefficient set it hands out, so that several particles or
// temperatures can share the direct evaluations.
class MemoBetas final : public BetaSource {
public:
    explicit MemoBetas(std::shared_ptr<const BetaSource> inner) : inner_(std::move(inner)) {}
    BetaSet at(double kb) const override {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(kb);
            if (it != memo_.end()) return it->second;
        }
        BetaSet b = inner_->at(kb);
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(kb, b);
        return b;
    }
    double d_um() const override { return inner_->d_um(); }
    bool has_curvature() const override { return inner_->has_curvature(); }
    double kappabar_max() const override { return inner_->kappabar_max(); }
    std::vector<double> cells() const override { return inner_->cells(); }

private:
    std::shared_ptr<const BetaSource> inner_;
    mutable std::mutex mu_;
    mutable std::map<double, BetaSet> memo_;
};

// ---------------------------------------------------------------------------
// Frequency summation.

struct SumOptions {
    double rel_tol = 1e-9;
    int n_min = 10;
    int n_cap = 200000;
    double kappabar_cut = 40.0; // zero-temperature upper limit
};

template <int N>
struct FrequencySum {
    std::array<double, N> value{};
    int terms = 0;
};

// Finite T: (k_B T / d^3) sum'_n g(f_n, kappabar_n).
// T = 0:    (hbar c / d^4) int dkappabar / (2 pi) g.
template <int N, class G>
FrequencySum<N> frequency_sum(const ThermalState& thermal, double d, G&& g, const SumOptions& opt = {},
                              double kappabar_max = INFINITY, std::vector<double> cells = {}) {
    FrequencySum<N> out;
    if (auto* ft = std::get_if<FiniteTemperature>(&thermal)) {
        const double step = matsubara_spacing(ft->T);
        bool settled = false; // last term already below tolerance
        for (int n = 0;; ++n) {
            const auto f = ImaginaryFrequency::from_xi(n * step);
            const double kb = f.kappa * d;
            if (kb > kappabar_max) {
                // only the n_min floor asks for more terms; the table cannot supply them
                if (settled) break;
                throw Error(Errc::TableCoverage, "Matsubara sum needs kappabar = " + std::to_string(kb));
            }
            const double w = n == 0 ? 0.5 : 1.0;
            const std::array<double, N> t = g(f, kb);
            double tmax = 0.0, smax = 0.0;
            for (int i = 0; i < N; ++i) {
                out.value[i] += w * t[i];
                tmax = std::max(tmax, std::abs(w * t[i]));
                smax = std::max(smax, std::abs(out.value[i]));
            }
            out.terms = n + 1;
            settled = n > 0 && tmax <= opt.rel_tol * smax;
            if (n >= opt.n_min && settled) break;
            if (n >= opt.n_cap) throw Error(Errc::QuadratureNonConvergence, "Matsubara sum did not converge");
        }
        const double pref = k_boltzmann * ft->T / (d * d * d);
        for (auto& v : out.value) v *= pref;
        return out;
    }
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& x = GK::abscissa();
    const auto& w = GK::weights();
    const double cut = std::min(opt.kappabar_cut, kappabar_max);
    std::vector<double> c;
    for (double v : cells)
        if (v <= cut) c.push_back(v);
    if (c.empty() || c.back() < cut) c.push_back(cut);
    auto add = [&](double kb, double wt) {
        const auto t = g(ImaginaryFrequency::from_kappa(kb / d), kb);
        for (int i = 0; i < N; ++i) out.value[i] += wt * t[i];
        ++out.terms;
    };
    add(c.front(), c.front()); // (0, first cell boundary]
    for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        const double a = std::log(c[j]), b = std::log(c[j + 1]);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < x.size(); ++q)
            for (int sgn : {-1, 1}) {
                if (q == 0 && sgn > 0) continue;
                const double kb = std::clamp(std::exp(mid + sgn * half * x[q]), c[j], c[j + 1]);
                add(kb, half * w[q] * kb);
            }
    }
    const double pref = hbar_c / (2.0 * pi * d * d * d * d);
    for (auto& v : out.value) v *= pref;
    return out;
}

// ---------------------------------------------------------------------------
// Potentials.

// Full potential (principal frame of the surface).
inline double cp_potential(const SurfaceGeometry& geo, const BetaSource& src, const MaterialPair& pair,
                           const ParticlePolarizability& particle, const Orientation& o, const ThermalState& thermal,
                           const SumOptions& opt = {}) {
    if (!geo.flat() && !src.has_curvature())
        throw Error(Errc::TableCoverage, "curved geometry needs curvature coefficients");
    const double sc = geo.c1 + geo.c2, dc = geo.c1 - geo.c2;
    auto g = [&](const ImaginaryFrequency& f, double kb) {
        const BetaSet b = src.at(kb);
        const UniaxialResponse r = particle_response(particle, pair, f);
        const auto a = rotate_polarizability(r.perp_tilde, r.axis_tilde, o);
        double v = b.beta1_0 * a.alpha_perp + b.beta2_0 * a.alpha_zz;
        if (!geo.flat())
            v += sc * (b.beta1_2 * a.alpha_perp + b.beta2_2 * a.alpha_zz) + 0.5 * b.beta3_2 * dc * a.alpha_xx_minus_yy;
        return std::array<double, 1>{v};
    };
    auto s = frequency_sum<1>(thermal, geo.d, g, opt, src.kappabar_max(), src.cells());
    return -s.value[0];
}

// The three frequency sums that fix the orientation dependence, each including
// the prefactor (k_B T / 2 d^3 or its zero-temperature counterpart):
//   s0 = sum' sigma dbeta0,  s2 = sum' sigma dbeta2,  s3 = sum' sigma beta3_2.
struct OrientationSums {
    double s0 = 0.0, s2 = 0.0, s3 = 0.0;
    int terms = 0;

    double energy(const SurfaceGeometry& g, const Orientation& o) const {
        const double c2t = std::cos(2.0 * o.theta), st = std::sin(o.theta);
        return -((s0 + s2 * (g.c1 + g.c2)) * c2t + s3 * (g.c1 - g.c2) * st * st * std::cos(2.0 * o.phi));
    }
};

inline OrientationSums orientation_sums(const BetaSource& src, const MaterialPair& pair,
                                        const ParticlePolarizability& particle, const ThermalState& thermal,
                                        bool curvature, const SumOptions& opt = {}) {
    if (curvature && !src.has_curvature()) throw Error(Errc::TableCoverage, "curvature coefficients unavailable");
    auto g = [&](const ImaginaryFrequency& f, double kb) {
        const BetaSet b = src.at(kb);
        const double sigma = particle_response(particle, pair, f).sigma();
        return std::array<double, 3>{sigma * b.dbeta0(), curvature ? sigma * b.dbeta2() : 0.0,
                                     curvature ? sigma * b.beta3_2 : 0.0};
    };
    auto s = frequency_sum<3>(thermal, src.d_um(), g, opt, src.kappabar_max(), src.cells());
    return {0.5 * s.value[0], 0.5 * s.value[1], 0.5 * s.value[2], s.terms};
}

inline double orientation_potential(const SurfaceGeometry& geo, const BetaSource& src, const MaterialPair& pair,
                                    const ParticlePolarizability& particle, const Orientation& o,
                                    const ThermalState& thermal, const SumOptions& opt = {}) {
    return orientation_sums(src, pair, particle, thermal, !geo.flat(), opt).energy(geo, o);
}

// Closed-form n = 0 orientation sums at separation d (eps1 may be the PEC sentinel).
inline OrientationSums high_t_sums(double eps0, double eps1, double sigma_static, double T, double d) {
    double r, b3;
    if (is_pec_value(eps1)) {
        r = 1.0;
        b3 = 0.75;
    } else {
        r = (eps1 - eps0) / (eps1 + eps0);
        b3 = (eps1 - eps0) * (3.0 * eps1 + eps0) / (4.0 * (eps1 + eps0) * (eps1 + eps0));
    }
    const double pref = k_boltzmann * T * sigma_static / (32.0 * eps0 * d * d * d);
    return {pref * r, -0.25 * pref * r * r, pref * b3, 1};
}

inline double high_t_orientation(const SurfaceGeometry& geo, double eps0, double eps1, double sigma_static, double T,
                                 const Orientation& o) {
    return high_t_sums(eps0, eps1, sigma_static, T, geo.d).energy(geo, o);
}

// ---------------------------------------------------------------------------
// Stable orientation.

enum class Axis { Z, X, Y, TangentialFree, Degenerate };

inline const char* axis_name(Axis a) {
    switch (a) {
    case Axis::Z: return "Z";
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::TangentialFree: return "TangentialFree";
    default: return "Degenerate";
    }
}

inline int axis_code(Axis a) { return static_cast<int>(a); }

struct StableAxis {
    Axis axis = Axis::Degenerate;
    double U_z = 0.0, U_x = 0.0, U_y = 0.0;
    double tolerance = 1e-9;
};

inline const Orientation orient_z{0.0, 0.0};
inline const Orientation orient_x{pi / 2, 0.0};
inline const Orientation orient_y{pi / 2, pi / 2};

inline StableAxis classify_axis(const OrientationSums& s, const SurfaceGeometry& g, double tol = 1e-9) {
    StableAxis r;
    r.tolerance = tol;
    r.U_z = s.energy(g, orient_z);
    r.U_x = s.energy(g, orient_x);
    r.U_y = s.energy(g, orient_y);
    const double scale = std::max({std::abs(r.U_z), std::abs(r.U_x), std::abs(r.U_y)});
    auto tie = [&](double a, double b) { return std::abs(a - b) <= tol * scale; };
    if (scale == 0.0 || (tie(r.U_z, r.U_x) && tie(r.U_z, r.U_y) && tie(r.U_x, r.U_y))) {
        r.axis = Axis::Degenerate;
    } else if (tie(r.U_x, r.U_y) && r.U_z > std::max(r.U_x, r.U_y)) {
        r.axis = Axis::TangentialFree;
    } else if (r.U_z <= r.U_x && r.U_z <= r.U_y) {
        r.axis = Axis::Z;
    } else {
        r.axis = r.U_x <= r.U_y ? Axis::X : Axis::Y;
    }
    return r;
}

inline StableAxis stable_axis(const SurfaceGeometry& g, const BetaSource& src, const MaterialPair& pair,
                              const ParticlePolarizability& particle, const ThermalState& thermal, double tol = 1e-9,
                              const SumOptions& opt = {}) {
    return classify_axis(orientation_sums(src, pair, particle, thermal, !g.flat(), opt), g, tol);
}

using BetaSourceFactory = std::function<std::unique_ptr<BetaSource>(double d_um)>;

struct AxisSwitch {
    double d_switch = 0.0;
    Axis before = Axis::Degenerate, after = Axis::Degenerate;
};

struct SwitchScanOptions {
    double rel_precision = 1e-3;
    double tie_tol = 1e-9;
    int jobs = 1;
    SumOptions sum;
};

// Axis changes along a monotone d grid at fixed curvature ratios, each refined
// by bisection in log d.
inline std::vector<AxisSwitch> switch_scan(const std::vector<double>& d_grid, double c1, double c2,
                                           const BetaSourceFactory& make, const MaterialPair& pair,
                                           const ParticlePolarizability& particle, const ThermalState& thermal,
                                           const SwitchScanOptions& opt = {}) {
    for (std::size_t i = 1; i < d_grid.size(); ++i)
        if (!(d_grid[i] > d_grid[i - 1])) throw Error(Errc::ConfigError, "d grid must be strictly increasing");
    auto axis_at = [&](double d) {
        auto src = make(d);
        return stable_axis({d, c1, c2}, *src, pair, particle, thermal, opt.tie_tol, opt.sum).axis;
    };
    std::vector<Axis> axes(d_grid.size());
    parallel_for(static_cast<int>(d_grid.size()), opt.jobs, [&](int i) { axes[i] = axis_at(d_grid[i]); });
    std::vector<AxisSwitch> out;
    for (std::size_t i = 1; i < d_grid.size(); ++i) {
        if (axes[i] == axes[i - 1]) continue;
        double lo = d_grid[i - 1], hi = d_grid[i];
        while ((hi - lo) > opt.rel_precision * lo) {
            const double mid = std::sqrt(lo * hi);
            if (axis_at(mid) == axes[i - 1])
                lo = mid;
            else
                hi = mid;
        }
        out.push_back({std::sqrt(lo * hi), axes[i - 1], axes[i]});
    }
    return out;
}

} // namespace curvecp
