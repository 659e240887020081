#pragma once
// Flat-surface coefficients beta1_0, beta2_0 and the linear-curvature
// coefficients beta1_2, beta2_2, beta3_2.

#include <array>
#include <cmath>
#include <string>

#include "constants.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace curvecp {

struct CurvatureOptions {
    double rel_tol = 1e-9;
    int max_intervals = 4000;
    int azimuth_points = 6; // midpoint rule; exact for the harmonics present (|m| <= 4)
    double tail_span = 30.0; // integrate until s0 has grown by this much
    double pattern_tol = 1e-8;
};

struct Beta0 {
    double beta1 = 0.0, beta2 = 0.0;
    double error = 0.0;
};

struct Beta2 {
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
    double error = 0.0;
    double imag = 0.0; // largest imaginary part before symmetrisation
};

struct BetaSet {
    double beta1_0 = 0.0, beta2_0 = 0.0;
    double beta1_2 = 0.0, beta2_2 = 0.0, beta3_2 = 0.0;
    double error = 0.0;

    double dbeta0() const { return beta2_0 - beta1_0; }
    double dbeta2() const { return beta2_2 - beta1_2; }
    std::array<double, 5> values() const { return {beta1_0, beta2_0, beta1_2, beta2_2, beta3_2}; }
};

struct SurfacePatchExpansion {
    double h11 = 0.0, h22 = 0.0, h12 = 0.0;

    // Height profile u1^2/(2 R1) + u2^2/(2 R2) in units d = 1: pass c_j = d/R_j.
    static SurfacePatchExpansion principal(double c1, double c2) { return {c1, c2, 0.0}; }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

inline bool zero_contrast(const MediumResponse& m) {
    return !m.body_pec() && m.eps0 == m.eps1 && m.mu0 == m.mu1;
}

namespace detail {

inline double radial_cutoff(double kappabar, const MediumResponse& m, double span) {
    const double s00 = std::sqrt(m.eps0 * m.mu0) * kappabar;
    const double s = s00 + span;
    return std::sqrt(s * s - s00 * s00);
}

// Integrands of the two flat-surface radial integrals.
inline Vec<2> beta0_integrand(double k, double kb, const MediumResponse& m) {
    const double e0 = m.eps0, m0 = m.mu0;
    const double k2 = k * k, kb2 = kb * kb;
    const double s0 = std::sqrt(k2 + m0 * e0 * kb2);
    const double env = std::exp(-2.0 * s0);
    if (m.body_pec()) {
        // eps1 -> infinity taken analytically
        const double f1 = k * env * (s0 * s0 + m0 * e0 * kb2) / (2.0 * e0 * s0);
        const double f2 = k * k2 * env / (e0 * s0);
        return {f1, f2};
    }
    const double e1 = m.eps1, m1 = m.mu1;
    const double s1 = std::sqrt(k2 + m1 * e1 * kb2);
    const double a = m0 * e1 - m1 * e0;
    const double k4 = k2 * k2;
    const double den_core = m1 * e0 * (s0 * s1 + 2.0 * kb2 * m0 * e1) + m0 * e1 * s0 * s1 + k2 * (m0 * e0 + m1 * e1);
    const double n1 = 2.0 * kb2 * kb2 * m0 * m0 * e0 * e0 * s1 * a + 3.0 * kb2 * k2 * m0 * e0 * s1 * a +
                      k4 * (e1 * (m1 * s0 + m0 * s1) - e0 * (m0 * s0 + m1 * s1));
    const double f1 = k * env * n1 / (2.0 * e0 * s0 * s0 * den_core);
    const double n2 = k4 * (m1 * e1 - m0 * e0) + k2 * s0 * s1 * a;
    const double f2 = k * env * n2 / (e0 * s0 * den_core);
    return {f1, f2};
}

} // namespace detail

// beta1_0, beta2_0 from the closed-form radial integrals.
inline Beta0 beta0(double kappabar, const MediumResponse& m, const CurvatureOptions& opt = {}) {
    if (!(kappabar >= 0.0)) throw Error(Errc::NegativeFrequency, "kappabar < 0");
    if (zero_contrast(m)) return {};
    const double kc = detail::radial_cutoff(kappabar, m, opt.tail_span);
    QuadOptions q{opt.rel_tol, 0.0, opt.max_intervals};
    auto r = integrate_or_throw<2>([&](double k) { return detail::beta0_integrand(k, kappabar, m); }, 0.0, kc, q,
                                   "beta0 radial integral", 8);
    return {r.value[0], r.value[1], r.error};
}

// beta0 by assembling L O M from the surface operators (test cross-check).
inline Beta0 beta0_scattering(double kappabar, const MediumResponse& m, const CurvatureOptions& opt = {}) {
    const KernelMedia km = kernel_media(kappabar, m);
    const int nphi = opt.azimuth_points;
    auto f = [&](double k) {
        Vec<3> out{};
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * pi * (j + 0.5) / nphi;
            auto b = planar_blocks<cplx>(cplx(k * std::cos(phi)), cplx(k * std::sin(phi)), km);
            auto g = planar_gamma_point(b);
            for (int i = 0; i < 3; ++i) out[i] += 2.0 * k * g(i, i).real() / nphi;
        }
        return out;
    };
    const double kc = detail::radial_cutoff(kappabar, m, opt.tail_span);
    QuadOptions q{opt.rel_tol, 0.0, opt.max_intervals};
    auto r = integrate_or_throw<3>(f, 0.0, kc, q, "planar scattering integral", 8);
    return {0.5 * (r.value[0] + r.value[1]), r.value[2], r.error};
}

// ---------------------------------------------------------------------------
// Linear-curvature tensor.
//
// With P = L O, Q = O M and Kz the height derivative of the surface operator,
// the first-order tensor at momentum k is sum_{ab} h_ab M_ab(k) where
//   M_ab = 1/2 [d_a(q0 L) d_b Q + d_a P d_b(q0 M) + d_a P d_b Kz Q - P d_a Kz d_b Q]
//        + i d_b P (Mt_a + Kt_a Q)
// (d = momentum derivative, Mt_a and Kt_a the normal-tilt insertions).

struct KernelJet {
    Mat<cplx, 3, 6> P, dP[2], dqL[2];
    Mat<cplx, 6, 3> Q, dQ[2], dqM[2];
    Mat<cplx, 6, 6> dKz[2];
    Mat<cplx, 6, 3> Mt[2];
    Mat<cplx, 6, 6> Kt[2];
};

namespace detail {

template <class S>
struct KernelValues {
    Mat<S, 3, 6> P, qL;
    Mat<S, 6, 3> Q, qM;
    Mat<S, 6, 6> Kz;
};

template <class S>
KernelValues<S> kernel_values(const S& kx, const S& ky, const KernelMedia& km, PlanarBlocks<S>* keep = nullptr) {
    PlanarBlocks<S> b = planar_blocks<S>(kx, ky, km);
    Mat<S, 6, 6> O = planar_resolvent(b);
    Mat<S, 3, 6> L = field_operator(b);
    Mat<S, 6, 3> M = incident_operator(b);
    KernelValues<S> v;
    v.P = L * O;
    v.Q = O * M;
    v.qL = scaled(L, b.s0);
    v.qM = scaled(M, b.s0);
    v.Kz = cross_sectors(2, b.Xz);
    if (keep) *keep = b;
    return v;
}

inline void tilt_insertions(KernelJet& j, const PlanarBlocks<cplx>& b) {
    for (int a = 0; a < 2; ++a) {
        j.Mt[a] = scaled(cross_sectors(a, b.Mhat), b.decay);
        j.Kt[a] = cross_sectors(a, b.X);
    }
}

} // namespace detail

// Analytic momentum derivatives via forward-mode duals.
inline KernelJet kernel_jet(double kx, double ky, const KernelMedia& km) {
    Dual dx(cplx(kx), 1.0, 0.0), dy(cplx(ky), 0.0, 1.0);
    PlanarBlocks<Dual> bd;
    auto v = detail::kernel_values<Dual>(dx, dy, km, &bd);
    KernelJet j;
    j.P = val(v.P);
    j.Q = val(v.Q);
    for (int a = 0; a < 2; ++a) {
        j.dP[a] = grad(v.P, a);
        j.dQ[a] = grad(v.Q, a);
        j.dqL[a] = grad(v.qL, a);
        j.dqM[a] = grad(v.qM, a);
        j.dKz[a] = grad(v.Kz, a);
    }
    PlanarBlocks<cplx> b;
    b.s0 = value(bd.s0);
    b.decay = value(bd.decay);
    b.X = val(bd.X);
    b.Mhat = val(bd.Mhat);
    detail::tilt_insertions(j, b);
    return j;
}

// Central differences with one Richardson step (error O(h^4)).
inline KernelJet kernel_jet_numeric(double kx, double ky, const KernelMedia& km, double h) {
    using V = detail::KernelValues<cplx>;
    PlanarBlocks<cplx> b;
    V c = detail::kernel_values<cplx>(cplx(kx), cplx(ky), km, &b);
    KernelJet j;
    j.P = c.P;
    j.Q = c.Q;
    for (int a = 0; a < 2; ++a) {
        auto at = [&](double step) {
            double x = kx + (a == 0 ? step : 0.0), y = ky + (a == 1 ? step : 0.0);
            return detail::kernel_values<cplx>(cplx(x), cplx(y), km);
        };
        V p1 = at(h), m1 = at(-h), p2 = at(0.5 * h), m2 = at(-0.5 * h);
        auto rich = [&](const auto& fp1, const auto& fm1, const auto& fp2, const auto& fm2) {
            auto d1 = scaled(fp1 - fm1, 1.0 / (2.0 * h));
            auto d2 = scaled(fp2 - fm2, 1.0 / h);
            return scaled(scaled(d2, 4.0) - d1, 1.0 / 3.0);
        };
        j.dP[a] = rich(p1.P, m1.P, p2.P, m2.P);
        j.dQ[a] = rich(p1.Q, m1.Q, p2.Q, m2.Q);
        j.dqL[a] = rich(p1.qL, m1.qL, p2.qL, m2.qL);
        j.dqM[a] = rich(p1.qM, m1.qM, p2.qM, m2.qM);
        j.dKz[a] = rich(p1.Kz, m1.Kz, p2.Kz, m2.Kz);
    }
    detail::tilt_insertions(j, b);
    return j;
}

// The four first-order moments M_ab(k), a, b in {x, y}.
using Moments = std::array<Mat<cplx, 3, 3>, 4>; // index 2*a + b

inline Moments curvature_moments(const KernelJet& j) {
    const cplx I(0.0, 1.0);
    Moments out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Mat<cplx, 3, 3> t = j.dqL[a] * j.dQ[b];
            t += j.dP[a] * j.dqM[b];
            t += j.dP[a] * (j.dKz[b] * j.Q);
            t -= j.P * (j.dKz[a] * j.dQ[b]);
            t *= 0.5;
            Mat<cplx, 6, 3> inc = j.Mt[a] + j.Kt[a] * j.Q;
            t += scaled(j.dP[b] * inc, I);
            out[2 * a + b] = t;
        }
    return out;
}

// 4 pi kappa Gamma^(1) d^2 per unit h_ab: real parts of 2 int k dk <M_ab>_phi.
struct CurvatureMoments {
    std::array<Mat3, 4> m{};
    double error = 0.0;
    double imag = 0.0;
};

namespace detail {

constexpr int moment_size = 4 * 9 * 2; // real and imaginary parts

inline void pack(const Moments& mo, double w, Vec<moment_size>& out) {
    for (int q = 0; q < 4; ++q)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const cplx v = mo[q](r, c) * w;
                out[q * 9 + r * 3 + c] += v.real();
                out[36 + q * 9 + r * 3 + c] += v.imag();
            }
}

inline CurvatureMoments unpack(const QuadResult<moment_size>& r) {
    CurvatureMoments cm;
    for (int q = 0; q < 4; ++q)
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c) {
                cm.m[q][i][c] = r.value[q * 9 + i * 3 + c];
                cm.imag = std::max(cm.imag, std::abs(r.value[36 + q * 9 + i * 3 + c]));
            }
    cm.error = r.error;
    return cm;
}

} // namespace detail

inline CurvatureMoments curvature_moments_integrated(double kappabar, const MediumResponse& m,
                                                     const CurvatureOptions& opt = {}) {
    const KernelMedia km = kernel_media(kappabar, m);
    const int nphi = opt.azimuth_points;
    auto f = [&](double k) {
        Vec<detail::moment_size> out{};
        for (int j = 0; j < nphi; ++j) {
            const double phi = 2.0 * pi * (j + 0.5) / nphi;
            auto jet = kernel_jet(k * std::cos(phi), k * std::sin(phi), km);
            detail::pack(curvature_moments(jet), 2.0 * k / nphi, out);
        }
        return out;
    };
    const double kc = detail::radial_cutoff(kappabar, m, opt.tail_span);
    QuadOptions q{opt.rel_tol, 0.0, opt.max_intervals};
    return detail::unpack(integrate_or_throw<detail::moment_size>(f, 0.0, kc, q, "curvature radial integral", 8));
}

// Brute-force path: numerical derivatives and a 2D adaptive momentum integral.
inline CurvatureMoments curvature_moments_oracle(double kappabar, const MediumResponse& m,
                                                 const CurvatureOptions& opt = {}) {
    const KernelMedia km = kernel_media(kappabar, m);
    QuadOptions q{std::max(opt.rel_tol, 1e-10), 0.0, opt.max_intervals};
    auto radial = [&](double k) {
        const double h = 1e-3 * k;
        auto azim = [&](double phi) {
            Vec<detail::moment_size> out{};
            auto jet = kernel_jet_numeric(k * std::cos(phi), k * std::sin(phi), km, h);
            detail::pack(curvature_moments(jet), 1.0, out);
            return out;
        };
        auto inner = integrate_or_throw<detail::moment_size>(azim, 0.0, 2.0 * pi, q, "oracle azimuthal integral", 4);
        Vec<detail::moment_size> out = inner.value;
        for (double& x : out) x *= 2.0 * k / (2.0 * pi);
        return out;
    };
    const double kc = detail::radial_cutoff(kappabar, m, opt.tail_span);
    return detail::unpack(integrate_or_throw<detail::moment_size>(radial, 0.0, kc, q, "oracle radial integral", 8));
}

inline Mat3 gamma1_from_moments(const CurvatureMoments& cm, const SurfacePatchExpansion& p) {
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c)
            g[i][c] = p.h11 * cm.m[0][i][c] + p.h22 * cm.m[3][i][c] + p.h12 * (cm.m[1][i][c] + cm.m[2][i][c]);
    return g;
}

inline double mat3_norm(const Mat3& g) {
    double s = 0.0;
    for (auto& r : g)
        for (double x : r) s += x * x;
    return std::sqrt(s);
}

inline void check_pattern(const Mat3& g, double tol, const std::string& where) {
    const double n = mat3_norm(g);
    const double off = std::max({std::abs(g[0][2]), std::abs(g[1][2]), std::abs(g[2][0]), std::abs(g[2][1])});
    if (off > tol * n) throw Error(Errc::PatternViolation, where + ": (x,z)/(y,z) entries do not vanish");
}

// 4 pi kappa Gamma^(1) d^2 for a given surface patch (h in units 1/d).
inline Mat3 gamma1_assemble(double kappabar, const MediumResponse& m, const SurfacePatchExpansion& patch,
                            const CurvatureOptions& opt = {}) {
    if (zero_contrast(m)) return {};
    auto g = gamma1_from_moments(curvature_moments_integrated(kappabar, m, opt), patch);
    check_pattern(g, opt.pattern_tol, "gamma1_assemble");
    return g;
}

inline Beta2 beta2_from_moments(const CurvatureMoments& cm, double pattern_tol) {
    const Mat3 m1 = gamma1_from_moments(cm, {1.0, 0.0, 0.0});
    const Mat3 m2 = gamma1_from_moments(cm, {0.0, 1.0, 0.0});
    const Mat3 m3 = gamma1_from_moments(cm, {0.0, 0.0, 1.0});
    check_pattern(m1, pattern_tol, "beta2 probe h11");
    check_pattern(m2, pattern_tol, "beta2 probe h22");
    check_pattern(m3, pattern_tol, "beta2 probe h12");
    Beta2 b;
    b.beta1 = (m1[0][0] + m1[1][1] + m2[0][0] + m2[1][1]) / 4.0;
    b.beta2 = (m1[2][2] + m2[2][2]) / 2.0;
    b.beta3 = (m1[0][0] - m1[1][1] - m2[0][0] + m2[1][1]) / 2.0;
    const double scale = std::max({std::abs(b.beta1), std::abs(b.beta2), std::abs(b.beta3)});
    if (std::abs(m3[0][1] - b.beta3) > 1e3 * pattern_tol * scale + 1e-14)
        throw Error(Errc::PatternViolation, "h12 probe inconsistent with beta3");
    b.error = cm.error;
    b.imag = cm.imag;
    return b;
}

inline Beta2 beta2(double kappabar, const MediumResponse& m, const CurvatureOptions& opt = {}) {
    if (!(kappabar >= 0.0)) throw Error(Errc::NegativeFrequency, "kappabar < 0");
    if (zero_contrast(m)) return {};
    return beta2_from_moments(curvature_moments_integrated(kappabar, m, opt), opt.pattern_tol);
}

inline Beta2 beta2_oracle(double kappabar, const MediumResponse& m, const CurvatureOptions& opt = {}) {
    if (!(kappabar >= 0.0)) throw Error(Errc::NegativeFrequency, "kappabar < 0");
    if (zero_contrast(m)) return {};
    return beta2_from_moments(curvature_moments_oracle(kappabar, m, opt), 1e-6);
}

inline BetaSet beta_set(double kappabar, const MediumResponse& m, bool with_curvature = true,
                        const CurvatureOptions& opt = {}) {
    BetaSet s;
    Beta0 b0 = beta0(kappabar, m, opt);
    s.beta1_0 = b0.beta1;
    s.beta2_0 = b0.beta2;
    s.error = b0.error;
    if (with_curvature) {
        Beta2 b2 = beta2(kappabar, m, opt);
        s.beta1_2 = b2.beta1;
        s.beta2_2 = b2.beta2;
        s.beta3_2 = b2.beta3;
        s.error = std::max(s.error, b2.error);
    }
    return s;
}

} // namespace curvecp
