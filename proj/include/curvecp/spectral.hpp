#pragma once
// Plane-wave kernels of the flat surface z = -d (units d = 1).
//
// The H sector is rescaled by lambda = kappa * ell (H -> lambda H). Gamma is
// invariant under the similarity and every block stays finite at kappa = 0
// and in the PEC limit. L carries an extra factor kappa so that products
// L O M give kappa * Gamma directly.

#include <cmath>
#include <complex>

#include "linalg.hpp"
#include "materials.hpp"

namespace curvecp {

struct SpectralPoint {
    double kbar = 0.0;
    double phi_k = 0.0;
    double kappabar = 0.0;
};

struct AxialDecay {
    double s0 = 0.0;
    double s1 = 0.0; // +inf for a perfect conductor at kappabar > 0
};

inline AxialDecay axial_decay(const SpectralPoint& p, const MediumResponse& m) {
    const double k2 = p.kbar * p.kbar, kb2 = p.kappabar * p.kappabar;
    AxialDecay a;
    a.s0 = std::sqrt(k2 + m.mu0 * m.eps0 * kb2);
    if (m.body_pec())
        a.s1 = p.kappabar > 0.0 ? pec_sentinel : p.kbar;
    else
        a.s1 = std::sqrt(k2 + m.mu1 * m.eps1 * kb2);
    return a;
}

enum class KernelRegime { Finite, PecDynamic, PecStatic };

// Frequency-dependent scalars shared by every momentum point.
struct KernelMedia {
    double kappa = 0.0;
    double e0 = 1, m0 = 1, e1 = 1, m1 = 1;
    double n0sq = 1, n1sq = 1;
    KernelRegime regime = KernelRegime::Finite;
    double ell = 1.0;
    double aEH = 1.0; // X^EH  = aEH * Y/ell
    double bHE = 0.0; // X^HE  = -bHE * Y/ell
    double cL = 1.0;  // L^EH  prefactor
    double cM = 1.0;  // M^H   prefactor
};

inline KernelMedia kernel_media(double kappabar, const MediumResponse& m) {
    KernelMedia k;
    k.kappa = kappabar;
    k.e0 = m.eps0;
    k.m0 = m.mu0;
    k.n0sq = m.eps0 * m.mu0;
    if (m.body_pec()) {
        k.e1 = pec_sentinel;
        k.m1 = 1.0;
        k.n1sq = pec_sentinel;
        k.aEH = 2.0 / (k.m0 + k.m1);
        k.cL = 0.0;
        if (kappabar > 0.0) {
            k.regime = KernelRegime::PecDynamic;
            k.ell = pec_sentinel;
            k.bHE = 2.0 * kappabar * kappabar * k.m1;
            k.cM = 0.0;
        } else {
            k.regime = KernelRegime::PecStatic;
            k.ell = pec_sentinel;
            k.bHE = 0.0;
            k.cM = 2.0 * k.e0;
        }
        return k;
    }
    k.e1 = m.eps1;
    k.m1 = m.mu1;
    k.n1sq = m.eps1 * m.mu1;
    k.regime = KernelRegime::Finite;
    k.ell = std::sqrt(k.n1sq);
    k.aEH = 2.0 / (k.m0 + k.m1);
    k.bHE = 2.0 * kappabar * kappabar * k.n1sq / (k.e0 + k.e1);
    k.cL = 1.0 / k.ell;
    k.cM = 2.0 * k.e0 * k.ell / (k.e0 + k.e1);
    return k;
}

template <class S>
struct PlanarBlocks {
    S s0;              // axial decay in medium 0
    S decay;           // e^{-s0}; L and Mhat below exclude it
    Mat<S, 3, 6> L;    // kappa * [G0^EE, G0^EH/lambda] from surface to particle
    Mat<S, 6, 3> Mhat; // incident fields on the surface, before n x
    Mat<S, 6, 6> X;    // coincident surface kernel (principal value), before n x
    Mat<S, 6, 6> Xz;   // its derivative in the source-field height difference
};

namespace detail {

// eps_ijk D_k
template <class S>
Mat<S, 3, 3> levi(const S& dx, const S& dy, const S& dz) {
    Mat<S, 3, 3> m;
    m(0, 1) = dz;
    m(0, 2) = -dy;
    m(1, 0) = -dz;
    m(1, 2) = dx;
    m(2, 0) = dy;
    m(2, 1) = -dx;
    return m;
}

template <class S, int R0, int C0, int R, int C>
void put(Mat<S, R, C>& dst, const Mat<S, 3, 3>& b) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) dst(R0 + i, C0 + j) = b(i, j);
}

// kappa * G^EE in medium 0 for the one-sided wave with D_z = dz.
template <class S>
Mat<S, 3, 3> kappa_gee0(const S& kx, const S& ky, const S& q0, const S& g0, const S& dz, const KernelMedia& km) {
    const cplx I(0.0, 1.0);
    S D[3] = {kx * I, ky * I, dz};
    Mat<S, 3, 3> m;
    const double inv_e0 = 1.0 / km.e0;
    const double kk = km.m0 * km.kappa * km.kappa;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            S v = D[i] * D[j] * g0 * inv_e0;
            if (i == j) v -= g0 * kk;
            m(i, j) = v;
        }
    (void)q0;
    return m;
}

} // namespace detail

template <class S>
PlanarBlocks<S> planar_blocks(const S& kx, const S& ky, const KernelMedia& km) {
    const cplx I(0.0, 1.0);
    const double kap2 = km.kappa * km.kappa;
    const S k2 = kx * kx + ky * ky;
    const S q0 = sqrt(k2 + km.n0sq * kap2);
    const S g0 = 1.0 / (q0 * 2.0);

    PlanarBlocks<S> b;
    b.s0 = q0;
    b.decay = exp(-q0);

    // Y/ell (principal value), Yz/ell, and the EE/HH scalar coefficients.
    Mat<S, 3, 3> Y, Yz;
    S cEE, cHH, zEE, zHH;
    const S ka[2] = {kx, ky};
    switch (km.regime) {
    case KernelRegime::Finite: {
        const S q1 = sqrt(k2 + km.n1sq * kap2);
        const S g1 = 1.0 / (q1 * 2.0);
        const double dn = km.n1sq - km.n0sq;
        const S qs = q0 + q1;
        const S Delta = dn / (q0 * q1 * qs * 2.0);
        const S Zd = dn / (qs * 2.0);
        const S diag = km.n0sq * g0 - km.n1sq * g1;
        const double il = 1.0 / km.ell;
        for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) Y(a, c) = -(ka[a] * ka[c] * Delta) * il;
            Y(a, a) -= diag * il;
            Yz(a, 2) = ka[a] * Zd * (-I * il);
            Yz(2, a) = Yz(a, 2);
        }
        Y(2, 2) = -(Zd + diag) * il;
        cEE = (km.m0 * g0 - km.m1 * g1) * (-2.0 / (km.m0 + km.m1));
        cHH = (km.e1 * g1 - km.e0 * g0) * (2.0 / (km.e0 + km.e1));
        zEE = (km.m1 * q1 - km.m0 * q0) / (km.m0 + km.m1);
        zHH = (km.e1 * q1 - km.e0 * q0) / (km.e0 + km.e1);
        break;
    }
    case KernelRegime::PecDynamic: {
        const double h = 0.5 / km.kappa;
        Y(0, 0) = S(h);
        Y(1, 1) = S(h);
        for (int a = 0; a < 2; ++a) {
            Yz(a, 2) = ka[a] * (-I * h);
            Yz(2, a) = Yz(a, 2);
        }
        cEE = g0 * (-2.0 * km.m0 / (km.m0 + km.m1));
        cHH = S(0.0);
        // the mu1*q1 and eps1*q1 pieces are momentum independent in the limit
        zEE = q0 * (-km.m0 / (km.m0 + km.m1));
        zHH = S(0.0);
        break;
    }
    case KernelRegime::PecStatic: {
        // kappa = 0: q0 = q1 = k
        const S inv_k = 1.0 / q0;
        const S inv_k3 = inv_k * inv_k * inv_k;
        for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) Y(a, c) = ka[a] * ka[c] * inv_k3 * (-0.25 * km.m1);
            Y(a, a) += inv_k * (0.5 * km.m1);
            Yz(a, 2) = ka[a] * inv_k * (-I * 0.25 * km.m1);
            Yz(2, a) = Yz(a, 2);
        }
        Y(2, 2) = inv_k * (0.25 * km.m1);
        cEE = g0 * (-2.0 * (km.m0 - km.m1) / (km.m0 + km.m1));
        cHH = g0 * 2.0;
        zEE = q0 * ((km.m1 - km.m0) / (km.m0 + km.m1));
        zHH = q0;
        break;
    }
    }

    // E_t = eps_ijk D_k / g without the s-odd (D_z) entries
    Mat<S, 3, 3> Et = detail::levi(kx * I, ky * I, S(0.0));
    Mat<S, 3, 3> XEE = scaled(Et, cEE), XHH = scaled(Et, cHH);
    Mat<S, 3, 3> XEH = scaled(Y, km.aEH), XHE = scaled(Y, -km.bHE);
    detail::put<S, 0, 0>(b.X, XEE);
    detail::put<S, 0, 3>(b.X, XEH);
    detail::put<S, 3, 0>(b.X, XHE);
    detail::put<S, 3, 3>(b.X, XHH);

    Mat<S, 3, 3> ZEE, ZHH;
    ZEE(0, 1) = zEE;
    ZEE(1, 0) = -zEE;
    ZHH(0, 1) = zHH;
    ZHH(1, 0) = -zHH;
    detail::put<S, 0, 0>(b.Xz, ZEE);
    detail::put<S, 0, 3>(b.Xz, scaled(Yz, km.aEH));
    detail::put<S, 3, 0>(b.Xz, scaled(Yz, -km.bHE));
    detail::put<S, 3, 3>(b.Xz, ZHH);

    // particle at height +d above the surface: D_z = -q0 toward the particle
    const S up = -q0, down = q0;
    Mat<S, 3, 3> LEE = detail::kappa_gee0(kx, ky, q0, g0, up, km);
    Mat<S, 3, 3> LEH = scaled(detail::levi(kx * I, ky * I, up), g0 * km.cL);
    detail::put<S, 0, 0>(b.L, LEE);
    detail::put<S, 0, 3>(b.L, LEH);

    Mat<S, 3, 3> MEE = scaled(detail::levi(kx * I, ky * I, down), g0 * (-2.0 * km.m0 / (km.m0 + km.m1)));
    Mat<S, 3, 3> MHE = scaled(detail::kappa_gee0(kx, ky, q0, g0, down, km), S(-km.cM));
    detail::put<S, 0, 0>(b.Mhat, MEE);
    detail::put<S, 3, 0>(b.Mhat, MHE);
    return b;
}

inline PlanarBlocks<cplx> planar_blocks(const SpectralPoint& p, const MediumResponse& m) {
    KernelMedia km = kernel_media(p.kappabar, m);
    return planar_blocks<cplx>(cplx(p.kbar * std::cos(p.phi_k)), cplx(p.kbar * std::sin(p.phi_k)), km);
}

// Surface operator K = (I2 x [z]x) X.
template <class S>
Mat<S, 6, 6> surface_operator(const PlanarBlocks<S>& b) {
    return cross_sectors(2, b.X);
}

// M = (I2 x [z]x) Mhat, including the decay factor.
template <class S>
Mat<S, 6, 3> incident_operator(const PlanarBlocks<S>& b) {
    return scaled(cross_sectors(2, b.Mhat), b.decay);
}

template <class S>
Mat<S, 3, 6> field_operator(const PlanarBlocks<S>& b) {
    return scaled(b.L, b.decay);
}

// O = (1 - K)^-1.
template <class S>
Mat<S, 6, 6> planar_resolvent(const PlanarBlocks<S>& b) {
    Mat<S, 6, 6> A = Mat<S, 6, 6>::identity() - surface_operator(b);
    return inverse(A);
}

// Coincident-point planar scattering tensor kappa * Gamma at one momentum.
template <class S>
Mat<S, 3, 3> planar_gamma_point(const PlanarBlocks<S>& b) {
    return field_operator(b) * planar_resolvent(b) * incident_operator(b);
}

} // namespace curvecp
