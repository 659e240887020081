#pragma once
// Casimir-Polder potential of an isotropic particle outside a sphere in vacuum
// from the partial-wave T-matrix.
//
// T-matrix elements use calK normalised to e^-x at l = 0 (Wronskian -1); this is
// the normalisation in which the potential formula below holds, and it gives
// T^EE_1 -> (2/3)(kR)^3 (eps-1)/(eps+2) for a small sphere.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "constants.hpp"
#include "materials.hpp"
#include "quadrature.hpp"

namespace curvecp {

struct MieCoefficients {
    double TEE = 0.0, THH = 0.0;
};

struct MieTMatrix {
    double R = 0.0, kappa = 0.0;
    std::vector<double> TEE, THH; // index l, entry 0 unused
    double last_ratio = 0.0;      // |T_lmax| / |T_{lmax-1}| (EE)
};

namespace detail {

inline const double log_half_pi = std::log(pi / 2);

inline void require_vacuum_exterior(const MediumResponse& m) {
    if (m.eps0 != 1.0 || m.mu0 != 1.0)
        throw Error(Errc::ConfigError, "the sphere solver needs a vacuum exterior");
}

// log|T| and sign for one multipole, given Bessel data at x = kR and at n x.
struct LogT {
    double log_abs = -INFINITY;
    double sign = 0.0;
};

inline LogT log_mie(const BesselSequence& out, const BesselSequence* in, int l, double z, bool pec, bool ee) {
    const double log_ratio = out.log_I[l] - (out.log_K[l] - log_half_pi);
    double f;
    if (pec) {
        f = ee ? -out.dlog_I[l] / out.dlog_K[l] : -1.0;
    } else {
        const double lin = in->dlog_I[l];
        f = (z * out.dlog_I[l] - lin) / (lin - z * out.dlog_K[l]);
    }
    if (f == 0.0) return {};
    return {log_ratio + std::log(std::abs(f)), f > 0 ? 1.0 : -1.0};
}

} // namespace detail

inline MieTMatrix mie_t_matrix(int lmax, const MediumResponse& m, double R, double kappa) {
    detail::require_vacuum_exterior(m);
    MieTMatrix t;
    t.R = R;
    t.kappa = kappa;
    t.TEE.assign(lmax + 1, 0.0);
    t.THH.assign(lmax + 1, 0.0);
    if (kappa == 0.0 || lmax < 1) return t;
    const bool pec = m.body_pec();
    if (!pec && m.eps1 == 1.0 && m.mu1 == 1.0) return t;
    const double x = kappa * R;
    BesselSequence out = bessel_sequence(lmax, x);
    BesselSequence in;
    if (!pec) in = bessel_sequence(lmax, std::sqrt(m.eps1 * m.mu1) * x);
    const double zE = pec ? 0.0 : std::sqrt(m.eps1 / m.mu1), zH = pec ? 0.0 : std::sqrt(m.mu1 / m.eps1);
    for (int l = 1; l <= lmax; ++l) {
        auto e = detail::log_mie(out, &in, l, zE, pec, true);
        auto h = detail::log_mie(out, &in, l, zH, pec, false);
        t.TEE[l] = e.sign * std::exp(e.log_abs);
        t.THH[l] = h.sign * std::exp(h.log_abs);
    }
    if (lmax >= 2 && t.TEE[lmax - 1] != 0.0) t.last_ratio = std::abs(t.TEE[lmax] / t.TEE[lmax - 1]);
    return t;
}

inline MieCoefficients mie_t(int l, const MediumResponse& m, double R, double kappa) {
    if (l < 1) throw Error(Errc::OverflowDomain, "multipole order must be >= 1");
    auto t = mie_t_matrix(l, m, R, kappa);
    return {t.TEE[l], t.THH[l]};
}

struct SphereOptions {
    double multipole_tol = 1e-9;
    double matsubara_tol = 1e-9;
    int n_min = 10;
    int l_cap = 100000;
    double rel_tol = 1e-9; // zero-temperature frequency integral
};

struct SphereTerm {
    double value = 0.0; // sum over l of (2l+1){...}, times kappa (finite as kappa -> 0)
    int lmax = 0;
};

namespace detail {

// kappa * sum_l (2l+1) {T^HH calK^2 - T^EE [calK'^2 + l(l+1) calK^2 / X^2]} at X = kappa a.
inline SphereTerm sphere_multipole_sum(const MediumResponse& m, double R, double a, double kappa,
                                       const SphereOptions& opt) {
    require_vacuum_exterior(m);
    const bool pec = m.body_pec();
    SphereTerm res;
    if (!pec && m.eps1 == 1.0 && m.mu1 == 1.0) return res;
    const double d = a - R;
    const int lmin = static_cast<int>(std::ceil(5.0 * kappa * a)) + 20;
    if (kappa == 0.0) {
        // static limit: only the electric sector survives
        const double q = R / a;
        const double lq = 2.0 * std::log(q);
        double sum = 0.0, prev = INFINITY;
        for (int l = 1;; ++l) {
            if (l > opt.l_cap) throw Error(Errc::NonConvergentMultipoleSum, "static multipole sum");
            const double amp = pec ? 1.0 / l : (m.eps1 - 1.0) / (m.eps1 * l + l + 1.0);
            const double term = -(2.0 * l + 1.0) * l * (l + 1.0) * amp * std::exp((2.0 * l + 1.0) * 0.5 * lq) / (a * a);
            sum += term;
            if (l >= lmin && std::abs(term) < opt.multipole_tol * std::abs(sum) && (std::abs(term) < prev || term == 0.0)) {
                res.lmax = l;
                break;
            }
            prev = std::abs(term);
        }
        // carries 1/a so that the caller's 1/a^2 completes the 1/a^3
        res.value = sum * a;
        return res;
    }
    const double x = kappa * R, X = kappa * a;
    const double shift = 2.0 * kappa * d;
    int lmax = std::max(lmin, static_cast<int>(std::ceil(40.0 * a / d))) + 50;
    for (;;) {
        lmax = std::min(lmax, opt.l_cap);
        BesselSequence sin_ = bessel_sequence(lmax, x);
        BesselSequence sout = bessel_sequence(lmax, X);
        BesselSequence sn;
        if (!pec) sn = bessel_sequence(lmax, std::sqrt(m.eps1 * m.mu1) * x);
        const double zE = pec ? 0.0 : std::sqrt(m.eps1 / m.mu1), zH = pec ? 0.0 : std::sqrt(m.mu1 / m.eps1);
        double sum = 0.0, prev = INFINITY;
        bool done = false;
        for (int l = 1; l <= lmax; ++l) {
            auto e = log_mie(sin_, &sn, l, zE, pec, true);
            auto h = log_mie(sin_, &sn, l, zH, pec, false);
            // terms are scaled by e^{2 kappa d} so that far tails do not underflow
            const double log_k2 = 2.0 * (sout.log_K[l] - log_half_pi) + shift;
            const double dk = sout.dlog_K[l];
            const double ang = dk * dk + l * (l + 1.0) / (X * X);
            double term = 0.0;
            if (h.sign != 0.0) term += h.sign * std::exp(h.log_abs + log_k2);
            if (e.sign != 0.0) term -= e.sign * std::exp(e.log_abs + log_k2) * ang;
            term *= (2.0 * l + 1.0) * kappa;
            sum += term;
            if (l >= lmin && std::abs(term) < opt.multipole_tol * std::abs(sum) && (std::abs(term) < prev || term == 0.0)) {
                res.lmax = l;
                done = true;
                break;
            }
            prev = std::abs(term);
        }
        if (done) {
            res.value = sum * std::exp(-shift);
            return res;
        }
        if (lmax >= opt.l_cap) throw Error(Errc::NonConvergentMultipoleSum, "l_max cap reached");
        lmax *= 2;
    }
}

} // namespace detail

using IsotropicPolarizability = std::function<double(const ImaginaryFrequency&)>;

struct SphereResult {
    double energy = 0.0; // eV
    int terms = 0;       // Matsubara terms or integrand evaluations
    int lmax = 0;        // largest multipole order used
};

// Summand of the frequency sum: (1/a^2) kappa alpha sum_l ... at one frequency.
inline double sphere_summand(const MaterialPair& pair, double R, double d, const IsotropicPolarizability& alpha,
                             const ImaginaryFrequency& f, const SphereOptions& opt = {}, int* lmax = nullptr) {
    const double a = R + d;
    auto t = detail::sphere_multipole_sum(pair.at(f), R, a, f.kappa, opt);
    if (lmax) *lmax = std::max(*lmax, t.lmax);
    return alpha(f) * t.value / (a * a);
}

inline SphereResult sphere_cp(double R, double d, const ThermalState& thermal, const IsotropicPolarizability& alpha,
                              const MaterialPair& pair, const SphereOptions& opt = {}) {
    if (!(d > 0.0) || !(R > 0.0)) throw Error(Errc::ConfigError, "sphere radius and separation must be positive");
    SphereResult res;
    if (auto* ft = std::get_if<FiniteTemperature>(&thermal)) {
        const double kT = k_boltzmann * ft->T;
        const double step = matsubara_spacing(ft->T);
        double sum = 0.0;
        for (int n = 0;; ++n) {
            const double w = n == 0 ? 0.5 : 1.0;
            const double term = w * sphere_summand(pair, R, d, alpha, ImaginaryFrequency::from_xi(n * step), opt, &res.lmax);
            sum += term;
            res.terms = n + 1;
            if (n >= opt.n_min && std::abs(term) <= opt.matsubara_tol * std::abs(sum)) break;
            if (n > 100000) throw Error(Errc::QuadratureNonConvergence, "Matsubara sum");
        }
        res.energy = kT * sum;
        return res;
    }
    // T = 0: k_B T sum' -> (hbar c / 2 pi) int dkappa
    const double kmax = 40.0 / d;
    QuadOptions q{opt.rel_tol, 0.0, 2000};
    auto r = integrate_or_throw<1>(
        [&](double kappa) {
            return Vec<1>{sphere_summand(pair, R, d, alpha, ImaginaryFrequency::from_kappa(kappa), opt, &res.lmax)};
        },
        0.0, kmax, q, "sphere frequency integral", 8);
    res.energy = hbar_c / (2.0 * pi) * r.value[0];
    res.terms = r.evaluations;
    return res;
}

} // namespace curvecp
