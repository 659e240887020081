#pragma once
// Riccati-type modified spherical Bessel functions
//   calI_l(x) = x i_l(x),  calK_l(x) = x k_l(x),  calI_0 = sinh x,  calK_0 = (pi/2) e^-x,
// kept as logarithms and logarithmic derivatives so that orders up to 1e5 and
// arguments up to 1e5 never overflow.

#include <cmath>
#include <string>
#include <vector>

#include "constants.hpp"
#include "error.hpp"

namespace curvecp {

struct BesselPair {
    int l = 0;
    double x = 0.0;
    double log_I = 0.0, log_K = 0.0;   // log calI_l, log calK_l
    double dlog_I = 0.0, dlog_K = 0.0; // calI'_l / calI_l, calK'_l / calK_l

    double I() const { return std::exp(log_I); }
    double K() const { return std::exp(log_K); }
    double dI() const { return dlog_I * I(); }
    double dK() const { return dlog_K * K(); }
    // calI calK' - calI' calK, formed without overflow
    double wronskian() const { return std::exp(log_I + log_K) * (dlog_K - dlog_I); }
};

struct BesselSequence {
    double x = 0.0;
    std::vector<double> log_I, log_K, dlog_I, dlog_K;

    BesselPair pair(int l) const { return {l, x, log_I[l], log_K[l], dlog_I[l], dlog_K[l]}; }
};

inline constexpr double bessel_max_argument = 1e5;
inline constexpr int bessel_max_order = 100000;

// All orders 0..lmax at one argument.
inline BesselSequence bessel_sequence(int lmax, double x) {
    if (!(x > 0.0) || x > bessel_max_argument || lmax < 0 || lmax > bessel_max_order)
        throw Error(Errc::OverflowDomain, "bessel argument " + std::to_string(x) + ", order " + std::to_string(lmax));
    BesselSequence s;
    s.x = x;
    const std::size_t n = static_cast<std::size_t>(lmax) + 1;
    s.log_I.resize(n);
    s.log_K.resize(n);
    s.dlog_I.resize(n);
    s.dlog_K.resize(n);

    // calK: upward recurrence on r_l = calK_{l+1}/calK_l.
    s.log_K[0] = std::log(pi / 2) - x;
    s.dlog_K[0] = -1.0;
    double r = 1.0 + 1.0 / x;
    for (int l = 1; l <= lmax; ++l) {
        s.log_K[l] = s.log_K[l - 1] + std::log(r);
        s.dlog_K[l] = -1.0 / r - l / x;
        r = 1.0 / r + (2.0 * l + 1.0) / x;
    }

    // calI: downward recurrence on rho_l = calI_l / calI_{l-1} (continued fraction).
    const int top = lmax + 60 + static_cast<int>(std::ceil(2.0 * x));
    std::vector<double> rho(n + 1);
    double q = 0.0;
    for (int l = top; l >= 1; --l) {
        q = 1.0 / ((2.0 * l + 1.0) / x + q);
        if (l <= lmax + 1) rho[l] = q;
    }
    s.log_I[0] = x > 20.0 ? x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)) : std::log(std::sinh(x));
    for (int l = 1; l <= lmax; ++l) s.log_I[l] = s.log_I[l - 1] + std::log(rho[l]);
    for (int l = 0; l <= lmax; ++l) s.dlog_I[l] = (l + 1.0) / x + rho[l + 1];
    return s;
}

inline BesselPair bessel_pair(int l, double x) {
    if (l < 0) throw Error(Errc::OverflowDomain, "negative order");
    return bessel_sequence(l, x).pair(l);
}

} // namespace curvecp
