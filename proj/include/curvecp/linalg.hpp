#pragma once
// Fixed-size matrices over complex values or forward-mode duals carrying
// the gradient with respect to the in-plane momentum (kx, ky).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "error.hpp"

namespace curvecp {

using cplx = std::complex<double>;

struct Dual {
    cplx v;
    cplx d[2];

    Dual() : v(0.0), d{0.0, 0.0} {}
    Dual(double x) : v(x), d{0.0, 0.0} {}
    Dual(cplx x) : v(x), d{0.0, 0.0} {}
    Dual(cplx x, cplx dx, cplx dy) : v(x), d{dx, dy} {}

    Dual& operator+=(const Dual& o) { v += o.v; d[0] += o.d[0]; d[1] += o.d[1]; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d[0] -= o.d[0]; d[1] -= o.d[1]; return *this; }
    Dual& operator*=(const Dual& o) {
        d[0] = d[0] * o.v + v * o.d[0];
        d[1] = d[1] * o.v + v * o.d[1];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        cplx inv = 1.0 / o.v;
        cplx r = v * inv;
        d[0] = (d[0] - r * o.d[0]) * inv;
        d[1] = (d[1] - r * o.d[1]) * inv;
        v = r;
        return *this;
    }
};

inline Dual operator-(Dual a) { a.v = -a.v; a.d[0] = -a.d[0]; a.d[1] = -a.d[1]; return a; }
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator*(Dual a, cplx s) { a.v *= s; a.d[0] *= s; a.d[1] *= s; return a; }
inline Dual operator*(cplx s, Dual a) { return a * s; }
inline Dual operator*(Dual a, double s) { return a * cplx(s); }
inline Dual operator*(double s, Dual a) { return a * cplx(s); }
inline Dual operator+(Dual a, double s) { a.v += s; return a; }
inline Dual operator+(double s, Dual a) { a.v += s; return a; }
inline Dual operator-(Dual a, double s) { a.v -= s; return a; }
inline Dual operator-(double s, Dual a) { return -a + s; }
inline Dual operator/(Dual a, double s) { return a * (1.0 / s); }
inline Dual operator/(double s, const Dual& a) { return Dual(s) / a; }

inline Dual sqrt(const Dual& a) {
    cplx r = std::sqrt(a.v);
    cplx h = 0.5 / r;
    return {r, a.d[0] * h, a.d[1] * h};
}
inline Dual exp(const Dual& a) {
    cplx e = std::exp(a.v);
    return {e, a.d[0] * e, a.d[1] * e};
}

inline cplx value(const cplx& x) { return x; }
inline cplx value(const Dual& x) { return x.v; }

template <class T, int R, int C>
struct Mat {
    std::array<T, R * C> a{};

    T& operator()(int i, int j) { return a[i * C + j]; }
    const T& operator()(int i, int j) const { return a[i * C + j]; }

    static Mat zero() { return Mat{}; }
    static Mat identity() {
        static_assert(R == C);
        Mat m;
        for (int i = 0; i < R; ++i) m(i, i) = T(1.0);
        return m;
    }
    Mat& operator+=(const Mat& o) { for (int k = 0; k < R * C; ++k) a[k] += o.a[k]; return *this; }
    Mat& operator-=(const Mat& o) { for (int k = 0; k < R * C; ++k) a[k] -= o.a[k]; return *this; }
    template <class S>
    Mat& operator*=(const S& s) { for (auto& x : a) x = x * s; return *this; }
};

template <class T, int R, int C>
Mat<T, R, C> operator+(Mat<T, R, C> x, const Mat<T, R, C>& y) { return x += y; }
template <class T, int R, int C>
Mat<T, R, C> operator-(Mat<T, R, C> x, const Mat<T, R, C>& y) { return x -= y; }
template <class T, int R, int C, class S>
Mat<T, R, C> scaled(Mat<T, R, C> x, const S& s) { return x *= s; }

template <class T, int R, int K, int C>
Mat<T, R, C> operator*(const Mat<T, R, K>& x, const Mat<T, K, C>& y) {
    Mat<T, R, C> out;
    for (int i = 0; i < R; ++i)
        for (int k = 0; k < K; ++k) {
            const T& xik = x(i, k);
            for (int j = 0; j < C; ++j) out(i, j) += xik * y(k, j);
        }
    return out;
}

// Complex part of a dual matrix: value or one gradient component.
template <int R, int C>
Mat<cplx, R, C> val(const Mat<Dual, R, C>& m) {
    Mat<cplx, R, C> out;
    for (int k = 0; k < R * C; ++k) out.a[k] = m.a[k].v;
    return out;
}
template <int R, int C>
Mat<cplx, R, C> grad(const Mat<Dual, R, C>& m, int axis) {
    Mat<cplx, R, C> out;
    for (int k = 0; k < R * C; ++k) out.a[k] = m.a[k].d[axis];
    return out;
}

// Gauss-Jordan inverse with partial pivoting on the value part.
template <class T, int N>
Mat<T, N, N> inverse(Mat<T, N, N> m) {
    Mat<T, N, N> inv = Mat<T, N, N>::identity();
    for (int c = 0; c < N; ++c) {
        int p = c;
        double best = std::abs(value(m(c, c)));
        for (int r = c + 1; r < N; ++r) {
            double v = std::abs(value(m(r, c)));
            if (v > best) { best = v; p = r; }
        }
        if (!(best > 0.0) || !std::isfinite(best)) throw Error(Errc::SingularResolvent, "pivot vanished");
        if (p != c)
            for (int j = 0; j < N; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        T piv = T(1.0) / m(c, c);
        for (int j = 0; j < N; ++j) {
            m(c, j) = m(c, j) * piv;
            inv(c, j) = inv(c, j) * piv;
        }
        for (int r = 0; r < N; ++r) {
            if (r == c) continue;
            T f = m(r, c);
            if (value(f) == cplx(0.0) && f.d[0] == cplx(0.0) && f.d[1] == cplx(0.0)) continue;
            for (int j = 0; j < N; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <int N>
Mat<cplx, N, N> inverse(Mat<cplx, N, N> m) {
    Mat<cplx, N, N> inv = Mat<cplx, N, N>::identity();
    for (int c = 0; c < N; ++c) {
        int p = c;
        double best = std::abs(m(c, c));
        for (int r = c + 1; r < N; ++r)
            if (std::abs(m(r, c)) > best) { best = std::abs(m(r, c)); p = r; }
        if (!(best > 0.0) || !std::isfinite(best)) throw Error(Errc::SingularResolvent, "pivot vanished");
        if (p != c)
            for (int j = 0; j < N; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        cplx piv = 1.0 / m(c, c);
        for (int j = 0; j < N; ++j) {
            m(c, j) *= piv;
            inv(c, j) *= piv;
        }
        for (int r = 0; r < N; ++r) {
            if (r == c || m(r, c) == cplx(0.0)) continue;
            cplx f = m(r, c);
            for (int j = 0; j < N; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

// Row-wise cross product a x (.) applied to each 3-row sector of a 6-row matrix.
// axis: 0 = x, 1 = y, 2 = z.
template <class T, int C>
Mat<T, 6, C> cross_sectors(int axis, const Mat<T, 6, C>& m) {
    Mat<T, 6, C> out;
    for (int s = 0; s < 6; s += 3)
        for (int j = 0; j < C; ++j) {
            const T& vx = m(s, j);
            const T& vy = m(s + 1, j);
            const T& vz = m(s + 2, j);
            if (axis == 2) {
                out(s, j) = -vy;
                out(s + 1, j) = vx;
            } else if (axis == 0) {
                out(s + 1, j) = -vz;
                out(s + 2, j) = vy;
            } else {
                out(s, j) = vz;
                out(s + 2, j) = -vx;
            }
        }
    return out;
}

template <class T, int R, int C>
double max_abs(const Mat<T, R, C>& m) {
    double r = 0.0;
    for (auto& x : m.a) r = std::max(r, std::abs(value(x)));
    return r;
}

} // namespace curvecp
