#pragma once
// Globally adaptive Gauss-Kronrod (7/15) for fixed-size vector integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace curvecp {

template <int N>
using Vec = std::array<double, N>;

template <int N>
struct QuadResult {
    Vec<N> value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 2000;
};

namespace detail {

template <int N>
struct Segment {
    double a, b;
    Vec<N> value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <int N, class F>
Segment<N> gk15(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Vec<N> k{}, g{};
    Vec<N> fc = f(c);
    for (int i = 0; i < N; ++i) {
        k[i] = wk[0] * fc[i];
        g[i] = wg[0] * fc[i];
    }
    for (std::size_t j = 1; j < x.size(); ++j) {
        Vec<N> f1 = f(c - h * x[j]);
        Vec<N> f2 = f(c + h * x[j]);
        for (int i = 0; i < N; ++i) {
            double s = f1[i] + f2[i];
            k[i] += wk[j] * s;
            if (j % 2 == 0) g[i] += wg[j / 2] * s;
        }
    }
    Segment<N> seg{a, b, {}, 0.0};
    for (int i = 0; i < N; ++i) {
        seg.value[i] = h * k[i];
        seg.error = std::max(seg.error, std::abs(h * (k[i] - g[i])));
    }
    return seg;
}

} // namespace detail

// Integrate f: double -> Vec<N> over [a, b]. Tolerance applies to the max-norm.
template <int N, class F>
QuadResult<N> integrate(F&& f, double a, double b, const QuadOptions& opt = {}, int initial_panels = 1) {
    std::priority_queue<detail::Segment<N>> heap;
    QuadResult<N> res;
    const int panels = std::max(1, initial_panels);
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
        heap.push(detail::gk15<N>(f, lo, hi));
        res.evaluations += 15;
    }
    auto totals = [&](Vec<N>& v, double& e) {
        v.fill(0.0);
        e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            auto& s = copy.top();
            for (int i = 0; i < N; ++i) v[i] += s.value[i];
            e += s.error;
            copy.pop();
        }
    };
    Vec<N> total{};
    double err = 0.0;
    totals(total, err);
    int intervals = panels;
    for (;;) {
        double scale = 0.0;
        for (double t : total) scale = std::max(scale, std::abs(t));
        double target = std::max(opt.abs_tol, opt.rel_tol * scale);
        if (err <= target) break;
        if (intervals >= opt.max_intervals) {
            res.converged = false;
            break;
        }
        auto worst = heap.top();
        heap.pop();
        double m = 0.5 * (worst.a + worst.b);
        auto l = detail::gk15<N>(f, worst.a, m);
        auto r = detail::gk15<N>(f, m, worst.b);
        res.evaluations += 30;
        for (int i = 0; i < N; ++i) total[i] += l.value[i] + r.value[i] - worst.value[i];
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++intervals;
        if (intervals % 64 == 0) totals(total, err); // refresh running sums
    }
    totals(total, err);
    res.value = total;
    res.error = err;
    return res;
}

template <int N, class F>
QuadResult<N> integrate_or_throw(F&& f, double a, double b, const QuadOptions& opt, const std::string& what,
                                 int initial_panels = 1) {
    auto r = integrate<N>(std::forward<F>(f), a, b, opt, initial_panels);
    if (!r.converged)
        throw Error(Errc::QuadratureNonConvergence, what + " (achieved error " + std::to_string(r.error) + ")");
    return r;
}

// Scalar convenience wrapper.
template <class F>
QuadResult<1> integrate_scalar(F&& f, double a, double b, const QuadOptions& opt = {}, int initial_panels = 1) {
    return integrate<1>([&](double x) { return Vec<1>{f(x)}; }, a, b, opt, initial_panels);
}

} // namespace curvecp
