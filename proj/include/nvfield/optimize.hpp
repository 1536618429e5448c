#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>

#include "nvfield/error.hpp"

namespace nvfield::opt {

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
double golden_section_maximize(F&& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 500) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Root of a continuous f with f(lo)·f(hi) ≤ 0, by bisection.
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol, int max_iter = 200) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw ArgumentError("bisect: root is not bracketed");
    for (int it = 0; it < max_iter && (hi - lo) > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <std::size_t N>
using Point = std::array<double, N>;

template <std::size_t N>
struct SimplexResult {
    Point<N> x{};
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct SimplexOptions {
    double x_tol = 1e-9;   ///< simplex diameter, in the caller's (scaled) coordinates
    double f_tol = 1e-12;  ///< relative improvement required to keep restarting
    int max_evaluations = 20000;
    int max_restarts = 20;
};

/// Nelder–Mead minimisation with restarts from the best vertex.
///
/// A single run stops when the simplex diameter falls below x_tol. It is then
/// restarted around its best point; the search ends once a restart fails to
/// improve f by more than f_tol (relative, with an absolute floor of f_tol²).
/// Deterministic for a given start and step.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, Point<N> start, const Point<N>& step, const SimplexOptions& opts = {}) {
    SimplexResult<N> res;
    std::array<Point<N>, N + 1> s;
    std::array<double, N + 1> fv;

    auto eval = [&](const Point<N>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    Point<N> best = start;
    double f_best = eval(best);
    bool single_converged = false;

    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        s[0] = best;
        fv[0] = f_best;
        for (std::size_t i = 0; i < N; ++i) {
            s[i + 1] = best;
            s[i + 1][i] += step[i] * (restart == 0 ? 1.0 : 0.1);
            fv[i + 1] = eval(s[i + 1]);
        }

        single_converged = false;
        while (res.evaluations < opts.max_evaluations) {
            std::array<std::size_t, N + 1> idx;
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            {
                auto s2 = s;
                auto f2 = fv;
                for (std::size_t i = 0; i <= N; ++i) {
                    s[i] = s2[idx[i]];
                    fv[i] = f2[idx[i]];
                }
            }

            double diameter = 0.0;
            for (std::size_t i = 1; i <= N; ++i)
                for (std::size_t k = 0; k < N; ++k) diameter = std::max(diameter, std::abs(s[i][k] - s[0][k]));
            if (diameter < opts.x_tol) {
                single_converged = true;
                break;
            }

            Point<N> centroid{};
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t k = 0; k < N; ++k) centroid[k] += s[i][k] / static_cast<double>(N);

            auto along = [&](double t) {
                Point<N> x;
                for (std::size_t k = 0; k < N; ++k) x[k] = centroid[k] + t * (s[N][k] - centroid[k]);
                return x;
            };

            const Point<N> xr = along(-1.0);
            const double fr = eval(xr);
            if (fr < fv[0]) {
                const Point<N> xe = along(-2.0);
                const double fe = eval(xe);
                if (fe < fr) {
                    s[N] = xe;
                    fv[N] = fe;
                } else {
                    s[N] = xr;
                    fv[N] = fr;
                }
            } else if (fr < fv[N - 1]) {
                s[N] = xr;
                fv[N] = fr;
            } else {
                const bool outside = fr < fv[N];
                const Point<N> xc = along(outside ? -0.5 : 0.5);
                const double fc = eval(xc);
                if (fc < (outside ? fr : fv[N])) {
                    s[N] = xc;
                    fv[N] = fc;
                } else {
                    for (std::size_t i = 1; i <= N; ++i) {
                        for (std::size_t k = 0; k < N; ++k) s[i][k] = s[0][k] + 0.5 * (s[i][k] - s[0][k]);
                        fv[i] = eval(s[i]);
                    }
                }
            }
        }

        std::size_t ib = 0;
        for (std::size_t i = 1; i <= N; ++i)
            if (fv[i] < fv[ib]) ib = i;
        const double improvement = f_best - fv[ib];
        const bool improved = fv[ib] < f_best;
        if (improved) {
            best = s[ib];
            f_best = fv[ib];
        }
        if (!single_converged) break;
        if (restart > 0 && improvement <= opts.f_tol * std::abs(f_best) + opts.f_tol * opts.f_tol) break;
    }

    res.x = best;
    res.f = f_best;
    res.converged = single_converged;
    return res;
}

}  // namespace nvfield::opt
