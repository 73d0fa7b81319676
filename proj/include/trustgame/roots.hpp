#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace trustgame {

// Bracketing bisection. Requires f(lo)*f(hi) <= 0; shrinks to machine
// precision relative to the bracket scale. Derivative-free on purpose: the
// residuals here are only piecewise smooth.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval exhausted in doubles
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// All sign-change brackets of f on [lo,hi] from an n-point scan. Points where
// f is not finite are skipped.
inline std::vector<std::pair<double, double>> scan_sign_changes(
    const std::function<double(double)>& f, double lo, double hi, int n) {
    std::vector<std::pair<double, double>> brackets;
    double prev_x = lo;
    double prev_f = f(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / n;
        double fx = f(x);
        if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx <= 0.0 &&
            !(prev_f == 0.0 && fx == 0.0)) {
            brackets.emplace_back(prev_x, x);
        }
        prev_x = x;
        prev_f = fx;
    }
    return brackets;
}

// Adaptive Simpson quadrature.
namespace detail {
inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace trustgame
