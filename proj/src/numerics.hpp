#pragma once

#include <cmath>
#include <utility>

namespace cflp::num {

// Golden-section search for a unimodal f on [a,b]. Returns (argmin, min).
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (b < a)
        std::swap(a, b);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    // keep the endpoints in play; constrained optima often sit on them
    double best = fc <= fd ? c : d;
    double fbest = std::min(fc, fd);
    double fa = f(a), fb = f(b);
    if (fa < fbest) {
        best = a;
        fbest = fa;
    }
    if (fb < fbest) {
        best = b;
        fbest = fb;
    }
    return {best, fbest};
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40)
{
    if (!(b > a))
        return 0.0;
    // a few fixed panels first so narrow features are not missed
    const int panels = 8;
    double h = (b - a) / panels;
    double total = 0;
    for (int k = 0; k < panels; ++k) {
        double lo = a + k * h;
        double hi = k + 1 == panels ? b : lo + h;
        double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return total;
}

}  // namespace cflp::num
