#pragma once

#include <cmath>
#include <stdexcept>

#include "phibvp/errors.hpp"

namespace phibvp {

// Plain bisection on a known bracket [lo, hi] with f(lo), f(hi) of opposite
// signs.  Runs until the bracket is narrower than tol_x.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, double fhi, double tol_x,
              int max_iter = 400) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw no_bracket_error("bisect: f has the same sign at both bracket endpoints");
    for (int it = 0; it < max_iter && hi - lo > tol_x; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket resolved to adjacent doubles
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

// zeroin-style root finder: bisection safeguarded by secant / inverse
// quadratic interpolation (Brent).  Same bracket contract as bisect.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb, double tol_x,
             int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw no_bracket_error("brent: f has the same sign at both bracket endpoints");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double xm = 0.5 * (c - b);
        const double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * tol_x;
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) < tol1 || std::abs(fa) <= std::abs(fb)) {
            d = xm;
            e = d;
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (fb == 0.0) return b;
    }
    return b;
}

}  // namespace phibvp
