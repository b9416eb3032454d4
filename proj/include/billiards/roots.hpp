#ifndef BILLIARDS_ROOTS_HPP
#define BILLIARDS_ROOTS_HPP

#include <cmath>
#include <limits>
#include <utility>

#include "billiards/errors.hpp"

namespace billiards {

// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0.
// Combines bisection with inverse quadratic interpolation / secant steps;
// terminates when the bracket shrinks below xtol (plus machine slack).
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol = 1e-13, int maxIter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw RootNotBracketed("brent_root: endpoints have equal signs");

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < maxIter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;

        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Attempt interpolation.
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc;
                double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q),
                                    std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

template <typename F>
double brent_root(F&& f, double a, double b, double xtol = 1e-13,
                  int maxIter = 200) {
    double fa = f(a);
    double fb = f(b);
    return brent_root(std::forward<F>(f), a, b, fa, fb, xtol, maxIter);
}

// Plain bisection; used where monotone convergence matters more than speed.
template <typename F>
double bisect_root(F&& f, double a, double b, double xtol = 1e-13) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw RootNotBracketed("bisect_root: endpoints have equal signs");
    while (b - a > xtol) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break; // interval at floating-point resolution
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace billiards

#endif
