#pragma once

#include <cmath>
#include <concepts>

namespace stira {

// Adaptive Simpson on [a, b].  Integrands here are smooth (or one-sided
// smooth with the singular point placed at an endpoint), so simple interval
// halving with the standard 15x error estimate is enough.
template <std::invocable<double> F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 52) {
    struct Impl {
        F& f;
        double tol_floor;
        double recurse(double a, double m, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double h6 = (b - a) / 12.0;
            const double left = h6 * (fa + 4.0 * flm + fm);
            const double right = h6 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, tol_floor))
                return left + right + delta / 15.0;
            return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Impl impl{f, 1e-300};
    return impl.recurse(a, m, b, fa, fm, fb, whole, tol, max_depth);
}

// Two-point Richardson extrapolation for a quantity with a known power-law
// truncation term, E(h) = E* + c h^p.
inline double richardson(double h1, double e1, double h2, double e2, double p) {
    const double r = std::pow(h1 / h2, p);
    return (r * e2 - e1) / (r - 1.0);
}

}  // namespace stira
