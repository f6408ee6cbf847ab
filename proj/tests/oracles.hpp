#pragma once

// Test-only oracles, independent of the library implementation paths they
// check. Quadrature-based potentials, closed-form heat values and
// Black-Scholes call prices.

#include "rootb/normal.hpp"

#include <cmath>
#include <functional>

namespace oracles {

// Adaptive Simpson on [a,b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    // fixed panels first so localized mass cannot fool the refinement test
    const int panels = 64;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * i / panels;
        const double pb = a + (b - a) * (i + 1) / panels;
        const double pm = 0.5 * (pa + pb);
        sum += adaptive_simpson(f, pa, pb, f(pa), f(pm), f(pb), tol / panels, 40);
    }
    return sum;
}

// Potential -int |x-y| density(y) dy by quadrature, splitting at the kink
// y = x. Density support is truncated to [lo, hi].
inline double potential_by_quadrature(const std::function<double(double)>& density, double lo,
                                      double hi, double x, double tol = 1e-11) {
    auto f = [&](double y) { return std::abs(x - y) * density(y); };
    double v = 0.0;
    if (x > lo && x < hi) {
        v = integrate(f, lo, x, tol) + integrate(f, x, hi, tol);
    } else {
        v = integrate(f, lo, hi, tol);
    }
    return -v;
}

// -E|x + sqrt(t) Z| for Z standard normal: closed-form heat solution started
// from u(0,.) = -|.|.
inline double heat_dirac_potential(double t, double x) {
    if (t <= 0.0) return -std::abs(x);
    const double s = std::sqrt(t);
    const double z = x / s;
    return -(s * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * z * z) +
             x * (2.0 * rootb::normal_cdf(z) - 1.0));
}

// Undiscounted Black-Scholes call on a forward F with total variance v = sig^2 T.
inline double bs_call(double fwd, double strike, double total_var) {
    if (total_var <= 0.0) return std::max(fwd - strike, 0.0);
    const double sv = std::sqrt(total_var);
    const double d1 = (std::log(fwd / strike) + 0.5 * total_var) / sv;
    const double d2 = d1 - sv;
    return fwd * rootb::normal_cdf(d1) - strike * rootb::normal_cdf(d2);
}

} // namespace oracles
