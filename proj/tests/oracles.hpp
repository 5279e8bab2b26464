#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's closed forms: maxima are found numerically and integrals are
// done by Simpson's rule on the exact integrands.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Golden-section maximization of a unimodal f on [lo, hi].
inline double maximize(const std::function<double(double)>& f, double lo, double hi, double* arg = nullptr) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    for (int it = 0; it < 300 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        if (f(c) > f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    const double x = 0.5 * (a + b);
    if (arg != nullptr) {
        *arg = x;
    }
    return f(x);
}

/// c_{p,q,gamma} = max_s (s^{q-p} - s^{gamma-p}) (ray maximum of R_N for T = A = B = 1).
inline double c_numeric(double p, double q, double g) {
    return maximize([=](double s) { return std::pow(s, q - p) - std::pow(s, g - p); }, 0.0, 1.0);
}

/// c_e = max_s p (s^{q-p}/q - s^{gamma-p}/gamma) (ray maximum of R_e for T = A = B = 1).
inline double c_e_numeric(double p, double q, double g) {
    const double hi = std::pow(g / q, 1.0 / (g - q)) * 2.0;
    return maximize([=](double s) { return p * (std::pow(s, q - p) / q - std::pow(s, g - p) / g); }, 0.0, hi);
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

/// Layer profile value at xi for U'' = U^{g-1} - U^{q-1}: solves
/// int_0^U dt / sqrt(2 W(t)) = xi by bisection, W(t) = (1 - t^q)/q - (1 - t^g)/g.
/// Only for moderate xi, where U stays away from 1 and the integrand is smooth.
inline double layer_value(double q, double g, double xi) {
    const auto W = [=](double t) { return (1 - std::pow(t, q)) / q - (1 - std::pow(t, g)) / g; };
    const auto xi_of = [&](double U) { return simpson([&](double t) { return 1 / std::sqrt(2 * W(t)); }, 0.0, U, 2000); };
    double lo = 0.0;
    double hi = 0.99;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (xi_of(mid) < xi ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Separation constant by the shape of j: j - j(rho) decreases on [0, rho] and
/// increases beyond, so outside the eta-tube its minimum sits on the tube edge.
/// Minimized over a fine (alpha, beta) grid.
inline double kappa_tube_edges(double sa, double ah, double sb, double bh, double q, double g, double eta,
                               int n = 400) {
    auto j = [=](double al, double be, double s) { return -al / q * std::pow(s, q) + be / g * std::pow(s, g); };
    double best = 1.0;
    for (int i = 0; i <= n; ++i) {
        const double al = sa + (ah - sa) * i / n;
        for (int k = 0; k <= n; ++k) {
            const double be = sb + (bh - sb) * k / n;
            const double rho = std::pow(al / be, 1.0 / (g - q));
            const double jr = j(al, be, rho);
            best = std::min(best, j(al, be, rho + eta) - jr);
            if (rho - eta >= 0.0) {
                best = std::min(best, j(al, be, rho - eta) - jr);
            }
        }
    }
    return best;
}

}  // namespace oracle
