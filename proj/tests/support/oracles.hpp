#pragma once
// Test-only oracles, independent of the library's evaluation paths:
// adaptive quadrature for every closed-form integral, and generators for
// random-but-valid modes, tables and designs.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "coopamc/channel_model.hpp"
#include "coopamc/link_design.hpp"

namespace oracles {

// Recursive adaptive Simpson rule.
inline double simpson_segment(const std::function<double(double)>& f, double a, double b,
                              double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_segment(f, a, m, fa, flm, fm);
    const double right = simpson_segment(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_segment(f, a, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integral over [lo, inf) by geometric segments; `scale` sets segment width.
inline double integrate_to_inf(const std::function<double(double)>& f, double lo, double scale,
                               double tol = 1e-15) {
    double total = 0.0;
    double a = lo;
    double width = 5.0 * scale;
    for (int k = 0; k < 64; ++k) {
        const double b = a + width;
        const double piece = integrate(f, a, b, tol);
        total += piece;
        if (k > 2 && std::abs(piece) < 1e-16 * std::max(std::abs(total), 1e-300)) break;
        a = b;
    }
    return total;
}

// Exponential SNR density with the given mean.
inline std::function<double(double)> expo_density(double mean) {
    return [mean](double x) { return std::exp(-x / mean) / mean; };
}

// Random mode with a valid fit (cutoff at or above ln(a)/g).
inline coopamc::AmcMode random_mode(std::mt19937_64& rng, int index, double rate) {
    std::uniform_real_distribution<double> ua(std::log(20.0), std::log(300.0));
    std::uniform_real_distribution<double> ug(0.0, 1.0);
    std::uniform_real_distribution<double> ujit(0.0, 0.3);
    coopamc::AmcMode m;
    m.index = index;
    m.rate = rate;
    m.fit_a = std::exp(ua(rng));
    // Higher-rate modes decay slower, loosely like real fit tables.
    m.fit_g = 8.0 * std::pow(0.45, index - 1) * (0.6 + 0.8 * ug(rng));
    m.cutoff = std::log(m.fit_a) / m.fit_g + ujit(rng);
    return m;
}

inline coopamc::ModeTable random_table(std::mt19937_64& rng, int n_modes) {
    std::uniform_real_distribution<double> ur(1.2, 1.8);
    coopamc::ModeTable t;
    t.packet_bits = 1080;
    double rate = 0.5;
    for (int i = 1; i <= n_modes; ++i) {
        t.modes.push_back(random_mode(rng, i, rate));
        rate *= ur(rng);
    }
    t.validate();
    return t;
}

// Quadrature value of the conditional mean PER over [lo, hi).
inline double quad_interval_avg_per(const coopamc::AmcMode& mode, double mean, double lo,
                                    double hi) {
    const auto density = expo_density(mean);
    const auto integrand = [&](double x) { return coopamc::per_instant(mode, x) * density(x); };
    double num;
    double den;
    if (std::isinf(hi)) {
        num = integrate_to_inf(integrand, lo, mean);
        den = integrate_to_inf(density, lo, mean);
    } else {
        num = integrate(integrand, lo, hi);
        den = integrate(density, lo, hi);
    }
    return num / den;
}

// Quadrature value of the unconditional mean PER over [0, inf).
inline double quad_full_avg_per(const coopamc::AmcMode& mode, double mean) {
    const auto density = expo_density(mean);
    const auto integrand = [&](double x) { return coopamc::per_instant(mode, x) * density(x); };
    // Split at the cutoff kink so Simpson converges cleanly.
    return integrate(integrand, 0.0, mode.cutoff) +
           integrate_to_inf(integrand, mode.cutoff, mean);
}

}  // namespace oracles
