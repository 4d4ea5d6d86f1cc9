#pragma once

// Closed-form exponent calculators for the small-data blow-up ranges of
// u_tt - Laplace(u) = |u|^p, and the case-resolved lifespan growth laws.

#include <cmath>
#include <stdexcept>
#include <string>

#include "semiwave/rootfind.hpp"

namespace semiwave {

// gamma(n,p) = 1 + (n+1)/2 p - (n-1)/2 p^2. Positive iff p is below the
// critical power; the quadratic term drops out for n = 1.
inline double strauss_gamma(int n, double p) {
    if (n < 1) throw std::domain_error("strauss_gamma: n must be >= 1");
    if (!(p > 1.0)) throw std::domain_error("strauss_gamma: p must be > 1");
    return 1.0 + 0.5 * (n + 1) * p - 0.5 * (n - 1) * p * p;
}

// Positive root of gamma(n, .) = 0: (n+1+sqrt(n^2+10n-7)) / (2(n-1)).
// Strictly decreasing in n; undefined for n = 1 (gamma is linear there).
inline double strauss_exponent(int n) {
    if (n < 2) throw std::domain_error("strauss_exponent: n must be >= 2");
    const double nn = static_cast<double>(n);
    return (nn + 1.0 + std::sqrt(nn * nn + 10.0 * nn - 7.0)) / (2.0 * (nn - 1.0));
}

enum class LawKind { power_law, exponential_law, two_dim_p2 };

enum class LawCase {
    n1_gmom_nonzero,
    n1_gmom_zero,
    n2_first_case,
    generic_subcritical,
    critical,
    d2_p2_gmom_nonzero,
    d2_p2_gmom_zero,
};

// Growth law of the lifespan T(eps) as eps -> 0.
//   power_law:        T ~ C eps^-exponent
//   exponential_law:  log T ~ C eps^-exponent, exponent = p(p-1)
//   two_dim_p2:       T ~ C a(eps); exponent = 1 is the slope of
//                     log T against log a(eps)
struct LifespanLaw {
    LawKind kind;
    LawCase case_tag;
    double exponent;
};

inline const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::power_law: return "power_law";
        case LawKind::exponential_law: return "exponential_law";
        case LawKind::two_dim_p2: return "two_dim_p2";
    }
    return "?";
}

inline const char* to_string(LawCase c) {
    switch (c) {
        case LawCase::n1_gmom_nonzero: return "n1_gmom_nonzero";
        case LawCase::n1_gmom_zero: return "n1_gmom_zero";
        case LawCase::n2_first_case: return "n2_first_case";
        case LawCase::generic_subcritical: return "generic_subcritical";
        case LawCase::critical: return "critical";
        case LawCase::d2_p2_gmom_nonzero: return "d2_p2_gmom_nonzero";
        case LawCase::d2_p2_gmom_zero: return "d2_p2_gmom_zero";
    }
    return "?";
}

// Relative half-width of the band around p0(n) (and around p = 2 for the
// n = 2 special case) inside which p is classified as sitting on the case
// boundary. Needed because callers pass p0 computed in floating point.
inline constexpr double kCriticalBand = 1e-9;

// Case-resolved lifespan law over { n >= 1, 1 < p <= p0(n) } (any p > 1
// when n = 1). p above p0(n) is the small-data global existence range: error.
inline LifespanLaw predicted_lifespan_law(int n, double p, bool g_moment_is_zero) {
    if (n < 1) throw std::domain_error("predicted_lifespan_law: n must be >= 1");
    if (!(p > 1.0)) throw std::domain_error("predicted_lifespan_law: p must be > 1");

    if (n == 1) {
        // gamma(1,p) = p + 1, so the zero-moment rate p(p-1)/(p+1) is the
        // generic rate p(p-1)/gamma continued down to n = 1.
        if (g_moment_is_zero)
            return {LawKind::power_law, LawCase::n1_gmom_zero, p * (p - 1.0) / (p + 1.0)};
        return {LawKind::power_law, LawCase::n1_gmom_nonzero, 0.5 * (p - 1.0)};
    }

    const double p0 = strauss_exponent(n);
    if (p > p0 * (1.0 + kCriticalBand))
        throw std::domain_error("predicted_lifespan_law: p = " + std::to_string(p) +
                                " exceeds p0(" + std::to_string(n) + ") = " + std::to_string(p0) +
                                " (global existence range, no blow-up law)");
    if (std::abs(p - p0) <= kCriticalBand * p0)
        return {LawKind::exponential_law, LawCase::critical, p * (p - 1.0)};

    if (n == 2 && std::abs(p - 2.0) <= 1e-12) {
        if (g_moment_is_zero)
            return {LawKind::power_law, LawCase::d2_p2_gmom_zero, 1.0};
        return {LawKind::two_dim_p2, LawCase::d2_p2_gmom_nonzero, 1.0};
    }
    if (n == 2 && p < 2.0 && !g_moment_is_zero)
        return {LawKind::power_law, LawCase::n2_first_case, (p - 1.0) / (3.0 - p)};

    return {LawKind::power_law, LawCase::generic_subcritical,
            p * (p - 1.0) / strauss_gamma(n, p)};
}

// Unique a > 0 with a^2 eps^2 log(1+a) = 1. The left side is continuous and
// strictly increasing in a with range (0, inf), so a doubling bracket plus
// bisection always lands the root. Strictly decreasing in eps.
inline double solve_a(double eps) {
    if (!(eps > 0.0)) throw std::domain_error("solve_a: eps must be > 0");
    const double e2 = eps * eps;
    auto residual = [e2](double a) { return a * a * e2 * std::log1p(a) - 1.0; };
    double hi = 1.0;
    expand_bracket_up(residual, 0.0, hi);
    return bisect(residual, 0.0, hi, BisectOptions{.rel_tol = 1e-15});
}

} // namespace semiwave
