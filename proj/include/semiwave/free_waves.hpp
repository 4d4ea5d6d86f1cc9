#pragma once

// Spherical means of the free wave solution with data (0, g), g radial about
// the origin. Used to certify the lemma constant M (first iteration of the
// integral inequality) and as an independent cross-check of the n = 2 solver.
//
//   n = 3:  u(r,t) = (1/2r) int_{|t-r|}^{t+r} s g(s) ds
//   n = 2:  u(r,t) = int_0^t rho m_g(r,rho) / sqrt(t^2-rho^2) drho,
//           m_g(r,rho) = (1/pi) int_0^pi g(sqrt(r^2+rho^2+2 r rho cos th)) dth
//
// The n = 2 endpoint singularity is removed by rho = t sin(psi); both
// integrals are then restricted to the support band |r - rho| <= R so the
// adaptive passes never integrate long stretches of zeros.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "semiwave/profiles.hpp"
#include "semiwave/quadrature.hpp"

namespace semiwave {

inline double free_mean_3d(const RadialProfile& g, double r, double t,
                           double rel_tol = 1e-10) {
    if (!(t >= 0.0) || !(r >= 0.0)) throw std::domain_error("free_mean_3d: r, t >= 0");
    if (!g.compact_support()) throw std::domain_error("free_mean_3d: need compact support");
    const double S = g.support_radius();
    const double lo = std::abs(t - r);
    if (lo >= S) return 0.0;
    if (r < 1e-12 * std::max(1.0, t)) return t * g(t);  // r -> 0 limit
    const double hi = std::min(t + r, S);
    QuadOptions opt{.rel_tol = rel_tol, .abs_floor = 1e-16};
    const double integral = integrate([&](double s) { return s * g(s); }, lo, hi, opt).value;
    return integral / (2.0 * r);
}

// Circular mean of g over the circle of radius rho centered at distance r
// from the origin, by quadrature over the angles where the circle meets
// supp(g). distance^2 = r^2 + rho^2 + 2 r rho cos(th) falls over th in [0, pi].
inline double circle_mean_quadrature(const RadialProfile& g, double r, double rho,
                                     double rel_tol = 1e-9) {
    const double S = g.support_radius();
    const double rr = 2.0 * r * rho;
    if (rr < 1e-14) return g(std::sqrt(r * r + rho * rho));
    const double cstar = (S * S - r * r - rho * rho) / rr;
    if (cstar <= -1.0) return 0.0;
    const double th_lo = cstar >= 1.0 ? 0.0 : std::acos(std::min(1.0, cstar));
    QuadOptions opt{.rel_tol = rel_tol, .abs_floor = 1e-16};
    const double integral =
        integrate([&](double th) { return g(std::sqrt(r * r + rho * rho + rr * std::cos(th))); },
                  th_lo, M_PI, opt)
            .value;
    return integral / M_PI;
}

// For the polynomial bump the circular mean is exact: with
// A = 1 - (r^2+rho^2)/R^2 and B = 2 r rho / R^2 the integrand is
// g0 (A - B cos th)^m over the support angles, and int cos^i th dth has the
// standard recurrence.
inline double circle_mean_bump(const RadialProfile& g, double r, double rho) {
    const double R = g.radius;
    const double rr = 2.0 * r * rho;
    if (rr < 1e-14) return g(std::sqrt(r * r + rho * rho));
    const double cstar = (R * R - r * r - rho * rho) / rr;
    if (cstar <= -1.0) return 0.0;
    const double th0 = cstar >= 1.0 ? 0.0 : std::acos(std::min(1.0, cstar));

    const int m = g.shape;
    // F_i = int_{th0}^{pi} cos^i th dth
    std::vector<double> F(m + 1);
    const double s0 = std::sin(th0);
    const double c0 = std::cos(th0);
    F[0] = M_PI - th0;
    if (m >= 1) F[1] = -s0;
    for (int i = 2; i <= m; ++i)
        F[i] = -std::pow(c0, i - 1) * s0 / i + (i - 1.0) / i * F[i - 2];

    const double A = 1.0 - (r * r + rho * rho) / (R * R);
    const double B = rr / (R * R);
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        acc += binom * std::pow(A, m - i) * std::pow(-B, i) * F[i];
        binom = binom * (m - i) / (i + 1);
    }
    return g.amplitude * acc / M_PI;
}

inline double circle_mean(const RadialProfile& g, double r, double rho,
                          double rel_tol = 1e-9) {
    if (g.kind == ProfileKind::bump) return circle_mean_bump(g, r, rho);
    return circle_mean_quadrature(g, r, rho, rel_tol);
}

inline double free_mean_2d(const RadialProfile& g, double r, double t,
                           double rel_tol = 1e-7) {
    if (!(t >= 0.0) || !(r >= 0.0)) throw std::domain_error("free_mean_2d: r, t >= 0");
    if (!g.compact_support()) throw std::domain_error("free_mean_2d: need compact support");
    if (t <= 0.0) return 0.0;
    const double S = g.support_radius();
    // rho = t sin(psi); integrand t sin(psi) m_g(r, t sin(psi)) is bounded.
    const double rho_lo = std::max(0.0, r - S);
    const double rho_hi = std::min(t, r + S);
    if (rho_lo >= rho_hi) return 0.0;
    const double psi_lo = std::asin(std::min(1.0, rho_lo / t));
    const double psi_hi = std::asin(std::min(1.0, rho_hi / t));
    QuadOptions opt{.rel_tol = rel_tol, .abs_floor = 1e-15, .max_depth = 28};
    return integrate(
               [&](double psi) {
                   const double rho = t * std::sin(psi);
                   return t * std::sin(psi) * circle_mean(g, r, rho, rel_tol);
               },
               psi_lo, psi_hi, opt)
        .value;
}

// Dispatch for n in {2,3}.
inline double free_mean(int n, const RadialProfile& g, double r, double t) {
    if (n == 3) return free_mean_3d(g, r, t);
    if (n == 2) return free_mean_2d(g, r, t);
    throw std::domain_error("free_mean: n must be 2 or 3");
}

} // namespace semiwave
