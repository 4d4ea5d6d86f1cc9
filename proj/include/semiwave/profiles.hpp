#pragma once

// Radial data profiles. The canonical theorem data is the C^1 bump
// g(r) = g0 (1 - (r/R)^2)^m, f == 0. The constant profile exists for the
// ODE-mode solver tests, the dipole for the zero-moment 1-D mode (which
// breaks g >= 0 on purpose and is labeled as such by callers).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "semiwave/quadrature.hpp"

namespace semiwave {

enum class ProfileKind { zero, bump, constant, bump_dipole };

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::zero: return "zero";
        case ProfileKind::bump: return "bump";
        case ProfileKind::constant: return "constant";
        case ProfileKind::bump_dipole: return "bump_dipole";
    }
    return "?";
}

struct RadialProfile {
    ProfileKind kind = ProfileKind::bump;
    double amplitude = 1.0;  // g0
    double radius = 1.0;     // support radius R of one bump
    int shape = 2;           // m >= 2 keeps the data C^1
    double shift = 0.0;      // dipole half-separation (1-D only)

    // Radial value, r >= 0. The dipole has no radial meaning; reject.
    double operator()(double r) const {
        switch (kind) {
            case ProfileKind::zero: return 0.0;
            case ProfileKind::constant: return amplitude;
            case ProfileKind::bump: {
                const double s = 1.0 - (r / radius) * (r / radius);
                return s > 0.0 ? amplitude * std::pow(s, shape) : 0.0;
            }
            case ProfileKind::bump_dipole:
                throw std::domain_error("RadialProfile: dipole profile is 1-D only");
        }
        return 0.0;
    }

    // Value on the 1-D line. Even extension of the radial value, except the
    // dipole: bump(|x-shift|) - bump(|x+shift|), odd with zero integral.
    double line_value(double x) const {
        if (kind == ProfileKind::bump_dipole) {
            RadialProfile lobe{ProfileKind::bump, amplitude, radius, shape, 0.0};
            return lobe(std::abs(x - shift)) - lobe(std::abs(x + shift));
        }
        return (*this)(std::abs(x));
    }

    double support_radius() const {
        switch (kind) {
            case ProfileKind::zero: return 0.0;
            case ProfileKind::bump: return radius;
            case ProfileKind::constant: return std::numeric_limits<double>::infinity();
            case ProfileKind::bump_dipole: return std::abs(shift) + radius;
        }
        return 0.0;
    }

    bool compact_support() const { return std::isfinite(support_radius()); }

    // g >= 0 everywhere (theorem hypothesis).
    bool nonnegative() const {
        return kind == ProfileKind::zero || kind == ProfileKind::bump ||
               (kind == ProfileKind::constant && amplitude >= 0.0);
    }
};

inline RadialProfile bump_profile(double g0, double R, int m) {
    if (!(R > 0.0)) throw std::invalid_argument("bump_profile: R must be > 0");
    if (m < 2) throw std::invalid_argument("bump_profile: shape exponent m must be >= 2");
    return {ProfileKind::bump, g0, R, m, 0.0};
}

inline RadialProfile zero_profile() { return {ProfileKind::zero, 0.0, 1.0, 2, 0.0}; }

inline RadialProfile constant_profile(double value) {
    return {ProfileKind::constant, value, 1.0, 2, 0.0};
}

inline RadialProfile dipole_profile(double g0, double R, int m, double shift) {
    if (!(R > 0.0) || m < 2) throw std::invalid_argument("dipole_profile: bad lobe");
    if (!(shift > 0.0)) throw std::invalid_argument("dipole_profile: shift must be > 0");
    return {ProfileKind::bump_dipole, g0, R, m, shift};
}

// integral of g over R^n, by radial quadrature with the surface-measure
// weight (2 for n=1 as the even extension, 2 pi r, 4 pi r^2). Selects the
// moment case of the lifespan laws.
inline double moment_of_g(const RadialProfile& g, int n) {
    if (n < 1 || n > 3) throw std::domain_error("moment_of_g: n must be 1, 2 or 3");
    if (!g.compact_support())
        throw std::domain_error("moment_of_g: profile has infinite support");
    const double S = g.support_radius();
    if (S == 0.0) return 0.0;
    QuadOptions opt{.rel_tol = 1e-12, .abs_floor = 1e-15};
    if (n == 1) {
        return integrate([&](double x) { return g.line_value(x); }, -S, S, opt).value;
    }
    if (g.kind == ProfileKind::bump_dipole)
        throw std::domain_error("moment_of_g: dipole profile is 1-D only");
    const double surface = (n == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    return surface *
           integrate([&](double r) { return g(r) * std::pow(r, n - 1); }, 0.0, S, opt).value;
}

} // namespace semiwave
