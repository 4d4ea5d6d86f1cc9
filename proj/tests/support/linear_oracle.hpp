#pragma once

// Independent closed-form oracles for the linear (free) wave equation with
// polynomial bump data (0, eps g), g(r) = g0 (1-(r/R)^2)^m. Exact binomial
// antiderivatives, no quadrature, no shared code with the solvers:
//
//   1-D:          u(x,t) = eps/2 (G(x+t) - G(x-t)),  G(x) = int_0^x g(|s|) ds
//   3-D (v = ru): v(r,t) = eps/2 (H(r+t) - H(r-t)),  H(x) = int_0^x s g(|s|) ds
//
// G is odd and saturates at |x| = R; H is even and saturates likewise.

#include <cmath>
#include <vector>

namespace oracle {

inline double binomial(int n, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc = acc * (n - i) / (i + 1);
    return acc;
}

struct BumpOracle {
    double g0 = 1.0;
    double R = 1.0;
    int m = 2;

    double g(double r) const {
        const double s = 1.0 - (r / R) * (r / R);
        return s > 0.0 ? g0 * std::pow(s, m) : 0.0;
    }

    // int_0^x g(s) ds for x in [0, R], extended odd and clamped
    double primitive_G(double x) const {
        const double sign = x < 0.0 ? -1.0 : 1.0;
        const double y = std::min(std::abs(x), R);
        double acc = 0.0;
        for (int k = 0; k <= m; ++k)
            acc += binomial(m, k) * (k % 2 ? -1.0 : 1.0) * std::pow(y, 2 * k + 1) /
                   ((2 * k + 1) * std::pow(R, 2 * k));
        return sign * g0 * acc;
    }

    // int_0^x s g(s) ds, extended even and clamped
    double primitive_H(double x) const {
        const double y = std::min(std::abs(x), R);
        double acc = 0.0;
        for (int k = 0; k <= m; ++k)
            acc += binomial(m, k) * (k % 2 ? -1.0 : 1.0) * std::pow(y, 2 * k + 2) /
                   ((2 * k + 2) * std::pow(R, 2 * k));
        return g0 * acc;
    }

    double u_1d(double eps, double x, double t) const {
        return 0.5 * eps * (primitive_G(x + t) - primitive_G(x - t));
    }

    double v_3d(double eps, double r, double t) const {
        return 0.5 * eps * (primitive_H(r + t) - primitive_H(r - t));
    }

    double u_3d(double eps, double r, double t) const { return v_3d(eps, r, t) / r; }

    // 1-D moment: int_R g(|x|) dx = 2 G(R)
    double moment_1d() const { return 2.0 * primitive_G(R); }
};

} // namespace oracle
