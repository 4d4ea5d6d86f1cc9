#pragma once

// Sequences and constants of the sliced iteration for the critical power:
// nested domains Sigma_j = { l_j k <= t-r <= r } with l_j -> 2, the lower
// bound amplitudes C_j (kept in log space, they are doubly exponential in j),
// the blow-up functional I(r,t), and the resulting lifespan upper bound.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/exponents.hpp"

namespace semiwave {

// l_j = sum_{i=0}^{j} 2^-i = 2 - 2^-j. As a double this saturates to 2 for
// j > 52; use slicing_l_gap for the exact distance to the limit.
inline double slicing_l(int j) {
    if (j < 0) throw std::domain_error("slicing_l: j must be >= 0");
    return 2.0 - std::exp2(-j);
}

// 2 - l_j = 2^-j, exact in floating point for all representable j.
inline double slicing_l_gap(int j) {
    if (j < 0) throw std::domain_error("slicing_l_gap: j must be >= 0");
    return std::exp2(-j);
}

// a_j = (p^{j-1} - 1) / (p - 1); a_1 = 0 and a_{j+1} = p a_j + 1.
inline double slicing_a(int j, double p) {
    if (j < 1) throw std::domain_error("slicing_a: j must be >= 1");
    if (!(p > 1.0)) throw std::domain_error("slicing_a: p must be > 1");
    return (std::pow(p, j - 1) - 1.0) / (p - 1.0);
}

// 1 - l_j / l_{j+1} = 1 / (2^{j+1} l_{j+1}), the fraction of the log-integral
// each slicing step retains. Computed through the exact gap 2^-(j+1) so the
// identity survives floating point for large j.
inline double slicing_fraction(int j) {
    if (j < 0) throw std::domain_error("slicing_fraction: j must be >= 0");
    return std::exp2(-(j + 1)) / slicing_l(j + 1);
}

// Limit of the exponent sums j/p^{j-1} + (j-1)/p^{j-2} + ... + 1, which is
// sum_{m>=1} m p^{-(m-1)} = (p/(p-1))^2.
inline double slicing_s_p(double p) {
    if (!(p > 1.0)) throw std::domain_error("slicing_s_p: series requires p > 1");
    const double q = p / (p - 1.0);
    return q * q;
}

// j + p(j-1) + ... + p^{j-1} = sum_{i=0}^{j-1} p^i (j-i); the (2p)-exponent
// of the closed-form C_{j+1}. Equals p^{j-1} times the j-term partial sum
// toward S_p.
inline double slicing_exponent_sum(int j, double p) {
    if (j < 0) throw std::domain_error("slicing_exponent_sum: j must be >= 0");
    double acc = 0.0;
    double pw = 1.0;
    for (int i = 0; i < j; ++i) {
        acc += pw * (j - i);
        pw *= p;
    }
    return acc;
}

// All constants entering the iteration, derived from (n, p, delta, M):
//   k      = 3 delta
//   C_geom = 2^-2 pi^{n-3}            (characteristic-variable kernel constant)
//   N      = 2^-2 3^{(n-1)(1-p)/2} (p-1) C_geom
//   S_p    = (p/(p-1))^2
//   A      = N^-1 (2p)^{S_p (p-1)/p} M^-(p-1)
struct SlicingConstants {
    int n = 3;
    double p = 0.0;
    double delta = 0.0;
    double k = 0.0;
    double M = 0.0;
    double C_geom = 0.0;
    double N = 0.0;
    double S_p = 0.0;
    double A = 0.0;
};

inline SlicingConstants make_slicing_constants(int n, double p, double delta, double M) {
    if (n != 2 && n != 3)
        throw std::domain_error("make_slicing_constants: n must be 2 or 3");
    if (!(p > 1.0)) throw std::domain_error("make_slicing_constants: p must be > 1");
    if (!(delta > 0.0)) throw std::domain_error("make_slicing_constants: delta must be > 0");
    if (!(M > 0.0)) throw std::domain_error("make_slicing_constants: M must be > 0");
    SlicingConstants c;
    c.n = n;
    c.p = p;
    c.delta = delta;
    c.k = 3.0 * delta;
    c.M = M;
    c.C_geom = 0.25 * std::pow(M_PI, n - 3);
    c.N = 0.25 * std::pow(3.0, 0.5 * (n - 1) * (1.0 - p)) * (p - 1.0) * c.C_geom;
    c.S_p = slicing_s_p(p);
    c.A = std::pow(2.0 * p, c.S_p * (p - 1.0) / p) / (c.N * std::pow(M, p - 1.0));
    return c;
}

// Critical-exponent constants with the default M = 1 placeholder.
inline SlicingConstants make_critical_constants(int n, double delta, double M = 1.0) {
    return make_slicing_constants(n, strauss_exponent(n), delta, M);
}

struct IterationState {
    int j = 0;
    double l_j = 0.0;
    double a_j = 0.0;
    double logC_j = 0.0;
};

// C_1 = M eps^p, C_{j+1} = N C_j^p / (2p)^j, iterated as
// logC_{j+1} = log N + p logC_j - j log(2p). Raw C_j overflows or
// underflows within a handful of steps, so only logs are stored.
inline std::vector<IterationState> iterate_logC(int j_max, const SlicingConstants& c,
                                                double eps) {
    if (j_max < 1) throw std::domain_error("iterate_logC: j_max must be >= 1");
    if (!(eps > 0.0)) throw std::domain_error("iterate_logC: eps must be > 0");
    std::vector<IterationState> states;
    states.reserve(static_cast<std::size_t>(j_max));
    const double log2p = std::log(2.0 * c.p);
    double logC = std::log(c.M) + c.p * std::log(eps);
    for (int j = 1; j <= j_max; ++j) {
        states.push_back({j, slicing_l(j), slicing_a(j, c.p), logC});
        logC = std::log(c.N) + c.p * logC - j * log2p;
    }
    return states;
}

// Closed form: C_{j+1} = N^{(p^j-1)/(p-1)} (M eps^p)^{p^j} / (2p)^{E_j} with
// E_j = slicing_exponent_sum(j, p); evaluated here for C_j (argument j >= 1).
inline double logC_closed_form(int j, const SlicingConstants& c, double eps) {
    if (j < 1) throw std::domain_error("logC_closed_form: j must be >= 1");
    const int m = j - 1;
    const double pm = std::pow(c.p, m);
    return (pm - 1.0) / (c.p - 1.0) * std::log(c.N) +
           pm * (std::log(c.M) + c.p * std::log(eps)) -
           slicing_exponent_sum(m, c.p) * std::log(2.0 * c.p);
}

inline bool in_sigma_infinity(double r, double t, const SlicingConstants& c) {
    const double d = t - r;
    return d >= 2.0 * c.k && d <= r;
}

// I(r,t) = log N^{1/(p-1)} + log(M eps^p) - log (2p)^{S_p/p}
//        + log( (log((t-r)/(2k)))^{1/(p-1)} ).
// Positive at one point of Sigma_infinity forces the iterated bounds to
// diverge. Requires t-r > 2k strictly, or the inner log is <= 0 and the
// outer one is undefined.
inline double blowup_functional_I(double r, double t, const SlicingConstants& c,
                                  double eps) {
    if (!(eps > 0.0)) throw std::domain_error("blowup_functional_I: eps must be > 0");
    const double d = t - r;
    if (!(d <= r))
        throw std::domain_error("blowup_functional_I: point outside Sigma_infinity (t-r > r)");
    if (!(d > 2.0 * c.k))
        throw std::domain_error("blowup_functional_I: t-r must exceed 2k for the double log");
    const double inner = std::log(d / (2.0 * c.k));
    return std::log(c.N) / (c.p - 1.0) + std::log(c.M) + c.p * std::log(eps) -
           (c.S_p / c.p) * std::log(2.0 * c.p) + std::log(inner) / (c.p - 1.0);
}

// eps_0 solves 4k = exp(A eps_0^{-p(p-1)}); below it the bound applies.
// Needs 4k > 1, otherwise log(4k) <= 0 and no positive root exists.
inline double epsilon_zero(const SlicingConstants& c) {
    const double l4k = std::log(4.0 * c.k);
    if (!(l4k > 0.0))
        throw std::domain_error("epsilon_zero: requires 4k > 1, got k = " + std::to_string(c.k));
    return std::pow(c.A / l4k, 1.0 / (c.p * (c.p - 1.0)));
}

// exp(2A eps^{-p(p-1)}), reported in log form as well since the raw value
// overflows for small eps.
struct LifespanBound {
    double log_value = 0.0;
    double value = std::numeric_limits<double>::infinity();  // inf when e^log overflows
};

inline LifespanBound lifespan_upper_bound(double eps, const SlicingConstants& c) {
    if (!(eps > 0.0)) throw std::domain_error("lifespan_upper_bound: eps must be > 0");
    const double eps0 = epsilon_zero(c);
    if (eps > eps0 * (1.0 + 1e-12))
        throw std::domain_error("lifespan_upper_bound: eps = " + std::to_string(eps) +
                                " exceeds eps_0 = " + std::to_string(eps0));
    LifespanBound b;
    b.log_value = 2.0 * c.A * std::pow(eps, -c.p * (c.p - 1.0));
    b.value = b.log_value < 700.0 ? std::exp(b.log_value)
                                  : std::numeric_limits<double>::infinity();
    return b;
}

} // namespace semiwave
