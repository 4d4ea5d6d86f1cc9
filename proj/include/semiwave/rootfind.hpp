#pragma once

// Bracketing bisection for monotone scalar equations. The residuals we solve
// (a^2 eps^2 log(1+a) = 1, gamma(n,p) = 0) are strictly monotone on the search
// interval, so bisection is guaranteed once a sign change is bracketed.

#include <cmath>
#include <stdexcept>
#include <string>

namespace semiwave {

struct BisectOptions {
    double rel_tol = 1e-14;
    int max_expand = 200;
    int max_iter = 2000;
};

// Expands [lo, hi] upward by doubling hi until f changes sign on [lo, hi].
// f(lo) fixes the reference sign; throws if no sign change is found.
template <class F>
void expand_bracket_up(F&& f, double lo, double& hi, int max_expand = 200) {
    const double flo = f(lo);
    if (flo == 0.0) { hi = lo; return; }
    for (int i = 0; i < max_expand; ++i) {
        if (f(hi) * flo <= 0.0) return;
        hi *= 2.0;
    }
    throw std::domain_error("expand_bracket_up: no sign change up to hi=" + std::to_string(hi));
}

// Root of f on [lo, hi], f(lo) and f(hi) of opposite sign (either order).
// Stops when the bracket width drops below rel_tol * max(|root|, 1).
template <class F>
double bisect(F&& f, double lo, double hi, const BisectOptions& opt = {}) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    for (int i = 0; i < opt.max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= opt.rel_tol * std::max(std::abs(mid), 1.0)) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fm * flo < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace semiwave
