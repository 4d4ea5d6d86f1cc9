#pragma once

// Adaptive Simpson quadrature, 1-D and iterated 2-D, with propagated error
// estimates. Integrands here are smooth on their panels (log powers, kernel
// powers, compactly supported bumps); adaptivity concentrates points where
// high powers of logs pile the mass near an endpoint.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <utility>

namespace semiwave {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated |S_fine - S_coarse| / 15
    std::int64_t evaluations = 0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

namespace detail {

inline double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * h / 6.0;
}

template <class F>
void adapt_simpson(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, QuadResult& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    out.evaluations += 2;
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double err = (left + right - whole) / 15.0;
    if (!std::isfinite(err)) {
        out.value += left + right;
        out.error_estimate += std::abs(whole) + 1.0;
        out.converged = false;
        return;
    }
    if (std::abs(err) <= tol || depth <= 0) {
        out.value += left + right + err;
        out.error_estimate += std::abs(err);
        if (depth <= 0 && std::abs(err) > tol) out.converged = false;
        return;
    }
    adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

// Composite Simpson pilot, used only to fix the absolute tolerance scale.
template <class F>
double pilot_scale(F& f, double a, double b, int panels, std::int64_t& evals) {
    const double h = (b - a) / panels;
    double acc = 0.0;
    double fl = f(a);
    ++evals;
    for (int i = 0; i < panels; ++i) {
        const double xm = a + (i + 0.5) * h;
        const double xr = a + (i + 1) * h;
        const double fm = f(xm);
        const double fr = f(xr);
        evals += 2;
        acc += simpson(h, fl, fm, fr);
        fl = fr;
    }
    return acc;
}

} // namespace detail

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_floor = 1e-14;  // tolerance when the pilot says the integral is ~0
    int max_depth = 48;
    int pilot_panels = 32;
};

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult out;
    if (!(b > a)) return out;  // empty or degenerate range integrates to zero
    const double scale = detail::pilot_scale(f, a, b, opt.pilot_panels, out.evaluations);
    const double tol = std::max(opt.rel_tol * std::abs(scale), opt.abs_floor);
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    out.evaluations += 3;
    const double whole = detail::simpson(b - a, fa, fm, fb);
    detail::adapt_simpson(f, a, b, fa, fm, fb, whole, tol, opt.max_depth, out);
    return out;
}

// Iterated integral over { (x, y) : a <= y <= b, xlo(y) <= x <= xhi(y) }.
// The outer (y) pass is adaptive Simpson over inner adaptive passes; inner
// error estimates are accumulated alongside the outer one.
template <class F, class Lo, class Hi>
QuadResult integrate2d(F&& f, double a, double b, Lo&& xlo, Hi&& xhi,
                       const QuadOptions& outer_opt = {},
                       const QuadOptions& inner_opt = {}) {
    QuadResult inner_acc;  // evaluations + error side-channel for inner runs
    double max_inner_err = 0.0;
    auto g = [&](double y) {
        const double lo = xlo(y);
        const double hi = xhi(y);
        QuadResult r = integrate([&](double x) { return f(x, y); }, lo, hi, inner_opt);
        inner_acc.evaluations += r.evaluations;
        inner_acc.converged = inner_acc.converged && r.converged;
        max_inner_err = std::max(max_inner_err, r.error_estimate);
        return r.value;
    };
    QuadResult out = integrate(g, a, b, outer_opt);
    out.evaluations += inner_acc.evaluations;
    out.converged = out.converged && inner_acc.converged;
    out.error_estimate += max_inner_err * (b > a ? b - a : 0.0);
    return out;
}

} // namespace semiwave
