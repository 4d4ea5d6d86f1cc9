#pragma once

// Explicit leapfrog solvers for u_tt - Lap(u) = |u|^p with blow-up
// detection: full-line scheme for n = 1, radial reduction for n = 2, 3.
// Data is (eps f, eps g) with compactly supported profiles, so pinning the
// far boundary to zero is exact (unit propagation speed).
//
//   n = 3: v = r u solves v_tt - v_rr = |v|^p / r^{p-1}, v(0,t) = 0; u is
//          recovered as v/r, at the origin by parabolic extrapolation.
//   n = 2: direct scheme on u_tt = u_rr + u_r/r + |u|^p; at r = 0 the
//          regularized Laplacian n * u_rr with the even-symmetry stencil.
//
// A run counts as blow-up only if max|u| crosses the cap with a monotone
// increasing trace over the trailing window; oscillating NaN/inf growth is
// flagged as numerical failure instead.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/profiles.hpp"
#include "semiwave/quadrature.hpp"

namespace semiwave {

struct ProblemSpec {
    int n = 1;
    double p = 2.0;
    double eps = 0.1;
    RadialProfile f = zero_profile();
    RadialProfile g = bump_profile(1.0, 1.0, 2);
    double dx = 0.05;
    double courant = 0.5;  // dt/dx, must stay in (0, 1]
    double cap = 1e10;
    double t_max = 100.0;
    bool nonlinearity = true;        // false = linear test mode
    bool regularized_origin = true;  // n = 2 origin stencil
    double half_width = 0.0;         // domain override; 0 = support + t_max + pad

    // Theorem data: f == 0, g >= 0 not identically 0, g(0) > 0. Test modes
    // (dipole, constant-data ODE runs) deliberately leave this regime and are
    // labeled by this flag in run records.
    bool theorem_hypotheses() const {
        return f.kind == ProfileKind::zero && g.nonnegative() &&
               g.support_radius() > 0.0 && g(0.0) > 0.0;
    }
};

struct TracePoint {
    double t = 0.0;
    double max_abs_u = 0.0;
};

struct RunRecord {
    ProblemSpec spec;
    bool blew_up = false;
    bool numerical_failure = false;
    double T_h = 0.0;  // first cap crossing, or the reached horizon
    std::vector<TracePoint> trace;
    int refinement_level = 0;

    // final field snapshot, for convergence tests and inspection
    std::vector<double> final_u;
    std::vector<double> final_u_prev;  // one time level earlier
    double grid_x0 = 0.0;  // coordinate of final_u[0] (r = 0 for radial runs)
    double final_t = 0.0;
};

namespace detail {

inline void validate_spec(const ProblemSpec& s) {
    if (s.n < 1 || s.n > 3) throw std::invalid_argument("simulate: n must be 1, 2 or 3");
    if (!(s.dx > 0.0)) throw std::invalid_argument("simulate: dx must be > 0");
    if (!(s.courant > 0.0 && s.courant <= 1.0))
        throw std::invalid_argument("simulate: courant must be in (0, 1]");
    if (!(s.cap > 0.0)) throw std::invalid_argument("simulate: cap must be > 0");
    if (!(s.t_max > 0.0)) throw std::invalid_argument("simulate: t_max must be > 0");
    if (!(s.eps >= 0.0)) throw std::invalid_argument("simulate: eps must be >= 0");
    if (s.nonlinearity && !(s.p > 1.0)) throw std::invalid_argument("simulate: p must be > 1");
    const double support = std::max(s.f.support_radius(), s.g.support_radius());
    if (!std::isfinite(support) && !(s.half_width > 0.0))
        throw std::invalid_argument("simulate: infinite-support data needs an explicit half_width");
}

inline double domain_extent(const ProblemSpec& s) {
    if (s.half_width > 0.0) return s.half_width;
    return std::max(s.f.support_radius(), s.g.support_radius()) + s.t_max + 2.0 * s.dx;
}

// Trailing-window monotonicity: genuine blow-up growth, as opposed to a
// sign-flipping instability, keeps max|u| non-decreasing into the crossing.
inline bool trace_monotone_tail(const std::vector<TracePoint>& trace, std::size_t window) {
    const std::size_t m = std::min(window, trace.size());
    for (std::size_t i = trace.size() - m; i + 1 < trace.size(); ++i)
        if (trace[i + 1].max_abs_u < trace[i].max_abs_u * (1.0 - 1e-12)) return false;
    return true;
}

struct Detector {
    double cap = 0.0;
    std::vector<TracePoint> trace;
    bool blew_up = false;
    bool numerical_failure = false;
    bool stopped = false;
    double T_h = 0.0;

    // returns true when the run should stop
    bool push(double t, double amp) {
        trace.push_back({t, amp});
        if (!std::isfinite(amp)) {
            numerical_failure = true;
            T_h = t;
            stopped = true;
        } else if (amp > cap) {
            if (trace_monotone_tail(trace, 50)) blew_up = true;
            else numerical_failure = true;
            T_h = t;
            stopped = true;
        }
        return stopped;
    }
};

} // namespace detail

inline RunRecord simulate_1d(const ProblemSpec& spec) {
    detail::validate_spec(spec);
    if (spec.n != 1) throw std::invalid_argument("simulate_1d: spec.n must be 1");

    const double dx = spec.dx;
    const double dt = spec.courant * dx;
    const double c2 = spec.courant * spec.courant;
    const int nh = static_cast<int>(std::ceil(detail::domain_extent(spec) / dx));
    const int nodes = 2 * nh + 1;
    auto x_at = [&](int i) { return (i - nh) * dx; };

    std::vector<double> up(nodes, 0.0), uc(nodes, 0.0), un(nodes, 0.0);
    auto force = [&](double v) {
        return spec.nonlinearity ? std::pow(std::abs(v), spec.p) : 0.0;
    };

    for (int i = 0; i < nodes; ++i) up[i] = spec.eps * spec.f.line_value(x_at(i));
    up.front() = up.back() = 0.0;
    // second-order Taylor start: u^1 = eps f + dt eps g + dt^2/2 (Lap(eps f) + |eps f|^p)
    for (int i = 1; i + 1 < nodes; ++i) {
        const double lap = (up[i + 1] - 2.0 * up[i] + up[i - 1]) / (dx * dx);
        uc[i] = up[i] + dt * spec.eps * spec.g.line_value(x_at(i)) +
                0.5 * dt * dt * (lap + force(up[i]));
    }

    auto max_abs = [](const std::vector<double>& u) {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    };

    detail::Detector det;
    det.cap = spec.cap;
    const long steps = static_cast<long>(std::floor(spec.t_max / dt + 1e-9));
    double t = dt;
    det.push(0.0, max_abs(up));
    if (!det.stopped && steps >= 1) det.push(dt, max_abs(uc));
    long m = 1;
    while (!det.stopped && m < steps) {
        for (int i = 1; i + 1 < nodes; ++i) {
            un[i] = 2.0 * uc[i] - up[i] + c2 * (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]) +
                    dt * dt * force(uc[i]);
        }
        un.front() = un.back() = 0.0;
        std::swap(up, uc);
        std::swap(uc, un);
        ++m;
        t = m * dt;
        det.push(t, max_abs(uc));
    }

    RunRecord rec;
    rec.spec = spec;
    rec.blew_up = det.blew_up;
    rec.numerical_failure = det.numerical_failure;
    rec.T_h = det.stopped ? det.T_h : t;
    rec.trace = std::move(det.trace);
    rec.final_u = std::move(uc);
    rec.final_u_prev = std::move(up);
    rec.grid_x0 = x_at(0);
    rec.final_t = rec.trace.empty() ? 0.0 : rec.trace.back().t;
    return rec;
}

inline RunRecord simulate_radial(const ProblemSpec& spec) {
    detail::validate_spec(spec);
    if (spec.n != 2 && spec.n != 3)
        throw std::invalid_argument("simulate_radial: spec.n must be 2 or 3");
    if (spec.n == 2 && !spec.regularized_origin)
        throw std::invalid_argument(
            "simulate_radial: grid starts at r = 0; enable the regularized origin stencil");

    const double dx = spec.dx;
    const double dt = spec.courant * dx;
    const double c2 = spec.courant * spec.courant;
    const int nr = static_cast<int>(std::ceil(detail::domain_extent(spec) / dx));
    const int nodes = nr + 1;  // r_i = i dx, i = 0..nr
    auto r_at = [&](int i) { return i * dx; };

    auto force = [&](double v) {
        return spec.nonlinearity ? std::pow(std::abs(v), spec.p) : 0.0;
    };

    std::vector<double> up(nodes, 0.0), uc(nodes, 0.0), un(nodes, 0.0);
    detail::Detector det;
    det.cap = spec.cap;
    const long steps = static_cast<long>(std::floor(spec.t_max / dt + 1e-9));
    long m = 1;
    double t = dt;

    if (spec.n == 3) {
        // march v = r u; u(0) recovered by even-in-r parabolic extrapolation
        auto max_abs_u = [&](const std::vector<double>& v) {
            double mx = 0.0;
            for (int i = 1; i < nodes; ++i) mx = std::max(mx, std::abs(v[i] / r_at(i)));
            if (nodes > 2) {
                const double u0 = (4.0 * v[1] / r_at(1) - v[2] / r_at(2)) / 3.0;
                mx = std::max(mx, std::abs(u0));
            }
            return mx;
        };
        auto v_force = [&](double v, double r) {
            return spec.nonlinearity ? std::pow(std::abs(v), spec.p) / std::pow(r, spec.p - 1.0)
                                     : 0.0;
        };
        for (int i = 1; i < nodes; ++i) up[i] = r_at(i) * spec.eps * spec.f(r_at(i));
        up[0] = up[nr] = 0.0;
        for (int i = 1; i + 1 < nodes; ++i) {
            const double lap = (up[i + 1] - 2.0 * up[i] + up[i - 1]) / (dx * dx);
            uc[i] = up[i] + dt * r_at(i) * spec.eps * spec.g(r_at(i)) +
                    0.5 * dt * dt * (lap + v_force(up[i], r_at(i)));
        }
        det.push(0.0, max_abs_u(up));
        if (!det.stopped && steps >= 1) det.push(dt, max_abs_u(uc));
        while (!det.stopped && m < steps) {
            for (int i = 1; i + 1 < nodes; ++i) {
                un[i] = 2.0 * uc[i] - up[i] + c2 * (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]) +
                        dt * dt * v_force(uc[i], r_at(i));
            }
            un[0] = un[nr] = 0.0;
            std::swap(up, uc);
            std::swap(uc, un);
            ++m;
            t = m * dt;
            det.push(t, max_abs_u(uc));
        }
        // report u, not v
        std::vector<double> u(nodes, 0.0), u_prev(nodes, 0.0);
        for (int i = 1; i < nodes; ++i) {
            u[i] = uc[i] / r_at(i);
            u_prev[i] = up[i] / r_at(i);
        }
        if (nodes > 2) {
            u[0] = (4.0 * u[1] - u[2]) / 3.0;
            u_prev[0] = (4.0 * u_prev[1] - u_prev[2]) / 3.0;
        }

        RunRecord rec;
        rec.spec = spec;
        rec.blew_up = det.blew_up;
        rec.numerical_failure = det.numerical_failure;
        rec.T_h = det.stopped ? det.T_h : t;
        rec.trace = std::move(det.trace);
        rec.final_u = std::move(u);
        rec.final_u_prev = std::move(u_prev);
        rec.grid_x0 = 0.0;
        rec.final_t = rec.trace.empty() ? 0.0 : rec.trace.back().t;
        return rec;
    }

    // n = 2, direct scheme with the regularized origin
    auto max_abs = [](const std::vector<double>& u) {
        double mx = 0.0;
        for (double v : u) mx = std::max(mx, std::abs(v));
        return mx;
    };
    auto laplacian = [&](const std::vector<double>& u, int i) {
        if (i == 0) return 2.0 * spec.n * (u[1] - u[0]) / (dx * dx);
        return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx) +
               (u[i + 1] - u[i - 1]) / (2.0 * r_at(i) * dx);
    };
    for (int i = 0; i < nodes; ++i) up[i] = spec.eps * spec.f(r_at(i));
    up[nr] = 0.0;
    for (int i = 0; i + 1 < nodes; ++i) {
        uc[i] = up[i] + dt * spec.eps * spec.g(r_at(i)) +
                0.5 * dt * dt * (laplacian(up, i) + force(up[i]));
    }
    uc[nr] = 0.0;
    det.push(0.0, max_abs(up));
    if (!det.stopped && steps >= 1) det.push(dt, max_abs(uc));
    while (!det.stopped && m < steps) {
        un[0] = 2.0 * uc[0] - up[0] + dt * dt * (laplacian(uc, 0) + force(uc[0]));
        for (int i = 1; i + 1 < nodes; ++i) {
            un[i] = 2.0 * uc[i] - up[i] + dt * dt * (laplacian(uc, i) + force(uc[i]));
        }
        un[nr] = 0.0;
        std::swap(up, uc);
        std::swap(uc, un);
        ++m;
        t = m * dt;
        det.push(t, max_abs(uc));
    }

    RunRecord rec;
    rec.spec = spec;
    rec.blew_up = det.blew_up;
    rec.numerical_failure = det.numerical_failure;
    rec.T_h = det.stopped ? det.T_h : t;
    rec.trace = std::move(det.trace);
    rec.final_u = std::move(uc);
    rec.final_u_prev = std::move(up);
    rec.grid_x0 = 0.0;
    rec.final_t = rec.trace.empty() ? 0.0 : rec.trace.back().t;
    return rec;
}

inline RunRecord simulate(const ProblemSpec& spec) {
    return spec.n == 1 ? simulate_1d(spec) : simulate_radial(spec);
}

// Blow-up time of y'' = y^p, y(0) = y0 > 0, y'(0) = y1 >= 0, by the energy
// quadrature T = int_{y0}^inf dy / sqrt(y1^2 + 2/(p+1) (y^{p+1} - y0^{p+1})).
// Substitutions y = y0 + z^2 (near end) and w = y^{-(p-1)/2} (tail) make both
// pieces bounded and smooth; used to calibrate the blow-up detector.
inline double ode_blowup_time(double p, double y0, double y1) {
    if (!(p > 1.0)) throw std::domain_error("ode_blowup_time: p must be > 1");
    if (!(y0 > 0.0)) throw std::domain_error("ode_blowup_time: y0 must be > 0");
    if (!(y1 >= 0.0)) throw std::domain_error("ode_blowup_time: y1 must be >= 0");

    const double cc = 2.0 / (p + 1.0);
    const double y0p1 = std::pow(y0, p + 1.0);
    const double Y = 2.0 * y0;
    const QuadOptions opt{.rel_tol = 1e-11, .abs_floor = 1e-16};

    auto near_piece = [&](double z) {
        const double y = y0 + z * z;
        const double E = y1 * y1 + cc * (std::pow(y, p + 1.0) - y0p1);
        if (!(E > 0.0)) return 2.0 / std::sqrt(2.0 * std::pow(y0, p));  // z -> 0, y1 = 0 limit
        return 2.0 * z / std::sqrt(E);
    };
    const double T1 = integrate(near_piece, 0.0, std::sqrt(Y - y0), opt).value;

    const double wexp = 2.0 * (p + 1.0) / (p - 1.0);
    auto tail_piece = [&](double w) {
        const double wp = std::pow(w, wexp);
        const double Ehat = y1 * y1 * wp + cc * (1.0 - y0p1 * wp);
        if (!(Ehat > 0.0)) throw std::domain_error("ode_blowup_time: divergent tail integrand");
        return (2.0 / (p - 1.0)) / std::sqrt(Ehat);
    };
    const double W = std::pow(Y, -0.5 * (p - 1.0));
    const double T2 = integrate(tail_piece, 0.0, W, opt).value;
    return T1 + T2;
}

struct LifespanEstimate {
    double value = std::numeric_limits<double>::quiet_NaN();
    double uncertainty = std::numeric_limits<double>::quiet_NaN();
    bool conclusive = false;
};

// First crossing of the cap in a recorded trace; NaN when none.
inline double crossing_time(std::span<const TracePoint> trace, double cap) {
    for (const auto& pt : trace)
        if (pt.max_abs_u > cap) return pt.t;
    return std::numeric_limits<double>::quiet_NaN();
}

// Lifespan estimate from a refinement pair: the fine-grid crossing time with
// the coarse/fine spread as uncertainty (floored at one fine time step).
// Inconclusive unless both runs blew up.
inline LifespanEstimate detect_lifespan(const RunRecord& coarse, const RunRecord& fine) {
    LifespanEstimate est;
    if (!coarse.blew_up || !fine.blew_up) return est;
    const double dt_fine = fine.spec.courant * fine.spec.dx;
    est.value = fine.T_h;
    est.uncertainty = std::max(std::abs(coarse.T_h - fine.T_h), dt_fine);
    est.conclusive = true;
    return est;
}

} // namespace semiwave
