#pragma once

// eps-sweep harness and scaling-law regressions. A sweep runs each eps at
// refinement_levels nested grids, estimates the lifespan from the finest
// pair, and hands each entry to an optional sink for incremental persistence.
// Fits are ordinary least squares in the law's linearizing coordinates:
//
//   power law:    log T = theta log(1/eps) + b      (fitted = theta)
//   critical law: log T = C eps^{-p(p-1)} + b       (fitted = C)
//   2-D p = 2:    log T = s log a(eps) + b          (fitted = s, predicted 1)

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/exponents.hpp"
#include "semiwave/wave_sim.hpp"

namespace semiwave {

struct SweepConfig {
    ProblemSpec base;              // eps field ignored
    std::vector<double> eps_list;  // strictly decreasing, all > 0
    int refinement_levels = 2;
    std::string output_path;  // JSON-lines sink (used by the CLI layer)

    void validate() const {
        if (eps_list.empty()) throw std::invalid_argument("sweep: eps_list is empty");
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            if (!(eps_list[i] > 0.0))
                throw std::invalid_argument("sweep: eps_list entries must be > 0");
            if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
                throw std::invalid_argument("sweep: eps_list must be strictly decreasing");
        }
        if (refinement_levels < 2)
            throw std::invalid_argument("sweep: refinement_levels must be >= 2");
    }
};

struct SweepEntry {
    double eps = 0.0;
    LifespanEstimate lifespan;
    bool blew_up = false;
    bool theorem_hypotheses = true;
    std::vector<RunRecord> levels;
};

// Runs the sweep sequentially (deterministic); inconclusive entries are
// flagged and kept, fits exclude them later.
inline std::vector<SweepEntry> run_sweep(
    const SweepConfig& config,
    const std::function<void(const SweepEntry&)>& on_entry = {}) {
    config.validate();
    std::vector<SweepEntry> entries;
    entries.reserve(config.eps_list.size());
    for (double eps : config.eps_list) {
        SweepEntry entry;
        entry.eps = eps;
        for (int level = 0; level < config.refinement_levels; ++level) {
            ProblemSpec spec = config.base;
            spec.eps = eps;
            spec.dx = config.base.dx / std::exp2(level);
            RunRecord rec = simulate(spec);
            rec.refinement_level = level;
            rec.trace.shrink_to_fit();
            entry.levels.push_back(std::move(rec));
        }
        const auto& fine = entry.levels.back();
        const auto& coarse = entry.levels[entry.levels.size() - 2];
        entry.lifespan = detect_lifespan(coarse, fine);
        entry.blew_up = fine.blew_up;
        entry.theorem_hypotheses = fine.spec.theorem_hypotheses();
        if (on_entry) on_entry(entry);
        entries.push_back(std::move(entry));
    }
    return entries;
}

struct FitPoint {
    double eps = 0.0;
    double T = 0.0;
    double sigma = 0.0;  // reported, not weighted in
};

inline std::vector<FitPoint> fit_points(std::span<const SweepEntry> entries) {
    std::vector<FitPoint> pts;
    for (const auto& e : entries)
        if (e.lifespan.conclusive && e.blew_up)
            pts.push_back({e.eps, e.lifespan.value, e.lifespan.uncertainty});
    return pts;
}

enum class FitModel { power_law, critical_exponential, a_law_2d };

inline const char* to_string(FitModel m) {
    switch (m) {
        case FitModel::power_law: return "power_law";
        case FitModel::critical_exponential: return "critical_exponential";
        case FitModel::a_law_2d: return "a_law_2d";
    }
    return "?";
}

struct FitReport {
    FitModel model = FitModel::power_law;
    double fitted = 0.0;     // slope in the model's coordinates
    double intercept = 0.0;
    double r_squared = 0.0;
    double predicted = 0.0;  // expected slope (rate exponent for the critical law)
    double relative_gap = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    bool verdict = false;
    std::size_t points_used = 0;
};

namespace detail {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

inline OlsFit ols(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::domain_error("fit: degenerate abscissas (all eps equal)");
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (f.intercept + f.slope * x[i]);
            ss_res += e * e;
        }
        f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return f;
}

inline void require_fit_points(std::span<const FitPoint> pts) {
    if (pts.size() < 4)
        throw std::invalid_argument("fit: need at least 4 blow-up records, got " +
                                    std::to_string(pts.size()));
    for (const auto& p : pts)
        if (!(p.eps > 0.0) || !(p.T > 0.0))
            throw std::invalid_argument("fit: records need eps > 0 and T > 0");
}

} // namespace detail

inline FitReport fit_power_law(std::span<const FitPoint> pts, double predicted_exponent,
                               double tolerance = 0.2) {
    detail::require_fit_points(pts);
    std::vector<double> x, y;
    for (const auto& p : pts) {
        x.push_back(std::log(1.0 / p.eps));
        y.push_back(std::log(p.T));
    }
    const auto f = detail::ols(x, y);
    FitReport rep;
    rep.model = FitModel::power_law;
    rep.fitted = f.slope;
    rep.intercept = f.intercept;
    rep.r_squared = f.r_squared;
    rep.predicted = predicted_exponent;
    rep.tolerance = tolerance;
    rep.points_used = pts.size();
    rep.relative_gap = std::abs(f.slope - predicted_exponent) / std::abs(predicted_exponent);
    rep.verdict = rep.relative_gap <= tolerance;
    return rep;
}

inline FitReport fit_critical_law(std::span<const FitPoint> pts, double p,
                                  double r2_threshold = 0.9) {
    detail::require_fit_points(pts);
    if (!(p > 1.0)) throw std::domain_error("fit_critical_law: p must be > 1");
    const double rate = p * (p - 1.0);
    std::vector<double> x, y;
    for (const auto& pt : pts) {
        x.push_back(std::pow(pt.eps, -rate));
        y.push_back(std::log(pt.T));
    }
    const auto f = detail::ols(x, y);
    FitReport rep;
    rep.model = FitModel::critical_exponential;
    rep.fitted = f.slope;
    rep.intercept = f.intercept;
    rep.r_squared = f.r_squared;
    rep.predicted = rate;  // the rate exponent used in the abscissa
    rep.tolerance = r2_threshold;
    rep.points_used = pts.size();
    rep.verdict = f.slope > 0.0 && f.r_squared >= r2_threshold;
    return rep;
}

// 2-D p = 2, nonzero moment: the law is T ~ a(eps) with a from
// a^2 eps^2 log(1+a) = 1, so regress log T on log a(eps), predicted slope 1.
inline FitReport fit_a_law_2d(std::span<const FitPoint> pts, double tolerance = 0.2) {
    detail::require_fit_points(pts);
    std::vector<double> x, y;
    for (const auto& p : pts) {
        x.push_back(std::log(solve_a(p.eps)));
        y.push_back(std::log(p.T));
    }
    const auto f = detail::ols(x, y);
    FitReport rep;
    rep.model = FitModel::a_law_2d;
    rep.fitted = f.slope;
    rep.intercept = f.intercept;
    rep.r_squared = f.r_squared;
    rep.predicted = 1.0;
    rep.tolerance = tolerance;
    rep.points_used = pts.size();
    rep.relative_gap = std::abs(f.slope - 1.0);
    rep.verdict = rep.relative_gap <= tolerance;
    return rep;
}

} // namespace semiwave
