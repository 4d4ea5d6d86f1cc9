#pragma once

// JSON and CSV serialization of run records, sweep entries, fit reports and
// step verdicts. Field order is fixed (ordered_json) and all values are
// written with shortest-round-trip formatting, so identical inputs reproduce
// byte-identical records; the timestamp is the only run-varying field.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semiwave/proof_verify.hpp"
#include "semiwave/sweep_fit.hpp"
#include "semiwave/wave_sim.hpp"

namespace semiwave {

using ojson = nlohmann::ordered_json;

inline std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

inline ojson profile_to_json(const RadialProfile& g) {
    ojson j;
    j["kind"] = to_string(g.kind);
    j["g0"] = g.amplitude;
    j["R"] = g.radius;
    j["m"] = g.shape;
    if (g.kind == ProfileKind::bump_dipole) j["shift"] = g.shift;
    return j;
}

inline RadialProfile profile_from_json(const ojson& j) {
    const std::string kind = j.value("kind", "bump");
    if (kind == "zero") return zero_profile();
    if (kind == "constant") return constant_profile(j.value("g0", 1.0));
    if (kind == "bump")
        return bump_profile(j.value("g0", 1.0), j.value("R", 1.0), j.value("m", 2));
    if (kind == "bump_dipole")
        return dipole_profile(j.value("g0", 1.0), j.value("R", 1.0), j.value("m", 2),
                              j.value("shift", 2.0));
    throw std::invalid_argument("profile_from_json: unknown kind '" + kind + "'");
}

inline ojson spec_to_json(const ProblemSpec& s) {
    ojson j;
    j["n"] = s.n;
    j["p"] = s.p;
    j["eps"] = s.eps;
    j["f"] = profile_to_json(s.f);
    j["g"] = profile_to_json(s.g);
    j["dx"] = s.dx;
    j["courant"] = s.courant;
    j["cap"] = s.cap;
    j["t_max"] = s.t_max;
    j["nonlinearity"] = s.nonlinearity;
    return j;
}

inline ojson run_record_to_json(const RunRecord& r) {
    ojson j;
    j["schema"] = "semiwave.run/1";
    j["spec"] = spec_to_json(r.spec);
    j["theorem_hypotheses"] = r.spec.theorem_hypotheses();
    j["blew_up"] = r.blew_up;
    j["numerical_failure"] = r.numerical_failure;
    j["T_h"] = r.T_h;
    j["final_t"] = r.final_t;
    j["refinement_level"] = r.refinement_level;
    j["trace_points"] = r.trace.size();
    return j;
}

inline void write_trace_csv(const std::string& path, std::span<const TracePoint> trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file: " + path);
    out << "t,max_abs_u\n";
    char line[64];
    for (const auto& pt : trace) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n", pt.t, pt.max_abs_u);
        out << line;
    }
}

inline ojson sweep_entry_to_json(const SweepEntry& e, bool timestamp = true) {
    ojson j;
    j["schema"] = "semiwave.sweep/1";
    j["eps"] = e.eps;
    if (e.lifespan.conclusive) {
        j["T_h"] = e.lifespan.value;
        j["uncertainty"] = e.lifespan.uncertainty;
    } else {
        j["T_h"] = nullptr;
        j["uncertainty"] = nullptr;
    }
    j["conclusive"] = e.lifespan.conclusive;
    j["blew_up"] = e.blew_up;
    j["theorem_hypotheses"] = e.theorem_hypotheses;
    ojson levels = ojson::array();
    for (const auto& rec : e.levels) {
        ojson l;
        l["dx"] = rec.spec.dx;
        l["T_h"] = rec.T_h;
        l["blew_up"] = rec.blew_up;
        l["numerical_failure"] = rec.numerical_failure;
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    if (timestamp) j["timestamp"] = iso8601_utc_now();
    return j;
}

// JSON-lines reader for fit input: conclusive blow-up records become fit
// points, everything else is counted as excluded.
struct RecordSet {
    std::vector<FitPoint> points;
    std::size_t excluded = 0;
};

inline RecordSet read_sweep_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    RecordSet set;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const ojson j = ojson::parse(line);
        const bool conclusive = j.value("conclusive", false);
        const bool blew_up = j.value("blew_up", false);
        if (conclusive && blew_up && j.contains("T_h") && !j["T_h"].is_null()) {
            set.points.push_back({j["eps"].get<double>(), j["T_h"].get<double>(),
                                  j.value("uncertainty", 0.0)});
        } else {
            ++set.excluded;
        }
    }
    return set;
}

inline void write_fit_csv(const std::string& path, std::span<const FitPoint> pts) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open csv file: " + path);
    out << "eps,T_h,uncertainty\n";
    char line[96];
    for (const auto& p : pts) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", p.eps, p.T, p.sigma);
        out << line;
    }
}

inline ojson fit_report_to_json(const FitReport& r) {
    ojson j;
    j["schema"] = "semiwave.fit/1";
    j["model"] = to_string(r.model);
    j["fitted"] = r.fitted;
    j["intercept"] = r.intercept;
    j["r_squared"] = r.r_squared;
    j["predicted"] = r.predicted;
    if (std::isfinite(r.relative_gap)) j["relative_gap"] = r.relative_gap;
    else j["relative_gap"] = nullptr;
    j["tolerance"] = r.tolerance;
    j["points_used"] = r.points_used;
    j["verdict"] = r.verdict ? "pass" : "fail";
    return j;
}

inline ojson step_verdict_to_json(const StepVerdict& v) {
    ojson j;
    j["schema"] = "semiwave.verify/1";
    j["j"] = v.j;
    j["n"] = v.n;
    j["p"] = v.p;
    j["eps"] = v.eps;
    j["tol"] = v.tol;
    j["logCj_p"] = v.logCj_p;
    ojson samples = ojson::array();
    for (const auto& s : v.samples) {
        ojson e;
        e["r"] = s.r;
        e["t"] = s.t;
        e["ratio"] = std::isfinite(s.ratio) ? ojson(s.ratio) : ojson(nullptr);
        e["computed_per_Cjp"] = s.computed;
        e["claimed_per_Cjp"] = s.claimed;
        e["log_claimed_per_Cjp"] =
            std::isfinite(s.log_claimed) ? ojson(s.log_claimed) : ojson(nullptr);
        e["quad_error_over_claimed"] = s.quad_error_ratio;
        e["conclusive"] = s.conclusive;
        e["passed"] = s.passed;
        samples.push_back(std::move(e));
    }
    j["samples"] = std::move(samples);
    j["quad_error_over_claimed"] = v.quad_error_estimate;
    j["status"] = to_string(v.status);
    return j;
}

inline ojson beta_report_to_json(const BetaSlicingReport& r) {
    ojson j;
    j["schema"] = "semiwave.beta_slicing/1";
    j["j"] = r.j;
    j["p"] = r.p;
    j["k"] = r.k;
    j["r"] = r.r;
    j["t"] = r.t;
    j["lhs"] = std::isfinite(r.lhs) ? ojson(r.lhs) : ojson(nullptr);
    j["rhs"] = r.rhs;
    j["log_lhs"] = r.log_lhs;
    j["log_rhs"] = std::isfinite(r.log_rhs) ? ojson(r.log_rhs) : ojson(nullptr);
    j["fraction"] = r.fraction;
    j["coarse_bound"] = r.coarse_bound;
    j["quad_error"] = r.quad_error;
    j["identity_ok"] = r.identity_ok;
    j["passed"] = r.passed;
    return j;
}

inline SweepConfig sweep_config_from_json(const ojson& j) {
    SweepConfig cfg;
    cfg.base.n = j.at("n").get<int>();
    cfg.base.p = j.at("p").get<double>();
    if (j.contains("profile")) cfg.base.g = profile_from_json(j["profile"]);
    if (j.contains("f_profile")) cfg.base.f = profile_from_json(j["f_profile"]);
    cfg.base.dx = j.value("dx", 0.05);
    cfg.base.courant = j.value("courant", 0.5);
    cfg.base.cap = j.value("cap", 1e10);
    cfg.base.t_max = j.value("t_max", 100.0);
    cfg.base.nonlinearity = j.value("nonlinearity", true);
    cfg.eps_list = j.at("eps_list").get<std::vector<double>>();
    cfg.refinement_levels = j.value("refinement_levels", 2);
    cfg.output_path = j.value("output", std::string{});
    return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ojson j;
    in >> j;
    return sweep_config_from_json(j);
}

} // namespace semiwave
