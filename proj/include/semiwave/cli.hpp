#pragma once

// Single entry point: subcommands exponents / bound / verify-step / simulate
// / sweep / fit. Data goes to stdout, diagnostics to stderr. Exit codes:
// 0 success or verdict pass, 1 verdict failure, 2 inconclusive, 64 usage
// error. SEMIWAVE_OUTPUT_DIR, when set, anchors relative output paths.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semiwave/exponents.hpp"
#include "semiwave/proof_verify.hpp"
#include "semiwave/records.hpp"
#include "semiwave/slicing.hpp"
#include "semiwave/sweep_fit.hpp"
#include "semiwave/wave_sim.hpp"

namespace semiwave::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verdict_failure = 1;
inline constexpr int inconclusive = 2;
inline constexpr int usage = 64;
} // namespace exit_code

namespace detail {

inline std::string resolve_output_path(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    if (const char* dir = std::getenv("SEMIWAVE_OUTPUT_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / p).string();
    return path;
}

inline std::string fmt_full(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << std::left << std::setw(14) << key << value << "\n";
}

struct ProfileOpt {
    double g0 = 1.0;
    double R = 1.0;
    int m = 2;
};

inline ProfileOpt parse_profile(const std::string& s) {
    ProfileOpt p;
    if (s.empty()) return p;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> p.g0 >> c1 >> p.R >> c2 >> p.m) || c1 != ',' || c2 != ',')
        throw std::invalid_argument("--profile expects g0,R,m");
    return p;
}

// "n,p,moment" with moment either numeric or zero/nonzero
struct PredictedFrom {
    int n = 0;
    double p = 0.0;
    bool moment_is_zero = false;
};

inline PredictedFrom parse_predicted_from(const std::string& s) {
    PredictedFrom out;
    std::istringstream is(s);
    std::string tok;
    if (!std::getline(is, tok, ',')) throw std::invalid_argument("--predicted-from expects n,p,moment");
    out.n = std::stoi(tok);
    if (!std::getline(is, tok, ',')) throw std::invalid_argument("--predicted-from expects n,p,moment");
    out.p = std::stod(tok);
    if (!std::getline(is, tok, ',')) throw std::invalid_argument("--predicted-from expects n,p,moment");
    if (tok == "zero") out.moment_is_zero = true;
    else if (tok == "nonzero") out.moment_is_zero = false;
    else out.moment_is_zero = std::abs(std::stod(tok)) <= 1e-12;
    return out;
}

} // namespace detail

struct GlobalOptions {
    std::string format = "text";
    unsigned long seed = 0;
    bool quiet = false;

    std::ostream& diag() const {
        static std::ofstream null_sink;
        if (quiet) {
            if (!null_sink.is_open()) null_sink.open("/dev/null");
            return null_sink;
        }
        return std::cerr;
    }
};

inline int cmd_exponents(const GlobalOptions& g, int n, std::optional<double> p_opt,
                         bool zero_moment) {
    std::optional<double> p0;
    if (n >= 2) p0 = strauss_exponent(n);
    if (!p_opt && n == 1) {
        std::cerr << "exponents: --p is required for n = 1 (no critical exponent)\n";
        return exit_code::usage;
    }
    const double p = p_opt ? *p_opt : *p0;
    const double gamma = strauss_gamma(n, p);
    const LifespanLaw law = predicted_lifespan_law(n, p, zero_moment);

    if (g.format == "json") {
        ojson j;
        j["n"] = n;
        j["p"] = p;
        if (p0) j["p0"] = *p0;
        else j["p0"] = nullptr;
        j["gamma"] = gamma;
        j["moment_zero"] = zero_moment;
        j["law"] = {{"kind", to_string(law.kind)},
                    {"case", to_string(law.case_tag)},
                    {"exponent", law.exponent}};
        std::cout << j.dump(2) << "\n";
        return exit_code::ok;
    }
    using detail::fmt_full;
    detail::print_kv(std::cout, "n", std::to_string(n));
    detail::print_kv(std::cout, "p", fmt_full(p));
    detail::print_kv(std::cout, "p0(n)", p0 ? fmt_full(*p0) : "undefined (n = 1)");
    detail::print_kv(std::cout, "gamma(n,p)", fmt_full(gamma));
    detail::print_kv(std::cout, "moment", zero_moment ? "zero" : "nonzero");
    detail::print_kv(std::cout, "law", to_string(law.kind));
    detail::print_kv(std::cout, "case", to_string(law.case_tag));
    switch (law.kind) {
        case LawKind::power_law:
            detail::print_kv(std::cout, "exponent", fmt_full(law.exponent) + "  (T ~ C eps^-exponent)");
            break;
        case LawKind::exponential_law:
            detail::print_kv(std::cout, "rate", fmt_full(law.exponent) + "  (log T ~ C eps^-rate)");
            break;
        case LawKind::two_dim_p2:
            detail::print_kv(std::cout, "exponent",
                             fmt_full(law.exponent) + "  (T ~ C a(eps), slope on log a)");
            break;
    }
    return exit_code::ok;
}

inline int cmd_bound(const GlobalOptions& g, int n, std::optional<double> p_opt, double delta,
                     double eps, std::optional<double> M_opt, bool estimate_M_flag,
                     const detail::ProfileOpt& prof) {
    const double p_crit = strauss_exponent(n);
    const double p = p_opt ? *p_opt : p_crit;
    if (std::abs(p - p_crit) > 1e-6 * p_crit) {
        std::cerr << "bound: the lifespan bound holds at the critical exponent p = "
                  << detail::fmt_full(p_crit) << " for n = " << n << "\n";
        return exit_code::usage;
    }
    if (M_opt && estimate_M_flag) {
        std::cerr << "bound: give either --M or --estimate-M, not both\n";
        return exit_code::usage;
    }
    const RadialProfile bump = bump_profile(prof.g0, prof.R, prof.m);
    std::string m_source = "estimated";
    double M = 0.0;
    if (M_opt) {
        M = *M_opt;
        m_source = "user";
    } else {
        const auto grid = default_sigma_samples(delta);
        M = estimate_M(n, p, bump, delta, grid);
    }
    const SlicingConstants c = make_slicing_constants(n, p, delta, M);
    const double eps0 = epsilon_zero(c);
    const bool applicable = eps <= eps0 * (1.0 + 1e-12);
    LifespanBound bound;
    if (applicable) bound = lifespan_upper_bound(eps, c);

    if (g.format == "json") {
        ojson j;
        j["schema"] = "semiwave.bound/1";
        j["n"] = n;
        j["p"] = p;
        j["delta"] = delta;
        j["k"] = c.k;
        j["M"] = M;
        j["M_source"] = m_source;
        j["C_geom"] = c.C_geom;
        j["N"] = c.N;
        j["S_p"] = c.S_p;
        j["A"] = c.A;
        j["eps0"] = eps0;
        j["eps"] = eps;
        j["applicable"] = applicable;
        if (applicable) {
            j["log_lifespan_bound"] = bound.log_value;
            j["lifespan_bound"] = std::isfinite(bound.value) ? ojson(bound.value) : ojson(nullptr);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        using detail::fmt_full;
        detail::print_kv(std::cout, "n", std::to_string(n));
        detail::print_kv(std::cout, "p", fmt_full(p));
        detail::print_kv(std::cout, "delta", fmt_full(delta));
        detail::print_kv(std::cout, "k", fmt_full(c.k));
        detail::print_kv(std::cout, "M", fmt_full(M) + "  (" + m_source + ")");
        detail::print_kv(std::cout, "C_geom", fmt_full(c.C_geom));
        detail::print_kv(std::cout, "N", fmt_full(c.N));
        detail::print_kv(std::cout, "S_p", fmt_full(c.S_p));
        detail::print_kv(std::cout, "A", fmt_full(c.A));
        detail::print_kv(std::cout, "eps0", fmt_full(eps0));
        detail::print_kv(std::cout, "eps", fmt_full(eps));
        if (applicable) {
            detail::print_kv(std::cout, "log T bound", fmt_full(bound.log_value));
            detail::print_kv(std::cout, "T bound",
                             std::isfinite(bound.value) ? fmt_full(bound.value) : "overflow (see log)");
        }
    }
    if (!applicable) {
        g.diag() << "bound: eps = " << eps << " exceeds eps_0 = " << eps0
                 << "; the bound does not apply\n";
        return exit_code::verdict_failure;
    }
    return exit_code::ok;
}

inline int cmd_verify_step(const GlobalOptions& g, int n, int j, int samples, double delta,
                           double eps, double M, double tol) {
    if (samples < 3) {
        std::cerr << "verify-step: --samples must be >= 3\n";
        return exit_code::usage;
    }
    const SlicingConstants c = make_critical_constants(n, delta, M);
    std::vector<SamplePoint> pts = default_step_samples(j, c.k);
    if (samples < static_cast<int>(pts.size())) {
        pts.resize(samples);
    } else if (samples > static_cast<int>(pts.size())) {
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> depth(std::log(1.2), std::log(8.0));
        std::uniform_real_distribution<double> off(0.0, std::log(4.0));
        while (static_cast<int>(pts.size()) < samples) {
            const double d = slicing_l(j + 1) * c.k * std::exp(depth(rng));
            const double r = d * std::exp(off(rng));
            pts.push_back({r, r + d});
        }
    }
    const StepVerdict v = verify_iteration_step(j, c, eps, pts, tol);

    if (g.format == "json") {
        std::cout << step_verdict_to_json(v).dump(2) << "\n";
    } else {
        using detail::fmt_full;
        detail::print_kv(std::cout, "j", std::to_string(v.j));
        detail::print_kv(std::cout, "n", std::to_string(v.n));
        detail::print_kv(std::cout, "p", fmt_full(v.p));
        detail::print_kv(std::cout, "log(C_j^p)", fmt_full(v.logCj_p));
        for (const auto& s : v.samples) {
            std::cout << "  (r=" << fmt_full(s.r) << ", t=" << fmt_full(s.t)
                      << ")  computed/claimed=" << fmt_full(s.ratio)
                      << "  claimed/C_j^p=" << fmt_full(s.claimed)
                      << (s.passed ? "  ok" : "  LOW")
                      << (s.conclusive ? "" : "  (inconclusive)") << "\n";
        }
        detail::print_kv(std::cout, "status", to_string(v.status));
    }
    switch (v.status) {
        case VerdictStatus::passed: return exit_code::ok;
        case VerdictStatus::failed: return exit_code::verdict_failure;
        case VerdictStatus::inconclusive: return exit_code::inconclusive;
    }
    return exit_code::inconclusive;
}

inline int cmd_simulate(const GlobalOptions& g, const ProblemSpec& spec,
                        const std::string& trace_path) {
    const RunRecord rec = simulate(spec);
    std::cout << run_record_to_json(rec).dump(2) << "\n";
    if (!trace_path.empty())
        write_trace_csv(detail::resolve_output_path(trace_path), rec.trace);
    g.diag() << "simulate: " << (rec.blew_up ? "blow-up at T_h = " + std::to_string(rec.T_h)
                                 : rec.numerical_failure
                                     ? "numerical failure at t = " + std::to_string(rec.T_h)
                                     : "no blow-up before t_max")
             << "\n";
    return rec.numerical_failure ? exit_code::inconclusive : exit_code::ok;
}

inline int cmd_sweep(const GlobalOptions& g, const std::string& config_path) {
    SweepConfig cfg = load_sweep_config(config_path);
    cfg.validate();
    const std::string out_path = detail::resolve_output_path(
        cfg.output_path.empty() ? "sweep_records.jsonl" : cfg.output_path);
    std::ofstream out(out_path, std::ios::app);
    if (!out) throw std::runtime_error("sweep: cannot open output file " + out_path);

    std::size_t conclusive = 0;
    auto sink = [&](const SweepEntry& e) {
        out << sweep_entry_to_json(e).dump() << "\n";
        out.flush();
        if (e.lifespan.conclusive) ++conclusive;
        g.diag() << "sweep: eps = " << e.eps
                 << (e.lifespan.conclusive
                         ? " T_h = " + std::to_string(e.lifespan.value) + " +- " +
                               std::to_string(e.lifespan.uncertainty)
                         : " inconclusive")
                 << "\n";
    };
    const auto entries = run_sweep(cfg, sink);

    ojson j;
    j["schema"] = "semiwave.sweep_summary/1";
    j["records"] = entries.size();
    j["conclusive"] = conclusive;
    j["output"] = out_path;
    std::cout << j.dump(2) << "\n";
    return exit_code::ok;
}

inline int cmd_fit(const GlobalOptions& g, const std::string& input, const std::string& model,
                   const std::string& predicted_from, double tolerance,
                   const std::string& export_csv) {
    const RecordSet set = read_sweep_records(input);
    if (!export_csv.empty())
        write_fit_csv(detail::resolve_output_path(export_csv), set.points);
    if (set.points.size() < 4) {
        g.diag() << "fit: only " << set.points.size()
                 << " conclusive blow-up records (need >= 4); inconclusive\n";
        return exit_code::inconclusive;
    }

    FitReport rep;
    if (model == "power") {
        if (predicted_from.empty()) {
            std::cerr << "fit: --model power requires --predicted-from n,p,moment\n";
            return exit_code::usage;
        }
        const auto pf = detail::parse_predicted_from(predicted_from);
        const LifespanLaw law = predicted_lifespan_law(pf.n, pf.p, pf.moment_is_zero);
        if (law.kind != LawKind::power_law) {
            std::cerr << "fit: predicted law for this case is " << to_string(law.kind)
                      << ", not a power law; use --model critical or a2d\n";
            return exit_code::usage;
        }
        rep = fit_power_law(set.points, law.exponent, tolerance);
    } else if (model == "critical") {
        if (predicted_from.empty()) {
            std::cerr << "fit: --model critical requires --predicted-from n,p,moment\n";
            return exit_code::usage;
        }
        const auto pf = detail::parse_predicted_from(predicted_from);
        rep = fit_critical_law(set.points, pf.p);
    } else if (model == "a2d") {
        rep = fit_a_law_2d(set.points, tolerance);
    } else {
        std::cerr << "fit: unknown --model '" << model << "' (power|critical|a2d)\n";
        return exit_code::usage;
    }

    if (g.format == "json") {
        ojson j = fit_report_to_json(rep);
        j["excluded_records"] = set.excluded;
        std::cout << j.dump(2) << "\n";
    } else {
        using detail::fmt_full;
        detail::print_kv(std::cout, "model", to_string(rep.model));
        detail::print_kv(std::cout, "fitted", fmt_full(rep.fitted));
        detail::print_kv(std::cout, "intercept", fmt_full(rep.intercept));
        detail::print_kv(std::cout, "r_squared", fmt_full(rep.r_squared));
        detail::print_kv(std::cout, "predicted", fmt_full(rep.predicted));
        if (std::isfinite(rep.relative_gap))
            detail::print_kv(std::cout, "relative_gap", fmt_full(rep.relative_gap));
        detail::print_kv(std::cout, "points", std::to_string(rep.points_used) + " used, " +
                                                  std::to_string(set.excluded) + " excluded");
        detail::print_kv(std::cout, "verdict", rep.verdict ? "pass" : "fail");
    }
    return rep.verdict ? exit_code::ok : exit_code::verdict_failure;
}

inline int run(int argc, const char* const* argv) {
    CLI::App app{"semiwave: lifespan laboratory for u_tt - Lap(u) = |u|^p"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", g.seed, "seed for randomized sample sets");
    app.add_flag("--quiet", g.quiet, "suppress diagnostics on stderr");

    // exponents
    auto* exp_cmd = app.add_subcommand("exponents", "critical exponent and lifespan law table");
    int exp_n = 3;
    double exp_p = 0.0;
    bool exp_zero_moment = false;
    exp_cmd->add_option("--n", exp_n, "space dimension")->required()->check(CLI::PositiveNumber);
    auto* exp_p_opt = exp_cmd->add_option("--p", exp_p, "power (default: p0(n) for n >= 2)");
    exp_cmd->add_flag("--zero-moment", exp_zero_moment, "classify for integral(g) = 0");

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "critical lifespan upper bound and constants");
    int bnd_n = 3;
    double bnd_p = 0.0, bnd_delta = 0.125, bnd_eps = 0.0, bnd_M = 0.0;
    bool bnd_estimate = false;
    std::string bnd_profile;
    bound_cmd->add_option("--n", bnd_n)->required()->check(CLI::Range(2, 3));
    auto* bnd_p_opt = bound_cmd->add_option("--p", bnd_p, "power (default: critical)");
    bound_cmd->add_option("--delta", bnd_delta, "lemma offset delta > 0")->required();
    bound_cmd->add_option("--eps", bnd_eps, "data size eps")->required();
    auto* bnd_M_opt = bound_cmd->add_option("--M", bnd_M, "lemma constant M");
    bound_cmd->add_flag("--estimate-M", bnd_estimate, "certify M by quadrature (default)");
    bound_cmd->add_option("--profile", bnd_profile, "bump g0,R,m (default 1,1,2)");

    // verify-step
    auto* vs_cmd = app.add_subcommand("verify-step", "replay one slicing iteration step");
    int vs_n = 3, vs_j = 1, vs_samples = 5;
    double vs_delta = 0.125, vs_eps = 1.0, vs_M = 1.0, vs_tol = 1e-3;
    vs_cmd->add_option("--n", vs_n)->required()->check(CLI::Range(2, 3));
    vs_cmd->add_option("--j", vs_j, "rung index")->required()->check(CLI::PositiveNumber);
    vs_cmd->add_option("--samples", vs_samples, "sample count (default set has 5)");
    vs_cmd->add_option("--delta", vs_delta, "lemma offset");
    vs_cmd->add_option("--eps", vs_eps, "data size (scales C_j only)");
    vs_cmd->add_option("--M", vs_M, "lemma constant (scales C_j only)");
    vs_cmd->add_option("--tol", vs_tol, "one-sided tolerance");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run one finite-difference simulation");
    ProblemSpec sim_spec;
    std::string sim_profile, sim_trace;
    bool sim_linear = false;
    sim_cmd->add_option("--n", sim_spec.n)->required()->check(CLI::Range(1, 3));
    sim_cmd->add_option("--p", sim_spec.p, "power")->required();
    sim_cmd->add_option("--eps", sim_spec.eps, "data size")->required();
    sim_cmd->add_option("--dx", sim_spec.dx, "grid spacing");
    sim_cmd->add_option("--courant", sim_spec.courant, "dt/dx in (0,1]");
    sim_cmd->add_option("--cap", sim_spec.cap, "blow-up threshold");
    sim_cmd->add_option("--tmax", sim_spec.t_max, "horizon");
    sim_cmd->add_flag("--linear", sim_linear, "disable the nonlinearity (test mode)");
    sim_cmd->add_option("--profile", sim_profile, "bump g0,R,m (default 1,1,2)");
    sim_cmd->add_option("--trace", sim_trace, "write (t, max|u|) CSV here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run an eps sweep from a config file");
    std::string sweep_config;
    sweep_cmd->add_option("--config", sweep_config, "sweep config (JSON)")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "regress lifespans against a scaling law");
    std::string fit_input, fit_model = "power", fit_predicted, fit_csv;
    double fit_tol = 0.2;
    fit_cmd->add_option("--input", fit_input, "JSON-lines sweep records")->required();
    fit_cmd->add_option("--model", fit_model, "power|critical|a2d");
    fit_cmd->add_option("--predicted-from", fit_predicted, "n,p,moment");
    fit_cmd->add_option("--tolerance", fit_tol, "relative exponent tolerance");
    fit_cmd->add_option("--export-csv", fit_csv, "write (eps, T_h, uncertainty) CSV");

    // global flags (--format, --seed, --quiet) are accepted after the
    // subcommand name as well
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::usage;
    }

    try {
        if (exp_cmd->parsed())
            return cmd_exponents(g, exp_n,
                                 exp_p_opt->count() ? std::optional<double>(exp_p) : std::nullopt,
                                 exp_zero_moment);
        if (bound_cmd->parsed())
            return cmd_bound(g, bnd_n,
                             bnd_p_opt->count() ? std::optional<double>(bnd_p) : std::nullopt,
                             bnd_delta, bnd_eps,
                             bnd_M_opt->count() ? std::optional<double>(bnd_M) : std::nullopt,
                             bnd_estimate, detail::parse_profile(bnd_profile));
        if (vs_cmd->parsed())
            return cmd_verify_step(g, vs_n, vs_j, vs_samples, vs_delta, vs_eps, vs_M, vs_tol);
        if (sim_cmd->parsed()) {
            const auto prof = detail::parse_profile(sim_profile);
            sim_spec.g = bump_profile(prof.g0, prof.R, prof.m);
            sim_spec.f = zero_profile();
            sim_spec.nonlinearity = !sim_linear;
            return cmd_simulate(g, sim_spec, sim_trace);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(g, sweep_config);
        if (fit_cmd->parsed())
            return cmd_fit(g, fit_input, fit_model, fit_predicted, fit_tol, fit_csv);
    } catch (const std::exception& e) {
        std::cerr << app.get_name() << ": " << e.what() << "\n";
        return exit_code::usage;
    }
    return exit_code::usage;
}

} // namespace semiwave::cli
