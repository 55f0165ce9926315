#include "hl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>

#include "hl/errors.hpp"
#include "hl/io.hpp"
#include "hl/profiles.hpp"
#include "hl/quadrature.hpp"
#include "hl/spectral.hpp"
#include "hl/sweeps.hpp"
#include "hl/symmetry.hpp"
#include "hl/transforms.hpp"
#include "hl/weights.hpp"

namespace hl {

namespace {

constexpr double kPi = std::numbers::pi;

// Flags write into a scratch RunConfig; only flags that were given are copied
// onto the config after the config file has been merged.
struct Flags {
    CLI::App* app = nullptr;
    RunConfig scratch;
    std::string config_path;
    double quad_tol = 0, quad_tmax = 0, spec_tol = 0, spec_tmax = 0;
    int quad_depth = 0, spec_N = 0;
    std::vector<int> spec_ladder;
    std::string spec_grid;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;

    template <class T>
    void opt(const std::string& name, T RunConfig::*field, const std::string& help) {
        CLI::Option* o = app->add_option(name, scratch.*field, help);
        bound.push_back({o, [this, field](RunConfig& c) { c.*field = scratch.*field; }});
    }
    void flag(const std::string& name, bool RunConfig::*field, const std::string& help) {
        CLI::Option* o = app->add_flag(name, scratch.*field, help);
        bound.push_back({o, [this, field](RunConfig& c) { c.*field = scratch.*field; }});
    }
    template <class T>
    void nested(const std::string& name, T& slot, std::function<void(RunConfig&, const T&)> set,
                const std::string& help) {
        CLI::Option* o = app->add_option(name, slot, help);
        bound.push_back({o, [&slot, set](RunConfig& c) { set(c, slot); }});
    }
    void apply(RunConfig& c) const {
        for (const auto& [o, f] : bound)
            if (o->count() > 0) f(c);
    }
};

// the Flags object is heap-held because CLI11 binds to its members by address
struct Sub {
    CLI::App* app;
    std::unique_ptr<Flags> flags;
};

void common_flags(Sub& s) {
    Flags& f = *s.flags;
    s.app->add_option("--config", f.config_path, "JSON config file (flags override it)");
    f.opt("--output,-o", &RunConfig::output, "result file (default: $HLAB_OUT_DIR/<command>.<format> or stdout)");
    f.opt("--format", &RunConfig::format, "csv | json");
    f.opt("--jobs", &RunConfig::jobs, "worker threads for sweeps");
    f.opt("--seed", &RunConfig::seed, "root seed");
    f.nested<double>("--quad.tol", f.quad_tol, [](RunConfig& c, const double& v) { c.quad.tol = v; },
                     "quadrature relative tolerance");
    f.nested<int>("--quad.max_depth", f.quad_depth, [](RunConfig& c, const int& v) { c.quad.max_depth = v; },
                  "quadrature bisection depth");
    f.nested<double>("--quad.tmax", f.quad_tmax, [](RunConfig& c, const double& v) { c.quad.tmax = v; },
                     "cap for mapped infinite ranges");
}

void spec_flags(Sub& s) {
    Flags& f = *s.flags;
    f.nested<int>("--spec.N", f.spec_N, [](RunConfig& c, const int& v) { c.spec.N = v; }, "grid size");
    f.nested<double>("--spec.tol", f.spec_tol, [](RunConfig& c, const double& v) { c.spec.tol = v; },
                     "eigen solver tolerance");
    f.nested<double>("--spec.tmax", f.spec_tmax, [](RunConfig& c, const double& v) { c.spec.tmax = v; },
                     "t cap");
    f.nested<std::vector<int>>("--spec.ladder", f.spec_ladder,
                               [](RunConfig& c, const std::vector<int>& v) { c.spec.ladder = v; }, "grid sizes");
    f.nested<std::string>("--spec.grid", f.spec_grid, [](RunConfig& c, const std::string& v) { c.spec.grid = v; },
                          "graded | uniform");
}

void family_flags(Flags& f) {
    f.opt("--family", &RunConfig::family, "moser | conc | plateau | wkappa | zeta-t1 | h0 | random");
    f.opt("--n", &RunConfig::n, "family index n");
    f.opt("--mu", &RunConfig::mu, "deficit parameter mu");
    f.opt("--kappa", &RunConfig::kappa, "wkappa parameter");
    f.opt("--t1", &RunConfig::t1, "zeta endpoint t1");
    f.opt("--tau0", &RunConfig::tau0, "zeta exponent tau0");
    f.opt("--ramp", &RunConfig::ramp, "plateau ramp: fourpiece | linear");
    f.opt("--offset", &RunConfig::offset, "plateau centre offset |x0|");
    f.opt("--t0", &RunConfig::t0, "plateau bump edge in t");
    f.opt("--ball", &RunConfig::ball, "random profiles live in B_ball");
    f.opt("--nodes", &RunConfig::nodes, "sample nodes");
}

QuadOptions quad_of(const RunConfig& c) {
    QuadOptions q;
    q.tol = c.quad.tol;
    q.max_depth = c.quad.max_depth;
    q.tmax = c.quad.tmax;
    return q;
}

AssembleOptions assemble_of(const RunConfig& c) {
    AssembleOptions a;
    a.N = c.spec.N;
    a.tmax = c.spec.tmax;
    if (c.spec.grid == "uniform") a.grid = GridKind::Uniform;
    else if (c.spec.grid == "graded") a.grid = GridKind::Graded;
    else throw ConfigError("spec.grid must be graded or uniform");
    return a;
}

void need_mu(double mu, bool closed) {
    if (closed ? !(mu >= -0.25) : !(mu > -0.25))
        throw DomainError(std::string("mu must be ") + (closed ? ">= -1/4" : "> -1/4") + ", got " + fmt_num(mu));
}
void need_alpha(double a) {
    if (!(a > 0.0)) throw DomainError("alpha must be > 0, got " + fmt_num(a));
}
void need_p(double p) {
    if (!(p > 0.0)) throw DomainError("p must be > 0, got " + fmt_num(p));
}

RadialProfile make_family(const RunConfig& c, bool nonnegative = false) {
    const std::string& f = c.family;
    if (f == "moser") return moser_family(c.n, c.mu, c.nodes);
    if (f == "concentrating" || f == "conc") return concentrating_family(c.n, c.mu, default_t_eps(), c.nodes);
    if (f == "plateau") {
        Ramp r;
        if (c.ramp == "fourpiece") r = Ramp::FourPiece;
        else if (c.ramp == "linear") r = Ramp::Linear;
        else throw ConfigError("ramp must be fourpiece or linear");
        return plateau_family(c.n, r, c.t0, c.offset, c.nodes);
    }
    if (f == "wkappa") return wkappa_family(c.kappa, c.nodes);
    if (f == "zeta" || f == "zeta-t1") return zeta_t1(c.t1, c.tau0, c.nodes);
    if (f == "h0") return h0_profile(c.nodes);
    if (f == "random") {
        RandomProfileOptions o;
        o.r_max = c.ball;
        o.nonnegative = nonnegative;
        return random_profile(c.seed, o);
    }
    throw ConfigError("unknown family '" + f + "'");
}

void sweep_rows(const SweepResult& r, ResultDoc& d) {
    d.kind = "sweep";
    for (std::size_t i = 0; i < r.axis1.size(); ++i)
        for (std::size_t j = 0; j < r.axis2.size(); ++j)
            d.rows.push_back({fmt_num(r.axis1[i]), r.column_label(j), r.at(i, j),
                              r.verdicts.empty() ? "" : verdict_name(r.verdicts[j])});
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    d.summary["family"] = r.family;
    d.summary["params"] = params;
    d.summary["axis1"] = r.axis1_name;
    d.summary["axis2"] = r.axis2_name;
    if (r.critical_estimate) d.summary["critical_estimate"] = *r.critical_estimate;
}

PotentialSpec potential_of(const RunConfig& c, const std::string& dflt = "leray") {
    return PotentialSpec::parse(c.potential.empty() ? dflt : c.potential);
}

std::vector<double> default_list(const std::vector<double>& given, std::vector<double> dflt) {
    return given.empty() ? dflt : given;
}

ResultDoc cmd_potential(const RunConfig& c, std::ostream& log) {
    ResultDoc d;
    PotentialSpec V = potential_of(c);
    if (c.action == "eval") {
        d.kind = "scalar";
        double v = eval_potential(V, c.r);
        d.rows.push_back({V.name(), fmt_num(c.r), v, ""});
        log << fmt_num(v) << "\n";
    } else if (c.action == "table") {
        d.kind = "table";
        if (!(c.r_min > 0.0 && c.r_max < 1.0 + 1e-15 && c.r_min < c.r_max && c.points >= 2))
            throw DomainError("table needs 0 < r_min < r_max <= 1 and points >= 2");
        for (int i = 0; i < c.points; ++i) {
            double r = c.r_min * std::pow(c.r_max / c.r_min, double(i) / (c.points - 1));
            d.rows.push_back({V.name(), fmt_num(r), eval_potential(V, r), ""});
        }
        log << V.name() << ": " << c.points << " radii\n";
    } else {
        throw ConfigError("potential action must be eval or table");
    }
    return d;
}

ResultDoc cmd_family(const RunConfig& c, std::ostream& log) {
    RadialProfile p = make_family(c);
    if (c.gauge == "u") {
        if (p.frame == Frame::W) p = pull(p);
    } else if (c.gauge != "native") {
        if (p.frame == Frame::W) p = pull(p);
        p = push(p, Gauge::parse(c.gauge, c.mu));
    }
    p.sample(std::max(c.points, 2));
    ResultDoc d;
    d.kind = "profile";
    const char* frame = p.frame == Frame::U ? "u" : "w";
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        double x = p.nodes[i];
        d.rows.push_back({fmt_num(x), fmt_num(p.s_of_x(x)), p.values[i], frame});
    }
    d.summary["family"] = p.family;
    d.summary["gauge"] = p.gauge.name();
    for (const auto& [k, v] : p.params) d.summary["params"][k] = v;
    log << p.family << ": " << p.nodes.size() << " samples (" << frame << "-frame, x = native variable)\n";
    return d;
}

ResultDoc cmd_energy(const RunConfig& c, std::ostream& log) {
    need_mu(c.mu, true);
    need_alpha(c.alpha);
    need_p(c.p);
    RadialProfile u = make_family(c);
    PotentialSpec V = potential_of(c);
    EnergyReport e = moser(u, c.alpha, c.p, &V, c.mu, quad_of(c));
    ResultDoc d;
    d.kind = "energy";
    std::string fam = u.family;
    d.rows.push_back({fam, "dirichlet", e.dirichlet, ""});
    d.rows.push_back({fam, "potential_term", e.potential_term, V.name()});
    d.rows.push_back({fam, "deficit", e.deficit, e.deficit_from_gauge ? "gauge" : ""});
    d.rows.push_back({fam, "moser_log", e.moser_log, "alpha=" + fmt_num(c.alpha) + " p=" + fmt_num(c.p)});
    d.summary["abs_error_estimate"] = e.abs_error_estimate;
    d.summary["truncation_note"] = e.truncation_note;
    log << "deficit " << fmt_num(e.deficit) << "  moser_log " << fmt_num(e.moser_log) << "\n";
    if (!e.truncation_note.empty()) log << "note: " << e.truncation_note << "\n";
    return d;
}

ResultDoc cmd_ratio(const RunConfig& c, std::ostream& log) {
    RatioSpec v = RatioSpec::parse(c.ratio);
    RadialProfile u = make_family(c);
    RatioResult r = remainder_ratio(u, v, quad_of(c));
    ResultDoc d;
    d.kind = "ratio";
    std::string flag = r.zero_denominator ? "zero_denominator" : "";
    d.rows.push_back({v.name(), "ratio", r.ratio, flag});
    d.rows.push_back({v.name(), "lhs", r.lhs, ""});
    d.rows.push_back({v.name(), "rhs", r.rhs, ""});
    log << v.name() << " ratio " << (r.zero_denominator ? std::string("undefined (zero denominator)") : fmt_num(r.ratio))
        << "\n";
    return d;
}

ResultDoc cmd_mazya(const RunConfig& c, std::ostream& log) {
    MeasurePair pair;
    if (c.pair == "origin") pair = origin_pair(c.beta, c.q);
    else if (c.pair == "boundary") pair = boundary_pair(c.beta, c.q);
    else throw ConfigError("pair must be origin or boundary");
    if (c.points < 2) throw DomainError("points must be >= 2");
    std::vector<double> z;
    for (int i = 0; i < c.points; ++i) z.push_back(pair.z_lo + 8.0 * i / (c.points - 1));
    MazyaResult m = mazya_B_z(pair, z, quad_of(c));
    ResultDoc d;
    d.kind = "mazya";
    for (std::size_t i = 0; i < m.z.size(); ++i) {
        d.rows.push_back({fmt_num(m.z[i]), "gamma_factor", m.gamma_factor[i], ""});
        d.rows.push_back({fmt_num(m.z[i]), "inner_factor", m.inner_factor[i], ""});
        d.rows.push_back({fmt_num(m.z[i]), "product", m.product[i], m.z[i] == m.argmax_z ? "argmax" : ""});
    }
    d.summary["B"] = m.B;
    d.summary["argmax_z"] = m.argmax_z;
    d.summary["sandwich_hi"] = m.sandwich_hi;
    log << "B " << fmt_num(m.B) << " at z = " << fmt_num(m.argmax_z) << ", Hardy constant <= "
        << fmt_num(m.sandwich_hi) << "\n";
    return d;
}

ResultDoc ladder_doc(const std::vector<LadderRow>& rows, const std::string& what, std::ostream& log) {
    ResultDoc d;
    d.kind = "ladder";
    for (const auto& r : rows) {
        d.rows.push_back({fmt_num(r.N), "tmax", r.lambda, r.converged ? "" : "not_converged"});
        d.rows.push_back({fmt_num(r.N), "2tmax", r.lambda_2tmax, ""});
        log << what << " N=" << r.N << " lambda=" << fmt_num(r.lambda) << " (2 tmax: " << fmt_num(r.lambda_2tmax)
            << ")\n";
    }
    return d;
}

ResultDoc cmd_leray(const RunConfig& c, std::ostream& log) {
    auto rows = estimate_leray_constant(c.spec.ladder, assemble_of(c), c.spec.tol);
    for (const auto& r : rows)
        if (!r.converged) throw NoConvergence("inverse iteration did not converge at N = " + std::to_string(r.N));
    return ladder_doc(rows, "leray", log);
}

ResultDoc cmd_remainder(const RunConfig& c, std::ostream& log) {
    auto rows = estimate_remainder_constant(parse_remainder_variant(c.variant), c.spec.ladder, assemble_of(c),
                                            c.spec.tol);
    for (const auto& r : rows)
        if (!r.converged) throw NoConvergence("inverse iteration did not converge at N = " + std::to_string(r.N));
    return ladder_doc(rows, c.variant, log);
}

SweepOptions sweep_of(const RunConfig& c) {
    SweepOptions s;
    s.jobs = c.jobs;
    s.nodes = c.nodes;
    s.quad = quad_of(c);
    return s;
}

ResultDoc cmd_moser_sweep(const RunConfig& c, std::ostream& log) {
    need_mu(c.mu, false);
    double m = radial_critical_exponent(c.mu);
    std::vector<int> ns = c.ns.empty() ? std::vector<int>{25, 50, 100, 200} : c.ns;
    std::vector<double> as = default_list(c.alphas, {0.8 * m, 0.9 * m, 1.1 * m, 1.2 * m});
    for (double a : as) need_alpha(a);
    SweepResult r = moser_sweep(c.mu, parse_critical_family(c.family), ns, as, sweep_of(c));
    ResultDoc d;
    sweep_rows(r, d);
    for (std::size_t j = 0; j < r.axis2.size() && !r.verdicts.empty(); ++j)
        log << "alpha " << fmt_num(r.axis2[j]) << ": " << verdict_name(r.verdicts[j]) << "\n";
    return d;
}

ResultDoc cmd_critical(const RunConfig& c, std::ostream& log) {
    need_mu(c.mu, false);
    CriticalOptions o;
    o.n_max = c.n_max;
    o.sweep = sweep_of(c);
    SweepResult r = critical_alpha(c.mu, parse_critical_family(c.family), o);
    ResultDoc d;
    sweep_rows(r, d);
    log << "critical alpha estimate " << fmt_num(*r.critical_estimate) << " (4 pi sqrt(1+4 mu) = "
        << fmt_num(radial_critical_exponent(c.mu)) << ")\n";
    return d;
}

ResultDoc cmd_quarter(const RunConfig& c, std::ostream& log) {
    std::vector<double> ps = default_list(c.ps, {0.5, 1.0, 2.0});
    std::vector<double> as = default_list(c.alphas, {0.01, 0.1, 10.0});
    std::vector<double> ks = default_list(c.kappas, {10, 20, 40, 80, 160});
    for (double p : ps) need_p(p);
    for (double a : as) need_alpha(a);
    MoserOptions mo;
    mo.full_power_quarter = c.full_power_quarter;
    SweepResult r = quarter_case_sweep(ps, as, ks, sweep_of(c), mo);
    ResultDoc d;
    sweep_rows(r, d);
    for (std::size_t j = 0; j < r.axis2.size(); ++j)
        log << r.column_label(j) << ": " << verdict_name(r.verdicts[j]) << "\n";
    return d;
}

ResultDoc cmd_nonradial(const RunConfig& c, std::ostream& log) {
    if (!(c.mu > 0.0)) throw DomainError("mu must be > 0 for the non-radial demo, got " + fmt_num(c.mu));
    std::vector<double> as = default_list(c.alphas, {0.8 * 4 * kPi, 1.2 * 4 * kPi});
    for (double a : as) need_alpha(a);
    NonradialOptions o;
    if (!c.ns.empty()) o.ns = c.ns;
    o.t0 = c.t0;
    o.sweep = sweep_of(c);
    std::vector<double> norms;
    SweepResult r = nonradial_gap_demo(c.mu, potential_of(c), c.offset, as, o, &norms);
    ResultDoc d;
    sweep_rows(r, d);
    d.summary["norms"] = norms;
    for (std::size_t j = 0; j < r.axis2.size(); ++j)
        log << "alpha " << fmt_num(r.axis2[j]) << ": " << verdict_name(r.verdicts[j]) << "\n";
    return d;
}

ResultDoc cmd_rearrange(const RunConfig& c, std::ostream& log) {
    need_p(c.p);
    RadialProfile u = make_family(c, true);
    RadialSamples s = sample_radial(u, c.samples);
    auto rs = rearrange_samples(s);
    RadialProfile us = rearranged_profile(rs);
    ResultDoc d;
    d.kind = "rearrangement";
    int pts = std::max(c.points, 2);
    for (int i = 0; i < pts; ++i) {
        double r = s.R() * i / (pts - 1);
        d.rows.push_back({fmt_num(r), "u", s.value(r), ""});
        d.rows.push_back({fmt_num(r), "u_star", rs->value(r), ""});
    }
    double worst = 0.0, top = rs->top;
    for (int k = 0; k < 64; ++k) {
        double lam = top * (k + 0.5) / 64.0;
        worst = std::max(worst, std::abs(s.area_above(lam) - superlevel_area(us, lam)));
    }
    PolyaSzego ps = check_polya_szego(u, c.samples);
    HardyLittlewood hl = check_hardy_littlewood(u, potential_of(c, "v3"), c.p, c.samples);
    d.summary["equimeasurability_error"] = worst;
    d.summary["polya_szego"] = {{"lhs", ps.lhs}, {"rhs", ps.rhs}, {"holds", ps.holds},
                                {"boundary_singular", ps.boundary_singular}};
    d.summary["hardy_littlewood"] = {{"lhs", hl.lhs}, {"rhs", hl.rhs}, {"holds", hl.holds}};
    log << "equimeasurability error " << fmt_num(worst) << "; polya-szego " << (ps.holds ? "holds" : "fails")
        << "; hardy-littlewood " << (hl.holds ? "holds" : "fails") << "\n";
    if (!ps.holds || !hl.holds) throw RedFlag("rearrangement inequality violated");
    return d;
}

PolarField builtin_field(const std::string& name) {
    PolarField f;
    const double c = 1.0 / std::sqrt(kPi);
    if (name == "mode1") {
        f.f = [c](double r, double t) { return c * r * (1 - r) * std::cos(t); };
        f.f_r = [c](double r, double t) { return c * (1 - 2 * r) * std::cos(t); };
        f.f_theta = [c](double r, double t) { return -c * r * (1 - r) * std::sin(t); };
    } else if (name == "mixed") {
        // modes 0, 1 and 3
        f.f = [](double r, double t) { return (1 - r * r) * (1 + r * std::cos(t) + r * r * r * std::sin(3 * t)); };
        f.f_r = [](double r, double t) {
            return -2 * r * (1 + r * std::cos(t) + r * r * r * std::sin(3 * t)) +
                   (1 - r * r) * (std::cos(t) + 3 * r * r * std::sin(3 * t));
        };
        f.f_theta = [](double r, double t) {
            return (1 - r * r) * (-r * std::sin(t) + 3 * r * r * r * std::cos(3 * t));
        };
    } else {
        throw ConfigError("field must be mode1 or mixed");
    }
    return f;
}

ResultDoc cmd_modes(const RunConfig& c, std::ostream& log) {
    if (c.modes < 0) throw DomainError("modes must be >= 0");
    PolarField f = builtin_field(c.field);
    ModeSet ms = decompose_modes(f, c.modes);
    ModeIdentity id = mode_energy_identity(f, c.modes);
    ResultDoc d;
    d.kind = "modes";
    for (int m = 0; m <= c.modes; ++m) {
        d.rows.push_back({std::to_string(m), "l2", ms.mode_energy[static_cast<std::size_t>(m)], ""});
        d.rows.push_back({std::to_string(m), "dirichlet", mode_term(ms, m), ""});
    }
    d.summary["identity"] = {{"lhs", id.lhs}, {"rhs", id.rhs}, {"residual", id.residual}};
    d.summary["parseval_residual"] = ms.parseval_residual;
    d.summary["alias_warning"] = ms.alias_warning;
    log << "energy identity residual " << fmt_num(id.residual) << "\n";
    if (ms.alias_warning) log << "warning: the top mode carries more than 1e-6 of the energy; raise --modes\n";
    return d;
}

ResultDoc cmd_stress(const RunConfig& c, std::ostream& log) {
    StressOptions o;
    o.count = c.count;
    o.seed = c.seed;
    o.r_max = c.ball;
    o.jobs = c.jobs;
    o.quad = quad_of(c);
    StressSummary s = inequality_stress(RatioSpec::parse(c.ratio), o);
    ResultDoc d;
    d.kind = "stress";
    for (std::size_t i = 0; i < s.ratios.size(); ++i)
        d.rows.push_back({std::to_string(i), s.variant, s.ratios[i], std::isnan(s.ratios[i]) ? "zero_denominator" : ""});
    d.summary = {{"evaluated", s.evaluated},         {"zero_denominator", s.zero_denominator},
                 {"min_ratio", s.min_ratio},         {"argmin_index", s.argmin_index},
                 {"argmin_seed", s.argmin_seed},     {"refined_ratio", s.refined_ratio},
                 {"violations", s.violations},       {"confirmed_violations", s.confirmed_violations}};
    if (std::isfinite(s.min_deficit)) d.summary["min_deficit"] = s.min_deficit;
    log << s.variant << ": min ratio " << fmt_num(s.min_ratio) << " over " << s.evaluated << " profiles ("
        << s.zero_denominator << " zero)\n";
    if (s.red_flag)
        throw RedFlag(std::to_string(s.confirmed_violations) + " violations persist at doubled resolution");
    return d;
}

ResultDoc cmd_selftest(const RunConfig&, std::ostream& log) {
    ResultDoc d;
    d.kind = "selftest";
    int failed = 0;
    auto check = [&](const std::string& name, double got, double want, double tol) {
        bool ok = std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
        d.rows.push_back({name, fmt_num(want), got, ok ? "pass" : "fail"});
        log << (ok ? "PASS " : "FAIL ") << name << " " << fmt_num(got) << "\n";
        if (!ok) ++failed;
    };
    check("v3 at r=1", eval_potential(PotentialSpec::v3(), 1.0), 0.25, 1e-15);
    check("leray4 at 1/e", eval_potential(PotentialSpec::leray_quarter(), std::exp(-1.0)), std::exp(2.0) / 4.0,
          1e-14);
    check("wang-ye at 1/2", eval_potential(PotentialSpec::v1(), 0.5), 1.0 / (0.75 * 0.75), 1e-14);
    check("tau0 at mu=3/4", tau0_of(0.75), -0.5, 1e-15);
    check("tau0 at mu=-3/16", tau0_of(-0.1875), 0.25, 1e-15);
    check("m_mu at mu=3/4", radial_critical_exponent(0.75), 8 * kPi, 1e-15);
    check("X_1 at r=1", iterated_log(1, 1.0)[0], 1.0, 1e-15);
    double rq = r_q(4.0), sq = -std::log(rq);
    check("r_q(4) stationarity", 2 * sq * (1 + std::log(sq)) - 3.0 * (2 + std::log(sq)), 0.0, 1e-9);
    check("zeta energy (3, 0)", j_t1_energy(zeta_t1(3.0, 0.0)), 1.0, 1e-8);
    check("moser energy (10, 0)", gauge_energy(moser_family(10, 0.0)).value, 1.0, 1e-6);
    RunConfig rc;
    check("config round trip", RunConfig::from_json(rc.to_json()).to_json() == rc.to_json() ? 1.0 : 0.0, 1.0, 0.0);
    check("number round trip", std::stod(fmt_num(0.1 + 0.2)), 0.1 + 0.2, 0.0);
    if (failed) throw NoConvergence(std::to_string(failed) + " selftest identities failed");
    return d;
}

using Handler = std::function<ResultDoc(const RunConfig&, std::ostream&)>;

}  // namespace

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"hlab: weighted Hardy-Leray and Trudinger-Moser laboratory"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    std::vector<std::pair<Sub, Handler>> subs;
    subs.reserve(20);
    std::string potential_action = "eval";
    auto add = [&](const std::string& name, const std::string& help, Handler h) -> Sub& {
        Sub s;
        s.app = app.add_subcommand(name, help);
        s.flags = std::make_unique<Flags>();
        s.flags->app = s.app;
        common_flags(s);
        subs.push_back({std::move(s), std::move(h)});
        return subs.back().first;
    };

    {
        Sub& s = add("potential", "evaluate or tabulate a weight", cmd_potential);
        s.app->add_option("action", potential_action, "eval | table")->check(CLI::IsMember({"eval", "table"}));
        s.flags->opt("--name,--potential", &RunConfig::potential, "leray, leray4, v1, v2, v3, rem2, remq:<q>, iterlog:<K>");
        s.flags->opt("--r", &RunConfig::r, "radius");
        s.flags->opt("--r-min", &RunConfig::r_min, "table start");
        s.flags->opt("--r-max", &RunConfig::r_max, "table end");
        s.flags->opt("--points", &RunConfig::points, "table size");
    }
    std::string family_action = "gen";
    {
        Sub& s = add("family", "sample a trial family", cmd_family);
        s.app->add_option("action", family_action, "gen")->check(CLI::IsMember({"gen"}));
        family_flags(*s.flags);
        s.flags->opt("--points", &RunConfig::points, "samples");
        s.flags->opt("--gauge", &RunConfig::gauge, "native | u | gaugeA:<alpha> | gaugeB | gaugeC | id");
    }
    {
        Sub& s = add("energy", "deficit, potential term and Moser functional of a family member", cmd_energy);
        family_flags(*s.flags);
        s.flags->opt("--potential", &RunConfig::potential, "weight for the potential term");
        s.flags->opt("--alpha", &RunConfig::alpha, "Moser exponent alpha > 0");
        s.flags->opt("--p", &RunConfig::p, "Moser power p > 0");
    }
    {
        Sub& s = add("ratio", "remainder ratio of a family member", cmd_ratio);
        family_flags(*s.flags);
        s.flags->opt("--ratio", &RunConfig::ratio, "thm11i, thm11ii:<q>, thm11iii:<q>, rimproved:<K>, eqnchange1");
    }
    {
        Sub& s = add("mazya-b", "Maz'ya sup-product constant for a measure pair", cmd_mazya);
        s.flags->opt("--pair", &RunConfig::pair, "origin | boundary");
        s.flags->opt("--beta", &RunConfig::beta, "beta > 0");
        s.flags->opt("--q", &RunConfig::q, "q >= 2");
        s.flags->opt("--points", &RunConfig::points, "grid points in z = ln ln(1/s)");
    }
    {
        Sub& s = add("leray-constant", "discrete Leray constant ladder", cmd_leray);
        spec_flags(s);
    }
    {
        Sub& s = add("remainder-constant", "discrete remainder constant ladder", cmd_remainder);
        spec_flags(s);
        s.flags->opt("--variant", &RunConfig::variant, "thm11i | eqnchange1");
    }
    {
        Sub& s = add("moser-sweep", "moser_log table over n and alpha", cmd_moser_sweep);
        s.flags->opt("--mu", &RunConfig::mu, "mu > -1/4");
        s.flags->opt("--family", &RunConfig::family, "moser | conc");
        s.flags->opt("--ns", &RunConfig::ns, "family indices");
        s.flags->opt("--alphas", &RunConfig::alphas, "exponents");
        s.flags->opt("--nodes", &RunConfig::nodes, "sample nodes");
    }
    {
        Sub& s = add("critical-alpha", "bisection for the critical Moser exponent", cmd_critical);
        s.flags->opt("--mu", &RunConfig::mu, "mu > -1/4");
        s.flags->opt("--family", &RunConfig::family, "moser | conc");
        s.flags->opt("--n-max", &RunConfig::n_max, "largest family index");
        s.flags->opt("--nodes", &RunConfig::nodes, "sample nodes");
    }
    {
        Sub& s = add("quarter-sweep", "mu = -1/4 sweep over p, alpha and kappa", cmd_quarter);
        s.flags->opt("--ps", &RunConfig::ps, "powers p");
        s.flags->opt("--alphas", &RunConfig::alphas, "exponents");
        s.flags->opt("--kappas", &RunConfig::kappas, "family parameters");
        s.flags->flag("--full-power-quarter", &RunConfig::full_power_quarter,
                      "use |(-ln r) w|^p instead of |u|^p (comparison only)");
        s.flags->opt("--nodes", &RunConfig::nodes, "sample nodes");
    }
    {
        Sub& s = add("nonradial-demo", "off-centre plateau bumps against 4 pi", cmd_nonradial);
        s.flags->opt("--mu", &RunConfig::mu, "mu > 0");
        s.flags->opt("--potential", &RunConfig::potential, "weight V");
        s.flags->opt("--offset", &RunConfig::offset, "bump centre offset");
        s.flags->opt("--alphas", &RunConfig::alphas, "exponents");
        s.flags->opt("--ns", &RunConfig::ns, "family indices");
        s.flags->opt("--t0", &RunConfig::t0, "bump edge in t");
        s.flags->opt("--nodes", &RunConfig::nodes, "sample nodes");
    }
    {
        Sub& s = add("rearrange", "symmetric decreasing rearrangement with checks", cmd_rearrange);
        family_flags(*s.flags);
        s.flags->opt("--samples", &RunConfig::samples, "radial samples");
        s.flags->opt("--points", &RunConfig::points, "output radii");
        s.flags->opt("--potential", &RunConfig::potential, "nonincreasing weight for the Hardy-Littlewood check");
        s.flags->opt("--p", &RunConfig::p, "power in the Hardy-Littlewood check");
    }
    {
        Sub& s = add("modes", "angular mode decomposition and energy identity", cmd_modes);
        s.flags->opt("--field", &RunConfig::field, "mode1 | mixed");
        s.flags->opt("--modes", &RunConfig::modes, "highest mode M");
    }
    {
        Sub& s = add("stress", "remainder ratios on seeded random profiles", cmd_stress);
        s.flags->opt("--ratio", &RunConfig::ratio, "ratio variant");
        s.flags->opt("--count", &RunConfig::count, "number of profiles");
        s.flags->opt("--ball", &RunConfig::ball, "profiles live in B_ball");
    }
    add("selftest", "closed-form identities", cmd_selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (auto& [s, handler] : subs) {
        if (!s.app->parsed()) continue;
        try {
            RunConfig cfg;
            if (!s.flags->config_path.empty()) cfg = RunConfig::load(s.flags->config_path);
            cfg.command = s.app->get_name();
            s.flags->apply(cfg);
            if (cfg.command == "potential" && s.app->get_option("action")->count() > 0) cfg.action = potential_action;
            if (cfg.format != "csv" && cfg.format != "json")
                throw ConfigError("format must be csv or json, got '" + cfg.format + "'");
            if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
            std::string path = resolve_output_path(cfg);
            std::ostream& log = path.empty() ? std::cerr : std::cout;
            ResultDoc doc = handler(cfg, log);
            emit(doc, cfg, path);
            return 0;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return static_cast<int>(e.error_class());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}

}  // namespace hl
