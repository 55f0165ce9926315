#include "hl/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "hl/errors.hpp"
#include "hl/io.hpp"
#include "hl/profiles.hpp"

namespace hl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kGrowth = std::log(1.5);

// moser_log must not decrease with alpha along a row
void check_rows_monotone(const SweepResult& r) {
    if (!r.axis2_p.empty()) return;
    std::vector<std::size_t> order(r.axis2.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.axis2[a] < r.axis2[b]; });
    for (std::size_t i = 0; i < r.axis1.size(); ++i) {
        for (std::size_t k = 1; k < order.size(); ++k) {
            double a = r.at(i, order[k - 1]), b = r.at(i, order[k]);
            if (b < a - 1e-9 * std::max(1.0, std::abs(a)))
                throw RedFlag("moser_log decreases in alpha at " + r.axis1_name + " = " + fmt_num(r.axis1[i]) +
                              ": alpha " + fmt_num(r.axis2[order[k - 1]]) + " -> " + fmt_num(a) + ", alpha " +
                              fmt_num(r.axis2[order[k]]) + " -> " + fmt_num(b));
        }
    }
}

void check_verdicts_monotone(const SweepResult& r) {
    std::vector<std::size_t> order(r.axis2.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.axis2[a] < r.axis2[b]; });
    bool grown = false;
    for (std::size_t j : order) {
        if (r.verdicts[j] == Verdict::Growing) grown = true;
        else if (grown)
            throw RedFlag("verdicts not monotone in alpha: bounded at alpha = " + fmt_num(r.axis2[j]) +
                          " above a growing alpha");
    }
}

RadialProfile critical_member(double mu, CriticalFamily fam, int n, double t_eps, int nodes) {
    if (fam == CriticalFamily::Moser) return moser_family(n, mu, nodes);
    return concentrating_family(n, mu, t_eps > 0.0 ? t_eps : default_t_eps(), nodes);
}

}  // namespace

const char* verdict_name(Verdict v) { return v == Verdict::Growing ? "growing" : "bounded"; }

std::string SweepResult::column_label(std::size_t j) const {
    if (axis2_p.empty()) return fmt_num(axis2[j]);
    return "p=" + fmt_num(axis2_p[j]) + "/alpha=" + fmt_num(axis2[j]);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    jobs = std::clamp(jobs, 1, count);
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errs[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // lowest index wins so the reported error does not depend on scheduling
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

Verdict growth_verdict(const SweepResult& r, std::size_t column) {
    std::size_t top = 0;
    for (std::size_t i = 1; i < r.axis1.size(); ++i)
        if (r.axis1[i] > r.axis1[top]) top = i;
    double half = 0.5 * r.axis1[top];
    std::size_t mid = r.axis1.size();
    for (std::size_t i = 0; i < r.axis1.size(); ++i) {
        if (r.axis1[i] <= half && (mid == r.axis1.size() || r.axis1[i] > r.axis1[mid])) mid = i;
    }
    if (mid == r.axis1.size()) throw DomainError("growth test needs an axis entry at or below half the largest");
    return r.at(top, column) - r.at(mid, column) > kGrowth ? Verdict::Growing : Verdict::Bounded;
}

CriticalFamily parse_critical_family(const std::string& name) {
    if (name == "moser") return CriticalFamily::Moser;
    if (name == "concentrating" || name == "conc") return CriticalFamily::Concentrating;
    throw ConfigError("unknown family '" + name + "' (moser, conc)");
}

double radial_critical_exponent(double mu) {
    if (!(mu > -0.25)) throw DomainError("mu must be > -1/4");
    return 4.0 * kPi * std::sqrt(1.0 + 4.0 * mu);
}

SweepResult moser_sweep(double mu, CriticalFamily fam, const std::vector<int>& ns, const std::vector<double>& alphas,
                        const SweepOptions& opt) {
    if (!(mu > -0.25)) throw DomainError("mu must be > -1/4");
    if (ns.empty() || alphas.empty()) throw ConfigError("sweep needs at least one n and one alpha");
    for (double a : alphas)
        if (!(a > 0.0)) throw DomainError("alpha must be > 0");
    SweepResult r;
    r.family = fam == CriticalFamily::Moser ? "moser" : "concentrating";
    r.params = {{"mu", mu}, {"p", 2.0}};
    for (int n : ns) r.axis1.push_back(n);
    r.axis2 = alphas;
    std::vector<RadialProfile> members(ns.size());
    parallel_for(static_cast<int>(ns.size()), opt.jobs,
                 [&](int i) { members[static_cast<std::size_t>(i)] = critical_member(mu, fam, ns[i], 0.0, opt.nodes); });
    r.table.assign(ns.size() * alphas.size(), 0.0);
    int cells = static_cast<int>(r.table.size());
    parallel_for(cells, opt.jobs, [&](int c) {
        std::size_t i = static_cast<std::size_t>(c) / alphas.size(), j = static_cast<std::size_t>(c) % alphas.size();
        r.table[static_cast<std::size_t>(c)] = moser_log(members[i], alphas[j], 2.0, opt.quad);
    });
    check_rows_monotone(r);
    if (ns.size() >= 2) {
        for (std::size_t j = 0; j < alphas.size(); ++j) r.verdicts.push_back(growth_verdict(r, j));
        check_verdicts_monotone(r);
    }
    return r;
}

SweepResult critical_alpha(double mu, CriticalFamily fam, const CriticalOptions& opt) {
    double m = radial_critical_exponent(mu);
    double lo = opt.lo > 0.0 ? opt.lo : 0.5 * m;
    double hi = opt.hi > 0.0 ? opt.hi : 2.0 * m;
    double tol = opt.tol > 0.0 ? opt.tol : m / 100.0;
    if (!(hi > lo && lo > 0.0)) throw DomainError("alpha bracket must satisfy 0 < lo < hi");
    if (opt.n_max < 4) throw DomainError("n_max must be >= 4");
    int n_half = opt.n_max / 2;
    RadialProfile top = critical_member(mu, fam, opt.n_max, opt.t_eps, opt.sweep.nodes);
    RadialProfile half = critical_member(mu, fam, n_half, opt.t_eps, opt.sweep.nodes);

    std::vector<std::pair<double, std::pair<double, double>>> tried;
    auto classify = [&](double a) {
        double v[2];
        const RadialProfile* ps[2] = {&half, &top};
        parallel_for(2, opt.sweep.jobs, [&](int k) { v[k] = moser_log(*ps[k], a, 2.0, opt.sweep.quad); });
        tried.push_back({a, {v[0], v[1]}});
        return v[1] - v[0] > kGrowth ? Verdict::Growing : Verdict::Bounded;
    };

    SweepResult r;
    r.family = fam == CriticalFamily::Moser ? "moser" : "concentrating";
    r.params = {{"mu", mu}, {"p", 2.0}, {"n_max", double(opt.n_max)}, {"m_mu", m}};
    r.axis1 = {double(n_half), double(opt.n_max)};
    auto build_table = [&] {
        std::sort(tried.begin(), tried.end());
        r.axis2.clear();
        r.table.assign(2 * tried.size(), 0.0);
        r.verdicts.clear();
        for (std::size_t j = 0; j < tried.size(); ++j) {
            r.axis2.push_back(tried[j].first);
            r.table[j] = tried[j].second.first;
            r.table[tried.size() + j] = tried[j].second.second;
            r.verdicts.push_back(tried[j].second.second - tried[j].second.first > kGrowth ? Verdict::Growing
                                                                                            : Verdict::Bounded);
        }
    };

    Verdict vlo = classify(lo), vhi = classify(hi);
    if (vlo == vhi) {
        build_table();
        throw BracketFailure("both ends of [" + fmt_num(lo) + ", " + fmt_num(hi) + "] are " + verdict_name(vlo) +
                             " (moser_log n/2, n: " + fmt_num(r.table[0]) + ", " + fmt_num(r.table[r.axis2.size()]) + " | " +
                             fmt_num(r.table[r.axis2.size() - 1]) + ", " + fmt_num(r.table.back()) + ")");
    }
    bool increasing = vhi == Verdict::Growing;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        Verdict v = classify(mid);
        if ((v == Verdict::Growing) == increasing) hi = mid;
        else lo = mid;
    }
    build_table();
    check_rows_monotone(r);
    check_verdicts_monotone(r);
    r.critical_estimate = 0.5 * (lo + hi);
    return r;
}

SweepResult quarter_case_sweep(const std::vector<double>& ps, const std::vector<double>& alphas,
                               const std::vector<double>& kappas, const SweepOptions& opt, const MoserOptions& mopt) {
    if (ps.empty() || alphas.empty() || kappas.size() < 2) throw ConfigError("quarter sweep needs p, alpha and >= 2 kappa");
    for (double p : ps)
        if (!(p > 0.0)) throw DomainError("p must be > 0");
    for (double a : alphas)
        if (!(a > 0.0)) throw DomainError("alpha must be > 0");
    SweepResult r;
    r.family = "wkappa";
    r.axis1_name = "kappa";
    r.axis2_name = "alpha";
    r.axis1 = kappas;
    for (double p : ps)
        for (double a : alphas) {
            r.axis2_p.push_back(p);
            r.axis2.push_back(a);
        }
    std::vector<RadialProfile> members(kappas.size());
    parallel_for(static_cast<int>(kappas.size()), opt.jobs, [&](int i) {
        members[static_cast<std::size_t>(i)] = wkappa_family(kappas[static_cast<std::size_t>(i)], opt.nodes);
    });
    std::size_t nc = r.axis2.size();
    r.table.assign(kappas.size() * nc, 0.0);
    parallel_for(static_cast<int>(r.table.size()), opt.jobs, [&](int c) {
        std::size_t i = static_cast<std::size_t>(c) / nc, j = static_cast<std::size_t>(c) % nc;
        r.table[static_cast<std::size_t>(c)] = moser_log(members[i], r.axis2[j], r.axis2_p[j], opt.quad, mopt);
    });
    for (std::size_t j = 0; j < nc; ++j) r.verdicts.push_back(growth_verdict(r, j));
    if (mopt.full_power_quarter) r.params.push_back({"full_power_quarter", 1.0});
    return r;
}

SweepResult nonradial_gap_demo(double mu, const PotentialSpec& V, double x0, const std::vector<double>& alphas,
                               const NonradialOptions& opt, std::vector<double>* norms) {
    if (!(mu > 0.0)) throw DomainError("nonradial demo needs mu > 0");
    if (!(x0 > 0.0 && x0 < 1.0)) throw GeometryError("offset must lie in (0,1)");
    if (opt.ns.size() < 2) throw ConfigError("nonradial demo needs >= 2 values of n");
    for (double a : alphas)
        if (!(a > 0.0)) throw DomainError("alpha must be > 0");
    SweepResult r;
    r.family = "plateau";
    r.params = {{"mu", mu}, {"offset", x0}, {"t0", opt.t0}, {"p", 2.0}, {"m_mu", radial_critical_exponent(mu)}};
    for (int n : opt.ns) r.axis1.push_back(n);
    r.axis2 = alphas;
    std::size_t nn = opt.ns.size();
    std::vector<RadialProfile> members(nn);
    std::vector<double> nrm(nn);
    parallel_for(static_cast<int>(nn), opt.sweep.jobs, [&](int i) {
        auto k = static_cast<std::size_t>(i);
        RadialProfile p = plateau_family(opt.ns[k], Ramp::FourPiece, opt.t0, x0, opt.sweep.nodes);
        EnergyReport e = weighted_energy(p, mu, &V, opt.sweep.quad);
        if (!(e.deficit > 0.0) || !std::isfinite(e.deficit))
            throw NoConvergence("norm of plateau member n = " + std::to_string(opt.ns[k]) + " is " + fmt_num(e.deficit));
        members[k] = p.scaled(1.0 / std::sqrt(e.deficit));
        EnergyReport e2 = weighted_energy(members[k], mu, &V, opt.sweep.quad);
        nrm[k] = std::sqrt(e2.deficit);
    });
    if (norms) *norms = nrm;
    r.table.assign(nn * alphas.size(), 0.0);
    parallel_for(static_cast<int>(r.table.size()), opt.sweep.jobs, [&](int c) {
        std::size_t i = static_cast<std::size_t>(c) / alphas.size(), j = static_cast<std::size_t>(c) % alphas.size();
        r.table[static_cast<std::size_t>(c)] = moser_log(members[i], alphas[j], 2.0, opt.sweep.quad);
    });
    check_rows_monotone(r);
    for (std::size_t j = 0; j < alphas.size(); ++j) r.verdicts.push_back(growth_verdict(r, j));
    check_verdicts_monotone(r);
    return r;
}

StressSummary inequality_stress(const RatioSpec& variant, const StressOptions& opt) {
    StressSummary out;
    out.variant = variant.name();
    out.count = opt.count;
    RandomProfileOptions ro;
    ro.r_max = opt.r_max;
    bool improved = variant.variant == RatioVariant::RImproved;
    bool thm11i = variant.variant == RatioVariant::Thm11i;

    struct Cell {
        RatioResult ratio;
        double deficit = std::numeric_limits<double>::quiet_NaN();
    };
    auto evaluate = [&](std::uint64_t seed, const QuadOptions& q) {
        RadialProfile p = random_profile(seed, ro);
        Cell c;
        c.ratio = remainder_ratio(p, variant, q);
        if (thm11i) c.deficit = deficit(p, -0.25, q).deficit;
        return c;
    };
    auto violates = [&](const Cell& c) {
        if (c.ratio.zero_denominator) return false;
        if (improved) return c.ratio.ratio < 1.0 - 1e-6;
        if (thm11i && c.deficit < 0.0) return true;
        return !(c.ratio.ratio > 0.0);
    };

    QuadOptions fine = opt.quad;
    fine.presplit = std::max(1, opt.quad.presplit) * 2;
    fine.tol = opt.quad.tol / 100.0;

    std::vector<Cell> cells(static_cast<std::size_t>(std::max(opt.count, 0)));
    parallel_for(opt.count, opt.jobs, [&](int i) {
        cells[static_cast<std::size_t>(i)] = evaluate(derive_seed(opt.seed, static_cast<std::uint64_t>(i)), opt.quad);
    });

    out.min_ratio = std::numeric_limits<double>::infinity();
    out.min_deficit = std::numeric_limits<double>::infinity();
    std::vector<int> bad;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (c.ratio.zero_denominator) {
            ++out.zero_denominator;
            out.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        ++out.evaluated;
        if (thm11i && std::isfinite(c.deficit)) out.min_deficit = std::min(out.min_deficit, c.deficit);
        out.ratios.push_back(c.ratio.ratio);
        if (c.ratio.ratio < out.min_ratio) {
            out.min_ratio = c.ratio.ratio;
            out.argmin_index = static_cast<int>(i);
        }
        if (violates(c)) bad.push_back(static_cast<int>(i));
    }
    out.violations = static_cast<int>(bad.size());
    if (out.argmin_index >= 0) {
        out.argmin_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(out.argmin_index));
        out.refined_ratio = evaluate(out.argmin_seed, fine).ratio.ratio;
    }
    for (int i : bad) {
        Cell c = evaluate(derive_seed(opt.seed, static_cast<std::uint64_t>(i)), fine);
        if (violates(c)) ++out.confirmed_violations;
    }
    out.red_flag = out.confirmed_violations > 0;
    return out;
}

}  // namespace hl
