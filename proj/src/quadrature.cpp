#include "hl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hl/errors.hpp"
#include "hl/io.hpp"

namespace hl {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_num(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError("bad " + what + " '" + text + "'");
}

// end of the finite part of the support
double finite_end(const RadialProfile& P) {
    if (!P.infinite()) return P.xb;
    double e = P.xa;
    for (double b : P.breaks) e = std::max(e, b);
    return e;
}

std::vector<double> kink_x(const RadialProfile& P, const std::vector<double>& s_kinks) {
    std::vector<double> out;
    for (double s : s_kinks) out.push_back(P.x_of_s(s));
    return out;
}

// s-range of the support
void s_range(const RadialProfile& P, double& slo, double& shi) {
    double s1 = P.s_of_x(P.xa), s2 = P.infinite() ? kInf : P.s_of_x(P.xb);
    slo = std::min(s1, s2);
    shi = std::max(s1, s2);
}

// u does not decay in the tail fast enough for the Dirichlet term
bool dirichlet_diverges(const RadialProfile& P) {
    if (!P.infinite() || P.tail_a < 0.5) return false;
    double x = finite_end(P) + 1.0;
    return P.u_x(x) != 0.0;
}

// r^2 times the angular mean of V(|x0 + rho e^{i theta}|), rho = e^{-s}
double scaled_mean_potential(const PotentialSpec& V, double s, double x0) {
    if (x0 == 0.0) return scaled_potential(V, s);
    double rho = std::exp(-s);
    const int m = 64;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        double th = 2.0 * kPi * k / m;
        double a = x0 + rho * std::cos(th), b = rho * std::sin(th);
        double r = std::hypot(a, b);
        if (!(r > 0.0 && r < 1.0)) throw GeometryError("translated bump leaves the unit disk");
        acc += eval_potential(V, r);
    }
    return rho * rho * acc / m;
}

bool is_leray(const PotentialSpec& V) { return V.kind == PotentialKind::LerayNormalized; }

double log_ds_dx(const RadialProfile& P, double x) {
    if (P.frame == Frame::W && P.gauge.kind == GaugeKind::C) return x - std::log(2.0);
    return std::log(P.ds_dx(x));
}

}  // namespace

QuadResult integrate_over(const RadialProfile& P, const Fn& G, const QuadOptions& opt,
                          const std::vector<double>& extra_breaks) {
    QuadResult res;
    double a = P.xa, e = finite_end(P);
    std::vector<double> br = P.breaks;
    br.insert(br.end(), extra_breaks.begin(), extra_breaks.end());
    QuadOptions o = opt;
    o.sing_lo = P.sing_lo;
    if (e > a) res = integrate(G, a, e, br, o);
    if (P.infinite()) {
        std::vector<double> ybr;
        for (double b : br)
            if (b > e) ybr.push_back(std::log1p(b - e));
        Fn H = [&](double y) {
            if (y > 700.0) return 0.0;
            double v = G(e + std::expm1(y)) * std::exp(y);
            return std::isfinite(v) ? v : 0.0;
        };
        QuadOptions ot = opt;
        ot.sing_lo = false;
        auto t = integrate(H, 0.0, kInf, ybr, ot);
        res.value += t.value;
        res.error += t.error;
        res.converged = res.converged && t.converged;
        res.panels += t.panels;
    }
    return res;
}

QuadResult gauge_energy(const RadialProfile& w, const QuadOptions& opt) {
    if (w.frame != Frame::W) throw DomainError("gauge energy needs a w-frame profile");
    const Gauge& g = w.gauge;
    Fn G = [&](double t) {
        double d = w.dw(t);
        return d == 0.0 ? 0.0 : g.energy_weight(t) * d * d;
    };
    return integrate_over(w, G, opt);
}

EnergyReport weighted_energy(const RadialProfile& u, double mu, const PotentialSpec* Vp, const QuadOptions& opt) {
    if (!(mu >= -0.25)) throw DomainError("mu must be >= -1/4");
    PotentialSpec V = Vp ? *Vp : PotentialSpec::leray();
    EnergyReport rep;
    rep.mu = mu;
    double slo, shi;
    s_range(u, slo, shi);
    if (slo <= 0.0 && !V.closed_at_one() && std::fabs(u.u_s(0.0)) > 0.0)
        throw DomainError("profile does not vanish at r = 1 where " + V.name() + " is singular");

    bool diverges = dirichlet_diverges(u);
    auto kinks = kink_x(u, V.kinks_s());
    if (diverges) {
        rep.dirichlet = kInf;
        rep.potential_term = is_leray(V) ? kInf : 0.0;
    } else {
        Fn D = [&](double x) {
            double d = u.du_ds_x(x);
            return d == 0.0 ? 0.0 : 2.0 * kPi * d * d * u.ds_dx(x);
        };
        auto rd = integrate_over(u, D, opt);
        rep.dirichlet = rd.value;
        rep.abs_error_estimate += rd.error;
    }
    if (!(diverges && is_leray(V))) {
        Fn P = [&](double x) {
            double v = u.u_x(x);
            if (v == 0.0) return 0.0;
            double s = u.s_of_x(x);
            return 2.0 * kPi * v * v * scaled_mean_potential(V, s, u.offset) * u.ds_dx(x);
        };
        auto rp = integrate_over(u, P, opt, kinks);
        rep.potential_term = rp.value;
        rep.abs_error_estimate += std::fabs(mu) * rp.error;
    }
    if (u.infinite())
        rep.truncation_note = "tail beyond x=" + std::to_string(finite_end(u)) + " integrated in y with x = x_end + e^y - 1";

    if (!diverges) {
        rep.deficit = rep.dirichlet + mu * rep.potential_term;
        return rep;
    }
    if (is_leray(V) && mu == -0.25 && u.offset == 0.0) {
        RadialProfile w = push(u, Gauge::C());
        auto g = gauge_energy(w, opt);
        rep.deficit = g.value;
        rep.abs_error_estimate += g.error;
        rep.deficit_from_gauge = true;
        rep.truncation_note = "dirichlet and potential terms diverge (u ~ s^" + std::to_string(u.tail_a) +
                              " at the origin); deficit evaluated in gaugeC";
    } else {
        rep.deficit = kInf;
        rep.truncation_note = "dirichlet term diverges (u ~ s^" + std::to_string(u.tail_a) + " at the origin)";
    }
    return rep;
}

EnergyReport truncated_energy(const RadialProfile& u, double mu, double eps, const QuadOptions& opt) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    if (u.offset != 0.0) throw DomainError("truncation needs a centred profile");
    RadialProfile c = u;
    double xc = u.x_of_s(-std::log(eps));
    if (xc <= c.xa) {
        EnergyReport rep;
        rep.mu = mu;
        return rep;
    }
    if (c.infinite() || xc < c.xb) {
        c.xb = xc;
        std::erase_if(c.breaks, [&](double b) { return b >= xc; });
    }
    auto rep = weighted_energy(c, mu, nullptr, opt);
    rep.truncation_note = "cut at r = " + fmt_num(eps);
    return rep;
}

EnergyReport deficit(const RadialProfile& u, double mu, const QuadOptions& opt) {
    return weighted_energy(u, mu, nullptr, opt);
}

double moser_log(const RadialProfile& u, double alpha, double p, const QuadOptions& opt, const MoserOptions& mopt) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
    if (!(p > 0.0)) throw DomainError("p must be > 0");
    double slo, shi;
    s_range(u, slo, shi);
    double out = -kInf;
    // area of B_1 where u = 0
    if (slo > 0.0) out = log_add(out, std::log(-kPi * std::expm1(-2.0 * slo)));
    if (std::isfinite(shi)) out = log_add(out, std::log(kPi) - 2.0 * shi);

    bool full = mopt.full_power_quarter && u.frame == Frame::W && u.gauge.kind == GaugeKind::C;
    const double l2pi = std::log(2.0 * kPi);
    Fn g = [&](double x) {
        double s = u.s_of_x(x);
        double v = full ? s * u.w(x) : u.u_x(x);
        double a = v == 0.0 ? 0.0 : alpha * std::pow(std::fabs(v), p);
        return a - 2.0 * s + log_ds_dx(u, x) + l2pi;
    };
    QuadOptions o = opt;
    o.sing_lo = false;
    auto r = integrate_log(g, u.xa, u.xb, u.breaks, o);
    return log_add(out, r.log_value);
}

EnergyReport moser(const RadialProfile& u, double alpha, double p, const PotentialSpec* V, double mu,
                   const QuadOptions& opt, const MoserOptions& mopt) {
    EnergyReport rep = weighted_energy(u, mu, V, opt);
    rep.moser_log = moser_log(u, alpha, p, opt, mopt);
    return rep;
}

RatioSpec RatioSpec::parse(const std::string& name) {
    RatioSpec r;
    auto colon = name.find(':');
    std::string head = name.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    if (head == "thm11i" && arg.empty()) {
        r.variant = RatioVariant::Thm11i;
    } else if (head == "thm11ii" || head == "thm11iii") {
        r.variant = head == "thm11ii" ? RatioVariant::Thm11ii : RatioVariant::Thm11iii;
        if (!arg.empty()) r.q = parse_num(arg, "q");
        if (!(r.q > 2.0)) throw DomainError("remainder exponent q must be > 2");
    } else if (head == "rimproved") {
        r.variant = RatioVariant::RImproved;
        if (!arg.empty()) r.K = static_cast<int>(parse_num(arg, "K"));
        if (r.K < 2) throw DomainError("series depth K must be >= 2");
    } else if (head == "eqnchange1" && arg.empty()) {
        r.variant = RatioVariant::EqnChange1;
    } else {
        throw ConfigError("unknown ratio variant '" + name + "'");
    }
    return r;
}

std::string RatioSpec::name() const {
    char buf[64];
    switch (variant) {
        case RatioVariant::Thm11i: return "thm11i";
        case RatioVariant::Thm11ii: std::snprintf(buf, sizeof buf, "thm11ii:%g", q); return buf;
        case RatioVariant::Thm11iii: std::snprintf(buf, sizeof buf, "thm11iii:%g", q); return buf;
        case RatioVariant::RImproved: std::snprintf(buf, sizeof buf, "rimproved:%d", K); return buf;
        case RatioVariant::EqnChange1: return "eqnchange1";
    }
    return "?";
}

RatioResult remainder_ratio(const RadialProfile& u, const RatioSpec& v, const QuadOptions& opt) {
    RatioResult res;
    double slo, shi;
    s_range(u, slo, shi);
    if (v.variant == RatioVariant::Thm11iii && slo < 1.0)
        throw DomainError("thm11iii needs support inside B_{1/e}");
    auto one = kink_x(u, {1.0});
    double scale = 0.0;

    auto radial = [&](const std::function<double(double, double)>& dens) {
        // 2 pi int dens(s, u) ds in the native variable
        Fn G = [&](double x) {
            double val = u.u_x(x);
            if (val == 0.0) return 0.0;
            return 2.0 * kPi * dens(u.s_of_x(x), val) * u.ds_dx(x);
        };
        auto r = integrate_over(u, G, opt, one);
        res.error += r.error;
        return r.value;
    };

    switch (v.variant) {
        case RatioVariant::Thm11i:
        case RatioVariant::Thm11ii:
        case RatioVariant::Thm11iii: {
            EnergyReport e = deficit(u, -0.25, opt);
            res.lhs = e.deficit;
            res.error += e.abs_error_estimate;
            scale = std::isfinite(e.dirichlet) ? e.dirichlet : std::fabs(e.deficit);
            if (v.variant == RatioVariant::Thm11i) {
                PotentialSpec W = PotentialSpec::rem2();
                res.rhs = radial([&](double s, double val) { return val * val * scaled_potential(W, s); });
            } else {
                PotentialSpec W = PotentialSpec::remq(v.q);
                double I = radial([&](double s, double val) {
                    return std::pow(std::fabs(val), v.q) * scaled_potential(W, s);
                });
                res.rhs = std::pow(I, 2.0 / v.q);
            }
            break;
        }
        case RatioVariant::RImproved: {
            Fn D = [&](double x) {
                double d = u.du_ds_x(x), val = u.u_x(x);
                double s = u.s_of_x(x);
                double x1 = 1.0 / (1.0 + s);
                return 2.0 * kPi * (d * d - 0.25 * val * val * x1 * x1) * u.ds_dx(x);
            };
            auto r = integrate_over(u, D, opt);
            res.lhs = r.value;
            res.error += r.error;
            PotentialSpec W = PotentialSpec::iterlog(v.K);
            res.rhs = radial([&](double s, double val) { return val * val * scaled_potential(W, s); });
            scale = std::fabs(res.lhs);
            break;
        }
        case RatioVariant::EqnChange1: {
            Fn D = [&](double x) {
                double d = u.du_ds_x(x);
                return d == 0.0 ? 0.0 : 2.0 * kPi * d * d * u.s_of_x(x) * u.ds_dx(x);
            };
            auto r = integrate_over(u, D, opt);
            res.lhs = r.value;
            res.error += r.error;
            res.rhs = radial([&](double s, double val) {
                double l = 1.0 + std::fabs(std::log(s));
                return val * val / (s * l * l);
            });
            scale = std::fabs(res.lhs);
            break;
        }
    }
    if (!(res.rhs > 1e-30 * scale) || res.rhs == 0.0) {
        res.zero_denominator = true;
        res.ratio = kInf;
        return res;
    }
    res.ratio = res.lhs / res.rhs;
    return res;
}

MeasurePair origin_pair(double beta, double q) {
    if (!(beta > 0.0)) throw DomainError("beta must be > 0");
    if (!(q >= 2.0)) throw DomainError("q must be >= p = 2");
    MeasurePair m;
    m.p = 2.0;
    m.q = q;
    // I = (0, a0], a0 = e^-e, i.e. z >= 1; gamma density 1/(beta s x (ln x)^(q/2+1)),
    // nu density s x, with x = ln(1/s) = e^z
    m.z_lo = 1.0;
    m.z_hi = kInf;
    double lb = std::log(beta);
    m.log_gamma_z = [lb, q](double z) { return -lb - (0.5 * q + 1.0) * std::log(z); };
    m.log_nu_z = [](double z) { return z - std::exp(z); };
    // (s x)^(-1/(p-1)) s x with p = 2
    m.log_inner_z = [](double) { return 0.0; };
    return m;
}

MeasurePair boundary_pair(double beta, double q) {
    if (!(beta > 0.0)) throw DomainError("beta must be > 0");
    if (!(q >= 2.0)) throw DomainError("q must be >= p = 2");
    MeasurePair m;
    m.p = 2.0;
    m.q = q;
    // J = (0, 1 - a0), a0 = e^-e; gamma density 1/(beta s x^(q/2+1)), nu density s
    m.z_lo = std::log(-std::log1p(-std::exp(-std::exp(1.0))));
    m.z_hi = kInf;
    double lb = std::log(beta);
    m.log_gamma_z = [lb, q](double z) { return -lb - 0.5 * q * z; };
    m.log_nu_z = [](double z) { return -std::exp(z); };
    // s^-1 s x
    m.log_inner_z = [](double z) { return z; };
    return m;
}

MazyaResult mazya_B_z(const MeasurePair& pair, const std::vector<double>& z_grid, const QuadOptions& opt) {
    if (!(pair.p > 1.0)) throw DomainError("mazya constant needs p > 1");
    MazyaResult res;
    double p = pair.p, q = pair.q;
    Fn gam = [&](double z) { return std::exp(pair.log_gamma_z(z)); };
    Fn inner = [&](double z) {
        double v = pair.log_inner_z ? pair.log_inner_z(z) : -pair.log_nu_z(z) / (p - 1.0) + z - std::exp(z);
        if (std::isnan(v)) throw DivergentFactor("inner density not representable at z = " + fmt_num(z));
        return v < -745.0 ? 0.0 : std::exp(v);
    };
    bool any_finite = false;
    res.B = 0.0;
    for (double z : z_grid) {
        double g0 = std::max(z, pair.z_lo);
        double G = g0 < pair.z_hi ? integrate(gam, g0, pair.z_hi, {}, opt).value : 0.0;
        double h1 = std::min(z, pair.z_hi);
        double I = h1 > pair.z_lo ? integrate(inner, pair.z_lo, h1, {}, opt).value : 0.0;
        double gf = std::pow(G, 1.0 / q), inf_ = std::pow(I, (p - 1.0) / p);
        if (std::isfinite(I)) any_finite = true;
        double prod = gf * inf_;
        res.z.push_back(z);
        res.gamma_factor.push_back(gf);
        res.inner_factor.push_back(inf_);
        res.product.push_back(prod);
        if (std::isfinite(prod) && prod > res.B) {
            res.B = prod;
            res.argmax_z = z;
        }
    }
    if (!any_finite && !z_grid.empty()) throw DivergentFactor("inner integral diverges at every grid point");
    res.sandwich_hi = res.B * std::pow(q / (q - 1.0), (p - 1.0) / p) * std::pow(q, 1.0 / q);
    return res;
}

MazyaResult mazya_B(const MeasurePair& pair, const std::vector<double>& r_grid, const QuadOptions& opt) {
    std::vector<double> z;
    for (double r : r_grid) {
        if (!(r > 0.0 && r < 1.0)) throw DomainError("mazya grid radii must lie in (0,1)");
        z.push_back(std::log(-std::log(r)));
    }
    return mazya_B_z(pair, z, opt);
}

}  // namespace hl
