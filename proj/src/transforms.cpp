#include "hl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hl/errors.hpp"
#include "hl/profiles.hpp"
#include "hl/quadrature.hpp"

namespace hl {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_alpha(const std::string& text) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError("bad gauge parameter '" + text + "'");
}
}  // namespace

double tau0_of(double mu) {
    if (!(mu >= -0.25)) throw DomainError("mu must be >= -1/4, got " + std::to_string(mu));
    double sigma = std::sqrt(1.0 + 4.0 * mu);
    return -2.0 * mu / (1.0 + sigma);
}

double f_mu(double mu, double sigma) {
    double tau = tau0_of(mu);
    return sigma * sigma / (2.0 * sigma + 2.0 * tau - 1.0);
}

SpectralConstants constants_for(double mu) {
    SpectralConstants c;
    c.mu = mu;
    c.tau0 = tau0_of(mu);
    c.sigma = std::sqrt(1.0 + 4.0 * mu);
    c.m = 4.0 * kPi * c.sigma;
    if (c.sigma == 0.0) {
        c.nu_defined = false;
        c.nu = std::numeric_limits<double>::quiet_NaN();
    } else {
        double f = f_mu(mu, c.sigma);
        c.nu = 1.0 / std::sqrt(std::pow(2.0, 2.0 - 2.0 * c.tau0) * kPi * f);
    }
    return c;
}

Gauge Gauge::A(double alpha, double mu) {
    if (!(alpha >= 0.0)) throw DomainError("gauge A needs alpha >= 0");
    Gauge g;
    g.kind = GaugeKind::A;
    g.alpha = alpha;
    g.mu = mu;
    g.tau = tau0_of(mu);
    return g;
}

Gauge Gauge::B(double mu, double shift) {
    if (!(mu > -0.25)) throw DomainError("gauge B needs mu > -1/4, got " + std::to_string(mu));
    if (!(shift >= 0.0)) throw DomainError("gauge B shift must be >= 0");
    Gauge g;
    g.kind = GaugeKind::B;
    g.mu = mu;
    g.tau = tau0_of(mu);
    g.shift = shift;
    return g;
}

Gauge Gauge::C() {
    Gauge g;
    g.kind = GaugeKind::C;
    g.mu = -0.25;
    g.tau = 0.5;
    return g;
}

Gauge Gauge::parse(const std::string& name, double mu) {
    if (name == "id") return identity();
    if (name == "gaugeB") return B(mu);
    if (name == "gaugeC") return C();
    if (name.rfind("gaugeA:", 0) == 0) return A(parse_alpha(name.substr(7)), mu);
    if (name == "gaugeA") return A(0.0, mu);
    throw ConfigError("unknown gauge '" + name + "'");
}

std::string Gauge::name() const {
    switch (kind) {
        case GaugeKind::Identity: return "id";
        case GaugeKind::A: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "gaugeA:%.17g", alpha);
            return buf;
        }
        case GaugeKind::B: return "gaugeB";
        case GaugeKind::C: return "gaugeC";
    }
    return "?";
}

bool Gauge::same_as(const Gauge& o) const {
    return kind == o.kind && alpha == o.alpha && tau == o.tau && shift == o.shift;
}

double Gauge::s_of_t(double t) const {
    switch (kind) {
        case GaugeKind::Identity: return -std::log(t);
        case GaugeKind::A: return 0.5 * t - alpha;
        case GaugeKind::B: return 0.5 * (t + shift);
        case GaugeKind::C: return 0.5 * std::expm1(t);
    }
    return 0.0;
}

double Gauge::t_of_s(double s) const {
    switch (kind) {
        case GaugeKind::Identity: return std::exp(-s);
        case GaugeKind::A: return 2.0 * (alpha + s);
        case GaugeKind::B: return 2.0 * s - shift;
        case GaugeKind::C: return std::log1p(2.0 * s);
    }
    return 0.0;
}

double Gauge::ds_dt(double t) const {
    switch (kind) {
        case GaugeKind::Identity: return -1.0 / t;
        case GaugeKind::A:
        case GaugeKind::B: return 0.5;
        case GaugeKind::C: return 0.5 * std::exp(t);
    }
    return 0.0;
}

double Gauge::forward(double r) const {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("radius outside (0,1]");
    return kind == GaugeKind::Identity ? r : t_of_s(-std::log(r));
}

double Gauge::inverse(double t) const { return kind == GaugeKind::Identity ? t : std::exp(-s_of_t(t)); }

double Gauge::t_lo() const {
    switch (kind) {
        case GaugeKind::Identity: return 0.0;
        case GaugeKind::A: return 2.0 * alpha;
        case GaugeKind::B: return -shift;
        case GaugeKind::C: return 0.0;
    }
    return 0.0;
}

double Gauge::t_hi() const { return kind == GaugeKind::Identity ? 1.0 : kInf; }

double Gauge::omega_s(double s) const {
    switch (kind) {
        case GaugeKind::Identity: return 1.0;
        case GaugeKind::A:
        case GaugeKind::B: return tau == 0.0 ? 1.0 : std::pow(s_gauge(s), tau);
        case GaugeKind::C: return std::sqrt(s);
    }
    return 1.0;
}

double Gauge::dlog_omega_ds(double s) const {
    switch (kind) {
        case GaugeKind::Identity: return 0.0;
        case GaugeKind::A:
        case GaugeKind::B: return tau == 0.0 ? 0.0 : tau / s_gauge(s);
        case GaugeKind::C: return 0.5 / s;
    }
    return 0.0;
}

double Gauge::omega(double r) const { return omega_s(-std::log(r)); }

double Gauge::energy_weight(double t) const {
    switch (kind) {
        case GaugeKind::Identity: return 2.0 * kPi * t;
        case GaugeKind::A:
        case GaugeKind::B: {
            double w = omega_s(s_of_t(t));
            return 4.0 * kPi * w * w;
        }
        case GaugeKind::C: return -2.0 * kPi * std::expm1(-t);
    }
    return 0.0;
}

bool Gauge::singular_at_one() const {
    switch (kind) {
        case GaugeKind::Identity: return false;
        case GaugeKind::A: return alpha == 0.0 && tau != 0.0;
        case GaugeKind::B: return tau != 0.0;
        case GaugeKind::C: return true;
    }
    return false;
}

RadialProfile push(const RadialProfile& u, const Gauge& g) {
    if (u.frame == Frame::W && u.gauge.same_as(g)) return u;
    double s1 = u.s_of_x(u.xa), s2 = u.infinite() ? kInf : u.s_of_x(u.xb);
    double slo = std::min(s1, s2), shi = std::max(s1, s2);
    if (slo <= 0.0 && g.singular_at_one() && g.omega_s(0.0) == 0.0)
        throw DomainError("profile support reaches r = 1 where the gauge factor of " + g.name() + " vanishes");
    if (std::isinf(shi) && g.kind != GaugeKind::Identity && g.kind != GaugeKind::C && g.tau < 0.0)
        throw DomainError("profile support reaches r = 0 where the gauge factor of " + g.name() + " vanishes");
    if (std::isinf(shi) && g.kind == GaugeKind::Identity)
        throw DomainError("identity frame cannot carry a profile singular at the origin");
    if (g.kind == GaugeKind::B && slo < 0.5 * g.shift)
        throw DomainError("profile support leaves the shifted gauge range");

    RadialProfile w;
    w.frame = Frame::W;
    w.gauge = g;
    w.family = u.family;
    w.params = u.params;
    w.offset = u.offset;
    w.tail_a = u.tail_a;
    double t1 = g.t_of_s(slo), t2 = std::isinf(shi) ? g.t_hi() : g.t_of_s(shi);
    w.xa = std::min(t1, t2);
    w.xb = std::max(t1, t2);
    bool flip = g.kind == GaugeKind::Identity;
    bool u_flip = u.frame == Frame::W && u.gauge.kind == GaugeKind::Identity;
    w.sing_lo = (flip == u_flip) ? u.sing_lo : false;
    for (double b : u.breaks) w.breaks.push_back(g.t_of_s(u.s_of_x(b)));
    std::sort(w.breaks.begin(), w.breaks.end());

    RadialProfile src = u;
    w.f = [src, g](double t) {
        double s = g.s_of_t(t);
        return src.u_x(src.x_of_s(s)) / g.omega_s(s);
    };
    w.df = [src, g](double t) {
        double s = g.s_of_t(t);
        double x = src.x_of_s(s);
        double uu = src.u_x(x), us = src.du_ds_x(x);
        return (us - g.dlog_omega_ds(s) * uu) / g.omega_s(s) * g.ds_dt(t);
    };
    w.sample(static_cast<int>(std::max<size_t>(u.nodes.size(), 64)));
    return w;
}

RadialProfile pull(const RadialProfile& w) {
    if (w.frame == Frame::U) return w;
    RadialProfile u;
    u.frame = Frame::U;
    u.family = w.family;
    u.params = w.params;
    u.offset = w.offset;
    u.tail_a = w.tail_a;
    double s1 = w.s_of_x(w.xa), s2 = w.infinite() ? kInf : w.s_of_x(w.xb);
    u.xa = std::min(s1, s2);
    u.xb = std::max(s1, s2);
    u.sing_lo = w.gauge.kind != GaugeKind::Identity && w.sing_lo;
    for (double b : w.breaks) u.breaks.push_back(w.s_of_x(b));
    std::sort(u.breaks.begin(), u.breaks.end());
    RadialProfile src = w;
    u.f = [src](double s) { return src.u_x(src.x_of_s(s)); };
    u.df = [src](double s) { return src.du_ds_x(src.x_of_s(s)); };
    u.sample(static_cast<int>(std::max<size_t>(w.nodes.size(), 64)));
    return u;
}

double energy_identity_residual(const RadialProfile& u, const Gauge& g, double mu, const QuadOptions& opt) {
    if (g.kind == GaugeKind::Identity) return 0.0;
    if (g.kind == GaugeKind::C && mu != -0.25) throw GaugeMismatch("gaugeC requires mu = -1/4");
    if (g.kind != GaugeKind::C && std::fabs(g.tau - tau0_of(mu)) > 1e-14)
        throw GaugeMismatch("gauge built for mu=" + std::to_string(g.mu) + " used with mu=" + std::to_string(mu));

    Fn lhs = [&](double x) {
        double s = u.s_of_x(x);
        double sg = g.s_gauge(s);
        double a = u.du_ds_x(x), b = u.u_x(x);
        return 2.0 * kPi * (a * a + mu * b * b / (sg * sg)) * u.ds_dx(x);
    };
    double L = integrate_over(u, lhs, opt).value;
    RadialProfile w = push(u, g);
    Fn rhs = [&](double t) {
        double d = w.dw(t);
        return g.energy_weight(t) * d * d;
    };
    double R = integrate_over(w, rhs, opt).value;
    return std::fabs(L - R) / std::max(1.0, std::fabs(L));
}

double energy_identity_residual(const RadialProfile& u, const Gauge& g, double mu) {
    return energy_identity_residual(u, g, mu, QuadOptions{});
}

}  // namespace hl
