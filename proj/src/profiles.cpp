#include "hl/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hl/errors.hpp"
#include "hl/quadrature.hpp"

namespace hl {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// int_0^x S for the quintic smoothstep
double smoothstep_int(double x) {
    x = std::clamp(x, 0.0, 1.0);
    double x2 = x * x, x4 = x2 * x2;
    return x4 * x2 - 3.0 * x4 * x + 2.5 * x4;
}
// int_0^1 S^2
constexpr double kSmoothSq = 181.0 / 462.0;
}  // namespace

double RadialProfile::w(double x) const {
    if (x < xa || x > xb || !f) return 0.0;
    return f(x);
}

double RadialProfile::dw(double x) const {
    if (x < xa || x > xb || !df) return 0.0;
    return df(x);
}

bool RadialProfile::infinite() const { return std::isinf(xb); }

double RadialProfile::s_of_x(double x) const { return frame == Frame::U ? x : gauge.s_of_t(x); }

double RadialProfile::x_of_s(double s) const { return frame == Frame::U ? s : gauge.t_of_s(s); }

double RadialProfile::ds_dx(double x) const { return frame == Frame::U ? 1.0 : std::fabs(gauge.ds_dt(x)); }

double RadialProfile::u_x(double x) const {
    double v = w(x);
    if (frame == Frame::U || v == 0.0) return v;
    return v * gauge.omega_s(s_of_x(x));
}

double RadialProfile::du_ds_x(double x) const {
    if (frame == Frame::U) return dw(x);
    double s = s_of_x(x);
    double v = w(x), d = dw(x);
    if (v == 0.0 && d == 0.0) return 0.0;
    // u = omega w, d/ds = omega (dlog omega w + w_t / (ds/dt))
    return gauge.omega_s(s) * (gauge.dlog_omega_ds(s) * v + d / gauge.ds_dt(x));
}

double RadialProfile::u_s(double s) const {
    if (!(s >= 0.0)) return 0.0;
    return u_x(x_of_s(s));
}

double RadialProfile::u_r(double r) const {
    if (!(r > 0.0) || r > 1.0) return 0.0;
    return u_s(-std::log(r));
}

double RadialProfile::r_lo() const {
    double s1 = s_of_x(xa), s2 = infinite() ? kInf : s_of_x(xb);
    return std::exp(-std::max(s1, s2));
}

double RadialProfile::r_hi() const {
    double s1 = s_of_x(xa), s2 = infinite() ? kInf : s_of_x(xb);
    return std::exp(-std::min(s1, s2));
}

void RadialProfile::sample(int n) {
    n = std::max(n, 2);
    double hi = xb;
    if (std::isinf(hi)) {
        double last = breaks.empty() ? xa : std::max(xa, breaks.back());
        hi = last + std::max(1.0, last - xa);
    }
    nodes.clear();
    for (int i = 0; i < n; ++i) nodes.push_back(xa + (hi - xa) * i / (n - 1));
    for (double b : breaks)
        if (b > xa && b < hi) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    values.resize(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) values[i] = w(nodes[i]);
}

RadialProfile RadialProfile::scaled(double c) const {
    RadialProfile p = *this;
    Fn f0 = f, d0 = df;
    if (f0) p.f = [f0, c](double x) { return c * f0(x); };
    if (d0) p.df = [d0, c](double x) { return c * d0(x); };
    for (double& v : p.values) v *= c;
    return p;
}

double RadialProfile::param(const std::string& key) const {
    for (const auto& kv : params)
        if (kv.first == key) return kv.second;
    return kNaN;
}

RadialProfile zeta_t1(double t1, double tau0, int nodes) {
    if (!(t1 > 2.0)) throw DomainError("zeta_t1 needs t1 > 2");
    if (!(tau0 < 0.5)) throw DomainError("zeta_t1 needs tau0 < 1/2");
    double e = 1.0 - 2.0 * tau0;
    double D = std::pow(t1, e) - std::pow(2.0, e);
    double C = 1.0 / std::sqrt(D);
    RadialProfile z;
    z.frame = Frame::W;
    z.gauge = Gauge::A(1.0, tau0 * tau0 - tau0);
    z.xa = 2.0;
    z.xb = kInf;
    z.tail_a = tau0;
    z.breaks = {t1};
    z.f = [=](double t) { return t >= t1 ? C * D : C * (std::pow(t, e) - std::pow(2.0, e)); };
    z.df = [=](double t) { return t >= t1 ? 0.0 : C * e * std::pow(t, e - 1.0); };
    z.family = "zeta-t1";
    z.params = {{"t1", t1}, {"tau0", tau0}};
    z.sample(nodes);
    return z;
}

double j_t1_energy(const RadialProfile& z, const QuadOptions& opt) {
    double tau0 = z.param("tau0");
    double e = 1.0 - 2.0 * tau0;
    Fn g = [&](double t) {
        double d = z.dw(t);
        return d == 0.0 ? 0.0 : d * d * std::pow(t, 2.0 * tau0) / e;
    };
    return integrate_over(z, g, opt).value;
}

RadialProfile moser_family(int n, double mu, int nodes) {
    if (n < 2) throw DomainError("moser family needs n >= 2");
    if (!(mu > -0.25)) throw DomainError("moser family needs mu > -1/4");
    SpectralConstants c = constants_for(mu);
    double sigma = c.sigma, tau = c.tau0;
    double amp = c.nu * std::pow(double(n), 0.5 - tau);
    double nn = n;
    RadialProfile p;
    p.frame = Frame::W;
    p.gauge = Gauge::B(mu);
    p.xa = 0.0;
    p.xb = kInf;
    p.sing_lo = sigma < 1.0;
    p.tail_a = tau;
    for (int k = 30; k >= 1; --k) p.breaks.push_back(nn * std::ldexp(1.0, -k));
    p.breaks.push_back(nn);
    p.f = [=](double t) { return t >= nn ? amp : amp * std::pow(t / nn, sigma); };
    p.df = [=](double t) { return t >= nn ? 0.0 : amp * sigma * std::pow(t / nn, sigma - 1.0) / nn; };
    p.family = "moser";
    p.params = {{"n", nn}, {"mu", mu}};
    p.sample(nodes);
    return p;
}

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double smoothstep_d(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double y = x * (1.0 - x);
    return 30.0 * y * y;
}

namespace {
double eta_k(double t, double k) {
    if (t <= 1.0 || t >= k) return 0.0;
    if (t < 2.0) return smoothstep(t - 1.0);
    if (t <= k - 1.0) return 1.0;
    return 1.0 - smoothstep(t - k + 1.0);
}
double eta_k_d(double t, double k) {
    if (t <= 1.0 || t >= k) return 0.0;
    if (t < 2.0) return smoothstep_d(t - 1.0);
    if (t <= k - 1.0) return 0.0;
    return -smoothstep_d(t - k + 1.0);
}
// int_0^t eta_k
double eta_k_int(double t, double k) {
    if (t <= 1.0) return 0.0;
    if (t < 2.0) return smoothstep_int(t - 1.0);
    if (t <= k - 1.0) return 0.5 + (t - 2.0);
    if (t < k) {
        double x = t - k + 1.0;
        return 0.5 + (k - 3.0) + x - smoothstep_int(x);
    }
    return k - 2.0;
}
}  // namespace

RadialProfile cutoff_eta(double kappa, int nodes) {
    if (!(kappa > 4.0)) throw DomainError("cutoff needs kappa > 4");
    RadialProfile p;
    p.frame = Frame::W;
    p.gauge = Gauge::C();
    p.xa = 1.0;
    p.xb = kappa;
    p.breaks = {2.0, kappa - 1.0};
    p.f = [kappa](double t) { return eta_k(t, kappa); };
    p.df = [kappa](double t) { return eta_k_d(t, kappa); };
    p.family = "eta";
    p.params = {{"kappa", kappa}};
    p.sample(nodes);
    return p;
}

WkappaConstants wkappa_constants(double kappa) {
    if (!(kappa > 4.0)) throw DomainError("w_kappa needs kappa > 4");
    return {kappa - 2.0, std::sqrt(4.0 * kPi * (2.0 * kSmoothSq + kappa - 3.0))};
}

RadialProfile wkappa_family(double kappa, int nodes) {
    WkappaConstants c = wkappa_constants(kappa);
    double b2 = c.b2;
    RadialProfile p;
    p.frame = Frame::W;
    p.gauge = Gauge::C();
    p.xa = 1.0;
    p.xb = 3.0 * kappa;
    p.breaks = {2.0, kappa - 1.0, kappa, 2.0 * kappa + 1.0, 2.0 * kappa + 2.0, 3.0 * kappa - 1.0};
    p.f = [=](double t) { return (eta_k_int(t, kappa) - eta_k_int(t - 2.0 * kappa, kappa)) / b2; };
    p.df = [=](double t) { return (eta_k(t, kappa) - eta_k(t - 2.0 * kappa, kappa)) / b2; };
    p.family = "wkappa";
    p.params = {{"kappa", kappa}, {"b1", c.b1}, {"b2", c.b2}};
    p.sample(nodes);
    return p;
}

RadialProfile plateau_family(int n, Ramp ramp, double t0, double x0, int nodes) {
    if (n < 8) throw DomainError("plateau family needs n >= 8");
    if (!(x0 >= 0.0 && x0 < 1.0)) throw GeometryError("bump centre must lie in [0,1)");
    double nn = n;
    RadialProfile p;
    p.frame = Frame::W;
    p.gauge = Gauge::B(0.0);
    p.xb = kInf;
    p.offset = x0;
    if (ramp == Ramp::FourPiece) {
        double a = std::sqrt(nn / (4.0 * kPi));
        p.xa = nn / 4.0;
        p.breaks = {nn / 2.0, nn};
        p.f = [=](double t) {
            double x = t / nn;
            if (x < 0.25) return 0.0;
            if (x < 0.5) return a * (2.0 * x - 0.5);
            if (x < 1.0) return a * x;
            return a;
        };
        p.df = [=](double t) {
            double x = t / nn;
            if (x < 0.25) return 0.0;
            if (x < 0.5) return 2.0 * a / nn;
            if (x < 1.0) return a / nn;
            return 0.0;
        };
    } else {
        if (!(t0 >= 0.0 && t0 < nn)) throw DomainError("linear ramp needs 0 <= t0 < n");
        double L = nn - t0;
        double a = std::sqrt(L / (4.0 * kPi));
        p.xa = t0;
        p.breaks = {nn};
        p.f = [=](double t) { return t >= nn ? a : a * (t - t0) / L; };
        p.df = [=](double t) { return t >= nn ? 0.0 : a / L; };
    }
    double rho = std::exp(-0.5 * p.xa);
    if (x0 > 0.0 && x0 + rho >= 1.0) throw GeometryError("bump of radius " + std::to_string(rho) + " at offset " +
                                                         std::to_string(x0) + " leaves the unit disk");
    p.family = "plateau";
    p.params = {{"n", nn}, {"ramp", ramp == Ramp::FourPiece ? 0.0 : 1.0}, {"t0", t0}, {"x0", x0}};
    p.sample(nodes);
    return p;
}

double plateau_energy(const RadialProfile& p, const QuadOptions& opt) {
    Fn g = [&](double t) {
        double d = p.dw(t);
        return 4.0 * kPi * d * d;
    };
    return integrate_over(p, g, opt).value;
}

double default_t_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    return -2.0 * std::log(eps);
}

RadialProfile concentrating_family(int n, double mu, double t_eps, int nodes) {
    if (!(mu > -0.25 && mu < 0.0)) throw DomainError("concentrating family needs mu in (-1/4, 0)");
    if (n < 2) throw DomainError("concentrating family needs n >= 2");
    SpectralConstants c = constants_for(mu);
    double tau = c.tau0, sigma = c.sigma, nn = n;
    double nu0 = 1.0 / std::sqrt(std::pow(2.0, 2.0 - 2.0 * tau) * kPi * sigma);
    double amp = nu0 * std::pow(nn, 0.5 - tau);
    double slope = amp * std::pow(1.0 / nn, sigma);
    RadialProfile p;
    p.frame = Frame::W;
    p.gauge = Gauge::B(mu, t_eps);
    p.xa = 0.0;
    p.xb = kInf;
    p.tail_a = tau;
    p.breaks = {1.0, nn};
    p.f = [=](double t) {
        if (t <= 1.0) return slope * t;
        return t >= nn ? amp : amp * std::pow(t / nn, sigma);
    };
    p.df = [=](double t) {
        if (t <= 1.0) return slope;
        return t >= nn ? 0.0 : amp * sigma * std::pow(t / nn, sigma - 1.0) / nn;
    };
    p.family = "conc";
    p.params = {{"n", nn}, {"mu", mu}, {"t_eps", t_eps}, {"nu0", nu0}};
    p.sample(nodes);
    return p;
}

double eta0(double x) {
    if (x <= 0.5) return 1.0;
    if (x >= 1.0) return 0.0;
    return 1.0 - smoothstep(2.0 * x - 1.0);
}

double eta0_d(double x) {
    if (x <= 0.5 || x >= 1.0) return 0.0;
    return -2.0 * smoothstep_d(2.0 * x - 1.0);
}

RadialProfile h0_profile(int nodes) {
    RadialProfile p;
    p.frame = Frame::U;
    p.xa = std::log(2.0);
    p.xb = kInf;
    p.tail_a = 0.5;
    p.breaks = {std::log(4.0)};
    p.f = [](double s) { return std::sqrt(s) * eta0(2.0 * std::exp(-s)); };
    p.df = [](double s) {
        double x = 2.0 * std::exp(-s);
        return 0.5 / std::sqrt(s) * eta0(x) - std::sqrt(s) * eta0_d(x) * x;
    };
    p.family = "h0";
    p.sample(nodes);
    return p;
}

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

int Rng::integer(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    Rng r(root ^ (index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    r.next();
    return r.next();
}

namespace {
struct Knots {
    std::vector<double> x, y;
};
struct Bumps {
    std::vector<double> c, m, h;
};
double bump(double z) {
    if (z <= -1.0 || z >= 1.0) return 0.0;
    double v = 1.0 - z * z;
    return v * v * v;
}
double bump_d(double z) {
    if (z <= -1.0 || z >= 1.0) return 0.0;
    double v = 1.0 - z * z;
    return -6.0 * z * v * v;
}
}  // namespace

RadialProfile random_profile(std::uint64_t seed, const RandomProfileOptions& opt) {
    if (!(opt.r_max > 0.0 && opt.r_max <= 1.0)) throw DomainError("r_max must lie in (0,1]");
    Rng rng(seed);
    // support in s, strictly inside B_{r_max}
    double s_a = -std::log(opt.r_max) + rng.uniform(0.02, 1.5);
    double len = std::exp(rng.uniform(std::log(0.3), std::log(30.0)));
    double s_b = s_a + len;
    int k = opt.forced_bumps >= 0 ? opt.forced_bumps : rng.integer(0, opt.max_bumps);
    double lo_h = opt.nonnegative ? 0.0 : -1.0;

    RadialProfile p;
    p.frame = opt.frame;
    if (opt.frame == Frame::W) p.gauge = Gauge::B(0.0);
    p.family = "random";
    p.params = {{"seed", static_cast<double>(seed & ((1ull << 53) - 1))}, {"bumps", double(k)}};
    double xa = p.x_of_s(s_a), xb = p.x_of_s(s_b);
    p.xa = xa;
    p.xb = xb;

    if (k == 0) {
        p.f = [](double) { return 0.0; };
        p.df = [](double) { return 0.0; };
    } else if (opt.smooth == Smoothness::PiecewiseLinear) {
        auto kn = std::make_shared<Knots>();
        int m = 2 * k;
        kn->x.push_back(xa);
        kn->y.push_back(0.0);
        std::vector<double> inner;
        for (int i = 0; i < m; ++i) inner.push_back(rng.uniform(xa, xb));
        std::sort(inner.begin(), inner.end());
        for (double x : inner) {
            if (x <= kn->x.back()) continue;
            kn->x.push_back(x);
            kn->y.push_back(rng.uniform(lo_h, 1.0));
        }
        kn->x.push_back(xb);
        kn->y.push_back(0.0);
        for (size_t i = 1; i + 1 < kn->x.size(); ++i) p.breaks.push_back(kn->x[i]);
        p.f = [kn](double x) {
            const auto& X = kn->x;
            if (x <= X.front() || x >= X.back()) return 0.0;
            size_t i = std::upper_bound(X.begin(), X.end(), x) - X.begin() - 1;
            double a = (x - X[i]) / (X[i + 1] - X[i]);
            return kn->y[i] + a * (kn->y[i + 1] - kn->y[i]);
        };
        p.df = [kn](double x) {
            const auto& X = kn->x;
            if (x <= X.front() || x >= X.back()) return 0.0;
            size_t i = std::upper_bound(X.begin(), X.end(), x) - X.begin() - 1;
            return (kn->y[i + 1] - kn->y[i]) / (X[i + 1] - X[i]);
        };
    } else {
        auto b = std::make_shared<Bumps>();
        double L = xb - xa;
        for (int i = 0; i < k; ++i) {
            double h = rng.uniform(0.05, 0.5) * L;
            double m = rng.uniform(xa + h, xb - h);
            b->c.push_back(rng.uniform(lo_h, 1.0));
            b->m.push_back(m);
            b->h.push_back(h);
            p.breaks.push_back(m - h);
            p.breaks.push_back(m + h);
        }
        std::sort(p.breaks.begin(), p.breaks.end());
        p.f = [b](double x) {
            double v = 0.0;
            for (size_t i = 0; i < b->c.size(); ++i) v += b->c[i] * bump((x - b->m[i]) / b->h[i]);
            return v;
        };
        p.df = [b](double x) {
            double v = 0.0;
            for (size_t i = 0; i < b->c.size(); ++i) v += b->c[i] * bump_d((x - b->m[i]) / b->h[i]) / b->h[i];
            return v;
        };
    }
    p.sample(512);
    return p;
}

}  // namespace hl
