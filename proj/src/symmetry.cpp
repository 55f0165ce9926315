#include "hl/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hl/errors.hpp"
#include "hl/integrate.hpp"

namespace hl {

namespace {

constexpr double kPi = std::numbers::pi;

// area of {u > lambda} inside one annulus [a, b] with linear u
double annulus_above(double a, double b, double ua, double ub, double lambda) {
    bool ga = ua > lambda, gb = ub > lambda;
    if (ga && gb) return kPi * (b * b - a * a);
    if (!ga && !gb) return 0.0;
    if (ga) {
        double rs = a + (ua - lambda) / (ua - ub) * (b - a);
        return kPi * (rs * rs - a * a);
    }
    double rs = a + (lambda - ua) / (ub - ua) * (b - a);
    return kPi * (b * b - rs * rs);
}

}  // namespace

double RadialSamples::value(double rho) const {
    if (rho <= 0.0) return v.front();
    if (rho >= r.back()) return rho == r.back() ? v.back() : 0.0;
    auto it = std::upper_bound(r.begin(), r.end(), rho);
    std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    double h = r[i + 1] - r[i];
    return v[i] + (v[i + 1] - v[i]) * (rho - r[i]) / h;
}

double RadialSamples::area_above(double lambda) const {
    if (lambda < 0.0) return kPi * R() * R();
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) a += annulus_above(r[i], r[i + 1], v[i], v[i + 1], lambda);
    return a;
}

double RadialSamples::dirichlet(double rc) const {
    if (rc < 0.0) rc = R();
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        double a = r[i], b = std::min(r[i + 1], rc);
        if (b <= a) break;
        double sl = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
        e += kPi * sl * sl * (b * b - a * a);
    }
    return e;
}

RadialSamples sample_radial(const RadialProfile& u, int M) {
    M = std::max(M, 8);
    if (u.infinite() && u.tail_a > 0.0) throw DomainError("profile is unbounded at the origin; no rearrangement");
    double R = u.r_hi();
    RadialSamples s;
    s.r.reserve(static_cast<std::size_t>(M) + u.breaks.size() + 2);
    for (int i = 0; i <= M; ++i) s.r.push_back(R * i / M);
    for (double b : u.breaks) {
        double rb = std::exp(-u.s_of_x(b));
        if (rb > 0.0 && rb < R) s.r.push_back(rb);
    }
    double rl = u.r_lo();
    if (rl > 0.0 && rl < R) s.r.push_back(rl);
    std::sort(s.r.begin(), s.r.end());
    s.r.erase(std::unique(s.r.begin(), s.r.end(), [R](double x, double y) { return y - x <= 1e-14 * R; }),
              s.r.end());
    s.r.back() = R;

    s.v.resize(s.r.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        double ri = s.r[i];
        double val = ri > 0.0 ? u.u_r(ri) : (u.infinite() ? u.u_s(700.0) : 0.0);
        if (!std::isfinite(val)) throw DomainError("profile value not finite at r = " + std::to_string(ri));
        s.v[i] = val;
        vmax = std::max(vmax, std::abs(val));
    }
    for (double& val : s.v) {
        if (val < -1e-13 * std::max(vmax, 1.0)) throw NegativeInput("rearrangement needs u >= 0");
        val = std::max(val, 0.0);
    }
    return s;
}

double Rearranged::value(double rho) const {
    if (rho >= R) return rho == R && !bands.empty() ? bands.back().lam_lo : 0.0;
    rho = std::max(rho, 0.0);
    auto it = std::lower_bound(bands.begin(), bands.end(), rho, [](const Band& b, double x) { return b.rho_hi < x; });
    if (it == bands.end()) return 0.0;
    const Band& b = *it;
    if (b.lam_hi == b.lam_lo) return b.lam_lo;
    double target = kPi * rho * rho;
    // area(xi) decreasing on [0, lam_hi - lam_lo]
    double lo = 0.0, hi = b.lam_hi - b.lam_lo;
    auto area = [&](double xi) { return b.c0 + xi * (b.c1 + xi * b.c2); };
    for (int k = 0; k < 80 && hi - lo > 0.0; ++k) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (area(mid) > target) lo = mid;
        else hi = mid;
    }
    return b.lam_lo + 0.5 * (lo + hi);
}

double Rearranged::slope(double rho) const {
    if (rho >= R || rho <= 0.0) return 0.0;
    auto it = std::lower_bound(bands.begin(), bands.end(), rho, [](const Band& b, double x) { return b.rho_hi < x; });
    if (it == bands.end()) return 0.0;
    const Band& b = *it;
    if (b.lam_hi == b.lam_lo) return 0.0;
    double xi = value(rho) - b.lam_lo;
    double dA = b.c1 + 2.0 * b.c2 * xi;
    if (!(dA < 0.0)) return 0.0;
    return 2.0 * kPi * rho / dA;
}

std::shared_ptr<const Rearranged> rearrange_samples(const RadialSamples& s) {
    auto out = std::make_shared<Rearranged>();
    out->R = s.R();
    std::vector<double> lev(s.v);
    std::sort(lev.begin(), lev.end());
    lev.erase(std::unique(lev.begin(), lev.end()), lev.end());
    out->top = lev.back();
    std::size_t K = lev.size();

    // Band k: lambda in (lev[k], lev[k+1]). Coefficients in xi = lambda - lev[k]
    // summed annulus by annulus. Crossing points move as p + beta xi with
    // |beta xi| <= annulus width, so nothing cancels.
    struct Q {
        double c0, c1, c2;
    };
    std::vector<Q> q(K > 1 ? K - 1 : 0, Q{0.0, 0.0, 0.0});
    for (std::size_t k = 0; k + 1 < K; ++k) {
        double L = lev[k];
        Q acc{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
            double a = s.r[i], b = s.r[i + 1], ua = s.v[i], ub = s.v[i + 1];
            double lo = std::min(ua, ub), hi = std::max(ua, ub);
            if (lo > L) {
                acc.c0 += kPi * (b * b - a * a);
            } else if (hi > L) {
                double h = b - a, d = ub - ua;
                if (d > 0.0) {
                    double p = a + (L - ua) / d * h, beta = h / d;
                    acc.c0 += kPi * (b * b - p * p);
                    acc.c1 -= 2.0 * kPi * p * beta;
                    acc.c2 -= kPi * beta * beta;
                } else {
                    double p = a + (ua - L) / (-d) * h, beta = -h / (-d);
                    acc.c0 += kPi * (p * p - a * a);
                    acc.c1 += 2.0 * kPi * p * beta;
                    acc.c2 += kPi * beta * beta;
                }
            }
        }
        q[k] = acc;
    }

    auto rad = [](double area) { return std::sqrt(std::max(area, 0.0) / kPi); };
    // walk from the centre outwards: top plateau, then bands and plateaus downwards
    std::vector<Rearranged::Band> bands;
    double rho = 0.0;
    auto push_flat = [&](double r1, double level) {
        if (r1 > rho) {
            bands.push_back({rho, r1, level, level, 0.0, 0.0, 0.0});
            rho = r1;
        }
    };
    for (std::size_t kk = K - 1; kk-- > 0;) {
        const Q& c = q[kk];
        double d = lev[kk + 1] - lev[kk];
        double r_top = rad(c.c0 + d * (c.c1 + d * c.c2));
        push_flat(r_top, lev[kk + 1]);
        double r_bot = std::max(rad(c.c0), rho);
        bands.push_back({rho, r_bot, lev[kk], lev[kk + 1], c.c0, c.c1, c.c2});
        rho = r_bot;
    }
    push_flat(out->R, lev[0]);
    out->bands = std::move(bands);
    return out;
}

RadialProfile rearranged_profile(std::shared_ptr<const Rearranged> rs) {
    RadialProfile p;
    p.frame = Frame::U;
    p.family = "rearranged";
    double outer = rs->R;
    if (!rs->bands.empty() && rs->bands.back().lam_lo == 0.0 && rs->bands.back().lam_hi == 0.0)
        outer = rs->bands.back().rho_lo;
    p.xa = -std::log(outer);
    p.xb = std::numeric_limits<double>::infinity();
    p.tail_a = 0.0;
    for (const auto& b : rs->bands) {
        if (b.rho_hi > 0.0 && b.rho_hi < outer) p.breaks.push_back(-std::log(b.rho_hi));
    }
    std::sort(p.breaks.begin(), p.breaks.end());
    p.breaks.erase(std::unique(p.breaks.begin(), p.breaks.end()), p.breaks.end());
    p.f = [rs](double s) { return rs->value(std::exp(-s)); };
    p.df = [rs](double s) {
        double r = std::exp(-s);
        return -r * rs->slope(r);
    };
    return p;
}

RadialProfile rearrange(const RadialProfile& u, int M) {
    return rearranged_profile(rearrange_samples(sample_radial(u, M)));
}

double superlevel_area(const RadialProfile& ustar, double lambda) {
    double hi = ustar.r_hi();
    if (!(ustar.u_s(700.0) > lambda)) return 0.0;
    if (ustar.u_r(hi) > lambda) return kPi * hi * hi;
    double lo = 0.0;
    for (int k = 0; k < 200; ++k) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (ustar.u_r(mid) > lambda) lo = mid;
        else hi = mid;
    }
    double r = 0.5 * (lo + hi);
    return kPi * r * r;
}

PolyaSzego check_polya_szego(const RadialProfile& u, int M, double tol) {
    RadialSamples s = sample_radial(u, M);
    auto rs = rearrange_samples(s);
    PolyaSzego out;
    double vmax = *std::max_element(s.v.begin(), s.v.end());
    out.boundary_singular = s.v.back() > 1e-12 * std::max(vmax, 1e-300);
    double rc = out.boundary_singular ? 0.99 * s.R() : s.R();
    out.rhs = s.dirichlet(rc);
    std::vector<double> br;
    for (const auto& b : rs->bands)
        if (b.rho_hi > 0.0 && b.rho_hi < rc) br.push_back(b.rho_hi);
    std::sort(br.begin(), br.end());
    QuadOptions qo;
    qo.tol = 1e-12;
    out.lhs = integrate(
                  [&](double r) {
                      double d = rs->slope(r);
                      return d * d * r;
                  },
                  0.0, rc, br, qo)
                  .value *
              2.0 * kPi;
    out.holds = out.lhs <= out.rhs * (1.0 + tol) + 1e-300;
    return out;
}

HardyLittlewood check_hardy_littlewood(const RadialProfile& u, const PotentialSpec& V, double q, int M, double tol) {
    RadialSamples s = sample_radial(u, M);
    double sR = -std::log(s.R());
    // V nonincreasing in r: log V = 2s + ln(r^2 V) nondecreasing in s
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 4000; ++i) {
        double si = sR + (i == 0 ? 1e-12 : 0.0) + 60.0 * std::pow(i / 4000.0, 2.0);
        double sp = scaled_potential(V, si);
        if (!(sp > 0.0)) continue;
        double lv = 2.0 * si + std::log(sp);
        if (lv < prev - 1e-10 * std::max(1.0, std::abs(prev)))
            throw MonotonicityViolation(V.name() + " increases near r = " + std::to_string(std::exp(-si)));
        prev = lv;
    }
    auto rs = rearrange_samples(s);
    std::vector<double> br;
    for (double r : s.r)
        if (r > 0.0 && r < s.R()) br.push_back(-std::log(r));
    std::sort(br.begin(), br.end());
    std::vector<double> br2;
    for (const auto& b : rs->bands)
        if (b.rho_hi > 0.0 && b.rho_hi < s.R()) br2.push_back(-std::log(b.rho_hi));
    std::sort(br2.begin(), br2.end());
    QuadOptions qo;
    qo.tol = 1e-11;
    auto integrand = [&](auto value) {
        return [&, value](double si) {
            double val = value(std::exp(-si));
            if (val <= 0.0) return 0.0;
            return std::pow(val, q) * scaled_potential(V, si);
        };
    };
    // tabulated weights stop at their smallest radius
    double s_end = V.domain_lo() > 0.0 ? -std::log(V.domain_lo()) : std::numeric_limits<double>::infinity();
    std::erase_if(br, [&](double b) { return b >= s_end; });
    std::erase_if(br2, [&](double b) { return b >= s_end; });
    HardyLittlewood out;
    out.lhs = 2.0 * kPi * integrate(integrand([&](double r) { return s.value(r); }), sR, s_end, br, qo).value;
    out.rhs = 2.0 * kPi * integrate(integrand([&](double r) { return rs->value(r); }), sR, s_end, br2, qo).value;
    out.holds = out.lhs <= out.rhs * (1.0 + tol) + 1e-300;
    return out;
}

double r_q(double q) {
    if (!(q > 2.0)) throw DomainError("r_q needs q > 2");
    // derivative sign of ln V in s for s > 1: 2 s (1 + ln s) - (1 + q/2)(2 + ln s)
    auto F = [q](double s) { return 2.0 * s * (1.0 + std::log(s)) - (1.0 + 0.5 * q) * (2.0 + std::log(s)); };
    double lo = 1.0, hi = 2.0;
    while (F(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int k = 0; k < 200; ++k) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (F(mid) > 0.0) hi = mid;
        else lo = mid;
    }
    return std::exp(-0.5 * (lo + hi));
}

double Envelope::upper(double r) const { return r <= r_hat ? eval_potential(V, r) : v_hat; }

double Envelope::lower(double r) const { return r <= rq ? eval_potential(V, r) : v_min; }

Envelope envelope_decompose(double q, double rq, double R, int grid) {
    if (!(rq > 0.0 && rq < R && R <= std::exp(-1.0) * (1.0 + 1e-15)))
        throw DomainError("envelope needs 0 < r_q < R <= 1/e");
    Envelope e;
    e.q = q;
    e.rq = rq;
    e.R = R;
    e.V = PotentialSpec::remq(q);
    e.v_min = std::numeric_limits<double>::infinity();
    e.v_max = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double r = rq + (R - rq) * i / grid;
        double v = eval_potential(e.V, r);
        e.v_min = std::min(e.v_min, v);
        e.v_max = std::max(e.v_max, v);
    }
    for (int i = 1; i < grid; ++i) {
        double r = rq * i / grid;
        double v = eval_potential(e.V, r);
        if (v >= e.v_max) {
            e.r_hat = r;
            e.v_hat = v;
            break;
        }
    }
    if (e.r_hat == 0.0) throw NoHatR("no grid radius below r_q dominates the weight on [r_q, R]");
    e.c_q = e.v_min / e.v_hat;
    return e;
}

namespace {

double basis(int m, bool sine, double th) {
    if (m == 0) return sine ? 0.0 : 1.0 / std::sqrt(2.0 * kPi);
    return (sine ? std::sin(m * th) : std::cos(m * th)) / std::sqrt(kPi);
}

double transform(const std::function<double(double, double)>& g, int n, int m, bool sine, double r) {
    if (m == 0 && sine) return 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = 2.0 * kPi * j / n;
        acc += g(r, th) * basis(m, sine, th);
    }
    return acc * 2.0 * kPi / n;
}

std::function<double(double, double)> radial_derivative(const PolarField& f) {
    if (f.f_r) return f.f_r;
    auto g = f.f;
    return [g](double r, double th) {
        double h = 1e-6 * std::max(1.0, r);
        return (g(r + h, th) - g(std::max(r - h, 0.0), th)) / (r + h - std::max(r - h, 0.0));
    };
}

std::function<double(double, double)> angular_derivative(const PolarField& f) {
    if (f.f_theta) return f.f_theta;
    auto g = f.f;
    return [g](double r, double th) { return (g(r, th + 1e-6) - g(r, th - 1e-6)) / 2e-6; };
}

int default_n_theta(int M, int n) { return n > 0 ? n : std::max(64, 8 * (M + 1)); }

// absolute floor for the radial integrals: vanishing modes would otherwise
// chase a relative tolerance on rounding noise
double field_scale(const PolarField& f, int n) {
    double acc = 0.0;
    for (int i = 0; i < 32; ++i) {
        double r = (i + 0.5) / 32.0;
        for (int j = 0; j < n; ++j) {
            double th = 2.0 * kPi * j / n;
            double a = f.f(r, th), b = f.f_r(r, th), c = f.f_theta(r, th) / r;
            acc += (a * a + b * b + c * c) * r;
        }
    }
    return acc * 2.0 * kPi / n / 32.0;
}

}  // namespace

double ModeSet::cos_part(int m, double r) const { return transform(field.f, n_theta, m, false, r); }
double ModeSet::sin_part(int m, double r) const { return transform(field.f, n_theta, m, true, r); }
double ModeSet::cos_part_dr(int m, double r) const {
    return transform(radial_derivative(field), n_theta, m, false, r);
}
double ModeSet::sin_part_dr(int m, double r) const { return transform(radial_derivative(field), n_theta, m, true, r); }

ModeSet decompose_modes(const PolarField& f, int M, int n_theta) {
    if (M < 0) throw DomainError("mode count must be >= 0");
    ModeSet ms;
    ms.M = M;
    ms.n_theta = default_n_theta(M, n_theta);
    ms.field = f;
    if (!ms.field.f_r) ms.field.f_r = radial_derivative(f);
    if (!ms.field.f_theta) ms.field.f_theta = angular_derivative(f);
    ms.scale = field_scale(ms.field, ms.n_theta);

    QuadOptions qo;
    qo.tol = 1e-10;
    qo.abs_tol = 1e-15 * ms.scale;
    double total = 0.0;
    for (int m = 0; m <= M; ++m) {
        double e = integrate(
                       [&](double r) {
                           double c = ms.cos_part(m, r), s = ms.sin_part(m, r);
                           return (c * c + s * s) * r;
                       },
                       0.0, 1.0, {}, qo)
                       .value;
        ms.mode_energy.push_back(e);
        total += e;
    }
    ms.alias_warning = M > 0 && total > 0.0 && ms.mode_energy.back() > 1e-6 * total;

    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        double r = (k + 0.5) / 16.0;
        double full = 0.0;
        for (int j = 0; j < ms.n_theta; ++j) {
            double v = f.f(r, 2.0 * kPi * j / ms.n_theta);
            full += v * v;
        }
        full *= 2.0 * kPi / ms.n_theta;
        double sum = 0.0;
        for (int m = 0; m <= M; ++m) {
            double c = ms.cos_part(m, r), s = ms.sin_part(m, r);
            sum += c * c + s * s;
        }
        if (full > 0.0) worst = std::max(worst, std::abs(full - sum) / full);
    }
    ms.parseval_residual = worst;
    return ms;
}

double mode_term(const ModeSet& ms, int m, bool centrifugal_only) {
    QuadOptions qo;
    qo.tol = 1e-11;
    qo.abs_tol = 1e-15 * ms.scale;
    return integrate(
               [&](double r) {
                   double c = ms.cos_part(m, r), s = ms.sin_part(m, r);
                   double cen = m == 0 ? 0.0 : double(m) * m * (c * c + s * s) / (r * r);
                   if (centrifugal_only) return cen * r;
                   double cd = ms.cos_part_dr(m, r), sd = ms.sin_part_dr(m, r);
                   return (cd * cd + sd * sd + cen) * r;
               },
               0.0, 1.0, {}, qo)
        .value;
}

ModeIdentity mode_energy_identity(const PolarField& f, int M, int n_theta) {
    ModeSet ms = decompose_modes(f, M, n_theta);
    QuadOptions qo;
    qo.tol = 1e-11;
    qo.abs_tol = 1e-15 * ms.scale;
    ModeIdentity out;
    const int n = ms.n_theta;
    out.lhs = integrate(
                  [&](double r) {
                      double acc = 0.0;
                      for (int j = 0; j < n; ++j) {
                          double th = 2.0 * kPi * j / n;
                          double a = ms.field.f_r(r, th), b = ms.field.f_theta(r, th) / r;
                          acc += a * a + b * b;
                      }
                      return acc * 2.0 * kPi / n * r;
                  },
                  0.0, 1.0, {}, qo)
                  .value;
    for (int m = 0; m <= M; ++m) out.rhs += mode_term(ms, m);
    out.residual = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-300);
    return out;
}

}  // namespace hl
