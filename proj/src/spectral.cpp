#include "hl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hl/errors.hpp"

namespace hl {

namespace {
constexpr double kPi = 3.14159265358979323846;

const double gx[3] = {-0.774596669241483377035853079956480, 0.0, 0.774596669241483377035853079956480};
const double gw[3] = {0.555555555555555555555555555555556, 0.888888888888888888888888888888889,
                      0.555555555555555555555555555555556};

using W = std::function<double(double)>;

struct Elem {
    double kA, m00, m01, m11;
};

// int over [lo, hi] of aw / h^2 and bw phi_i phi_j, phi on [a, b]
void gauss_piece(const W& aw, const W& bw, double a, double b, double lo, double hi, Elem& e) {
    double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo), h = b - a;
    for (int k = 0; k < 3; ++k) {
        double x = c + r * gx[k], wt = gw[k] * r;
        double p1 = (x - a) / h, p0 = 1.0 - p1;
        double av = aw(x), bv = bw(x);
        e.kA += wt * (av / h) / h;
        e.m00 += wt * bv * p0 * p0;
        e.m01 += wt * bv * p0 * p1;
        e.m11 += wt * bv * p1 * p1;
    }
}

DiscreteForm build(const std::vector<double>& t, bool free_left, const W& aw, const W& bw,
                   const std::vector<double>& kinks) {
    DiscreteForm F;
    F.t = t;
    int N = static_cast<int>(t.size()) - 1;
    F.first = free_left ? 0 : 1;
    F.dirichlet_both = !free_left;
    F.n = N - F.first;  // last node is Dirichlet
    std::vector<double> ad(N + 1, 0.0), ao(N, 0.0), bd(N + 1, 0.0), bo(N, 0.0);
    for (int i = 0; i < N; ++i) {
        double a = t[i], b = t[i + 1];
        Elem e{0, 0, 0, 0};
        double lo = a;
        for (double k : kinks)
            if (k > a && k < b) {
                gauss_piece(aw, bw, a, b, lo, k, e);
                lo = k;
            }
        gauss_piece(aw, bw, a, b, lo, b, e);
        ad[i] += e.kA;
        ad[i + 1] += e.kA;
        ao[i] -= e.kA;
        bd[i] += e.m00;
        bd[i + 1] += e.m11;
        bo[i] += e.m01;
    }
    for (int j = 0; j < F.n; ++j) {
        int i = F.first + j;
        F.a_diag.push_back(ad[i]);
        F.b_diag.push_back(bd[i]);
        if (j + 1 < F.n) {
            F.a_off.push_back(ao[i]);
            F.b_off.push_back(bo[i]);
        }
    }
    return F;
}

// LDL^T of the symmetric tridiagonal (d, e); returns false on a zero pivot
bool ldl(std::vector<double> d, const std::vector<double>& e, std::vector<double>& D, std::vector<double>& L) {
    size_t n = d.size();
    D.assign(n, 0.0);
    L.assign(n, 0.0);
    D[0] = d[0];
    for (size_t i = 1; i < n; ++i) {
        if (D[i - 1] == 0.0) return false;
        L[i] = e[i - 1] / D[i - 1];
        D[i] = d[i] - L[i] * e[i - 1];
    }
    return D[n - 1] != 0.0;
}

void ldl_solve(const std::vector<double>& D, const std::vector<double>& L, std::vector<double>& x) {
    size_t n = D.size();
    for (size_t i = 1; i < n; ++i) x[i] -= L[i] * x[i - 1];
    for (size_t i = 0; i < n; ++i) x[i] /= D[i];
    for (size_t i = n - 1; i-- > 0;) x[i] -= L[i + 1] * x[i + 1];
}

void tri_mul(const std::vector<double>& d, const std::vector<double>& e, const std::vector<double>& v,
             std::vector<double>& out) {
    size_t n = d.size();
    out.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        out[i] = d[i] * v[i];
        if (i > 0) out[i] += e[i - 1] * v[i - 1];
        if (i + 1 < n) out[i] += e[i] * v[i + 1];
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void shifted(const DiscreteForm& F, double sigma, std::vector<double>& d, std::vector<double>& e) {
    d.resize(F.n);
    e.resize(F.a_off.size());
    for (int i = 0; i < F.n; ++i) d[i] = F.a_diag[i] - sigma * F.b_diag[i];
    for (size_t i = 0; i < e.size(); ++i) e[i] = F.a_off[i] - sigma * F.b_off[i];
}

double log_scaled(const PotentialSpec* V, double s) {
    if (!V) return -2.0 * s;
    return std::log(scaled_potential(*V, s));
}

}  // namespace

std::vector<double> make_grid(const Gauge& g, const AssembleOptions& opt) {
    if (opt.N < 16) throw DomainError("grid needs N >= 16");
    std::vector<double> t(opt.N + 1);
    if (g.kind == GaugeKind::Identity) {
        for (int i = 0; i <= opt.N; ++i) t[i] = double(i) / opt.N;
        return t;
    }
    double lo = g.t_lo(), T = opt.tmax;
    if (!(T > lo)) throw DomainError("tmax must exceed the start of the gauge range");
    double len = T - lo;
    for (int i = 0; i <= opt.N; ++i) {
        double xi = double(i) / opt.N;
        if (opt.grid == GridKind::Uniform || opt.grading <= 0.0)
            t[i] = lo + len * xi;
        else
            t[i] = lo + len * std::expm1(opt.grading * xi) / std::expm1(opt.grading);
    }
    t[opt.N] = T;
    return t;
}

DiscreteForm assemble(double mu, const PotentialSpec* V, const Gauge& g, const AssembleOptions& opt) {
    if (g.kind == GaugeKind::Identity) {
        if (mu != 0.0) throw GaugeMismatch("identity frame carries only mu = 0");
    } else if (g.kind == GaugeKind::C) {
        if (mu != -0.25) throw GaugeMismatch("gaugeC requires mu = -1/4");
    } else if (std::fabs(g.tau - tau0_of(mu)) > 1e-14) {
        throw GaugeMismatch("gauge exponent does not match mu");
    }
    auto t = make_grid(g, opt);
    W aw = [g](double x) { return g.energy_weight(x); };
    W bw;
    if (g.kind == GaugeKind::Identity) {
        bw = [V](double x) { return V ? 2.0 * kPi * scaled_potential(*V, -std::log(x)) / x : 2.0 * kPi * x; };
    } else {
        bw = [g, V](double x) {
            double s = g.s_of_t(x);
            double lw, ljac;
            if (g.kind == GaugeKind::C) {
                lw = std::log(s);
                ljac = x - std::log(2.0);
            } else {
                lw = g.tau == 0.0 ? 0.0 : 2.0 * g.tau * std::log(g.s_gauge(s));
                ljac = std::log(0.5);
            }
            return 2.0 * kPi * std::exp(lw + ljac + log_scaled(V, s));
        };
    }
    std::vector<double> kinks;
    if (V)
        for (double s : V->kinks_s()) kinks.push_back(g.t_of_s(s));
    DiscreteForm F = build(t, g.kind == GaugeKind::Identity, aw, bw, kinks);
    F.gauge = g;
    F.mu = mu;
    F.weight_name = V ? V->name() : "unit";
    return F;
}

DiscreteForm assemble_log_weighted(const AssembleOptions& opt) {
    Gauge c = Gauge::C();
    auto t = make_grid(c, opt);
    std::vector<double> s(t.size());
    for (size_t i = 0; i < t.size(); ++i) s[i] = 0.5 * std::expm1(t[i]);
    W aw = [](double x) { return 2.0 * kPi * x; };
    W bw = [](double x) {
        double l = 1.0 + std::fabs(std::log(x));
        return 2.0 * kPi / (x * l * l);
    };
    DiscreteForm F = build(s, false, aw, bw, {1.0});
    F.gauge = Gauge::identity();
    F.mu = -0.25;
    F.weight_name = "log-weighted";
    return F;
}

double rayleigh_quotient(const DiscreteForm& F, const std::vector<double>& v) {
    std::vector<double> Av, Bv;
    tri_mul(F.a_diag, F.a_off, v, Av);
    tri_mul(F.b_diag, F.b_off, v, Bv);
    return dot(v, Av) / dot(v, Bv);
}

int inertia_below(const DiscreteForm& F, double sigma) {
    std::vector<double> d, e;
    shifted(F, sigma, d, e);
    int neg = 0;
    double D = d[0];
    if (D < 0.0) ++neg;
    for (size_t i = 1; i < d.size(); ++i) {
        if (D == 0.0) D = 1e-300;
        D = d[i] - e[i - 1] * e[i - 1] / D;
        if (D < 0.0) ++neg;
    }
    return neg;
}

RayleighResult min_rayleigh(const DiscreteForm& F, double tol, int max_iter) {
    RayleighResult res;
    int n = F.n;
    if (n < 1) throw DomainError("empty form");
    std::vector<double> v(n, 1.0), Av, Bv, x, d, e, D, L;
    double sigma = 0.0;
    if (inertia_below(F, 0.0) != 0) throw DomainError("energy form is not positive definite");
    shifted(F, sigma, d, e);
    if (!ldl(d, e, D, L)) throw NoConvergence("singular shifted form");
    tri_mul(F.b_diag, F.b_off, v, Bv);
    double nb = std::sqrt(dot(v, Bv));
    for (double& a : v) a /= nb;
    double rho = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        tri_mul(F.b_diag, F.b_off, v, Bv);
        x = Bv;
        ldl_solve(D, L, x);
        tri_mul(F.b_diag, F.b_off, x, Bv);
        nb = std::sqrt(dot(x, Bv));
        for (int i = 0; i < n; ++i) v[i] = x[i] / nb;
        tri_mul(F.a_diag, F.a_off, v, Av);
        tri_mul(F.b_diag, F.b_off, v, Bv);
        rho = dot(v, Av);
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double q = Av[i] - rho * Bv[i];
            r2 += q * q;
        }
        res.residual = std::sqrt(r2 / dot(Bv, Bv));
        res.iterations = it;
        if (res.residual <= tol) {
            res.converged = true;
            break;
        }
        // move the shift up to just below lambda_min, certified by inertia
        double cand = rho * (1.0 - std::max(1e-6, std::min(0.5, 10.0 * res.residual / std::max(rho, 1e-300))));
        if (cand > sigma && inertia_below(F, cand) == 0) {
            std::vector<double> d2, e2, D2, L2;
            shifted(F, cand, d2, e2);
            if (ldl(d2, e2, D2, L2)) {
                sigma = cand;
                D.swap(D2);
                L.swap(L2);
            }
        }
    }
    double sum = 0.0;
    for (double a : v) sum += a;
    if (sum < 0.0)
        for (double& a : v) a = -a;
    res.positive = std::all_of(v.begin(), v.end(), [](double a) { return a >= -1e-12; });
    res.lambda = rho;
    res.vec = v;
    return res;
}

std::vector<LadderRow> estimate_leray_constant(const std::vector<int>& ladder, const AssembleOptions& base,
                                               double tol) {
    std::vector<LadderRow> out;
    PotentialSpec V = PotentialSpec::leray();
    Gauge g = Gauge::B(0.0);
    for (int N : ladder) {
        AssembleOptions o = base;
        o.N = N;
        LadderRow row;
        row.N = N;
        auto r = min_rayleigh(assemble(0.0, &V, g, o), tol);
        row.lambda = r.lambda;
        row.residual = r.residual;
        row.converged = r.converged;
        o.tmax = 2.0 * base.tmax;
        row.lambda_2tmax = min_rayleigh(assemble(0.0, &V, g, o), tol).lambda;
        out.push_back(row);
    }
    return out;
}

RemainderVariant parse_remainder_variant(const std::string& name) {
    if (name == "thm11i") return RemainderVariant::Thm11i;
    if (name == "eqnchange1") return RemainderVariant::EqnChange1;
    throw ConfigError("unknown remainder variant '" + name + "'");
}

std::vector<LadderRow> estimate_remainder_constant(RemainderVariant v, const std::vector<int>& ladder,
                                                   const AssembleOptions& base, double tol) {
    std::vector<LadderRow> out;
    PotentialSpec W = PotentialSpec::rem2();
    auto form = [&](const AssembleOptions& o) {
        return v == RemainderVariant::Thm11i ? assemble(-0.25, &W, Gauge::C(), o) : assemble_log_weighted(o);
    };
    for (int N : ladder) {
        AssembleOptions o = base;
        o.N = N;
        LadderRow row;
        row.N = N;
        auto r = min_rayleigh(form(o), tol);
        row.lambda = r.lambda;
        row.residual = r.residual;
        row.converged = r.converged;
        o.tmax = 2.0 * base.tmax;
        row.lambda_2tmax = min_rayleigh(form(o), tol).lambda;
        out.push_back(row);
    }
    return out;
}

}  // namespace hl
