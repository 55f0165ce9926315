#include "hl/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "hl/errors.hpp"

namespace hl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.0};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Map from the unit parameter y to x on one initial panel.
enum class MapKind { Linear, SingLo, SingHi, Infinite };

struct Map {
    MapKind kind;
    double a, b;  // panel edges (b unused for Infinite)
    double x(double y) const {
        switch (kind) {
            case MapKind::Linear: return a + (b - a) * y;
            case MapKind::SingLo: return a + (b - a) * (y * y) * (y * y);
            case MapKind::SingHi: {
                double v = 1.0 - y;
                return b - (b - a) * (v * v) * (v * v);
            }
            case MapKind::Infinite: return a + (1.0 - y) / y;
        }
        return a;
    }
    double jac(double y) const {
        switch (kind) {
            case MapKind::Linear: return b - a;
            case MapKind::SingLo: return 4.0 * (b - a) * y * y * y;
            case MapKind::SingHi: {
                double v = 1.0 - y;
                return 4.0 * (b - a) * v * v * v;
            }
            case MapKind::Infinite: return 1.0 / (y * y);
        }
        return 0.0;
    }
};

struct Leaf {
    int map;
    double lo, hi;  // in y
    int depth;
    double val, err;
};

struct LeafOrder {
    bool operator()(const Leaf& p, const Leaf& q) const {
        if (p.err != q.err) return p.err < q.err;
        if (p.map != q.map) return p.map > q.map;
        return p.lo > q.lo;
    }
};

void gk15(const Fn& f, const Map& m, Leaf& leaf) {
    double c = 0.5 * (leaf.lo + leaf.hi), h = 0.5 * (leaf.hi - leaf.lo);
    auto F = [&](double y) {
        double j = m.jac(y);
        if (j == 0.0) return 0.0;
        double v = f(m.x(y));
        return v == 0.0 ? 0.0 : v * j;
    };
    double fc = F(c);
    double k = wgk[7] * fc, g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double d = h * xgk[i];
        double s = F(c - d) + F(c + d);
        k += wgk[i] * s;
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    leaf.val = k * h;
    leaf.err = std::fabs((k - g) * h);
    if (!std::isfinite(leaf.val) || !std::isfinite(leaf.err)) leaf.err = kInf;
}

std::vector<Map> build_maps(double a, double b, const std::vector<double>& breaks, const QuadOptions& opt) {
    std::vector<double> e{a};
    std::vector<double> br(breaks);
    std::sort(br.begin(), br.end());
    for (double x : br)
        if (x > e.back() && x < b) e.push_back(x);
    bool inf = std::isinf(b);
    if (!inf) e.push_back(b);
    std::vector<Map> maps;
    size_t nfin = e.size() - 1;
    for (size_t i = 0; i < nfin; ++i) {
        int pieces = std::max(1, opt.presplit);
        double w = (e[i + 1] - e[i]) / pieces;
        for (int k = 0; k < pieces; ++k) {
            double lo = e[i] + k * w, hi = (k + 1 == pieces) ? e[i + 1] : e[i] + (k + 1) * w;
            MapKind kind = MapKind::Linear;
            if (opt.sing_lo && i == 0 && k == 0) kind = MapKind::SingLo;
            if (opt.sing_hi && !inf && i + 1 == nfin && k + 1 == pieces) kind = MapKind::SingHi;
            maps.push_back({kind, lo, hi});
        }
    }
    if (inf) maps.push_back({MapKind::Infinite, e.back(), kInf});
    return maps;
}

}  // namespace

QuadResult integrate(const Fn& f, double a, double b, const std::vector<double>& breaks, const QuadOptions& opt) {
    QuadResult res;
    if (!(b > a)) return res;
    if (std::isinf(a)) throw DomainError("integrate: lower limit must be finite");
    auto maps = build_maps(a, b, breaks, opt);

    std::priority_queue<Leaf, std::vector<Leaf>, LeafOrder> heap;
    std::vector<Leaf> done;
    double total = 0.0, err = 0.0;
    for (int i = 0; i < static_cast<int>(maps.size()); ++i) {
        Leaf l{i, 0.0, 1.0, 0, 0.0, 0.0};
        gk15(f, maps[i], l);
        total += std::isfinite(l.val) ? l.val : 0.0;
        err += l.err;
        heap.push(l);
    }
    int count = static_cast<int>(maps.size());
    double done_err = 0.0;
    while (!heap.empty()) {
        double target = std::max(opt.tol * std::fabs(total), opt.abs_tol);
        if (err <= target) break;
        // leaves stuck at max depth dominate: further splitting cannot help
        if (done_err > 0.0 && err - done_err <= std::max(target - done_err, 1e-3 * done_err)) break;
        Leaf l = heap.top();
        heap.pop();
        if (l.depth >= opt.max_depth || count >= opt.max_panels) {
            done.push_back(l);
            done_err += l.err;
            if (count >= opt.max_panels) break;
            continue;
        }
        double mid = 0.5 * (l.lo + l.hi);
        Leaf p{l.map, l.lo, mid, l.depth + 1, 0, 0}, q{l.map, mid, l.hi, l.depth + 1, 0, 0};
        gk15(f, maps[l.map], p);
        gk15(f, maps[l.map], q);
        total += (std::isfinite(p.val) ? p.val : 0.0) + (std::isfinite(q.val) ? q.val : 0.0) -
                 (std::isfinite(l.val) ? l.val : 0.0);
        err += p.err + q.err - l.err;
        if (std::isinf(l.err)) {
            err = 0.0;  // recompute after an infinite estimate left the sum
            std::vector<Leaf> tmp;
            while (!heap.empty()) {
                tmp.push_back(heap.top());
                heap.pop();
            }
            for (auto& t : tmp) {
                err += t.err;
                heap.push(t);
            }
            for (auto& t : done) err += t.err;
            err += p.err + q.err;
        }
        heap.push(p);
        heap.push(q);
        ++count;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    // fixed summation order for bit-stable results
    std::sort(done.begin(), done.end(), [](const Leaf& p, const Leaf& q) {
        return p.map != q.map ? p.map < q.map : p.lo < q.lo;
    });
    res.value = 0.0;
    res.error = 0.0;
    for (const auto& l : done) {
        res.value += l.val;
        res.error += l.err;
    }
    res.panels = static_cast<int>(done.size());
    double target = std::max(opt.tol * std::fabs(res.value), opt.abs_tol);
    res.converged = std::isfinite(res.value) && res.error <= target * (1.0 + 1e-12);
    return res;
}

QuadResult integrate_strict(const Fn& f, double a, double b, const std::vector<double>& breaks,
                            const QuadOptions& opt) {
    auto r = integrate(f, a, b, breaks, opt);
    if (!r.converged)
        throw NoConvergence("integral on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] stalled at error " + std::to_string(r.error) + " for value " +
                            std::to_string(r.value));
    return r;
}

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

namespace {

// log of the integral with g taken linear between n+1 equispaced samples;
// used where exp(g - max) is not resolvable by any quadrature node
double log_linear(const Fn& g, double lo, double hi, int n) {
    double h = (hi - lo) / n, out = -kInf;
    double a = g(lo);
    for (int i = 1; i <= n; ++i) {
        double b = g(i == n ? hi : lo + i * h);
        if (!std::isnan(a) && !std::isnan(b) && std::max(a, b) > -kInf) {
            double d = std::fabs(b - a), m = std::max(a, b);
            double f = d < 1e-8 ? std::log1p(-0.5 * d) : std::log(-std::expm1(-d)) - std::log(d);
            out = log_add(out, std::log(h) + m + f);
        }
        a = b;
    }
    return out;
}

void log_panel(const Fn& g, double lo, double hi, const QuadOptions& opt, int level, double& acc_log,
               double& acc_err, bool& ok) {
    const int ns = 64;
    double M = -kInf, m = kInf;
    bool inf = std::isinf(hi);
    for (int i = 0; i < ns; ++i) {
        double y = (i + 0.5) / ns;
        double x = inf ? lo + (1.0 - y) / y : lo + (hi - lo) * y;
        double v = g(x);
        if (std::isnan(v)) continue;
        M = std::max(M, v);
        m = std::min(m, v);
    }
    if (!inf) {
        for (double x : {lo, hi}) {
            double v = g(x);
            if (!std::isnan(v)) {
                M = std::max(M, v);
                m = std::min(m, v);
            }
        }
    }
    if (M == -kInf) return;
    // bounded by (hi - lo) e^M, far below what is already accumulated
    if (!inf && M + std::log(hi - lo) < acc_log - 50.0) return;
    // exponent varies by more than any quadrature can follow; the log-linear
    // estimate is off by O(ln |g'|), negligible against M here
    if (!inf && M > 1e6 && M - m > 1e4) {
        double lv = log_linear(g, lo, hi, 4096);
        acc_log = log_add(acc_log, lv);
        acc_err = log_add(acc_err, lv);
        return;
    }
    Fn h = [&](double x) {
        double v = g(x) - M;
        return v < -745.0 ? 0.0 : std::exp(v);
    };
    auto r = integrate(h, lo, hi, {}, opt);
    if (!std::isfinite(r.value) && level < 6 && !inf) {
        double w = (hi - lo) / 8.0;
        for (int k = 0; k < 8; ++k) {
            QuadOptions o = opt;
            o.sing_lo = opt.sing_lo && k == 0;
            o.sing_hi = opt.sing_hi && k == 7;
            log_panel(g, lo + k * w, k == 7 ? hi : lo + (k + 1) * w, o, level + 1, acc_log, acc_err, ok);
        }
        return;
    }
    if (!(r.value > 0.0) || !std::isfinite(r.value)) {
        // peak narrower than the node spacing
        double lv = log_linear(g, lo, hi, 4096);
        if (lv > -kInf) {
            acc_log = log_add(acc_log, lv);
            acc_err = log_add(acc_err, lv);
        }
        return;
    }
    if (!r.converged) ok = false;
    double lv = M + std::log(r.value);
    double le = M + std::log(std::max(r.error, 1e-300));
    acc_log = log_add(acc_log, lv);
    acc_err = log_add(acc_err, le);
}

}  // namespace

LogQuadResult integrate_log(const Fn& g, double a, double b, const std::vector<double>& breaks,
                            const QuadOptions& opt) {
    LogQuadResult res;
    std::vector<double> e{a};
    std::vector<double> br(breaks);
    std::sort(br.begin(), br.end());
    for (double x : br)
        if (x > e.back() && x < b) e.push_back(x);
    e.push_back(b);
    double acc = -kInf, accerr = -kInf;
    bool ok = true;
    for (size_t i = 0; i + 1 < e.size(); ++i) {
        QuadOptions o = opt;
        o.sing_lo = opt.sing_lo && i == 0;
        o.sing_hi = opt.sing_hi && i + 2 == e.size();
        log_panel(g, e[i], e[i + 1], o, 0, acc, accerr, ok);
    }
    res.log_value = acc;
    res.rel_error = acc == -kInf ? 0.0 : std::exp(accerr - acc);
    res.converged = ok;
    return res;
}

}  // namespace hl
