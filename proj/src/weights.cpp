#include "hl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hl/errors.hpp"

namespace hl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(const std::string& text, const std::string& name) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw ConfigError("bad number in potential name '" + name + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad number in potential name '" + name + "'");
    }
}

// |ln ln(1/r)| correction with s = -ln r > 0
double loglog_factor(double s) { return 1.0 + std::fabs(std::log(s)); }

double custom_scaled(const PotentialSpec& spec, double s) {
    double r = std::exp(-s);
    const auto& R = spec.tab_r;
    if (r < R.front() || r > R.back())
        throw DomainError("custom potential queried outside its table at r=" + std::to_string(r));
    auto it = std::upper_bound(R.begin(), R.end(), r);
    size_t i = std::min<size_t>(std::max<ptrdiff_t>(it - R.begin(), 1) - 1, R.size() - 2);
    auto ll = [](double x) { return std::log(-std::log(x)); };
    double a = ll(R[i]), b = ll(R[i + 1]), x = std::log(s);
    double w = (b == a) ? 0.0 : (x - a) / (b - a);
    double v = spec.tab_v[i] + w * (spec.tab_v[i + 1] - spec.tab_v[i]);
    return v * r * r;
}

}  // namespace

PotentialSpec PotentialSpec::remq(double q) {
    if (!(q > 2.0)) throw DomainError("remq requires q > 2, got " + std::to_string(q));
    PotentialSpec p = of(PotentialKind::RemainderQ);
    p.q = q;
    return p;
}

PotentialSpec PotentialSpec::iterlog(int K) {
    if (K < 2) throw DomainError("iterlog requires K >= 2, got " + std::to_string(K));
    PotentialSpec p = of(PotentialKind::IteratedLogSeries);
    p.K = K;
    return p;
}

PotentialSpec PotentialSpec::custom(std::vector<double> r, std::vector<double> v) {
    if (r.size() < 2 || r.size() != v.size())
        throw DomainError("custom potential needs at least two (r, value) pairs");
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0 && r[i] < 1.0)) throw DomainError("custom abscissa must lie in (0,1)");
        if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("custom abscissa must be strictly increasing");
        if (!(v[i] >= 0.0) || !std::isfinite(v[i])) throw DomainError("custom values must be finite and >= 0");
    }
    PotentialSpec p = of(PotentialKind::Custom);
    p.tab_r = std::move(r);
    p.tab_v = std::move(v);
    return p;
}

PotentialSpec PotentialSpec::parse(const std::string& name) {
    if (name == "leray") return leray();
    if (name == "leray4") return leray_quarter();
    if (name == "v1") return v1();
    if (name == "v2") return v2();
    if (name == "v3") return v3();
    if (name == "rem2") return rem2();
    if (name.rfind("remq:", 0) == 0) return remq(parse_number(name.substr(5), name));
    if (name.rfind("iterlog:", 0) == 0) {
        double k = parse_number(name.substr(8), name);
        if (k != std::floor(k)) throw ConfigError("iterlog depth must be an integer");
        return iterlog(static_cast<int>(k));
    }
    throw ConfigError("unknown potential '" + name + "'");
}

std::string PotentialSpec::name() const {
    switch (kind) {
        case PotentialKind::LerayQuarter: return "leray4";
        case PotentialKind::LerayNormalized: return "leray";
        case PotentialKind::WangYe: return "v1";
        case PotentialKind::Tintarev: return "v2";
        case PotentialKind::PsaradakisSpector: return "v3";
        case PotentialKind::Remainder2: return "rem2";
        case PotentialKind::RemainderQ: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "remq:%g", q);
            return buf;
        }
        case PotentialKind::IteratedLogSeries: return "iterlog:" + std::to_string(K);
        case PotentialKind::Custom: return "custom";
    }
    return "?";
}

double PotentialSpec::domain_lo() const { return kind == PotentialKind::Custom ? tab_r.front() : 0.0; }
double PotentialSpec::domain_hi() const { return kind == PotentialKind::Custom ? tab_r.back() : 1.0; }

std::vector<double> PotentialSpec::kinks_s() const {
    switch (kind) {
        case PotentialKind::Remainder2:
        case PotentialKind::RemainderQ:
        case PotentialKind::Tintarev: return {1.0};
        case PotentialKind::Custom: {
            std::vector<double> k;
            for (auto it = tab_r.rbegin(); it != tab_r.rend(); ++it) k.push_back(-std::log(*it));
            return k;
        }
        default: return {};
    }
}

double scaled_potential(const PotentialSpec& spec, double s) {
    if (!(s >= 0.0)) throw DomainError("log radius must be >= 0");
    if (s == 0.0 && !spec.closed_at_one()) throw DomainError("weight is singular at r = 1");
    switch (spec.kind) {
        case PotentialKind::LerayQuarter: return 0.25 / (s * s);
        case PotentialKind::LerayNormalized: return 1.0 / (s * s);
        case PotentialKind::WangYe: {
            double d = -std::expm1(-2.0 * s);
            return std::exp(-2.0 * s) / (d * d);
        }
        case PotentialKind::Tintarev: return 0.25 / (s * s * std::max(std::sqrt(s), 1.0));
        case PotentialKind::PsaradakisSpector: return 0.25 / ((1.0 + s) * (1.0 + s));
        case PotentialKind::Remainder2: {
            double f = s * loglog_factor(s);
            return 1.0 / (f * f);
        }
        case PotentialKind::RemainderQ: return std::pow(s * loglog_factor(s), -(1.0 + 0.5 * spec.q));
        case PotentialKind::IteratedLogSeries: {
            auto X = iterated_log_s(spec.K, s);
            double prod = X[0] * X[0], sum = 0.0;
            for (int i = 1; i < spec.K; ++i) {
                prod *= X[i] * X[i];
                sum += prod;
            }
            return 0.25 * sum;
        }
        case PotentialKind::Custom: return custom_scaled(spec, s);
    }
    return 0.0;
}

double eval_potential(const PotentialSpec& spec, double r) {
    bool inside = r > spec.domain_lo() && (r < spec.domain_hi() || (r == 1.0 && spec.closed_at_one()));
    if (spec.kind == PotentialKind::Custom) inside = r >= spec.domain_lo() && r <= spec.domain_hi();
    if (!inside || !std::isfinite(r))
        throw DomainError("radius " + std::to_string(r) + " outside the domain of " + spec.name());
    double s = -std::log(r);
    double sc = scaled_potential(spec, s);
    double r2 = r * r;
    if (r2 > 0.0 && std::isnormal(r2)) {
        double v = sc / r2;
        return std::isfinite(v) ? v : kInf;
    }
    double lv = std::log(sc) + 2.0 * s;
    return lv > std::log(std::numeric_limits<double>::max()) ? kInf : std::exp(lv);
}

std::vector<double> iterated_log_s(int k, double s) {
    if (k < 1) throw DomainError("iterated_log requires k >= 1");
    if (!(s >= 0.0)) throw DomainError("iterated_log requires r in (0,1]");
    std::vector<double> X(k);
    double a = s;  // a_j = ln(1/X_{j-1}), a_1 = ln(1/r)
    for (int j = 0; j < k; ++j) {
        X[j] = 1.0 / (1.0 + a);
        a = std::log1p(a);
    }
    return X;
}

std::vector<double> iterated_log(int k, double r) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("iterated_log requires r in (0,1], got " + std::to_string(r));
    return iterated_log_s(k, -std::log(r));
}

double remainder_series_weight(double r, int K) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("remainder_series_weight requires r in (0,1)");
    return eval_potential(PotentialSpec::iterlog(K), r);
}

}  // namespace hl
