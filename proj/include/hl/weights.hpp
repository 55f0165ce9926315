#pragma once

#include <string>
#include <vector>

namespace hl {

// Singular weights on radii in (0,1). Every weight except wang-ye carries a
// factor r^-2, so evaluation goes through the log radius s = -ln r and the
// scaled value r^2 V(r), which stays representable where V itself overflows.
enum class PotentialKind {
    LerayQuarter,       // 1/(4 r^2 ln^2 r)
    LerayNormalized,    // 1/(r^2 ln^2 r)
    WangYe,             // (1-r^2)^-2
    Tintarev,           // LerayQuarter / max(sqrt(-ln r), 1)
    PsaradakisSpector,  // 1/(4 r^2 (1-ln r)^2)
    Remainder2,
    RemainderQ,
    IteratedLogSeries,
    Custom,
};

struct PotentialSpec {
    PotentialKind kind = PotentialKind::LerayNormalized;
    double q = 0.0;  // RemainderQ exponent, q > 2
    int K = 0;       // IteratedLogSeries depth, K >= 2
    // Custom: strictly increasing radii in (0,1) with values; interpolation is
    // linear in ln ln(1/r).
    std::vector<double> tab_r, tab_v;

    static PotentialSpec of(PotentialKind k) {
        PotentialSpec p;
        p.kind = k;
        return p;
    }
    static PotentialSpec leray_quarter() { return of(PotentialKind::LerayQuarter); }
    static PotentialSpec leray() { return of(PotentialKind::LerayNormalized); }
    static PotentialSpec v1() { return of(PotentialKind::WangYe); }
    static PotentialSpec v2() { return of(PotentialKind::Tintarev); }
    static PotentialSpec v3() { return of(PotentialKind::PsaradakisSpector); }
    static PotentialSpec rem2() { return of(PotentialKind::Remainder2); }
    static PotentialSpec remq(double q);
    static PotentialSpec iterlog(int K);
    static PotentialSpec custom(std::vector<double> r, std::vector<double> v);

    // Names: leray, leray4, v1, v2, v3, rem2, remq:<q>, iterlog:<K>.
    static PotentialSpec parse(const std::string& name);
    std::string name() const;

    // Open radius interval where the weight is defined; v3 also accepts r = 1.
    double domain_lo() const;
    double domain_hi() const;
    bool closed_at_one() const { return kind == PotentialKind::PsaradakisSpector; }
    // Points in s = -ln r where the weight is not smooth.
    std::vector<double> kinks_s() const;
};

// V(r). Throws DomainError outside the domain; returns +inf when the value is
// not representable.
double eval_potential(const PotentialSpec& spec, double r);

// r^2 V(r) at r = exp(-s), for s > 0 (s = 0 allowed for v3).
double scaled_potential(const PotentialSpec& spec, double s);

// Chain X_1(r), ..., X_k(r) with X_1(r) = 1/ln(e/r), X_j = X_1(X_{j-1}).
std::vector<double> iterated_log(int k, double r);
// Same chain from s = -ln r (no loss for tiny radii).
std::vector<double> iterated_log_s(int k, double s);

// (1/4) r^-2 sum_{i=2}^K prod_{j<=i} X_j(r)^2
double remainder_series_weight(double r, int K);

}  // namespace hl
