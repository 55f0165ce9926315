#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hl/profiles.hpp"
#include "hl/weights.hpp"

namespace hl {

// Piecewise-linear-in-r interpolant of a radial profile on [0, R].
struct RadialSamples {
    std::vector<double> r, v;
    double R() const { return r.back(); }
    double value(double rho) const;
    // |{u > lambda}| in the plane, exact for the interpolant
    double area_above(double lambda) const;
    // int |grad u|^2 over B_rc (rc = R by default), exact for the interpolant
    double dirichlet(double rc = -1.0) const;
};

// r nodes uniform on [0, r_hi] plus the images of the profile breakpoints.
RadialSamples sample_radial(const RadialProfile& u, int M = 2048);

// Symmetric decreasing rearrangement of the interpolant. The distribution
// function is quadratic in lambda between consecutive node levels, so u* is
// stored exactly: per level band the quadratic is inverted, plateaus of u give
// flat pieces of u*.
struct Rearranged {
    struct Band {
        double rho_lo, rho_hi;  // radii covered
        double lam_lo, lam_hi;  // levels (lam_hi at rho_lo)
        double c0, c1, c2;      // area(lambda) = c0 + c1 l + c2 l^2; flat when c1=c2=0 and lam_lo=lam_hi
    };
    std::vector<Band> bands;  // sorted by rho
    double R = 0.0, top = 0.0;
    double value(double rho) const;
    double slope(double rho) const;  // d u*/d rho
};
std::shared_ptr<const Rearranged> rearrange_samples(const RadialSamples& s);
RadialProfile rearranged_profile(std::shared_ptr<const Rearranged> rs);
RadialProfile rearrange(const RadialProfile& u, int M = 2048);

// |{u* > lambda}| from a nonincreasing profile, by bisection on the radius
double superlevel_area(const RadialProfile& ustar, double lambda);

struct PolyaSzego {
    double lhs = 0.0, rhs = 0.0;  // int |grad u*|^2, int |grad u|^2
    bool holds = false;
    bool boundary_singular = false;  // u does not vanish at the edge; compared on B_{0.99 R}
};
PolyaSzego check_polya_szego(const RadialProfile& u, int M = 2048, double tol = 1e-8);

struct HardyLittlewood {
    double lhs = 0.0, rhs = 0.0;  // int u^q V, int (u*)^q V
    bool holds = false;
};
HardyLittlewood check_hardy_littlewood(const RadialProfile& u, const PotentialSpec& V, double q, int M = 2048,
                                       double tol = 1e-8);

// largest radius below which the RemainderQ weight is nonincreasing
double r_q(double q);

struct Envelope {
    double q = 0.0, rq = 0.0, R = 0.0;
    double r_hat = 0.0;
    double v_hat = 0.0;  // V(r_hat)
    double v_min = 0.0;  // min of V on [rq, R]
    double v_max = 0.0;  // max of V on [rq, R]
    double c_q = 0.0;
    PotentialSpec V;
    double upper(double r) const;
    double lower(double r) const;
};
// flat extensions of V = RemainderQ(q) on (0, R); r_hat is the leftmost node of a
// uniform grid on (0, rq) with V(r_hat) >= max over [rq, R]
Envelope envelope_decompose(double q, double rq, double R, int grid = 4096);

// f on the disk in polar coordinates, with optional partial derivatives
struct PolarField {
    std::function<double(double, double)> f, f_r, f_theta;
};

struct ModeSet {
    int M = 0;
    int n_theta = 0;
    PolarField field;
    // coefficient of h_m: cos part (m >= 0) and sin part (m >= 1), orthonormal
    // basis h_0 = 1/sqrt(2 pi), cos(m t)/sqrt(pi), sin(m t)/sqrt(pi)
    double cos_part(int m, double r) const;
    double sin_part(int m, double r) const;
    double cos_part_dr(int m, double r) const;
    double sin_part_dr(int m, double r) const;
    // sum_m |u_m(r)|^2 against int f(r, .)^2 at the sampled radii
    double parseval_residual = 0.0;
    bool alias_warning = false;
    std::vector<double> mode_energy;  // int |u_m|^2 r dr per m
    double scale = 0.0;               // rough H^1 size of the field
};
ModeSet decompose_modes(const PolarField& f, int M, int n_theta = 0);
// int (u_m'^2 + m^2 u_m^2/r^2) r dr, cos and sin parts together
double mode_term(const ModeSet& ms, int m, bool centrifugal_only = false);

struct ModeIdentity {
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
};
ModeIdentity mode_energy_identity(const PolarField& f, int M, int n_theta = 0);

}  // namespace hl
