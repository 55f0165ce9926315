#pragma once

#include <string>
#include <vector>

#include "hl/integrate.hpp"
#include "hl/profiles.hpp"
#include "hl/weights.hpp"

namespace hl {

// Integral of G(x) dx over the support of P in its native variable, honouring
// the profile's breakpoints and endpoint singularity. An infinite support is
// split at the last breakpoint and the remainder is integrated in y with
// x = x_end + e^y - 1.
// Extra panel edges (in x) can be passed for kinks of G itself.
QuadResult integrate_over(const RadialProfile& P, const Fn& G, const QuadOptions& opt = {},
                          const std::vector<double>& extra_breaks = {});

struct EnergyReport {
    double mu = 0.0;
    double dirichlet = 0.0;       // int |grad u|^2 dx
    double potential_term = 0.0;  // int V u^2 dx (V = 1/(r^2 ln^2 r) unless given)
    double deficit = 0.0;         // dirichlet + mu * potential_term
    double moser_log = 0.0;       // ln int_{B_1} exp(alpha |u|^p) dx, when requested
    double abs_error_estimate = 0.0;
    bool deficit_from_gauge = false;  // both terms diverge; deficit taken in a gauge frame
    std::string truncation_note;
};

// Leray deficit I_mu(u). For profiles whose two terms are finite the stored
// deficit is dirichlet + mu * potential_term; when they diverge (the h0
// direction) they are reported as +inf and the deficit comes from the gauge
// frame (B for mu > -1/4, C for mu = -1/4).
EnergyReport deficit(const RadialProfile& u, double mu, const QuadOptions& opt = {});
// Same with a general potential V in place of the Leray weight.
EnergyReport weighted_energy(const RadialProfile& u, double mu, const PotentialSpec* V, const QuadOptions& opt = {});
// Energy terms of u restricted to the annulus eps < |x| < 1 (u is cut at
// r = eps, not smoothed). Both terms are finite here even when the full
// ones diverge.
EnergyReport truncated_energy(const RadialProfile& u, double mu, double eps, const QuadOptions& opt = {});
// Gauge-frame energy int weight(t) w'(t)^2 dt of a w-frame profile.
QuadResult gauge_energy(const RadialProfile& w, const QuadOptions& opt = {});

struct MoserOptions {
    // Quarter-case gauge: raise (e^t-1)/2 to the power p instead of p/2,
    // i.e. use |(-ln r) w|^p. Only for comparison runs.
    bool full_power_quarter = false;
};
// ln int_{B_1} exp(alpha |u|^p) dx in log domain, plus the energy terms
// (potential V or Leray weight when V is null).
EnergyReport moser(const RadialProfile& u, double alpha, double p, const PotentialSpec* V, double mu,
                   const QuadOptions& opt = {}, const MoserOptions& mopt = {});
// just the log functional
double moser_log(const RadialProfile& u, double alpha, double p, const QuadOptions& opt = {},
                 const MoserOptions& mopt = {});

enum class RatioVariant { Thm11i, Thm11ii, Thm11iii, RImproved, EqnChange1 };
struct RatioSpec {
    RatioVariant variant = RatioVariant::Thm11i;
    double q = 4.0;  // Thm11ii / Thm11iii
    int K = 3;       // RImproved
    static RatioSpec parse(const std::string& name);  // thm11i, thm11ii:<q>, thm11iii:<q>, rimproved:<K>, eqnchange1
    std::string name() const;
};
struct RatioResult {
    double ratio = 0.0;
    double lhs = 0.0, rhs = 0.0;
    bool zero_denominator = false;
    double error = 0.0;
};
RatioResult remainder_ratio(const RadialProfile& u, const RatioSpec& v, const QuadOptions& opt = {});

// Pair of measures on (0,1) written in z = ln ln(1/s): log_gamma_z(z) is the
// log of the gamma density times |ds/dz| and log_nu_z(z) the log of the
// absolutely continuous nu density. Both live on [z_lo, z_hi]; outside it
// gamma vanishes and nu is infinite.
struct MeasurePair {
    double p = 2.0, q = 2.0;
    Fn log_gamma_z, log_nu_z;
    // optional simplified log of (dnu/ds)^(-1/(p-1)) |ds/dz|; the generic
    // combination cancels e^z against e^z and loses every digit for z > ~37
    Fn log_inner_z;
    double z_lo = 0.0, z_hi = 0.0;
};
MeasurePair origin_pair(double beta, double q);
MeasurePair boundary_pair(double beta, double q);

struct MazyaResult {
    double B = 0.0;
    double argmax_z = 0.0;
    double sandwich_hi = 0.0;  // B (q/(q-1))^((p-1)/p) q^(1/q)
    std::vector<double> z, gamma_factor, inner_factor, product;
};
MazyaResult mazya_B_z(const MeasurePair& pair, const std::vector<double>& z_grid, const QuadOptions& opt = {});
// grid given as radii in (0,1)
MazyaResult mazya_B(const MeasurePair& pair, const std::vector<double>& r_grid, const QuadOptions& opt = {});

}  // namespace hl
