#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hl/integrate.hpp"
#include "hl/transforms.hpp"

namespace hl {

enum class Frame { U, W };

// Radial trial function. The closures take the native variable x:
//   U-frame: x = s = -ln r (so radii below 1e-308 stay reachable)
//   W-frame: x = t of the attached gauge
// f is the value, df its derivative in x. Outside [xa, xb] the profile is 0.
// xb = +inf means the profile keeps following f for all large x; tail_a is
// then the exponent a with u ~ c s^a in the u-frame (used to decide whether
// energy integrals diverge).
struct RadialProfile {
    Frame frame = Frame::U;
    Gauge gauge;
    Fn f, df;
    double xa = 0.0, xb = 0.0;
    std::vector<double> breaks;  // non-smooth points in x
    bool sing_lo = false;        // derivative blows up (integrably) at xa
    double tail_a = 0.0;
    double offset = 0.0;  // centre of a translated bump (|x0|), 0 for centred
    std::string family;
    std::vector<std::pair<std::string, double>> params;
    std::vector<double> nodes, values;  // samples on a grid containing breaks

    double w(double x) const;
    double dw(double x) const;
    bool infinite() const;

    double s_of_x(double x) const;
    double x_of_s(double s) const;
    double ds_dx(double x) const;  // absolute value
    // u-frame value and d/ds at native x
    double u_x(double x) const;
    double du_ds_x(double x) const;
    // u-frame value at radius r
    double u_r(double r) const;
    double u_s(double s) const;
    // support in r
    double r_lo() const;
    double r_hi() const;

    void sample(int n);
    RadialProfile scaled(double c) const;
    double param(const std::string& key) const;
};

// Explicit 1-D minimizer for the weighted energy (1/(1-2tau0)) int w'^2 t^(2tau0)
// over t > 2 with w(2) = 0, w(t1) = 1 after normalization. Attached to GaugeA
// with alpha = 1, whose t-range starts at 2.
RadialProfile zeta_t1(double t1, double tau0, int nodes = 4096);
// (1/(1-2 tau0)) int_2^inf w'^2 t^(2 tau0) dt
double j_t1_energy(const RadialProfile& z, const QuadOptions& opt = {});

RadialProfile moser_family(int n, double mu, int nodes = 4096);
// quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0,1], and its derivative
double smoothstep(double x);
double smoothstep_d(double x);
RadialProfile cutoff_eta(double kappa, int nodes = 4096);
struct WkappaConstants {
    double b1, b2;
};
WkappaConstants wkappa_constants(double kappa);
RadialProfile wkappa_family(double kappa, int nodes = 4096);

enum class Ramp { FourPiece, Linear };
// Off-centre bump in t = -2 ln|x - x0|. FourPiece is the stated 0; 2x-1/2; x; 1
// ramp. Linear ramps from the bump edge t0 to the plateau at t = n.
RadialProfile plateau_family(int n, Ramp ramp = Ramp::FourPiece, double t0 = 2.0, double x0 = 0.0,
                             int nodes = 4096);
// 4 pi int w'^2 dt
double plateau_energy(const RadialProfile& p, const QuadOptions& opt = {});

// t_eps from a target eps: the shift puts the support inside r <= r_eps with
// r_eps = eps (so t_eps = -2 ln eps).
double default_t_eps(double eps = 1e-2);
RadialProfile concentrating_family(int n, double mu, double t_eps, int nodes = 4096);

// quintic cutoff: 1 below 1/2, 0 above 1
double eta0(double x);
double eta0_d(double x);
RadialProfile h0_profile(int nodes = 4096);

enum class Smoothness { PiecewiseLinear, SmoothBumps };
struct RandomProfileOptions {
    Frame frame = Frame::U;
    Smoothness smooth = Smoothness::PiecewiseLinear;
    double r_max = 1.0;  // support stays strictly inside B_{r_max}
    int max_bumps = 6;
    int forced_bumps = -1;  // >= 0 overrides the random count
    bool nonnegative = false;
};
RadialProfile random_profile(std::uint64_t seed, const RandomProfileOptions& opt = {});

// Deterministic 64-bit stream (splitmix64) with doubles from the top 53 bits,
// identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();                      // [0,1)
    double uniform(double a, double b);    // [a,b)
    int integer(int lo, int hi);           // inclusive
private:
    std::uint64_t state_;
};
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

}  // namespace hl
