#pragma once

#include <string>

namespace hl {

struct RadialProfile;
struct QuadOptions;

// tau0 = (1 - sqrt(1+4mu))/2, the root of tau^2 - tau - mu = 0 below 1/2.
double tau0_of(double mu);

struct SpectralConstants {
    double mu = 0.0;
    double tau0 = 0.0;
    double sigma = 1.0;  // sqrt(1+4mu) = 1 - 2 tau0
    double nu = 0.0;     // NaN at mu = -1/4
    double m = 0.0;      // 4 pi sqrt(1+4mu)
    bool nu_defined = true;
};

SpectralConstants constants_for(double mu);

// f_mu(sigma) = sigma^2 / (2 sigma + 2 tau0 - 1)
double f_mu(double mu, double sigma);

enum class GaugeKind { Identity, A, B, C };

// Coordinate change r <-> t plus gauge factor omega. All maps go through the
// log radius s = -ln r.
//   A(alpha, mu): t = 2(alpha + s), omega = (alpha + s)^tau0
//   B(mu, shift): t = 2s - shift,    omega = s^tau0
//   C:            s = (e^t - 1)/2,   omega = s^(1/2)
//   Identity:     t = r,             omega = 1
struct Gauge {
    GaugeKind kind = GaugeKind::Identity;
    double alpha = 0.0;
    double mu = 0.0;
    double tau = 0.0;
    double shift = 0.0;

    static Gauge identity() { return {}; }
    static Gauge A(double alpha, double mu);
    static Gauge B(double mu, double shift = 0.0);
    static Gauge C();
    // gaugeA:<alpha>, gaugeB, gaugeC, id. mu is needed for A and B.
    static Gauge parse(const std::string& name, double mu);
    std::string name() const;
    bool same_as(const Gauge& o) const;

    double s_of_t(double t) const;
    double t_of_s(double s) const;
    double ds_dt(double t) const;  // absolute value
    double forward(double r) const;
    double inverse(double t) const;
    double t_lo() const;  // image of r = 1 (or r = 0 for Identity)
    double t_hi() const;

    // log-radius entering omega: alpha + s for A, s otherwise
    double s_gauge(double s) const { return kind == GaugeKind::A ? alpha + s : s; }
    double omega_s(double s) const;
    double dlog_omega_ds(double s) const;
    double omega(double r) const;
    // density of the gauge-frame energy in t: 2 pi omega^2 / |ds/dt|
    double energy_weight(double t) const;
    // the radial form the gauge diagonalizes has potential 1/(r^2 s_gauge^2)
    bool singular_at_one() const;
};

// w(t) = u(r(t)) / omega(r(t)) with chain-rule derivative.
RadialProfile push(const RadialProfile& u, const Gauge& g);
// u-frame profile from a w-frame one.
RadialProfile pull(const RadialProfile& w);

// |I_mu(u) - RHS(gauge)| / max(1, |I_mu(u)|), RHS being the gauge-frame
// energy. For GaugeA the left side uses the potential 1/(r^2 (alpha - ln r)^2)
// that the substitution diagonalizes; at alpha = 0 this is the Leray form.
double energy_identity_residual(const RadialProfile& u, const Gauge& g, double mu, const QuadOptions& opt);
double energy_identity_residual(const RadialProfile& u, const Gauge& g, double mu);

}  // namespace hl
