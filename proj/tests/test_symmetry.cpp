#include <doctest.h>

#include <cmath>
#include <vector>

#include "hl/errors.hpp"
#include "hl/symmetry.hpp"
#include "support.hpp"

using namespace hl;
using hl::test::pi;
using hl::test::radial_u;
using hl::test::rel;

namespace {

RadialProfile linear_r(double R) {
    return radial_u([](double r) { return r; }, [](double) { return 1.0; }, 0.0, R);
}

RadialProfile nonneg(std::uint64_t seed, double r_max = 1.0) {
    RandomProfileOptions o;
    o.nonnegative = true;
    o.r_max = r_max;
    o.forced_bumps = 3;
    return random_profile(seed, o);
}

// composite Simpson on [a, b] with n (even) intervals
template <class F>
double simpson(F f, double a, double b, int n) {
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// 2 (1 + ln s) s = (1 + q/2)(2 + ln s), s > 1
double rq_oracle(double q) {
    auto g = [q](double s) { return 2 * s * (1 + std::log(s)) - (1 + q / 2) * (2 + std::log(s)); };
    double a = 1.0, b = 100.0;
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (a + b);
        (g(m) < 0 ? a : b) = m;
    }
    return std::exp(-0.5 * (a + b));
}

PolarField mode_field(std::function<double(double)> g, std::function<double(double)> dg, int m) {
    double c = 1.0 / std::sqrt(pi);
    PolarField f;
    f.f = [=](double r, double t) { return c * g(r) * std::cos(m * t); };
    f.f_r = [=](double r, double t) { return c * dg(r) * std::cos(m * t); };
    f.f_theta = [=](double r, double t) { return -c * m * g(r) * std::sin(m * t); };
    return f;
}

double g1(double r) { return r * (1 - r); }
double dg1(double r) { return 1 - 2 * r; }

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("rearrangement of u = r") {
    auto us = rearrange(linear_r(1.0));
    for (double r : {1e-9, 0.1, 0.5, 0.8, 0.99}) CHECK(std::fabs(us.u_r(r) - std::sqrt(1 - r * r)) < 1e-10);
}

TEST_CASE("constants and decreasing profiles are fixed") {
    auto c = radial_u([](double) { return 2.5; }, [](double) { return 0.0; }, 0.0, 0.6);
    auto cs = rearrange(c);
    for (double r : {0.01, 0.3, 0.59}) CHECK(cs.u_r(r) == doctest::Approx(2.5).epsilon(1e-14));
    auto d = radial_u([](double r) { return 1 - r * r; }, [](double r) { return -2 * r; }, 0.0, 1.0);
    auto ds = rearrange(d);
    for (double r = 0.01; r < 1.0; r += 0.03) CHECK(std::fabs(ds.u_r(r) - (1 - r * r)) < 1e-6);
    auto ps = check_polya_szego(d);
    CHECK(ps.holds);
    CHECK(rel(ps.lhs, ps.rhs) < 1e-5);
}

TEST_CASE("polya-szego on u = r is the boundary-singular case") {
    auto ps = check_polya_szego(linear_r(1.0));
    CHECK(ps.boundary_singular);
    double R = 0.99;
    CHECK(rel(ps.lhs, 2 * pi * (-R * R / 2 - 0.5 * std::log(1 - R * R))) < 1e-8);
    CHECK(rel(ps.rhs, pi * R * R) < 1e-12);
}

TEST_CASE("hardy-littlewood on u = r with V3") {
    auto h = check_hardy_littlewood(linear_r(0.9), PotentialSpec::v3(), 2.0);
    CHECK(h.holds);
    // lhs: 2 pi int_0^0.9 r^3 V3 dr; rhs: u* = sqrt(0.81 - r^2), in s = -ln r
    double lhs = 2 * pi * simpson([](double r) { return r <= 0 ? 0.0 : r / (4 * std::pow(1 - std::log(r), 2)); }, 0.0, 0.9, 200000);
    double s0 = -std::log(0.9);
    double rhs = 2 * pi * simpson([](double s) { return (0.81 - std::exp(-2 * s)) / (4 * (1 + s) * (1 + s)); }, s0, 60.0, 200000);
    rhs += 2 * pi * 0.81 / (4 * 61.0);
    CHECK(rel(h.lhs, lhs) < 1e-6);
    CHECK(rel(h.rhs, rhs) < 1e-6);
}

TEST_CASE("constant weight gives equality") {
    auto one = PotentialSpec::custom({1e-300, 0.999}, {1.0, 1.0});
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RandomProfileOptions o;
        o.nonnegative = true;
        o.r_max = 0.95;
        auto u = random_profile(seed, o);
        auto h = check_hardy_littlewood(u, one, 2.0);
        CHECK(std::fabs(h.lhs - h.rhs) <= 1e-8 * std::max(1.0, h.rhs));
    }
}

TEST_CASE("equimeasurability") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto u = nonneg(seed);
        auto s = sample_radial(u);
        auto us = rearrange(u);
        double top = *std::max_element(s.v.begin(), s.v.end());
        if (top <= 0) continue;
        for (int k = 0; k < 20; ++k) {
            double lam = top * (k + 0.5) / 20;
            CHECK(std::fabs(s.area_above(lam) - superlevel_area(us, lam)) <= 1e-8 * pi * s.R() * s.R());
        }
    }
}

TEST_CASE("rearrangement is idempotent and order preserving") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto u = nonneg(seed, 0.9);
        auto us = rearrange(u);
        auto uss = rearrange(us);
        auto nodes = sample_radial(us);
        for (std::size_t i = 1; i < nodes.r.size(); ++i)
            CHECK(std::fabs(uss.u_r(nodes.r[i]) - nodes.v[i]) <= 1e-8 * (1 + nodes.v[0]));

        auto w = nonneg(seed + 1000, 0.9);
        auto v = radial_u([&](double r) { return u.u_r(r) + w.u_r(r); },
                          [&](double r) { return -(u.du_ds_x(u.x_of_s(-std::log(r))) + w.du_ds_x(w.x_of_s(-std::log(r)))) / r; },
                          std::min(u.r_lo(), w.r_lo()), std::max(u.r_hi(), w.r_hi()));
        v.breaks.clear();
        for (const auto* p : {&u, &w}) {
            v.breaks.push_back(p->s_of_x(p->xa));
            v.breaks.push_back(p->s_of_x(p->xb));
            for (double b : p->breaks) v.breaks.push_back(p->s_of_x(b));
        }
        std::sort(v.breaks.begin(), v.breaks.end());
        auto vs = rearrange(v, 8192);
        auto us2 = rearrange(u, 8192);
        for (double r = 0.005; r < 0.9; r += 0.005) CHECK(us2.u_r(r) <= vs.u_r(r) + 1e-3);
    }
}

TEST_CASE("polya-szego and hardy-littlewood on seeded profiles") {
    auto V = PotentialSpec::v3();
    int ps_ok = 0, hl_ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto u = nonneg(seed);
        ps_ok += check_polya_szego(u).holds;
        hl_ok += check_hardy_littlewood(u, V, 2.0).holds;
    }
    CHECK(ps_ok == 100);
    CHECK(hl_ok == 100);
}

TEST_CASE("negative input and increasing weight are refused") {
    RandomProfileOptions o;
    o.forced_bumps = 4;
    bool saw = false;
    for (std::uint64_t seed = 1; seed < 40 && !saw; ++seed) {
        auto u = random_profile(seed, o);
        bool neg = false;
        for (double v : u.values) neg = neg || v < -1e-6;
        if (!neg) continue;
        CHECK_THROWS_AS(rearrange(u), NegativeInput);
        saw = true;
    }
    CHECK(saw);
    CHECK_THROWS_AS(check_hardy_littlewood(nonneg(3), PotentialSpec::leray(), 2.0), MonotonicityViolation);
}

TEST_CASE("r_q and envelopes") {
    for (double q : {3.0, 4.0, 8.0}) {
        double rq = r_q(q);
        CHECK(rel(rq, rq_oracle(q)) < 1e-10);
        auto V = PotentialSpec::remq(q);
        CHECK(eval_potential(V, 0.999 * rq) > eval_potential(V, rq));
        CHECK(eval_potential(V, 1.01 * rq) > eval_potential(V, rq));

        double R = std::exp(-1.0);
        auto env = envelope_decompose(q, rq, R);
        CHECK(env.c_q > 0.0);
        CHECK(env.c_q < 1.0);
        double up = INFINITY, lo = INFINITY;
        for (int i = 1; i <= 10000; ++i) {
            double r = R * i / 10001.0;
            double v = eval_potential(V, r);
            CHECK(env.lower(r) <= v * (1 + 1e-13));
            CHECK(v <= env.upper(r) * (1 + 1e-13));
            CHECK(env.upper(r) <= up);
            CHECK(env.lower(r) <= lo);
            CHECK(env.lower(r) >= env.c_q * env.upper(r) * (1 - 1e-13));
            up = env.upper(r);
            lo = env.lower(r);
        }
    }
    CHECK(r_q(4.0) == doctest::Approx(0.09872648439).epsilon(1e-9));
    CHECK_THROWS_AS(envelope_decompose(4.0, 0.5, 0.3), DomainError);
}

TEST_CASE("single angular mode") {
    auto ms = decompose_modes(mode_field(g1, dg1, 2), 4);
    for (double r : {0.1, 0.4, 0.8}) {
        CHECK(std::fabs(ms.cos_part(2, r) - g1(r)) < 1e-13);
        for (int m : {0, 1, 3, 4}) CHECK(std::fabs(ms.cos_part(m, r)) < 1e-13);
        for (int m = 1; m <= 4; ++m) CHECK(std::fabs(ms.sin_part(m, r)) < 1e-13);
    }
    CHECK(ms.parseval_residual < 1e-10);
    CHECK_FALSE(ms.alias_warning);
}

TEST_CASE("radial field and finite expansions") {
    auto rad = mode_field(g1, dg1, 0);
    auto ms = decompose_modes(rad, 3);
    for (double r : {0.2, 0.7}) {
        CHECK(std::fabs(ms.cos_part(0, r) - g1(r) * std::sqrt(2.0)) < 1e-13);
        for (int m = 1; m <= 3; ++m) CHECK(std::fabs(ms.cos_part(m, r)) < 1e-13);
    }
    auto id = mode_energy_identity(rad, 3);
    CHECK(id.residual < 1e-8);

    PolarField two;
    two.f = [](double r, double t) { return g1(r) * std::cos(t) + r * g1(r) * std::cos(3 * t); };
    two.f_r = [](double r, double t) { return dg1(r) * std::cos(t) + (g1(r) + r * dg1(r)) * std::cos(3 * t); };
    two.f_theta = [](double r, double t) { return -g1(r) * std::sin(t) - 3 * r * g1(r) * std::sin(3 * t); };
    auto m2 = decompose_modes(two, 5);
    for (double r : {0.3, 0.6}) {
        CHECK(std::fabs(m2.cos_part(1, r) - std::sqrt(pi) * g1(r)) < 1e-12);
        CHECK(std::fabs(m2.cos_part(3, r) - std::sqrt(pi) * r * g1(r)) < 1e-12);
        for (int m : {0, 2, 4, 5}) CHECK(std::fabs(m2.cos_part(m, r)) < 1e-12);
    }
}

TEST_CASE("mode energy identity") {
    auto id = mode_energy_identity(mode_field(g1, dg1, 1), 4);
    CHECK(id.residual < 1e-6);
    // 2 pi int ((1-2r)^2 + (1-r)^2) r dr / 2 for the normalized cos mode
    CHECK(id.lhs == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("centrifugal term scales with m squared") {
    auto a = decompose_modes(mode_field(g1, dg1, 2), 8);
    auto b = decompose_modes(mode_field(g1, dg1, 4), 8);
    CHECK(rel(mode_term(b, 4, true), 4 * mode_term(a, 2, true)) < 1e-10);
}

TEST_CASE("top mode carrying energy raises the alias warning") {
    auto ms = decompose_modes(mode_field(g1, dg1, 3), 3);
    CHECK(ms.alias_warning);
}

}
