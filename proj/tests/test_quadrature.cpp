#include <doctest.h>

#include <cmath>
#include <vector>

#include "hl/errors.hpp"
#include "hl/profiles.hpp"
#include "hl/quadrature.hpp"
#include "hl/transforms.hpp"
#include "support.hpp"

using namespace hl;
using hl::test::pi;
using hl::test::rel;

namespace {

RadialProfile parabola() {
    return hl::test::radial_u([](double r) { return 1 - r * r; }, [](double r) { return -2 * r; }, 0.0, 1.0);
}

RadialProfile zero_profile() {
    RandomProfileOptions o;
    o.forced_bumps = 0;
    return random_profile(1, o);
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("dirichlet energy of 1 - r^2") {
    auto e = deficit(parabola(), 0.0);
    CHECK(rel(e.dirichlet, 2 * pi) < 1e-10);
    CHECK(e.deficit == e.dirichlet);
}

TEST_CASE("deficit is affine in mu") {
    auto u = random_profile(11);
    for (double mu : {-0.25, -0.1, 0.0, 0.4, 2.0}) {
        auto e = deficit(u, mu);
        CHECK(e.deficit == e.dirichlet + mu * e.potential_term);
    }
    auto a = deficit(u, -0.25), b = deficit(u, 0.75);
    CHECK(a.dirichlet == b.dirichlet);
    CHECK(a.potential_term == b.potential_term);
}

TEST_CASE("deficit of the pulled-back moser member matches its t-frame energy") {
    auto u = pull(moser_family(10, -0.1875));
    auto e = deficit(u, -0.1875);
    CHECK(std::fabs(e.deficit - 1.0) < 1e-6);
}

TEST_CASE("h0 direction: diverging terms, finite deficit") {
    auto e = deficit(h0_profile(), -0.25);
    CHECK(std::isinf(e.dirichlet));
    CHECK(e.deficit_from_gauge);
    CHECK(std::isfinite(e.deficit));
    CHECK_FALSE(e.truncation_note.empty());
    // the cut at r = eps adds the boundary term 2 pi w^2/2 = pi of the
    // ground-state substitution u = sqrt(s) w, w = 1 near the origin
    for (double eps : {1e-4, 1e-6, 1e-8}) CHECK(rel(truncated_energy(h0_profile(), -0.25, eps).deficit, e.deficit + pi) < 1e-9);
}

TEST_CASE("support touching r = 1 is refused for the Leray weight") {
    CHECK_THROWS_AS(deficit(hl::test::radial_u([](double) { return 1.0; }, [](double) { return 0.0; }, 0.1, 1.0), -0.25),
                    DomainError);
}

TEST_CASE("moser log of the zero function") {
    CHECK(rel(moser_log(zero_profile(), 4 * pi, 2.0), std::log(pi)) < 1e-14);
}

TEST_CASE("log-domain evaluation agrees with direct evaluation") {
    auto u = random_profile(17);
    for (double alpha : {0.5, 4.0, 20.0}) {
        double lg = moser_log(u, alpha, 2.0);
        // direct: pi r_lo^2 + (area outside the support) + int over the support
        QuadOptions o;
        o.tol = 1e-13;
        double inside = integrate_over(u, [&](double x) {
            double s = u.s_of_x(x), v = u.u_x(x);
            return 2 * pi * std::exp(alpha * v * v - 2 * s) * u.ds_dx(x);
        }, o).value;
        double r1 = u.r_lo(), r2 = u.r_hi();
        double direct = inside + pi * r1 * r1 + pi * (1 - r2 * r2);
        CHECK_MESSAGE(rel(std::exp(lg), direct) < 1e-10, "alpha=" << alpha);
    }
}

TEST_CASE("moser functional grows along blow-up families") {
    double a = 4 * pi * 1.1;
    CHECK(moser_log(plateau_family(100), a, 2.0) > moser_log(plateau_family(50), a, 2.0));
    // quarter case with |u|^p = s^(p/2) |w|^p: p = 1 stays bounded, p = 2 with a
    // large alpha grows
    double g10 = moser_log(wkappa_family(10), 0.1, 1.0), g160 = moser_log(wkappa_family(160), 0.1, 1.0);
    CHECK(std::fabs(g160 - g10) < std::log(1.5));
    CHECK(moser_log(wkappa_family(160), 10.0, 2.0) > moser_log(wkappa_family(80), 10.0, 2.0) + std::log(1.5));
    // never overflows
    double big = moser_log(moser_family(200, 0.0), 40 * pi, 2.0);
    CHECK(std::isfinite(big));
    CHECK(big > 100.0);
}

TEST_CASE("moser log is nondecreasing in alpha") {
    auto u = moser_family(50, 0.3);
    double prev = -INFINITY;
    for (double a = 1.0; a < 60.0; a += 3.0) {
        double v = moser_log(u, a, 2.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("remainder ratio is scale invariant") {
    auto u = random_profile(21);
    for (const char* name : {"thm11i", "thm11ii:4", "rimproved:3", "eqnchange1"}) {
        auto v = RatioSpec::parse(name);
        double r1 = remainder_ratio(u, v).ratio, r2 = remainder_ratio(u.scaled(-3.7), v).ratio;
        CHECK_MESSAGE(rel(r2, r1) < 1e-9, name);
        CHECK(v.name() == name);
    }
}

TEST_CASE("zero profile gives a flagged ratio") {
    auto r = remainder_ratio(zero_profile(), RatioSpec{});
    CHECK(r.zero_denominator);
    CHECK(std::isinf(r.ratio));
}

TEST_CASE("improved inequality on B_1/4") {
    RandomProfileOptions o;
    o.r_max = 0.25;
    RatioSpec v = RatioSpec::parse("rimproved:5");
    double worst = INFINITY;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto r = remainder_ratio(random_profile(seed, o), v);
        if (!r.zero_denominator) worst = std::min(worst, r.ratio);
    }
    CHECK(worst >= 1.0);
}

TEST_CASE("ratio is self-consistent under refinement") {
    QuadOptions fine;
    fine.tol = 1e-12;
    fine.presplit = 2;
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
        auto u = random_profile(seed);
        auto a = remainder_ratio(u, RatioSpec{}), b = remainder_ratio(u, RatioSpec{}, fine);
        if (a.zero_denominator) continue;
        CHECK(a.ratio >= 0.999 * b.ratio);
    }
}

TEST_CASE("error estimates bound one refinement") {
    QuadOptions fine;
    fine.tol = 1e-13;
    fine.presplit = 2;
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        auto u = random_profile(seed);
        auto a = deficit(u, 0.3), b = deficit(u, 0.3, fine);
        CHECK(std::fabs(a.deficit - b.deficit) <= a.abs_error_estimate + 1e-14 * std::fabs(b.deficit));
    }
}

TEST_CASE("mazya constant, first pair") {
    auto pair = origin_pair(1.0, 2.0);
    std::vector<double> z;
    for (int i = 0; i <= 400; ++i) z.push_back(1.0 + 0.25 * i);
    auto m = mazya_B_z(pair, z);
    CHECK(m.B <= 1.0 + 1e-6);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::fabs(m.product[i] - std::sqrt((z[i] - 1) / z[i])) < 1e-8);
    // the sup is the z -> inf limit
    CHECK(m.argmax_z == z.back());
    CHECK(m.B > 0.99);
    // general beta, q: (2/(beta q))^(1/q) sqrt((z-1)/z)
    auto m4 = mazya_B_z(origin_pair(1.0, 4.0), {5.0});
    CHECK(rel(m4.product[0], std::pow(0.5, 0.25) * std::sqrt(0.8)) < 1e-8);
}

TEST_CASE("mazya constant, second pair") {
    auto pair = boundary_pair(1.0, 2.0);
    std::vector<double> z;
    for (int i = 1; i <= 200; ++i) z.push_back(pair.z_lo + 0.05 * i);
    auto m = mazya_B_z(pair, z);
    CHECK(m.B <= 1.0);
    // gamma factor e^{-z/2}, inner factor sqrt(e^z - e^{z_lo})
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::fabs(m.product[i] - std::sqrt(1 - std::exp(pair.z_lo - z[i]))) < 1e-8);
}

TEST_CASE("mazya radius grid and domain") {
    auto m = mazya_B(origin_pair(1.0, 2.0), {1e-3, 1e-10, 1e-100});
    CHECK(m.B <= 1.0 + 1e-6);
    CHECK_THROWS_AS(mazya_B(origin_pair(1.0, 2.0), {1.5}), DomainError);
    CHECK_THROWS_AS(origin_pair(1.0, 1.0), DomainError);
}

}
