#include <doctest.h>

#include <cmath>
#include <vector>

#include "hl/errors.hpp"
#include "hl/spectral.hpp"
#include "support.hpp"

using namespace hl;
using hl::test::rel;

namespace {

// first zero of J0 by its power series and bisection
double j0_series(double x) {
    double term = 1.0, sum = 1.0, q = -x * x / 4.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (double(k) * k);
        sum += term;
    }
    return sum;
}

double j0_first_zero() {
    double a = 2.0, b = 3.0;
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (a + b);
        (j0_series(m) > 0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

double disk_lambda(int N) {
    AssembleOptions o;
    o.N = N;
    auto F = assemble(0.0, nullptr, Gauge::identity(), o);
    return min_rayleigh(F).lambda;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("oracle zero") {
    CHECK(j0_first_zero() == doctest::Approx(2.404825557695773).epsilon(1e-14));
}

TEST_CASE("unit disk Dirichlet eigenvalue") {
    double z = j0_first_zero(), want = z * z;
    double l1 = disk_lambda(256), l2 = disk_lambda(512), l3 = disk_lambda(1024);
    CHECK(rel(l3, want) < 1e-5);
    CHECK(l1 >= l2);
    CHECK(l2 >= l3);
    double order = std::log2((l1 - want) / (l2 - want));
    CHECK(order >= 1.8);
    CHECK(std::log2((l2 - want) / (l3 - want)) >= 1.8);
}

TEST_CASE("stiffness rows sum to zero away from the boundary") {
    AssembleOptions o;
    o.N = 64;
    auto F = assemble(0.0, nullptr, Gauge::B(0.0), o);
    for (int i = 1; i + 1 < F.n; ++i) CHECK(std::fabs(F.a_diag[i] + F.a_off[i - 1] + F.a_off[i]) <= 1e-12 * F.a_diag[i]);
}

TEST_CASE("forms are symmetric and definite") {
    AssembleOptions o;
    o.N = 128;
    auto F = assemble(0.0, nullptr, Gauge::B(0.0), o);
    CHECK(F.a_off.size() + 1 == F.a_diag.size());
    CHECK(F.b_off.size() + 1 == F.b_diag.size());
    CHECK(inertia_below(F, 0.0) == 0);
}

TEST_CASE("A = B gives one") {
    AssembleOptions o;
    o.N = 64;
    auto F = assemble(0.0, nullptr, Gauge::B(0.0), o);
    F.b_diag = F.a_diag;
    F.b_off = F.a_off;
    CHECK(min_rayleigh(F).lambda == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scaling both forms leaves the eigenvalue unchanged") {
    AssembleOptions o;
    o.N = 256;
    auto V = PotentialSpec::leray();
    auto F = assemble(0.0, &V, Gauge::B(0.0), o);
    auto G = F;
    for (auto* v : {&G.a_diag, &G.a_off, &G.b_diag, &G.b_off})
        for (double& x : *v) x *= 4.0;  // sqrt(4) is exact, so every iterate scales exactly
    auto a = min_rayleigh(F), b = min_rayleigh(G);
    CHECK(a.lambda == b.lambda);
    CHECK(a.positive);
    CHECK(a.residual <= 1e-10);
}

TEST_CASE("rayleigh quotient of explicit vectors is above the minimum") {
    AssembleOptions o;
    o.N = 512;
    auto V = PotentialSpec::leray();
    auto F = assemble(0.0, &V, Gauge::B(0.0), o);
    auto m = min_rayleigh(F);
    for (double d : {0.05, 0.1, 0.3}) {
        std::vector<double> v(F.n);
        for (int j = 0; j < F.n; ++j) {
            double t = F.t[F.first + j], T = F.t.back();
            // (-ln r)^(1/2 - d) with s = t/2, cut linearly to zero at both ends
            v[j] = std::pow(t / 2, 0.5 - d) * std::min(1.0, (T - t) / (0.1 * T));
        }
        CHECK(rayleigh_quotient(F, v) >= m.lambda - 1e-10);
    }
}

TEST_CASE("leray ladder") {
    auto rows = estimate_leray_constant({256, 1024, 4096});
    double prev = INFINITY;
    for (const auto& r : rows) {
        CHECK(r.lambda >= 0.25);
        CHECK(r.lambda <= prev);
        CHECK(r.converged);
        prev = r.lambda;
    }
    CHECK(rows.back().lambda <= 0.30);
}

TEST_CASE("remainder ladders") {
    for (auto v : {RemainderVariant::Thm11i, RemainderVariant::EqnChange1}) {
        auto rows = estimate_remainder_constant(v, {256, 1024, 4096});
        double prev = INFINITY;
        for (const auto& r : rows) {
            CHECK(r.lambda > 0.0);
            CHECK(r.lambda <= prev);
            CHECK(r.converged);
            prev = r.lambda;
        }
    }
    CHECK(parse_remainder_variant("eqnchange1") == RemainderVariant::EqnChange1);
    CHECK_THROWS_AS(parse_remainder_variant("x"), ConfigError);
}

TEST_CASE("gauge and mu must match") {
    CHECK_THROWS_AS(assemble(0.3, nullptr, Gauge::B(0.0)), GaugeMismatch);
}

}
