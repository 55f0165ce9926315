#include <doctest.h>

#include <cmath>

#include "hl/errors.hpp"
#include "hl/integrate.hpp"
#include "support.hpp"

using namespace hl;
using hl::test::rel;

TEST_SUITE("integrate") {

TEST_CASE("polynomial") {
    auto r = integrate([](double x) { return x; }, 0.0, 1.0);
    CHECK(std::fabs(r.value - 0.5) < 1e-14);
    CHECK(r.converged);
}

TEST_CASE("infinite range") {
    auto r = integrate([](double s) { return std::exp(-2 * s); }, 2.0, INFINITY);
    CHECK(rel(r.value, std::exp(-4.0) / 2) < 1e-12);
}

TEST_CASE("log singular weight against its antiderivative") {
    double eps = 1e-6;
    QuadOptions o;
    o.sing_lo = true;
    auto r = integrate([](double x) { return 1.0 / (x * std::log(1.0 / x)); }, eps, 0.5, {}, o);
    double want = std::log(std::log(1e6)) - std::log(std::log(2.0));
    CHECK(rel(r.value, want) < 1e-10);
}

TEST_CASE("breakpoints are panel edges") {
    auto f = [](double x) { return std::fabs(x - 1.0 / 3.0); };
    auto r = integrate(f, 0.0, 1.0, {1.0 / 3.0});
    CHECK(std::fabs(r.value - (1.0 / 18 + 2.0 / 9)) < 1e-15);
}

TEST_CASE("error estimate bounds one refinement") {
    QuadOptions a, b;
    a.tol = 1e-6;
    b.tol = 1e-12;
    auto f = [](double x) { return std::sqrt(x) * std::cos(7 * x); };
    a.sing_lo = b.sing_lo = true;
    auto ra = integrate(f, 0.0, 2.0, {}, a), rb = integrate(f, 0.0, 2.0, {}, b);
    CHECK(std::fabs(ra.value - rb.value) <= ra.error + 1e-15);
}

TEST_CASE("strict throws on an impossible target") {
    QuadOptions o;
    o.tol = 1e-15;
    o.max_depth = 2;
    auto f = [](double x) { return std::sin(1.0 / x); };
    CHECK_THROWS_AS(integrate_strict(f, 1e-3, 1.0, {}, o), NoConvergence);
    auto r = integrate(f, 1e-3, 1.0, {}, o);
    CHECK_FALSE(r.converged);
}

TEST_CASE("log-domain integral") {
    auto small = integrate_log([](double x) { return -x; }, 0.0, INFINITY);
    CHECK(std::fabs(small.log_value) < 1e-12);
    // int_0^1 e^{1000 x} dx = (e^1000 - 1)/1000
    auto big = integrate_log([](double x) { return 1000.0 * x; }, 0.0, 1.0);
    CHECK(rel(big.log_value, 1000.0 - std::log(1000.0)) < 1e-12);
    // agrees with direct evaluation below the overflow line
    auto g = [](double x) { return 30.0 * x * x; };
    auto d = integrate([&](double x) { return std::exp(g(x)); }, 0.0, 1.0);
    auto l = integrate_log(g, 0.0, 1.0);
    CHECK(rel(std::exp(l.log_value), d.value) < 1e-10);
    CHECK(std::isinf(integrate_log(g, 1.0, 1.0).log_value));
}

TEST_CASE("log_add") {
    CHECK(log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(log_add(-INFINITY, 3.0) == 3.0);
    CHECK(log_add(2.0, -INFINITY) == 2.0);
}

}
