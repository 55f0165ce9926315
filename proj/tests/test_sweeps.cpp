#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hl/errors.hpp"
#include "hl/sweeps.hpp"
#include "support.hpp"

using namespace hl;
using hl::test::pi;
using hl::test::rel;

TEST_SUITE("sweeps") {

TEST_CASE("growth test on a hand-made table") {
    SweepResult r;
    r.axis1 = {25, 50, 100, 200};
    r.axis2 = {1.0, 2.0};
    // column 0 grows by ln 2 over the top octave, column 1 by ln 1.2
    r.table = {0, 0, 0, 0, 1, 1, 1 + std::log(2.0), 1 + std::log(1.2)};
    CHECK(growth_verdict(r, 0) == Verdict::Growing);
    CHECK(growth_verdict(r, 1) == Verdict::Bounded);
    CHECK(std::string(verdict_name(Verdict::Growing)) == "growing");
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(100, 0);
    parallel_for(100, 4, [&](int i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS_WITH(parallel_for(50, 3, [](int i) { if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i)); }), "7");
}

TEST_CASE("moser sweep shape, monotonicity in alpha and reproducibility") {
    std::vector<int> ns{25, 50, 100};
    double m = radial_critical_exponent(0.0);
    std::vector<double> al{0.5 * m, 0.9 * m, 1.1 * m, 1.5 * m};
    auto a = moser_sweep(0.0, CriticalFamily::Moser, ns, al);
    REQUIRE(a.table.size() == ns.size() * al.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = 1; j < al.size(); ++j) CHECK(a.at(i, j) >= a.at(i, j - 1));
    SweepOptions o;
    o.jobs = 4;
    auto b = moser_sweep(0.0, CriticalFamily::Moser, ns, al, o);
    CHECK(a.table == b.table);
    CHECK(a.verdicts[0] == Verdict::Bounded);
    CHECK(a.verdicts[3] == Verdict::Growing);
}

TEST_CASE("critical alpha for mu = 0") {
    auto r = critical_alpha(0.0, CriticalFamily::Moser);
    REQUIRE(r.critical_estimate);
    CHECK(std::fabs(*r.critical_estimate / (4 * pi) - 1.0) < 0.1);
    bool seen_growing = false;
    for (auto v : r.verdicts) {
        if (v == Verdict::Growing) seen_growing = true;
        else CHECK_FALSE(seen_growing);
    }
}

TEST_CASE("critical alpha bracket failure") {
    CriticalOptions o;
    double m = radial_critical_exponent(0.0);
    o.lo = 3 * m;
    o.hi = 4 * m;
    CHECK_THROWS_AS(critical_alpha(0.0, CriticalFamily::Moser, o), BracketFailure);
    CHECK_THROWS_AS(radial_critical_exponent(-0.25), DomainError);
}

TEST_CASE("family names") {
    CHECK(parse_critical_family("conc") == CriticalFamily::Concentrating);
    CHECK(parse_critical_family("concentrating") == CriticalFamily::Concentrating);
    CHECK(parse_critical_family("moser") == CriticalFamily::Moser);
    CHECK_THROWS_AS(parse_critical_family("plateau"), ConfigError);
}

TEST_CASE("quarter case sweep") {
    auto r = quarter_case_sweep({0.5, 2.0}, {10.0}, {10, 20, 40, 80, 160});
    REQUIRE(r.verdicts.size() == 2);
    CHECK(r.axis2_p.size() == 2);
    CHECK(r.column_label(0) == "p=0.5/alpha=10");
    CHECK(r.verdicts[0] == Verdict::Bounded);
    CHECK(r.verdicts[1] == Verdict::Growing);
}

TEST_CASE("nonradial demo normalization and geometry") {
    std::vector<double> norms;
    NonradialOptions o;
    o.ns = {25, 50};
    auto r = nonradial_gap_demo(0.75, PotentialSpec::v3(), 0.5, {0.8 * 4 * pi}, o, &norms);
    REQUIRE(norms.size() == 2);
    for (double n : norms) CHECK(n <= 1.0 + 1e-6);
    CHECK(r.table.size() == 2);
    CHECK_THROWS_AS(nonradial_gap_demo(0.75, PotentialSpec::v3(), 0.99, {4 * pi}, o), GeometryError);
    CHECK_THROWS_AS(nonradial_gap_demo(-0.1, PotentialSpec::v3(), 0.5, {4 * pi}, o), DomainError);
}

TEST_CASE("stress run is reproducible and excludes null profiles") {
    StressOptions o;
    o.count = 40;
    o.seed = 12345;
    auto a = inequality_stress(RatioSpec{}, o);
    o.jobs = 3;
    auto b = inequality_stress(RatioSpec{}, o);
    CHECK(a.min_ratio == b.min_ratio);
    CHECK(a.argmin_seed == b.argmin_seed);
    CHECK(a.evaluated + a.zero_denominator == a.count);
    CHECK(a.zero_denominator > 0);
    CHECK(a.min_ratio > 0.0);
    CHECK(a.min_deficit > 0.0);
    CHECK(a.violations == 0);
    CHECK_FALSE(a.red_flag);
    for (std::size_t i = 0; i < a.ratios.size(); ++i) {
        bool same = (std::isnan(a.ratios[i]) && std::isnan(b.ratios[i])) || a.ratios[i] == b.ratios[i];
        CHECK(same);
    }
}

}
