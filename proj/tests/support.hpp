#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "hl/profiles.hpp"

namespace hl::test {

constexpr double pi = 3.14159265358979323846;

// u-frame profile from a formula in r on [r_lo, r_hi]; du is d/dr
inline RadialProfile radial_u(std::function<double(double)> u, std::function<double(double)> du, double r_lo,
                              double r_hi, double tail_a = 0.0) {
    RadialProfile p;
    p.frame = Frame::U;
    p.xa = -std::log(r_hi);
    p.xb = r_lo > 0.0 ? -std::log(r_lo) : std::numeric_limits<double>::infinity();
    p.tail_a = tail_a;
    p.f = [u](double s) { return u(std::exp(-s)); };
    p.df = [du](double s) {
        double r = std::exp(-s);
        return -r * du(r);
    };
    p.family = "test";
    p.sample(512);
    return p;
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace hl::test
