#pragma once

#include <functional>
#include <vector>

namespace hl {

using Fn = std::function<double(double)>;

struct QuadOptions {
    double tol = 1e-10;      // relative target on the summed estimate
    double abs_tol = 0.0;    // absolute floor
    int max_depth = 40;      // bisection depth per initial panel
    int max_panels = 400000;
    double tmax = 200.0;     // default cap for transformed infinite ranges
    bool sing_lo = false;    // algebraic endpoint singularity at the left end
    bool sing_hi = false;    // ... at the right end
    int presplit = 1;        // each initial panel is cut into this many pieces
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // sum of |K15 - G7| over accepted panels
    bool converged = true;
    int panels = 0;
};

// Composite adaptive Gauss-Kronrod (7/15) over [a, b] with panel edges at the
// sorted interior breakpoints. b may be +inf: the last panel is then mapped to
// a finite one by x = c + (1-v)/v. Never throws on non-convergence; the
// result carries converged = false and an honest estimate.
QuadResult integrate(const Fn& f, double a, double b, const std::vector<double>& breaks = {},
                     const QuadOptions& opt = {});

// Same, throwing NoConvergence when the tolerance is not met.
QuadResult integrate_strict(const Fn& f, double a, double b, const std::vector<double>& breaks = {},
                            const QuadOptions& opt = {});

// log of the integral of exp(g) over [a, b]; each panel is integrated after
// subtracting its own sampled maximum and the panels are combined by shifted
// summation. Returns -inf for an empty integral.
struct LogQuadResult {
    double log_value = 0.0;
    double rel_error = 0.0;
    bool converged = true;
};
LogQuadResult integrate_log(const Fn& g, double a, double b, const std::vector<double>& breaks = {},
                            const QuadOptions& opt = {});

// log(exp(a) + exp(b)) without overflow
double log_add(double a, double b);

}  // namespace hl
