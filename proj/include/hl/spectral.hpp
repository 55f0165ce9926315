#pragma once

#include <string>
#include <vector>

#include "hl/transforms.hpp"
#include "hl/weights.hpp"

namespace hl {

enum class GridKind { Uniform, Graded };

// t-grid for the gauge frames. Graded: t = T (e^{L xi} - 1)/(e^L - 1) on a
// uniform xi grid, so grids with N = 2^k are nested. Identity always uses a
// uniform grid on [0, 1].
struct AssembleOptions {
    int N = 4096;
    double tmax = 200.0;
    GridKind grid = GridKind::Graded;
    double grading = 24.0;
};

// P1 finite elements on the grid. Unknowns are the node values at indices
// first .. first+n-1; Dirichlet conditions hold at the excluded end nodes.
// a_off[i] couples unknowns i and i+1.
struct DiscreteForm {
    std::vector<double> t;
    int first = 1;
    int n = 0;
    std::vector<double> a_diag, a_off, b_diag, b_off;
    bool dirichlet_both = true;
    Gauge gauge;
    double mu = 0.0;
    std::string weight_name;
};

std::vector<double> make_grid(const Gauge& g, const AssembleOptions& opt);

// A: gauge-frame deficit form int weight(t) w'^2 dt; B: int u^2 V dx written in
// t (V = null means the plain L^2(B_1) mass). 3-point Gauss per element, with
// the element split where V has a kink.
DiscreteForm assemble(double mu, const PotentialSpec* rhs_weight, const Gauge& g, const AssembleOptions& opt = {});
// 2 pi int s u_s^2 ds against 2 pi int u^2 / (s (1+|ln s|)^2) ds with P1
// elements in s on the image of the gaugeC grid.
DiscreteForm assemble_log_weighted(const AssembleOptions& opt = {});

struct RayleighResult {
    double lambda = 0.0;
    std::vector<double> vec;  // unknown values, B-normalized, positive sum
    double residual = 0.0;    // ||A v - lambda B v|| / ||B v||
    int iterations = 0;
    bool converged = false;
    bool positive = false;
};
RayleighResult min_rayleigh(const DiscreteForm& form, double tol = 1e-10, int max_iter = 2000);
double rayleigh_quotient(const DiscreteForm& form, const std::vector<double>& v);
// negative pivots of A - sigma B
int inertia_below(const DiscreteForm& form, double sigma);

struct LadderRow {
    int N = 0;
    double lambda = 0.0;
    double lambda_2tmax = 0.0;  // same N, doubled T_max
    double residual = 0.0;
    bool converged = false;
};

// A = Dirichlet form, B = int u^2/(r^2 ln^2 r) in gaugeB(mu = 0)
std::vector<LadderRow> estimate_leray_constant(const std::vector<int>& ladder, const AssembleOptions& base = {},
                                               double tol = 1e-10);

enum class RemainderVariant { Thm11i, EqnChange1 };
RemainderVariant parse_remainder_variant(const std::string& name);
std::vector<LadderRow> estimate_remainder_constant(RemainderVariant v, const std::vector<int>& ladder,
                                                   const AssembleOptions& base = {}, double tol = 1e-10);

}  // namespace hl
