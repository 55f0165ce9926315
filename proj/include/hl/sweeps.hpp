#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hl/integrate.hpp"
#include "hl/quadrature.hpp"
#include "hl/weights.hpp"

namespace hl {

enum class Verdict { Bounded, Growing };
const char* verdict_name(Verdict v);

// Table of moser_log values: rows follow axis1 (n or kappa), columns axis2
// (alpha, or a (p, alpha) pair when axis2_p is filled).
struct SweepResult {
    std::string family;
    std::vector<std::pair<std::string, double>> params;
    std::string axis1_name = "n", axis2_name = "alpha";
    std::vector<double> axis1, axis2;
    std::vector<double> axis2_p;  // per column exponent p, empty when p is a fixed param
    std::vector<double> table;    // axis1.size() x axis2.size(), row-major
    std::vector<Verdict> verdicts;
    std::optional<double> critical_estimate;
    std::uint64_t seed = 0;

    double at(std::size_t i, std::size_t j) const { return table[i * axis2.size() + j]; }
    std::string column_label(std::size_t j) const;
};

struct SweepOptions {
    int jobs = 1;
    int nodes = 4096;
    QuadOptions quad;
};

// Runs fn(i) for i in [0, count) on up to `jobs` threads; callers write into
// pre-sized storage by index.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

// growth test on a column: value at the largest axis1 entry minus the value at
// the largest entry <= half of it, compared with ln 1.5
Verdict growth_verdict(const SweepResult& r, std::size_t column);

enum class CriticalFamily { Moser, Concentrating };
CriticalFamily parse_critical_family(const std::string& name);

// 4 pi sqrt(1 + 4 mu)
double radial_critical_exponent(double mu);

// moser_log(n) - moser_log(n/2) table for the chosen family and alphas.
SweepResult moser_sweep(double mu, CriticalFamily fam, const std::vector<int>& ns, const std::vector<double>& alphas,
                        const SweepOptions& opt = {});

struct CriticalOptions {
    int n_max = 200;
    double lo = 0.0, hi = 0.0;  // 0: m/2 and 2m
    double tol = 0.0;           // 0: m/100
    double t_eps = 0.0;         // concentrating family shift; 0: default
    SweepOptions sweep;
};
// bisection on alpha with the top-octave growth test. The returned table has
// rows n_max/2, n_max and one column per alpha tried (sorted).
SweepResult critical_alpha(double mu, CriticalFamily fam, const CriticalOptions& opt = {});

// wkappa family, one column per (p, alpha) in the Cartesian product
SweepResult quarter_case_sweep(const std::vector<double>& ps, const std::vector<double>& alphas,
                               const std::vector<double>& kappas, const SweepOptions& opt = {},
                               const MoserOptions& mopt = {});

struct NonradialOptions {
    std::vector<int> ns{25, 50, 100, 200};
    double t0 = 2.0;
    SweepOptions sweep;
};
// off-centre plateau bumps normalized by the computed ||u||_{V,mu}; the
// normalized norms are returned in `norms` (same order as ns)
SweepResult nonradial_gap_demo(double mu, const PotentialSpec& V, double x0, const std::vector<double>& alphas,
                               const NonradialOptions& opt = {}, std::vector<double>* norms = nullptr);

struct StressOptions {
    int count = 500;
    std::uint64_t seed = 1;
    double r_max = 1.0;
    int jobs = 1;
    QuadOptions quad;
};
struct StressSummary {
    std::string variant;
    int count = 0, evaluated = 0, zero_denominator = 0;
    double min_ratio = 0.0;
    int argmin_index = -1;
    std::uint64_t argmin_seed = 0;
    double min_deficit = 0.0;  // Thm11i: smallest deficit at mu = -1/4
    double refined_ratio = 0.0;
    int violations = 0;          // at base resolution
    int confirmed_violations = 0;  // still violating at doubled resolution
    bool red_flag = false;
    std::vector<double> ratios;  // per profile, NaN when excluded
};
// Violation: Thm11i ratio <= 0 or deficit < 0; RImproved ratio < 1 - 1e-6.
StressSummary inequality_stress(const RatioSpec& variant, const StressOptions& opt = {});

}  // namespace hl
