#pragma once

// End-to-end drivers: empirical operator norms, the Hardy best-constant
// sandwich, the double-Hardy two-weight check, the step-exponent blow-up
// series, the double-average boundedness check and the shifted-dyadic
// comparison.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vexleb/conditions.hpp"
#include "vexleb/grid.hpp"
#include "vexleb/operators.hpp"

namespace vexleb {

inline constexpr const char* kGeneratorVersion = "ratio-gen-v1";

struct RatioReport {
    std::string problem;
    std::vector<double> ratios;
    std::vector<std::string> sources;
    double max_ratio = 0.0;
    std::string argmax;
    double bound_low = 0.0;
    double bound_high = 0.0;  // 0 means "no bound attached"
    std::size_t trials = 0;
    std::size_t skipped = 0;
    std::string generator = kGeneratorVersion;
    std::vector<std::size_t> resolution;
    Rectangle truncation;
};

/**
 * ||T f||_target / ||f||_source over a test family. `ascent`, when set, maps
 * f to the next iterate of a nonlinear power iteration for this ratio.
 */
struct RatioProblem {
    std::string name;
    GridFunction domain;  // any function on the source grid; only its grid is used
    std::function<double(const GridFunction&)> numerator;
    std::function<double(const GridFunction&)> denominator;
    std::function<GridFunction(const GridFunction&)> ascent;
    std::vector<std::pair<std::string, GridFunction>> extremals;
    int ascent_steps = 40;
};

double ratio_of(const RatioProblem& problem, const GridFunction& f);

// Positive block-constant exp-Gaussian function: a fixed lattice of at most
// `blocks` blocks per axis, so the same seed describes the same function at
// every resolution.
GridFunction random_block_function(const GridFunction& like, std::uint64_t seed, std::size_t blocks = 32);

// Power bump x^(-1/p + eps) on [delta, upper], zero elsewhere (needs lo >= 0).
GridFunction power_bump(const Grid1D& x, double p, double eps, double delta, double upper);

RatioReport estimate_operator_norm(const RatioProblem& problem, std::size_t trials, std::uint64_t seed);

// (1/x) int_0^x f with measure weights: (int (Af)^q v)^(1/q) / (int f^p w)^(1/p).
RatioProblem hardy_average_problem(const GridFunction& v, const GridFunction& w, double p, double q);
// int_0^x f with measure weights, as in the Muckenhoupt / Persson-Stepanov conditions.
RatioProblem hardy1_problem(const GridFunction& v, const GridFunction& w, double p, double q);
// ||v H2 f||_{q(.)} / ||f w1 w2||_p.
RatioProblem hardy2_problem(const GridFunction& v, const GridFunction& w1, const GridFunction& w2, double p,
                            const ExponentField& q);
// ||A f||_{p(.)} / ||f||_{p(.)} for the double average A.
RatioProblem double_average_problem(const ExponentField& p);
// ||v M f||_{q(.)} / ||f w||_p for the strong fractional maximal function.
RatioProblem strong_fractional_problem(const GridFunction& v, const GridFunction& w, double p, const ExponentField& q,
                                       double alpha, double beta, const RectFamily& family);

// ----- Hardy sandwich -----

struct HardyFixture {
    std::string name;
    double lo = 1e-3;
    double hi = 100.0;
    std::size_t n = 4096;
    double p = 2.0;
    double q = 2.0;
    std::function<double(double)> v;
    std::function<double(double)> w;
    std::function<double(double)> v_antiderivative;  // optional: exact cell averages of v
    bool bounded_domain = false;                      // skip truncation-box doubling
};

struct HardyGrids {
    GridFunction v;
    GridFunction w;
};

// Builds v, w on [lo, lo + scale (hi - lo)] with n cells.
HardyGrids build_hardy_fixture(const HardyFixture& fx, std::size_t n, double scale = 1.0);

HardyFixture power_weight_fixture(int which);  // 1, 2 or 3
HardyFixture fat_tail_fixture();

struct SandwichReport {
    ConditionReport am;
    ConditionReport aps;
    RatioReport empirical;
    double upper_factor_m = 0.0;   // (1 + q/p')^(1/q) (1 + p'/q)^(1/p')
    double upper_factor_ps = 0.0;  // p'
    double tol = 0.05;
    bool upper_m_ok = false;
    bool upper_ps_ok = false;
    bool lower_m_ok = false;   // A_M <= C_emp (1 + tol): family-quality diagnostic
    bool lower_ps_ok = false;  // A_PS <= C_emp (1 + tol): family-quality diagnostic
    bool passed() const { return upper_m_ok && upper_ps_ok; }
};

// Throws InapplicableError when the Muckenhoupt constant is classified non-finite.
SandwichReport hardy_sandwich(const HardyFixture& fx, std::size_t trials, std::uint64_t seed, double tol = 0.05);

// ----- double Hardy transform -----

struct DoubleHardyFixture {
    std::string name;
    double x_hi = 1.0;
    double y_hi = 1.0;
    double p = 2.0;
    std::function<double(double, double)> v;
    std::function<double(double)> w1;
    std::function<double(double)> w2;
    std::function<double(double, double)> q;
};

DoubleHardyFixture unit_double_hardy_fixture(double p = 2.0, double q = 2.0);

struct DoubleHardyReport {
    ConditionReport b;
    RatioReport coarse;
    RatioReport fine;
    double drift = 0.0;  // fine.max_ratio / coarse.max_ratio - 1
    // necessity test function f = w^-p' chi_[0,a)x[0,b)
    std::vector<double> restricted_argmax;  // (a, b) maximising the ratio restricted to [a,X]x[b,Y]
    double restricted_max = 0.0;
    double restricted_cells_off = 0.0;      // distance to condition_b's argmax in cells (max norm)
    double full_ratio_at_b_argmax = 0.0;    // unrestricted ratio of the same test function
    // one-dimensional building block on w1: ratio of p-th powers vs (p')^p
    double building_block_max = 0.0;
    double building_block_bound = 0.0;
    bool passed = false;
};

DoubleHardyReport verify_double_hardy(const DoubleHardyFixture& fx, std::size_t n, std::size_t trials,
                                   std::uint64_t seed);

// ----- blow-up series -----

struct BlowupConfig {
    double p1 = 2.0;
    double p2 = 3.0;
    double alpha = 0.0;
    double x0 = 1.0;
    double a = 0.1, b = 0.4, c = 0.6, d = 0.9;
    std::vector<double> taus;  // default 2^-2 ... 2^-9
    std::size_t nx = 4096;     // cells on [0, 2]
    std::size_t ny = 20;       // cells on [0, 1]
    double slope_tolerance = 0.03;
};

struct BlowupSeries {
    std::vector<double> taus;
    std::vector<double> values;        // A_tau on the full Q_tau
    std::vector<double> lower_bounds;  // |Q|^(alpha-1) ||chi_Q2||_q ||chi_Q1||_p'
    double slope = 0.0;
    double lower_bound_slope = 0.0;
    double predicted_slope = 0.0;
    BlowupConfig config;
    bool passed = false;
};

std::vector<double> default_blowup_taus();
BlowupSeries blowup_series(const BlowupConfig& config);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ----- double average on [0,2]^2 with the two-valued exponent -----

ExponentField corner_step_exponent(std::size_t n);  // 3 on [1,2]^2, 2 elsewhere on [0,2]^2

struct DoubleAverageReport {
    ConditionReport supremum;  // with refinement verdict
    RatioReport ratios;
    RatioReport ratios_refined;
    double drift = 0.0;
    bool passed = false;
};

DoubleAverageReport verify_double_average(std::size_t n, std::size_t trials = 50, std::uint64_t seed = 1);

// ----- shifted dyadic comparison -----

struct DyadicComparisonReport {
    double c_min = 0.0;         // max over points of LHS / mean shifted RHS
    double c_unshifted = 0.0;   // max over points of LHS / unshifted dyadic maximal function
    std::size_t shift_samples = 0;  // per axis
    int k = 0;
    double lhs_max = 0.0;
    double rhs_max = 0.0;
    std::vector<double> argmax;  // point attaining c_min
};

// Fixtures on [0, 8)^2 with 32 cells per axis: "aligned" (unit square [0, 2)^2),
// "straddle" ([3, 5)^2, crossing the dyadic line at 4) and "random" (8 x 8 blocks).
GridFunction dyadic_comparison_fixture(const std::string& name, std::uint64_t seed);

DyadicComparisonReport verify_dyadic_comparison(const GridFunction& f, const OrderField& alpha,
                                                const OrderField& beta, int k, std::size_t shift_samples,
                                                std::uint64_t seed);

} // namespace vexleb
