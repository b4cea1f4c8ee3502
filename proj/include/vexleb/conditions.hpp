#pragma once

// Supremum-type weight conditions, exponent-class tests and the refinement
// policy that turns a grid supremum into a finite / non-finite verdict.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vexleb/grid.hpp"
#include "vexleb/norms.hpp"
#include "vexleb/operators.hpp"

namespace vexleb {

enum class Finiteness { unassessed, finite, non_finite, inconclusive };

std::string to_string(Finiteness f);

struct ConditionReport {
    std::string name;
    double value = 0.0;
    std::string arg_label;          // e.g. "a,b" or "x0,x1,y0,y1"
    std::vector<double> arg;        // where the supremum is attained
    std::vector<std::size_t> resolution;
    Rectangle truncation;
    Finiteness finite = Finiteness::unassessed;
    std::map<std::string, double> extras;
    std::vector<std::string> warnings;
};

/**
 * Refinement policy. The supremum is evaluated at (N, X), (2N, X) and, when
 * the domain is unbounded, (2N, 2X) with the same cell width. Growth below
 * 10% in every direction is "finite", above 50% in any direction is
 * "non_finite", anything else "inconclusive". A zero base value stays finite
 * only if the other values are zero too.
 */
constexpr double kFiniteGrowth = 0.10;
constexpr double kNonFiniteGrowth = 0.50;

struct RefinementVerdict {
    Finiteness verdict = Finiteness::unassessed;
    double base = 0.0;
    double refined = 0.0;
    std::optional<double> enlarged;
};

Finiteness classify_growth(double base, double refined, std::optional<double> enlarged);

// value(n, box_scale) evaluates the supremum with n cells per axis on the
// truncation box scaled by box_scale.
RefinementVerdict assess_refinement(const std::function<double(std::size_t, double)>& value, std::size_t n,
                                    bool enlarge_box);

// Copies the verdict and the three sampled values into the report.
void attach_refinement(ConditionReport& report, const RefinementVerdict& verdict);

// ----- one-dimensional Hardy conditions (measure-weight convention) -----

// sup_x (int_x^X v)^(1/q) (int_lo^x w^(1-p'))^(1/p'), x over cell edges in scan.
ConditionReport muckenhoupt_am(const GridFunction& v, const GridFunction& w, double p, double q,
                               std::optional<Rectangle> scan = std::nullopt);

// sup_x W(x)^(-1/p) (int_lo^x v W^q)^(1/q), W(x) = int_lo^x w^(1-p'); points with W = 0 are skipped.
ConditionReport persson_stepanov_aps(const GridFunction& v, const GridFunction& w, double p, double q,
                                     std::optional<Rectangle> scan = std::nullopt);

// ----- double Hardy transform conditions -----

/**
 * sup over corners (a, b) of ||v chi_[a,X]x[b,Y]||_{q(.)} * ||w^-1 chi_[lo,a)x[lo,b)||_{p'}
 * with w = w1(x) w2(y). The grid box is the truncation; on a bounded domain
 * [0,a0]x[0,b0] the tail region is exactly [a,a0]x[b,b0]. Pass p = p- for
 * variable-p sufficient conditions.
 */
ConditionReport condition_b(const GridFunction& v, const GridFunction& w1, const GridFunction& w2, double p,
                            const ExponentField& q, std::optional<Rectangle> scan = std::nullopt);

// condition_b with unit weights; p is the anchor exponent (constant p, p-, or p at a corner).
ConditionReport unit_weight_trace_condition(const GridFunction& v, double p, const ExponentField& q,
                                   std::optional<Rectangle> scan = std::nullopt);
// Anchor taken as p at the cell containing `anchor`; warns if it differs from p-.
ConditionReport unit_weight_trace_condition(const GridFunction& v, const ExponentField& p, double anchor_x,
                                   double anchor_y, const ExponentField& q,
                                   std::optional<Rectangle> scan = std::nullopt);

// sup (int int_[y1,X]x[y2,Y] v)^(1/q) (int int_[lo,y1]x[lo,y2] w^(1-p'))^(1/p'),
// constant exponents, measure weights, any (not necessarily product) w.
ConditionReport a1_condition(const GridFunction& v, const GridFunction& w, double p, double q,
                             std::optional<Rectangle> scan = std::nullopt);

// ----- rectangle conditions -----

// sup_R |R|^(alpha-1) ||chi_R||_{q(.)} ||chi_R||_{p'(.)}. Warns where q != p/(1 - alpha p).
ConditionReport rectangle_condition_ar(const ExponentField& p, const ExponentField& q, double alpha,
                                       const RectFamily& family = RectFamily::all_aligned());
// Same with q = p / (1 - alpha p) built from p.
ConditionReport rectangle_condition_ar(const ExponentField& p, double alpha,
                                       const RectFamily& family = RectFamily::all_aligned());

// How |I x J|^(-1/s) picks s in the trace condition.
enum class TraceExponent {
    constant,    // s = p (constant initial exponent)
    pbar,        // s = p- if |I||J| <= 1 else p+
    local_minus  // s = p-(I x J), the bounded-domain form
};

/**
 * sup over family rectangles of || |I|^alpha(.) |J|^beta(.) v ||_{q(.), I x J} |I x J|^(-1/s).
 * The admissible window 1/p - 1/q+ < alpha-, alpha+ < 1/p (same for beta) and
 * p < q- is checked with p = p- of the field.
 */
ConditionReport fractional_trace_condition(const GridFunction& v, double p, const ExponentField& q,
                                   const OrderField& alpha, const OrderField& beta,
                                   const RectFamily& family = RectFamily::all_aligned());
ConditionReport fractional_trace_condition(const GridFunction& v, const ExponentField& p, TraceExponent rule,
                                   const ExponentField& q, const OrderField& alpha, const OrderField& beta,
                                   const RectFamily& family = RectFamily::all_aligned());

// sup (int int_{IxJ} v) |I|^(q(alpha-1/p)) |J|^(q(beta-1/p)), evaluated as the
// constant-exponent trace form applied to v^(1/q), raised to the power q.
ConditionReport box_mass_condition(const GridFunction& v, double p, double q, double alpha, double beta,
                             const RectFamily& family = RectFamily::all_aligned());

// sup (|I||J|)^-1 || v |I|^alpha(.) |J|^beta(.) ||_{q(.), IxJ} ||w^-1||_{p', IxJ}, w = w1(x) w2(y).
ConditionReport two_weight_fractional_condition(const GridFunction& v, const GridFunction& w1, const GridFunction& w2,
                                        double p, const ExponentField& q, const OrderField& alpha,
                                        const OrderField& beta,
                                        const RectFamily& family = RectFamily::all_aligned());

// ----- exponent classes -----

// value = smallest int delta^(p p- / (p - p-)) over the candidates (p = p- cells contribute 0);
// extras hold each candidate's integral.
ConditionReport class_p_membership(const ExponentField& p, const std::vector<double>& deltas);

// value = sup over |y| >= |x| of |p(x) - p(y)| ln(e + |x|); extras["member"] = value <= c_max.
ConditionReport class_p_inf_membership(const ExponentField& p, double c_max);

// ----- partition sequences -----

struct PartitionSequence {
    std::vector<int> levels;        // k
    std::vector<double> points;     // x_k with int_lo^{x_k} w^-p' = 2^k
    double p = 2.0;
    double max_level_residual = 0.0;   // max |int_lo^{x_k} w^-p' - 2^k| / 2^k
    double max_annulus_residual = 0.0; // max |int_{x_k}^{x_{k+1}} w^-p' - 2^k| / 2^k
};

PartitionSequence partition_sequence(const GridFunction& w, double p, int kmax, int kmin = 0);
// Probes w at the left edge as well: w(lo) <= 0 means infinite mass there.
PartitionSequence partition_sequence(const Grid1D& axis, const std::function<double(double)>& w, double p,
                                     int kmax, int kmin = 0);

// ----- building-block sufficiency -----

// sup_t (int_t^b Lambda^-p lambda)(int_lo^t lambda)^(p-1), lambda = rho^-p'; cell integrals exact.
ConditionReport building_block_sufficiency(const GridFunction& rho, double p, std::optional<Rectangle> scan = std::nullopt);

} // namespace vexleb
