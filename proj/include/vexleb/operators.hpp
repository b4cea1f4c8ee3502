#pragma once

// Hardy-type integral operators and strong (fractional) maximal functions on
// cellwise-constant data.

#include <optional>
#include <string>
#include <vector>

#include "vexleb/grid.hpp"
#include "vexleb/norms.hpp"

namespace vexleb {

// A cell interval [c0, c1) on one axis together with the length it is
// weighted by. Shifted dyadic intervals are clipped to the domain but keep
// their full length (the function is zero outside the domain).
struct AxisInterval {
    std::size_t c0 = 0;
    std::size_t c1 = 0;
    double length = 0.0;
};

/**
 * Supremum index set for maximal functions: a product of per-axis interval
 * lists.
 *
 *   all_aligned      every grid-aligned interval
 *   dyadic           the dyadic lattice of the domain down to `depth` levels
 *                    (depth < 0: down to single cells)
 *   dyadic_shifted   the same lattice translated by -(t, tau), shifts snapped
 *                    to whole cells
 *   size_capped      grid-aligned intervals of length at most `cap`
 *
 * `within(R0)` keeps only intervals inside the cells of R0.
 */
class RectFamily {
public:
    enum class Mode { all_aligned, dyadic, dyadic_shifted, size_capped };

    static RectFamily all_aligned();
    static RectFamily dyadic(int depth = -1);
    static RectFamily dyadic_shifted(double t, double tau, int depth = -1);
    static RectFamily size_capped(double cap);

    RectFamily within(const Rectangle& base) const;

    Mode mode() const { return mode_; }
    int depth() const { return depth_; }
    double cap() const { return cap_; }
    double shift_x() const { return shift_[0]; }
    double shift_y() const { return shift_[1]; }
    const std::optional<Rectangle>& base() const { return base_; }

    // Intervals on `axis`; `which` is 0 for x and 1 for y.
    std::vector<AxisInterval> intervals(const Grid1D& axis, int which) const;
    std::string describe() const;

private:
    Mode mode_ = Mode::all_aligned;
    int depth_ = -1;
    double cap_ = 0.0;
    double shift_[2] = {0.0, 0.0};
    std::optional<Rectangle> base_;
};

GridFunction hardy1(const GridFunction& f);
GridFunction hardy2(const GridFunction& f);
// (1/x) * hardy1(f)(x) at cell midpoints.
GridFunction hardy_average(const GridFunction& f);
// hardy2(f)(x, y) / (x y) at cell midpoints.
GridFunction double_average(const GridFunction& f);

GridFunction fractional_maximal_1d(const GridFunction& f, double alpha,
                                   const RectFamily& family = RectFamily::all_aligned());

// |I|^(alpha(x)-1) |J|^(beta(y)-1) * integral of |f| over I x J, maximised over
// family rectangles containing (x, y). alpha lives on f's x axis, beta on its y axis.
GridFunction strong_fractional_maximal(const GridFunction& f, const OrderField& alpha,
                                       const OrderField& beta,
                                       const RectFamily& family = RectFamily::all_aligned());
GridFunction strong_fractional_maximal(const GridFunction& f, double alpha, double beta,
                                       const RectFamily& family = RectFamily::all_aligned());

enum class CompanionVariant { m1, m2, max, pbar, constant_q };

CompanionVariant parse_companion_variant(const std::string& name);
std::string to_string(CompanionVariant v);

// Area rule: p- when |I||J| <= 1, p+ otherwise.
double pbar_selector(double len_i, double len_j, const ExponentField& p);

/**
 * Companion maximal function of a weight v: at each point the supremum over
 * family rectangles I x J containing it of
 *   |I x J|^(-1/s) * || v |I|^alpha(.) |J|^beta(.) ||_{q(.), I x J}
 * with s = p- (m1), p+ (m2), the larger of the two values (max), or the area
 * rule (pbar). constant_q needs constant p, alpha, beta and evaluates
 *   |I|^(alpha-1/p) |J|^(beta-1/p) (integral of v^q over I x J)^(1/q+).
 */
GridFunction companion_maximal(const GridFunction& v, const ExponentField& p, const ExponentField& q,
                               const OrderField& alpha, const OrderField& beta, CompanionVariant variant,
                               const RectFamily& family = RectFamily::all_aligned(),
                               double tol = kDefaultTol);

} // namespace vexleb
