#include "vexleb/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "vexleb/errors.hpp"
#include "vexleb/parallel.hpp"

namespace vexleb {

std::string to_string(Finiteness f) {
    switch (f) {
    case Finiteness::unassessed: return "unassessed";
    case Finiteness::finite: return "finite";
    case Finiteness::non_finite: return "non-finite";
    case Finiteness::inconclusive: return "inconclusive";
    }
    return "?";
}

Finiteness classify_growth(double base, double refined, std::optional<double> enlarged) {
    auto growth = [base](double x) {
        if (base == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return x / base - 1.0;
    };
    double worst = growth(refined);
    if (enlarged) worst = std::max(worst, growth(*enlarged));
    if (!std::isfinite(refined) || (enlarged && !std::isfinite(*enlarged))) return Finiteness::non_finite;
    if (worst < kFiniteGrowth) return Finiteness::finite;
    if (worst > kNonFiniteGrowth) return Finiteness::non_finite;
    return Finiteness::inconclusive;
}

RefinementVerdict assess_refinement(const std::function<double(std::size_t, double)>& value, std::size_t n,
                                    bool enlarge_box) {
    RefinementVerdict v;
    v.base = value(n, 1.0);
    v.refined = value(2 * n, 1.0);
    if (enlarge_box) v.enlarged = value(2 * n, 2.0);
    v.verdict = classify_growth(v.base, v.refined, v.enlarged);
    return v;
}

void attach_refinement(ConditionReport& report, const RefinementVerdict& verdict) {
    report.finite = verdict.verdict;
    report.extras["refinement_base"] = verdict.base;
    report.extras["refinement_2n"] = verdict.refined;
    if (verdict.enlarged) report.extras["refinement_2n_2x"] = *verdict.enlarged;
}

namespace {

void require_1d(const GridFunction& f, const char* what) {
    if (f.dim() != 1) throw DimensionError(std::string(what) + " must be 1-D");
}

void require_2d(const GridFunction& f, const char* what) {
    if (f.dim() != 2) throw DimensionError(std::string(what) + " must be 2-D");
}

void require_nonnegative(const GridFunction& f, const char* what) {
    if (f.min_value() < 0.0) throw DomainError(std::string(what) + " must be nonnegative");
}

void require_positive(const GridFunction& f, const char* what) {
    if (!(f.min_value() > 0.0)) throw DomainError(std::string(what) + " must be strictly positive");
}

void require_exponents(double p, double q) {
    if (!(p > 1.0) || !std::isfinite(q)) throw ParameterError("exponents need 1 < p and finite q");
    if (p > q) {
        std::ostringstream msg;
        msg << "condition needs p <= q (got p = " << p << ", q = " << q << ")";
        throw ParameterError(msg.str());
    }
}

double conj(double p) { return p / (p - 1.0); }

// Edge indices [k0, k1] covered by the scan region on one axis.
std::pair<std::size_t, std::size_t> scan_edges(const Grid1D& axis, std::optional<std::pair<double, double>> range) {
    if (!range) return {0, axis.n()};
    return snap_interval(axis, range->first, range->second);
}

std::optional<std::pair<double, double>> x_range(const std::optional<Rectangle>& r) {
    if (!r) return std::nullopt;
    return std::make_pair(r->x0, r->x1);
}

std::optional<std::pair<double, double>> y_range(const std::optional<Rectangle>& r) {
    if (!r) return std::nullopt;
    return std::make_pair(r->y0, r->y1);
}

ConditionReport base_report(const std::string& name, const GridFunction& f) {
    ConditionReport r;
    r.name = name;
    r.truncation = f.domain();
    r.resolution = f.dim() == 1 ? std::vector<std::size_t>{f.nx()} : std::vector<std::size_t>{f.nx(), f.ny()};
    return r;
}

// Cumulative integrals of a density at cell edges, long double accumulated.
std::vector<double> cumulative(const std::vector<double>& density, double h) {
    std::vector<double> out(density.size() + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < density.size(); ++i) {
        acc += static_cast<long double>(density[i]) * h;
        out[i + 1] = static_cast<double>(acc);
    }
    return out;
}

// Max with ties going to the lexicographically smallest region key.
struct Argmax {
    double value = 0.0;
    std::vector<double> key;
    bool set = false;

    void offer(double v, std::vector<double> k) {
        if (!std::isfinite(v)) {
            if (!set || std::isfinite(value) || k < key) {
                value = v;
                key = std::move(k);
                set = true;
            }
            return;
        }
        if (!set || v > value || (v == value && k < key)) {
            value = v;
            key = std::move(k);
            set = true;
        }
    }
};

std::vector<double> region_key(const GridFunction& f, const AxisInterval& ix, const AxisInterval& iy) {
    return {f.x().edge(ix.c0), f.x().edge(ix.c1), f.y().edge(iy.c0), f.y().edge(iy.c1)};
}

} // namespace

ConditionReport muckenhoupt_am(const GridFunction& v, const GridFunction& w, double p, double q,
                               std::optional<Rectangle> scan) {
    require_1d(v, "v");
    require_1d(w, "w");
    if (!v.same_grid(w)) throw DomainError("v and w live on different grids");
    require_exponents(p, q);
    require_nonnegative(v, "v");
    require_positive(w, "w");
    const double pp = conj(p);
    const std::size_t n = v.nx();
    const double h = v.x().h();

    std::vector<double> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = std::pow(w[i], 1.0 - pp);
    const std::vector<double> head = cumulative(sigma, h);
    std::vector<double> tail(n + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t i = n; i-- > 0;) {
        acc += static_cast<long double>(v[i]) * h;
        tail[i] = static_cast<double>(acc);
    }

    const auto [k0, k1] = scan_edges(v.x(), x_range(scan));
    ConditionReport r = base_report("A_M", v);
    r.arg_label = "x";
    Argmax best;
    for (std::size_t k = k0; k <= k1; ++k) {
        const double val = std::pow(tail[k], 1.0 / q) * std::pow(head[k], 1.0 / pp);
        best.offer(val, {v.x().edge(k)});
    }
    r.value = best.value;
    r.arg = best.key;
    r.extras["p"] = p;
    r.extras["q"] = q;
    return r;
}

ConditionReport persson_stepanov_aps(const GridFunction& v, const GridFunction& w, double p, double q,
                                     std::optional<Rectangle> scan) {
    require_1d(v, "v");
    require_1d(w, "w");
    if (!v.same_grid(w)) throw DomainError("v and w live on different grids");
    require_exponents(p, q);
    require_nonnegative(v, "v");
    require_positive(w, "w");
    const double pp = conj(p);
    const std::size_t n = v.nx();
    const double h = v.x().h();

    std::vector<double> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = std::pow(w[i], 1.0 - pp);
    const std::vector<double> big_w = cumulative(sigma, h);
    // W is linear on each cell, so int_cell v W^q = v (W_r^(q+1) - W_l^(q+1)) / ((q+1) sigma).
    std::vector<double> inner(n + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] != 0.0) {
            const double piece = v[i] * (std::pow(big_w[i + 1], q + 1.0) - std::pow(big_w[i], q + 1.0)) /
                                 ((q + 1.0) * sigma[i]);
            acc += piece;
        }
        inner[i + 1] = static_cast<double>(acc);
    }

    const auto [k0, k1] = scan_edges(v.x(), x_range(scan));
    ConditionReport r = base_report("A_PS", v);
    r.arg_label = "x";
    Argmax best;
    for (std::size_t k = std::max<std::size_t>(k0, 1); k <= k1; ++k) {
        if (!(big_w[k] > 0.0)) continue;
        const double val = std::pow(big_w[k], -1.0 / p) * std::pow(inner[k], 1.0 / q);
        best.offer(val, {v.x().edge(k)});
    }
    r.value = best.value;
    r.arg = best.key;
    r.extras["p"] = p;
    r.extras["q"] = q;
    return r;
}

ConditionReport condition_b(const GridFunction& v, const GridFunction& w1, const GridFunction& w2, double p,
                            const ExponentField& q, std::optional<Rectangle> scan) {
    require_2d(v, "v");
    require_1d(w1, "w1");
    require_1d(w2, "w2");
    if (!(w1.x() == v.x()) || !(w2.x() == v.y())) throw DomainError("w1 / w2 must live on v's x / y axes");
    if (!v.same_grid(q.values())) throw DomainError("v and q live on different grids");
    require_exponents(p, q.pminus());
    require_nonnegative(v, "v");
    require_positive(w1, "w1");
    require_positive(w2, "w2");
    const double pp = conj(p);
    const std::size_t nx = v.nx();
    const std::size_t ny = v.ny();

    std::vector<double> d1(nx), d2(ny);
    for (std::size_t i = 0; i < nx; ++i) d1[i] = std::pow(w1[i], -pp);
    for (std::size_t j = 0; j < ny; ++j) d2[j] = std::pow(w2[j], -pp);
    const std::vector<double> c1 = cumulative(d1, v.x().h());
    const std::vector<double> c2 = cumulative(d2, v.y().h());

    const auto [a0, a1] = scan_edges(v.x(), x_range(scan));
    const auto [b0, b1] = scan_edges(v.y(), y_range(scan));
    const std::size_t na = a1 - a0 + 1;
    const std::size_t nb = b1 - b0 + 1;
    const RectangleNormTable table(v, q);
    std::vector<double> tail(na * nb, 0.0);
    parallel_for(na, [&](std::size_t ia) {
        const std::size_t a = a0 + ia;
        for (std::size_t jb = 0; jb < nb; ++jb) {
            const std::size_t b = b0 + jb;
            tail[ia * nb + jb] = table.value({a, nx, b, ny});
        }
    });

    ConditionReport r = base_report("B", v);
    r.arg_label = "a,b";
    Argmax best;
    std::size_t best_a = a0;
    std::size_t best_b = b0;
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t jb = 0; jb < nb; ++jb) {
            const double val = tail[ia * nb + jb] * std::pow(c1[a0 + ia] * c2[b0 + jb], 1.0 / pp);
            const std::vector<double> key{v.x().edge(a0 + ia), v.y().edge(b0 + jb)};
            best.offer(val, key);
            if (best.key == key) {
                best_a = a0 + ia;
                best_b = b0 + jb;
            }
        }
    }
    r.value = best.value;
    r.arg = best.key;
    const double best_tail = tail[(best_a - a0) * nb + (best_b - b0)];
    const double best_weight = std::pow(c1[best_a] * c2[best_b], 1.0 / pp);
    r.extras["p"] = p;
    r.extras["tail_norm"] = best_tail;
    r.extras["weight_norm"] = best_weight;
    return r;
}

ConditionReport unit_weight_trace_condition(const GridFunction& v, double p, const ExponentField& q,
                                   std::optional<Rectangle> scan) {
    require_2d(v, "v");
    ConditionReport r = condition_b(v, GridFunction::constant(v.x(), 1.0), GridFunction::constant(v.y(), 1.0), p,
                                    q, scan);
    r.name = "trace-unit";
    r.extras["anchor_p"] = p;
    return r;
}

ConditionReport unit_weight_trace_condition(const GridFunction& v, const ExponentField& p, double anchor_x,
                                   double anchor_y, const ExponentField& q, std::optional<Rectangle> scan) {
    require_2d(v, "v");
    if (!p.values().same_grid(v)) throw DomainError("p and v live on different grids");
    auto cell = [](const Grid1D& axis, double t) {
        if (t < axis.lo() || t > axis.hi()) throw DomainError("anchor point outside the domain");
        const auto k = static_cast<std::size_t>(std::floor((t - axis.lo()) / axis.h()));
        return std::min(k, axis.n() - 1);
    };
    const double anchor = p.at(cell(v.x(), anchor_x), cell(v.y(), anchor_y));
    ConditionReport r = unit_weight_trace_condition(v, anchor, q, scan);
    if (anchor != p.pminus()) {
        std::ostringstream msg;
        msg << "anchor exponent " << anchor << " differs from p- = " << p.pminus();
        r.warnings.push_back(msg.str());
    }
    return r;
}

ConditionReport a1_condition(const GridFunction& v, const GridFunction& w, double p, double q,
                             std::optional<Rectangle> scan) {
    require_2d(v, "v");
    require_2d(w, "w");
    if (!v.same_grid(w)) throw DomainError("v and w live on different grids");
    require_exponents(p, q);
    require_nonnegative(v, "v");
    require_positive(w, "w");
    const double pp = conj(p);
    const BoxSums vs(v);
    const BoxSums ws(w.map([pp](double t) { return std::pow(t, 1.0 - pp); }));
    const double m = v.cell_measure();
    const auto [a0, a1] = scan_edges(v.x(), x_range(scan));
    const auto [b0, b1] = scan_edges(v.y(), y_range(scan));

    ConditionReport r = base_report("A_1", v);
    r.arg_label = "y1,y2";
    Argmax best;
    for (std::size_t a = a0; a <= a1; ++a) {
        for (std::size_t b = b0; b <= b1; ++b) {
            const double tail = vs.sum({a, v.nx(), b, v.ny()}) * m;
            const double head = ws.sum({0, a, 0, b}) * m;
            best.offer(std::pow(std::max(tail, 0.0), 1.0 / q) * std::pow(std::max(head, 0.0), 1.0 / pp),
                       {v.x().edge(a), v.y().edge(b)});
        }
    }
    r.value = best.value;
    r.arg = best.key;
    return r;
}

namespace {

struct FamilyIntervals {
    std::vector<AxisInterval> xs;
    std::vector<AxisInterval> ys;
};

FamilyIntervals family_intervals(const GridFunction& f, const RectFamily& family) {
    return {family.intervals(f.x(), 0), family.intervals(f.y(), 1)};
}

// Evaluates value(ix, iy) on every family rectangle and reduces with the tie rule.
template <class Fn>
void scan_rectangles(const GridFunction& f, const FamilyIntervals& fam, ConditionReport& r, Fn&& value) {
    const std::size_t nj = fam.ys.size();
    std::vector<double> vals(fam.xs.size() * nj, 0.0);
    parallel_for(fam.xs.size(), [&](std::size_t a) {
        for (std::size_t b = 0; b < nj; ++b) vals[a * nj + b] = value(fam.xs[a], fam.ys[b]);
    });
    Argmax best;
    for (std::size_t a = 0; a < fam.xs.size(); ++a)
        for (std::size_t b = 0; b < nj; ++b) best.offer(vals[a * nj + b], region_key(f, fam.xs[a], fam.ys[b]));
    r.value = best.value;
    r.arg = best.key;
    r.arg_label = "x0,x1,y0,y1";
    r.extras["rectangles"] = static_cast<double>(vals.size());
}

} // namespace

ConditionReport rectangle_condition_ar(const ExponentField& p, const ExponentField& q, double alpha,
                                       const RectFamily& family) {
    const GridFunction& pv = p.values();
    if (!pv.same_grid(q.values())) throw DomainError("p and q live on different grids");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in [0, 1)");
    if (alpha * p.pplus() >= 1.0) {
        std::ostringstream msg;
        msg << "alpha * p+ = " << alpha * p.pplus() << " >= 1 leaves q = p/(1 - alpha p) undefined";
        throw ParameterError(msg.str());
    }
    ConditionReport r = base_report("A_R", pv);
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < pv.size(); ++k) {
        const double expect = pv[k] / (1.0 - alpha * pv[k]);
        if (std::fabs(q[k] - expect) > 1e-9 * expect) ++mismatched;
    }
    if (mismatched) {
        std::ostringstream msg;
        msg << mismatched << " cells have q != p/(1 - alpha p)";
        r.warnings.push_back(msg.str());
    }
    const GridFunction ones = pv.map([](double) { return 1.0; });
    const RectangleNormTable tq(ones, q);
    const RectangleNormTable tp(ones, conjugate_exponent(p));
    const FamilyIntervals fam = family_intervals(pv, family);
    scan_rectangles(pv, fam, r, [&](const AxisInterval& ix, const AxisInterval& iy) {
        const CellRange cells{ix.c0, ix.c1, iy.c0, iy.c1};
        return std::pow(ix.length * iy.length, alpha - 1.0) * tq.value(cells) * tp.value(cells);
    });
    r.extras["alpha"] = alpha;
    return r;
}

ConditionReport rectangle_condition_ar(const ExponentField& p, double alpha, const RectFamily& family) {
    if (alpha * p.pplus() >= 1.0) {
        std::ostringstream msg;
        msg << "alpha * p+ = " << alpha * p.pplus() << " >= 1 leaves q = p/(1 - alpha p) undefined";
        throw ParameterError(msg.str());
    }
    const ExponentField q(p.values().map([alpha](double t) { return t / (1.0 - alpha * t); }));
    return rectangle_condition_ar(p, q, alpha, family);
}

namespace {

void require_order_window(const OrderField& f, double lo, double hi, const char* name, double p_used,
                          double q_plus) {
    if (!(f.minus() > lo)) {
        std::ostringstream msg;
        msg << name << "- = " << f.minus() << " violates 1/p - 1/q+ < " << name << "- (1/" << p_used << " - 1/"
            << q_plus << " = " << lo << ")";
        throw ParameterError(msg.str());
    }
    if (!(f.plus() < hi)) {
        std::ostringstream msg;
        msg << name << "+ = " << f.plus() << " violates " << name << "+ < 1/p = " << hi;
        throw ParameterError(msg.str());
    }
}

std::vector<double> order_vector(const OrderField& f, const Grid1D& axis, const char* name) {
    if (!(f.values().x() == axis)) throw DomainError(std::string(name) + " field does not live on the matching axis");
    const auto s = f.values().values();
    return {s.begin(), s.end()};
}

// Row-wise range minima so p-(I x J) costs O(|J|).
class RangeMin {
public:
    explicit RangeMin(const GridFunction& p) : nx_(p.nx()), ny_(p.ny()), table_(ny_ * (nx_ + 1) * (nx_ + 1)) {
        for (std::size_t j = 0; j < ny_; ++j) {
            for (std::size_t c0 = 0; c0 < nx_; ++c0) {
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t c1 = c0 + 1; c1 <= nx_; ++c1) {
                    m = std::min(m, p.at(c1 - 1, j));
                    table_[(j * (nx_ + 1) + c0) * (nx_ + 1) + c1] = m;
                }
            }
        }
    }
    double min(const CellRange& r) const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t j = r.j0; j < r.j1; ++j) m = std::min(m, table_[(j * (nx_ + 1) + r.i0) * (nx_ + 1) + r.i1]);
        return m;
    }

private:
    std::size_t nx_;
    std::size_t ny_;
    std::vector<double> table_;
};

ConditionReport trace_core(const std::string& name, const GridFunction& v, const ExponentField& q,
                           std::vector<double> alpha, std::vector<double> beta, const RectFamily& family,
                           const std::function<double(const AxisInterval&, const AxisInterval&)>& s_of) {
    require_nonnegative(v, "v");
    ConditionReport r = base_report(name, v);
    const RectangleNormTable table(v, q, std::move(alpha), std::move(beta));
    const FamilyIntervals fam = family_intervals(v, family);
    scan_rectangles(v, fam, r, [&](const AxisInterval& ix, const AxisInterval& iy) {
        const double n = table.value({ix.c0, ix.c1, iy.c0, iy.c1}, ix.length, iy.length);
        if (n == 0.0) return 0.0;
        return n * std::pow(ix.length * iy.length, -1.0 / s_of(ix, iy));
    });
    return r;
}

} // namespace

ConditionReport fractional_trace_condition(const GridFunction& v, double p, const ExponentField& q,
                                   const OrderField& alpha, const OrderField& beta, const RectFamily& family) {
    require_2d(v, "v");
    if (!v.same_grid(q.values())) throw DomainError("v and q live on different grids");
    if (!(p > 1.0) || !(p < q.pminus())) {
        std::ostringstream msg;
        msg << "trace condition needs 1 < p < q- (p = " << p << ", q- = " << q.pminus() << ")";
        throw ParameterError(msg.str());
    }
    const double lo = 1.0 / p - 1.0 / q.pplus();
    require_order_window(alpha, lo, 1.0 / p, "alpha", p, q.pplus());
    require_order_window(beta, lo, 1.0 / p, "beta", p, q.pplus());
    ConditionReport r = trace_core("trace-fractional", v, q, order_vector(alpha, v.x(), "alpha"),
                                   order_vector(beta, v.y(), "beta"), family,
                                   [p](const AxisInterval&, const AxisInterval&) { return p; });
    r.extras["p"] = p;
    return r;
}

ConditionReport fractional_trace_condition(const GridFunction& v, const ExponentField& p, TraceExponent rule,
                                   const ExponentField& q, const OrderField& alpha, const OrderField& beta,
                                   const RectFamily& family) {
    require_2d(v, "v");
    if (!v.same_grid(q.values())) throw DomainError("v and q live on different grids");
    if (rule == TraceExponent::constant) {
        if (!p.is_constant()) throw ParameterError("constant trace rule needs a constant p");
        return fractional_trace_condition(v, p.pminus(), q, alpha, beta, family);
    }
    if (!(p.pplus() < q.pminus())) {
        std::ostringstream msg;
        msg << "trace condition needs p+ < q- (p+ = " << p.pplus() << ", q- = " << q.pminus() << ")";
        throw ParameterError(msg.str());
    }
    const double pm = p.pminus();
    const double lo = 1.0 / pm - 1.0 / q.pplus();
    require_order_window(alpha, lo, 1.0 / pm, "alpha", pm, q.pplus());
    require_order_window(beta, lo, 1.0 / pm, "beta", pm, q.pplus());
    const auto av = order_vector(alpha, v.x(), "alpha");
    const auto bv = order_vector(beta, v.y(), "beta");
    if (rule == TraceExponent::pbar) {
        ConditionReport r = trace_core("trace-fractional-pbar", v, q, av, bv, family,
                                       [&p](const AxisInterval& ix, const AxisInterval& iy) {
                                           return pbar_selector(ix.length, iy.length, p);
                                       });
        return r;
    }
    if (!p.values().same_grid(v)) throw DomainError("local p- rule needs p on v's grid");
    const RangeMin mins(p.values());
    return trace_core("trace-fractional-local", v, q, av, bv, family, [&mins](const AxisInterval& ix, const AxisInterval& iy) {
        return mins.min({ix.c0, ix.c1, iy.c0, iy.c1});
    });
}

ConditionReport box_mass_condition(const GridFunction& v, double p, double q, double alpha, double beta,
                             const RectFamily& family) {
    require_2d(v, "v");
    if (!(p > 1.0) || !(p < q)) throw ParameterError("box-mass condition needs 1 < p < q");
    if (!(alpha > 0.0 && alpha < 1.0 / p)) throw ParameterError("box-mass condition needs 0 < alpha < 1/p");
    if (!(beta > 0.0 && beta < 1.0 / p)) throw ParameterError("box-mass condition needs 0 < beta < 1/p");
    require_nonnegative(v, "v");
    const GridFunction root = v.map([q](double t) { return std::pow(t, 1.0 / q); });
    const ExponentField qc = ExponentField::constant(v.x(), v.y(), q);
    ConditionReport r = trace_core("box-mass", root, qc, std::vector<double>(v.nx(), alpha),
                                   std::vector<double>(v.ny(), beta), family,
                                   [p](const AxisInterval&, const AxisInterval&) { return p; });
    r.value = std::pow(r.value, q);
    r.extras["p"] = p;
    r.extras["q"] = q;
    return r;
}

ConditionReport two_weight_fractional_condition(const GridFunction& v, const GridFunction& w1, const GridFunction& w2,
                                        double p, const ExponentField& q, const OrderField& alpha,
                                        const OrderField& beta, const RectFamily& family) {
    require_2d(v, "v");
    require_1d(w1, "w1");
    require_1d(w2, "w2");
    if (!(w1.x() == v.x()) || !(w2.x() == v.y())) throw DomainError("w1 / w2 must live on v's x / y axes");
    if (!v.same_grid(q.values())) throw DomainError("v and q live on different grids");
    if (!(p > 1.0) || !(p < q.pminus())) {
        std::ostringstream msg;
        msg << "two-weight condition needs 1 < p < q- (p = " << p << ", q- = " << q.pminus() << ")";
        throw ParameterError(msg.str());
    }
    if (!(alpha.minus() > 0.0) || !(beta.minus() > 0.0)) throw ParameterError("two-weight condition needs alpha-, beta- > 0");
    require_positive(w1, "w1");
    require_positive(w2, "w2");
    require_nonnegative(v, "v");
    const double pp = conj(p);
    std::vector<double> d1(v.nx()), d2(v.ny());
    for (std::size_t i = 0; i < v.nx(); ++i) d1[i] = std::pow(w1[i], -pp);
    for (std::size_t j = 0; j < v.ny(); ++j) d2[j] = std::pow(w2[j], -pp);
    const std::vector<double> c1 = cumulative(d1, v.x().h());
    const std::vector<double> c2 = cumulative(d2, v.y().h());

    ConditionReport r = base_report("two-weight-fractional", v);
    const RectangleNormTable table(v, q, order_vector(alpha, v.x(), "alpha"), order_vector(beta, v.y(), "beta"));
    const FamilyIntervals fam = family_intervals(v, family);
    scan_rectangles(v, fam, r, [&](const AxisInterval& ix, const AxisInterval& iy) {
        const double n = table.value({ix.c0, ix.c1, iy.c0, iy.c1}, ix.length, iy.length);
        if (n == 0.0) return 0.0;
        const double wn = std::pow((c1[ix.c1] - c1[ix.c0]) * (c2[iy.c1] - c2[iy.c0]), 1.0 / pp);
        return n * wn / (ix.length * iy.length);
    });
    r.extras["p"] = p;
    return r;
}

ConditionReport class_p_membership(const ExponentField& p, const std::vector<double>& deltas) {
    if (deltas.empty()) throw ParameterError("class P test needs at least one delta");
    const GridFunction& pv = p.values();
    const double pm = p.pminus();
    ConditionReport r = base_report("class_P", pv);
    r.arg_label = "delta";
    Argmax best;  // smallest integral wins: offer the negated value
    for (double d : deltas) {
        if (!(d > 0.0 && d < 1.0)) throw ParameterError("delta candidates must lie in (0, 1)");
        const double ld = std::log(d);
        long double acc = 0.0L;
        for (std::size_t k = 0; k < pv.size(); ++k) {
            if (pv[k] == pm) continue;  // exponent -> +inf, delta^inf = 0
            acc += std::exp(ld * pv[k] * pm / (pv[k] - pm));
        }
        const double integral = static_cast<double>(acc) * pv.cell_measure();
        std::ostringstream key;
        key << "integral_delta_" << d;
        r.extras[key.str()] = integral;
        best.offer(-integral, {d});
    }
    r.value = -best.value;
    r.arg = best.key;
    return r;
}

ConditionReport class_p_inf_membership(const ExponentField& p, double c_max) {
    const GridFunction& pv = p.values();
    const std::size_t n = pv.size();
    std::vector<double> radius(n);
    for (std::size_t j = 0; j < pv.ny(); ++j) {
        for (std::size_t i = 0; i < pv.nx(); ++i) {
            const double x = pv.x().midpoint(i);
            const double y = pv.dim() == 2 ? pv.y().midpoint(j) : 0.0;
            radius[j * pv.nx() + i] = std::hypot(x, y);
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });

    // suffix extrema over sorted positions, then extended to the start of each equal-radius run
    std::vector<double> smin(n + 1, std::numeric_limits<double>::infinity());
    std::vector<double> smax(n + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t s = n; s-- > 0;) {
        smin[s] = std::min(smin[s + 1], pv[order[s]]);
        smax[s] = std::max(smax[s + 1], pv[order[s]]);
    }
    ConditionReport r = base_report("class_P_inf", pv);
    r.arg_label = pv.dim() == 2 ? "x,y" : "x";
    Argmax best;
    std::size_t run_start = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (s > 0 && radius[order[s]] != radius[order[s - 1]]) run_start = s;
        const double px = pv[order[s]];
        const double gap = std::max(smax[run_start] - px, px - smin[run_start]);
        const double c = gap * std::log(std::exp(1.0) + radius[order[s]]);
        const std::size_t i = order[s] % pv.nx();
        const std::size_t j = order[s] / pv.nx();
        std::vector<double> key{pv.x().midpoint(i)};
        if (pv.dim() == 2) key.push_back(pv.y().midpoint(j));
        best.offer(c, key);
    }
    r.value = best.value;
    r.arg = best.key;
    r.extras["c_max"] = c_max;
    r.extras["member"] = r.value <= c_max ? 1.0 : 0.0;
    return r;
}

PartitionSequence partition_sequence(const GridFunction& w, double p, int kmax, int kmin) {
    require_1d(w, "w");
    if (!(p > 1.0)) throw ParameterError("partition sequence needs p > 1");
    if (kmin > kmax) throw ParameterError("partition sequence needs kmin <= kmax");
    if (!(w.min_value() > 0.0)) {
        throw DomainError("w vanishes on a cell: w^-p' has infinite mass there; truncate the domain");
    }
    const double pp = conj(p);
    const std::size_t n = w.nx();
    const double h = w.x().h();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) density[i] = std::pow(w[i], -pp);
    const std::vector<double> cum = cumulative(density, h);
    const double total = cum[n];
    if (total < std::ldexp(1.0, kmax)) {
        std::ostringstream msg;
        msg << "total mass " << total << " of w^-p' reaches level 2^k only up to k = "
            << static_cast<int>(std::floor(std::log2(total))) << ", requested kmax = " << kmax;
        throw RangeError(msg.str());
    }

    PartitionSequence out;
    out.p = p;
    auto mass_to = [&](double x) {
        const double t = std::floor((x - w.x().lo()) / h);
        const std::size_t i = std::min(static_cast<std::size_t>(std::max(t, 0.0)), n - 1);
        return cum[i] + density[i] * (x - w.x().edge(i));
    };
    for (int k = kmin; k <= kmax; ++k) {
        const double target = std::ldexp(1.0, k);
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        std::size_t i = static_cast<std::size_t>(it - cum.begin());
        double x;
        if (i == 0) {
            x = w.x().lo();
        } else {
            --i;  // cum[i] < target <= cum[i+1]
            x = w.x().edge(i) + (target - cum[i]) / density[i];
            x = std::min(x, w.x().edge(i + 1));
        }
        out.levels.push_back(k);
        out.points.push_back(x);
    }
    for (std::size_t s = 0; s < out.points.size(); ++s) {
        const double target = std::ldexp(1.0, out.levels[s]);
        out.max_level_residual = std::max(out.max_level_residual, std::fabs(mass_to(out.points[s]) - target) / target);
        if (s + 1 < out.points.size()) {
            const double annulus = mass_to(out.points[s + 1]) - mass_to(out.points[s]);
            out.max_annulus_residual = std::max(out.max_annulus_residual, std::fabs(annulus - target) / target);
        }
    }
    return out;
}

PartitionSequence partition_sequence(const Grid1D& axis, const std::function<double(double)>& w, double p, int kmax,
                                     int kmin) {
    if (!(p > 1.0)) throw ParameterError("partition sequence needs p > 1");
    const double edge = w(axis.lo());
    const double dens = std::pow(edge, -conj(p));
    if (!(edge > 0.0) || !std::isfinite(dens)) {
        std::ostringstream msg;
        msg << "w^-p' has infinite mass at the left edge x = " << axis.lo() << "; truncate the domain away from it";
        throw DomainError(msg.str());
    }
    return partition_sequence(GridFunction::sample(axis, w), p, kmax, kmin);
}

ConditionReport building_block_sufficiency(const GridFunction& rho, double p, std::optional<Rectangle> scan) {
    require_1d(rho, "rho");
    if (!(p > 1.0)) throw ParameterError("building-block condition needs p > 1");
    if (!(rho.min_value() > 0.0)) throw DomainError("rho must be strictly positive");
    const double pp = conj(p);
    const std::size_t n = rho.nx();
    std::vector<double> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = std::pow(rho[i], -pp);
    const std::vector<double> big = cumulative(lambda, rho.x().h());

    const auto [k0, kb] = scan_edges(rho.x(), x_range(scan));
    // cell integrals of Lambda^-p lambda are exact: (L_l^(1-p) - L_r^(1-p)) / (p - 1)
    std::vector<double> tail(kb + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t i = kb; i-- > 0;) {
        if (i == 0) break;  // Lambda(lo) = 0: the first cell is never a tail cell of an admissible t
        acc += (std::pow(big[i], 1.0 - p) - std::pow(big[i + 1], 1.0 - p)) / (p - 1.0);
        tail[i] = static_cast<double>(acc);
    }
    ConditionReport r = base_report("building-block", rho);
    r.arg_label = "t";
    Argmax best;
    for (std::size_t k = std::max<std::size_t>(k0, 1); k < kb; ++k) {
        best.offer(tail[k] * std::pow(big[k], p - 1.0), {rho.x().edge(k)});
    }
    r.value = best.value;
    r.arg = best.key;
    r.extras["p"] = p;
    r.extras["telescoped_bound"] = 1.0 / (p - 1.0);
    r.extras["analytic_bound"] = 2.0 / (p - 1.0);
    return r;
}

} // namespace vexleb
