#include "vexleb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vexleb/errors.hpp"
#include "vexleb/norms.hpp"
#include "vexleb/parallel.hpp"
#include "vexleb/random.hpp"

namespace vexleb {

namespace {

double conj(double p) { return p / (p - 1.0); }

GridFunction like_grid(const GridFunction& like, std::vector<double> values) {
    return like.dim() == 1 ? GridFunction(like.x(), std::move(values))
                           : GridFunction(like.x(), like.y(), std::move(values));
}

GridFunction normalised(const GridFunction& f) {
    const double m = f.max_abs();
    return m > 0.0 ? f.scaled(1.0 / m) : f;
}

// Transpose of the midpoint-corrected cumulative sum on one axis.
std::vector<double> hardy1_transpose(const std::vector<double>& u, double h) {
    std::vector<double> out(u.size());
    long double acc = 0.0L;
    for (std::size_t i = u.size(); i-- > 0;) {
        out[i] = static_cast<double>((acc + 0.5L * u[i]) * h);
        acc += u[i];
    }
    return out;
}

GridFunction hardy2_transpose(const GridFunction& u) {
    const std::size_t nx = u.nx();
    const std::size_t ny = u.ny();
    std::vector<double> rows(u.size());
    for (std::size_t j = 0; j < ny; ++j) {
        std::vector<double> r(u.values().begin() + j * nx, u.values().begin() + (j + 1) * nx);
        r = hardy1_transpose(r, u.x().h());
        std::copy(r.begin(), r.end(), rows.begin() + j * nx);
    }
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < nx; ++i) {
        std::vector<double> c(ny);
        for (std::size_t j = 0; j < ny; ++j) c[j] = rows[j * nx + i];
        c = hardy1_transpose(c, u.y().h());
        for (std::size_t j = 0; j < ny; ++j) out[j * nx + i] = c[j];
    }
    return GridFunction(u.x(), u.y(), std::move(out));
}

// (sum |f|^p * weight * measure)^(1/p)
double weighted_power_norm(const GridFunction& f, const GridFunction& weight, double p) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double a = std::fabs(f[k]);
        if (a != 0.0 && weight[k] != 0.0) acc += std::pow(a, p) * weight[k];
    }
    return std::pow(static_cast<double>(acc) * f.cell_measure(), 1.0 / p);
}

std::vector<double> geometric_edges(const Grid1D& x, std::size_t count) {
    std::vector<double> out;
    const double lo = x.lo() + x.h();
    const double hi = x.hi();
    for (std::size_t s = 0; s < count; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(count - 1);
        const double a = lo * std::pow(hi / lo, t);
        const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround((a - x.lo()) / x.h())), 1, x.n());
        const double e = x.edge(k);
        if (out.empty() || out.back() != e) out.push_back(e);
    }
    return out;
}

GridFunction indicator_1d(const Grid1D& x, double a, double b) {
    const auto [c0, c1] = snap_interval(x, a, b);
    std::vector<double> v(x.n(), 0.0);
    for (std::size_t i = c0; i < c1; ++i) v[i] = 1.0;
    return GridFunction(x, std::move(v));
}

} // namespace

double ratio_of(const RatioProblem& problem, const GridFunction& f) {
    const double den = problem.denominator(f);
    if (!(den > 0.0) || !std::isfinite(den)) return std::numeric_limits<double>::quiet_NaN();
    return problem.numerator(f) / den;
}

GridFunction random_block_function(const GridFunction& like, std::uint64_t seed, std::size_t blocks) {
    const std::size_t bx = std::min(blocks, like.nx());
    const std::size_t by = like.dim() == 2 ? std::min(blocks, like.ny()) : 1;
    std::mt19937_64 rng(seed);
    std::vector<double> block(bx * by);
    for (double& b : block) b = std::exp(standard_normal(rng));
    std::vector<double> v(like.size());
    for (std::size_t j = 0; j < like.ny(); ++j) {
        const std::size_t bj = j * by / like.ny();
        for (std::size_t i = 0; i < like.nx(); ++i) v[j * like.nx() + i] = block[bj * bx + i * bx / like.nx()];
    }
    return like_grid(like, std::move(v));
}

GridFunction power_bump(const Grid1D& x, double p, double eps, double delta, double upper) {
    if (x.lo() < 0.0) throw DomainError("power bumps need a domain in [0, inf)");
    if (!(delta < upper)) throw ParameterError("power bump needs delta < upper");
    const double s = -1.0 / p + eps + 1.0;
    auto anti = [=](double t) {
        const double c = std::clamp(t, delta, upper);
        return std::pow(c, s) / s;
    };
    return GridFunction::from_antiderivative(x, anti);
}

RatioReport estimate_operator_norm(const RatioProblem& problem, std::size_t trials, std::uint64_t seed) {
    RatioReport r;
    r.problem = problem.name;
    r.trials = trials;
    r.truncation = problem.domain.domain();
    r.resolution = problem.domain.dim() == 1 ? std::vector<std::size_t>{problem.domain.nx()}
                                             : std::vector<std::size_t>{problem.domain.nx(), problem.domain.ny()};

    auto record = [&](double ratio, const std::string& source) {
        if (!std::isfinite(ratio) && !std::isinf(ratio)) {
            ++r.skipped;
            return;
        }
        r.ratios.push_back(ratio);
        r.sources.push_back(source);
        if (ratio > r.max_ratio || r.argmax.empty()) {
            if (ratio > r.max_ratio) r.max_ratio = ratio;
            if (r.max_ratio == ratio) r.argmax = source;
        }
    };

    double best_extremal = -1.0;
    const GridFunction* best_start = nullptr;
    for (const auto& [label, f] : problem.extremals) {
        const double ratio = ratio_of(problem, f);
        record(ratio, label);
        if (std::isfinite(ratio) && ratio > best_extremal) {
            best_extremal = ratio;
            best_start = &f;
        }
    }

    if (problem.ascent) {
        std::vector<std::pair<std::string, GridFunction>> starts;
        starts.emplace_back("constant", problem.domain.map([](double) { return 1.0; }));
        if (best_start) starts.emplace_back("best extremal", *best_start);
        for (auto& [label, f] : starts) {
            GridFunction g = f;
            for (int step = 0; step < problem.ascent_steps; ++step) {
                g = problem.ascent(g);
                if (g.max_abs() == 0.0) break;
                record(ratio_of(problem, g), "power iteration from " + label);
            }
        }
    }

    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, [&](std::size_t t) {
        ratios[t] = ratio_of(problem, random_block_function(problem.domain, derive_seed(seed, t)));
    });
    for (std::size_t t = 0; t < trials; ++t) record(ratios[t], "random trial " + std::to_string(t));
    if (r.ratios.empty()) throw DomainError("every test function had a zero denominator");
    return r;
}

RatioProblem hardy_average_problem(const GridFunction& v, const GridFunction& w, double p, double q) {
    if (v.dim() != 1 || !v.same_grid(w)) throw DimensionError("hardy average needs 1-D v, w on one grid");
    if (!(p > 1.0) || !(q >= p)) throw ParameterError("hardy average needs 1 < p <= q");
    const Grid1D x = v.x();
    RatioProblem pr{"hardy-average", v, {}, {}, {}, {}};
    pr.numerator = [v, q](const GridFunction& f) {
        return weighted_power_norm(hardy_average(f.map([](double t) { return std::fabs(t); })), v, q);
    };
    pr.denominator = [w, p](const GridFunction& f) { return weighted_power_norm(f, w, p); };
    pr.ascent = [v, w, p, q](const GridFunction& f) {
        const GridFunction af = hardy_average(f.map([](double t) { return std::fabs(t); }));
        std::vector<double> u(af.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] * std::pow(af[i], q - 1.0) / af.x().midpoint(i);
        const std::vector<double> g = hardy1_transpose(u, af.x().h());
        std::vector<double> out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = w[i] > 0.0 ? std::pow(g[i] / w[i], 1.0 / (p - 1.0)) : 0.0;
        return normalised(GridFunction(af.x(), std::move(out)));
    };
    if (x.lo() < 1.0 && x.hi() > 1.0) pr.extremals.emplace_back("indicator [lo,1]", indicator_1d(x, x.lo(), 1.0));
    for (double a : geometric_edges(x, 24)) {
        std::ostringstream s;
        s << "indicator [lo," << a << "]";
        pr.extremals.emplace_back(s.str(), indicator_1d(x, x.lo(), a));
    }
    const double delta = std::max(x.lo(), 1e-12);
    for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
        for (double upper : {1.0, x.hi()}) {
            if (!(upper > delta) || upper > x.hi()) continue;
            std::ostringstream s;
            s << "power bump eps=" << eps << " [" << delta << "," << upper << "]";
            pr.extremals.emplace_back(s.str(), power_bump(x, p, eps, delta, upper));
        }
    }
    return pr;
}

RatioProblem hardy1_problem(const GridFunction& v, const GridFunction& w, double p, double q) {
    if (v.dim() != 1 || !v.same_grid(w)) throw DimensionError("hardy1 problem needs 1-D v, w on one grid");
    if (!(p > 1.0) || !(q >= p)) throw ParameterError("hardy1 problem needs 1 < p <= q");
    if (!(w.min_value() > 0.0)) throw DomainError("w must be strictly positive");
    const Grid1D x = v.x();
    const double pp = conj(p);
    RatioProblem pr{"hardy1", v, {}, {}, {}, {}};
    pr.numerator = [v, q](const GridFunction& f) {
        return weighted_power_norm(hardy1(f.map([](double t) { return std::fabs(t); })), v, q);
    };
    pr.denominator = [w, p](const GridFunction& f) { return weighted_power_norm(f, w, p); };
    pr.ascent = [v, w, p, q](const GridFunction& f) {
        const GridFunction hf = hardy1(f.map([](double t) { return std::fabs(t); }));
        std::vector<double> u(hf.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] * std::pow(hf[i], q - 1.0);
        const std::vector<double> g = hardy1_transpose(u, hf.x().h());
        std::vector<double> out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::pow(g[i] / w[i], 1.0 / (p - 1.0));
        return normalised(GridFunction(hf.x(), std::move(out)));
    };
    // Test functions w^(1-p') chi_[lo,a]: their ratio is at least both the A_M
    // and the A_PS term at a.
    const GridFunction sigma = w.map([pp](double t) { return std::pow(t, 1.0 - pp); });
    std::vector<double> anchors = geometric_edges(x, 64);
    anchors.push_back(muckenhoupt_am(v, w, p, q).arg.at(0));
    anchors.push_back(persson_stepanov_aps(v, w, p, q).arg.at(0));
    for (double a : anchors) {
        if (!(a > x.lo())) continue;
        std::ostringstream s;
        s << "muckenhoupt test a=" << a;
        pr.extremals.emplace_back(s.str(), sigma * indicator_1d(x, x.lo(), a));
    }
    if (x.lo() >= 0.0) {
        const double delta = std::max(x.lo(), 1e-12);
        for (double eps : {0.1, 0.02}) {
            std::ostringstream s;
            s << "power bump eps=" << eps;
            pr.extremals.emplace_back(s.str(), power_bump(x, p, eps, delta, x.hi()));
        }
    }
    return pr;
}

RatioProblem hardy2_problem(const GridFunction& v, const GridFunction& w1, const GridFunction& w2, double p,
                            const ExponentField& q) {
    if (v.dim() != 2) throw DimensionError("hardy2 problem needs a 2-D v");
    if (!(w1.x() == v.x()) || !(w2.x() == v.y())) throw DomainError("w1 / w2 must live on v's axes");
    if (!v.same_grid(q.values())) throw DomainError("v and q live on different grids");
    if (!(w1.min_value() > 0.0) || !(w2.min_value() > 0.0)) throw DomainError("weights must be strictly positive");
    const GridFunction w = tensor_product(w1, w2);
    const GridFunction wp = w.map([p](double t) { return std::pow(t, p); });
    const double pp = conj(p);
    RatioProblem pr{"hardy2", v, {}, {}, {}, {}};
    pr.numerator = [v, q](const GridFunction& f) {
        return luxemburg_norm(v * hardy2(f.map([](double t) { return std::fabs(t); })), q).value;
    };
    pr.denominator = [wp, p](const GridFunction& f) { return weighted_power_norm(f, wp, p); };
    pr.ascent = [v, q, wp, p](const GridFunction& f) {
        const GridFunction hf = hardy2(f.map([](double t) { return std::fabs(t); }));
        const GridFunction vh = v * hf;
        const double n = luxemburg_norm(vh, q).value;
        std::vector<double> u(hf.size(), 0.0);
        if (n > 0.0) {
            for (std::size_t k = 0; k < u.size(); ++k) {
                if (vh[k] > 0.0) u[k] = q[k] * std::pow(vh[k] / n, q[k] - 1.0) * v[k] / n;
            }
        }
        const GridFunction g = hardy2_transpose(GridFunction(v.x(), v.y(), std::move(u)));
        std::vector<double> out(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) out[k] = std::pow(std::max(g[k], 0.0) / wp[k], 1.0 / (p - 1.0));
        return normalised(GridFunction(v.x(), v.y(), std::move(out)));
    };
    const GridFunction sigma = w.map([pp](double t) { return std::pow(t, -pp); });
    for (std::size_t s = 1; s <= 4; ++s) {
        for (std::size_t t = 1; t <= 4; ++t) {
            const std::size_t ia = v.nx() * s / 4;
            const std::size_t jb = v.ny() * t / 4;
            std::vector<double> f(v.size(), 0.0);
            for (std::size_t j = 0; j < jb; ++j)
                for (std::size_t i = 0; i < ia; ++i) f[j * v.nx() + i] = sigma.at(i, j);
            std::ostringstream lbl;
            lbl << "necessity test a=" << v.x().edge(ia) << " b=" << v.y().edge(jb);
            pr.extremals.emplace_back(lbl.str(), GridFunction(v.x(), v.y(), std::move(f)));
        }
    }
    return pr;
}

RatioProblem double_average_problem(const ExponentField& p) {
    const GridFunction& pv = p.values();
    if (pv.dim() != 2) throw DimensionError("double average problem needs a 2-D exponent");
    RatioProblem pr{"double-average", pv, {}, {}, {}, {}};
    pr.numerator = [p](const GridFunction& f) {
        return luxemburg_norm(double_average(f.map([](double t) { return std::fabs(t); })), p).value;
    };
    pr.denominator = [p](const GridFunction& f) { return luxemburg_norm(f, p).value; };
    for (double frac : {0.125, 0.25, 0.5, 1.0}) {
        const double a = pv.x().lo() + frac * pv.x().length();
        const double b = pv.y().lo() + frac * pv.y().length();
        std::vector<double> f(pv.size(), 0.0);
        const CellRange c = pv.snap({pv.x().lo(), a, pv.y().lo(), b});
        for (std::size_t j = c.j0; j < c.j1; ++j)
            for (std::size_t i = c.i0; i < c.i1; ++i) f[j * pv.nx() + i] = 1.0;
        std::ostringstream lbl;
        lbl << "corner indicator " << frac;
        pr.extremals.emplace_back(lbl.str(), GridFunction(pv.x(), pv.y(), std::move(f)));
    }
    return pr;
}

RatioProblem strong_fractional_problem(const GridFunction& v, const GridFunction& w, double p, const ExponentField& q,
                                       double alpha, double beta, const RectFamily& family) {
    if (v.dim() != 2 || !v.same_grid(w) || !v.same_grid(q.values())) {
        throw DomainError("strong fractional problem needs v, w, q on one 2-D grid");
    }
    if (!(p > 1.0)) throw ParameterError("strong fractional problem needs p > 1");
    const GridFunction wp = w.map([p](double t) { return std::pow(t, p); });
    RatioProblem pr{"strong-fractional", v, {}, {}, {}, {}};
    pr.numerator = [v, q, alpha, beta, family](const GridFunction& f) {
        return luxemburg_norm(v * strong_fractional_maximal(f, alpha, beta, family), q).value;
    };
    pr.denominator = [wp, p](const GridFunction& f) { return weighted_power_norm(f, wp, p); };
    for (std::size_t size : {std::size_t{1}, std::size_t{2}, v.nx() / 4, v.nx() / 2}) {
        if (size == 0) continue;
        std::vector<double> f(v.size(), 0.0);
        const std::size_t i0 = (v.nx() - size) / 2;
        const std::size_t j0 = (v.ny() - std::min(size, v.ny())) / 2;
        for (std::size_t j = j0; j < j0 + std::min(size, v.ny()); ++j)
            for (std::size_t i = i0; i < i0 + size; ++i) f[j * v.nx() + i] = 1.0;
        pr.extremals.emplace_back("centred square " + std::to_string(size), GridFunction(v.x(), v.y(), std::move(f)));
    }
    return pr;
}

HardyGrids build_hardy_fixture(const HardyFixture& fx, std::size_t n, double scale) {
    const Grid1D x(fx.lo, fx.lo + scale * (fx.hi - fx.lo), n);
    GridFunction v = fx.v_antiderivative ? GridFunction::from_antiderivative(x, fx.v_antiderivative)
                                         : GridFunction::sample(x, fx.v);
    return {std::move(v), GridFunction::sample(x, fx.w)};
}

HardyFixture power_weight_fixture(int which) {
    HardyFixture fx;
    // h must stay well below lo, or the first cell swallows the singular part of v.
    fx.lo = 1e-2;
    fx.hi = 100.0;
    fx.n = 65536;
    switch (which) {
    case 1:
        fx.name = "p=q=2, w=1, v=x^-2";
        fx.p = 2.0;
        fx.q = 2.0;
        fx.w = [](double) { return 1.0; };
        fx.v = [](double x) { return std::pow(x, -2.0); };
        fx.v_antiderivative = [](double x) { return -1.0 / x; };
        break;
    case 2:
        fx.name = "p=2, q=4, w=x^0.5, v=x^-2";
        fx.p = 2.0;
        fx.q = 4.0;
        fx.w = [](double x) { return std::sqrt(x); };
        fx.v = [](double x) { return std::pow(x, -2.0); };
        fx.v_antiderivative = [](double x) { return -1.0 / x; };
        break;
    case 3:
        fx.name = "p=q=3, w=x^0.5, v=x^-2.5";
        fx.p = 3.0;
        fx.q = 3.0;
        fx.w = [](double x) { return std::sqrt(x); };
        fx.v = [](double x) { return std::pow(x, -2.5); };
        fx.v_antiderivative = [](double x) { return -std::pow(x, -1.5) / 1.5; };
        break;
    default: throw ParameterError("power-weight fixtures are numbered 1..3");
    }
    return fx;
}

HardyFixture fat_tail_fixture() {
    HardyFixture fx;
    fx.name = "fat tail v=(1+x)^-1/2, w=1, p=q=2";
    fx.lo = 1e-3;
    fx.hi = 100.0;
    fx.n = 2048;
    fx.p = 2.0;
    fx.q = 2.0;
    fx.w = [](double) { return 1.0; };
    fx.v = [](double x) { return 1.0 / std::sqrt(1.0 + x); };
    fx.v_antiderivative = [](double x) { return 2.0 * std::sqrt(1.0 + x); };
    return fx;
}

SandwichReport hardy_sandwich(const HardyFixture& fx, std::size_t trials, std::uint64_t seed, double tol) {
    if (!(fx.p > 1.0) || fx.p > fx.q) throw ParameterError("sandwich needs 1 < p <= q");
    const RefinementVerdict verdict = assess_refinement(
        [&](std::size_t n, double scale) {
            const HardyGrids g = build_hardy_fixture(fx, n, scale);
            return muckenhoupt_am(g.v, g.w, fx.p, fx.q).value;
        },
        fx.n, !fx.bounded_domain);
    if (verdict.verdict == Finiteness::non_finite) {
        std::ostringstream msg;
        msg << "Muckenhoupt constant is not finite on fixture \"" << fx.name << "\" (values " << verdict.base << ", "
            << verdict.refined;
        if (verdict.enlarged) msg << ", " << *verdict.enlarged;
        msg << " under refinement)";
        throw InapplicableError(msg.str());
    }
    const HardyGrids g = build_hardy_fixture(fx, fx.n);
    SandwichReport r;
    r.tol = tol;
    r.am = muckenhoupt_am(g.v, g.w, fx.p, fx.q);
    attach_refinement(r.am, verdict);
    if (verdict.verdict == Finiteness::inconclusive) r.am.warnings.push_back("finiteness under refinement is inconclusive");
    r.aps = persson_stepanov_aps(g.v, g.w, fx.p, fx.q);
    r.empirical = estimate_operator_norm(hardy1_problem(g.v, g.w, fx.p, fx.q), trials, seed);

    const double pp = conj(fx.p);
    r.upper_factor_m = std::pow(1.0 + fx.q / pp, 1.0 / fx.q) * std::pow(1.0 + pp / fx.q, 1.0 / pp);
    r.upper_factor_ps = pp;
    const double c = r.empirical.max_ratio;
    r.empirical.bound_low = r.am.value;
    r.empirical.bound_high = r.upper_factor_m * r.am.value;
    r.upper_m_ok = c <= r.upper_factor_m * r.am.value * (1.0 + tol);
    r.upper_ps_ok = c <= r.upper_factor_ps * r.aps.value * (1.0 + tol);
    r.lower_m_ok = r.am.value <= c * (1.0 + tol);
    r.lower_ps_ok = r.aps.value <= c * (1.0 + tol);
    return r;
}

DoubleHardyFixture unit_double_hardy_fixture(double p, double q) {
    DoubleHardyFixture fx;
    fx.name = "v = w = 1 on [0,1]^2";
    fx.p = p;
    fx.v = [](double, double) { return 1.0; };
    fx.w1 = [](double) { return 1.0; };
    fx.w2 = [](double) { return 1.0; };
    fx.q = [q](double, double) { return q; };
    return fx;
}

namespace {

struct DoubleHardyGrids {
    GridFunction v;
    GridFunction w1;
    GridFunction w2;
    ExponentField q;
};

DoubleHardyGrids build_double_hardy(const DoubleHardyFixture& fx, std::size_t n) {
    const Grid1D x(0.0, fx.x_hi, n);
    const Grid1D y(0.0, fx.y_hi, n);
    return {GridFunction::sample(x, y, fx.v), GridFunction::sample(x, fx.w1), GridFunction::sample(y, fx.w2),
            ExponentField(GridFunction::sample(x, y, fx.q))};
}

} // namespace

DoubleHardyReport verify_double_hardy(const DoubleHardyFixture& fx, std::size_t n, std::size_t trials,
                                   std::uint64_t seed) {
    const DoubleHardyGrids g = build_double_hardy(fx, n);
    const DoubleHardyGrids gf = build_double_hardy(fx, 2 * n);
    DoubleHardyReport r;
    r.b = condition_b(g.v, g.w1, g.w2, fx.p, g.q);
    r.coarse = estimate_operator_norm(hardy2_problem(g.v, g.w1, g.w2, fx.p, g.q), trials, seed);
    r.fine = estimate_operator_norm(hardy2_problem(gf.v, gf.w1, gf.w2, fx.p, gf.q), trials, seed);
    r.drift = r.coarse.max_ratio > 0.0 ? r.fine.max_ratio / r.coarse.max_ratio - 1.0 : 0.0;

    // Necessity test functions around condition_b's argmax plus a coarse lattice.
    const double pp = conj(fx.p);
    const GridFunction w = tensor_product(g.w1, g.w2);
    const GridFunction sigma = w.map([pp](double t) { return std::pow(t, -pp); });
    const GridFunction wp = w.map([&](double t) { return std::pow(t, fx.p); });
    const Grid1D& xa = g.v.x();
    const Grid1D& ya = g.v.y();
    const auto ia_b = static_cast<long long>(std::llround((r.b.arg.at(0) - xa.lo()) / xa.h()));
    const auto jb_b = static_cast<long long>(std::llround((r.b.arg.at(1) - ya.lo()) / ya.h()));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const auto nn = static_cast<long long>(n);
    for (long long di = -3; di <= 3; ++di)
        for (long long dj = -3; dj <= 3; ++dj) {
            const long long a = ia_b + di, b = jb_b + dj;
            if (a >= 1 && a < nn && b >= 1 && b < nn) pairs.emplace_back(a, b);
        }
    for (std::size_t s = 1; s < 8; ++s)
        for (std::size_t t = 1; t < 8; ++t) pairs.emplace_back(n * s / 8, n * t / 8);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    std::vector<double> restricted(pairs.size(), 0.0);
    std::vector<double> full(pairs.size(), 0.0);
    parallel_for(pairs.size(), [&](std::size_t s) {
        const auto [ia, jb] = pairs[s];
        std::vector<double> f(g.v.size(), 0.0);
        for (std::size_t j = 0; j < jb; ++j)
            for (std::size_t i = 0; i < ia; ++i) f[j * n + i] = sigma.at(i, j);
        const GridFunction fg(xa, ya, std::move(f));
        const double den = weighted_power_norm(fg, wp, fx.p);
        const GridFunction image = g.v * hardy2(fg);
        restricted[s] = luxemburg_norm(image, g.q, CellRange{ia, n, jb, n}).value / den;
        full[s] = luxemburg_norm(image, g.q).value / den;
    });
    std::size_t best = 0;
    for (std::size_t s = 1; s < pairs.size(); ++s)
        if (restricted[s] > restricted[best]) best = s;
    r.restricted_max = restricted[best];
    r.restricted_argmax = {xa.edge(pairs[best].first), ya.edge(pairs[best].second)};
    r.restricted_cells_off = static_cast<double>(
        std::max(std::llabs(static_cast<long long>(pairs[best].first) - ia_b),
                 std::llabs(static_cast<long long>(pairs[best].second) - jb_b)));
    for (std::size_t s = 0; s < pairs.size(); ++s) {
        if (static_cast<long long>(pairs[s].first) == ia_b && static_cast<long long>(pairs[s].second) == jb_b) {
            r.full_ratio_at_b_argmax = full[s];
        }
    }

    // One-dimensional building block with sigma = w1^-p' as the measure.
    const GridFunction s1 = g.w1.map([pp](double t) { return std::pow(t, -pp); });
    std::vector<double> s_mid(n);
    {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            s_mid[i] = static_cast<double>(acc + 0.5L * s1[i] * xa.h());
            acc += static_cast<long double>(s1[i]) * xa.h();
        }
    }
    auto block_ratio = [&](const GridFunction& f) {
        const GridFunction hf = hardy1(f);
        long double lhs = 0.0L, rhs = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            lhs += std::pow(hf[i] / s_mid[i], fx.p) * s1[i];
            rhs += std::pow(f[i] * g.w1[i], fx.p);
        }
        return rhs > 0.0L ? static_cast<double>(lhs / rhs) : 0.0;
    };
    r.building_block_bound = std::pow(pp, fx.p);
    for (std::size_t t = 0; t < trials; ++t) {
        r.building_block_max = std::max(r.building_block_max,
                                        block_ratio(random_block_function(g.w1, derive_seed(seed ^ 0x3131ULL, t))));
    }
    for (std::size_t k = 1; k <= n; k *= 2) {
        r.building_block_max = std::max(r.building_block_max, block_ratio(s1 * indicator_1d(xa, xa.lo(), xa.edge(k))));
    }

    r.passed = std::isfinite(r.fine.max_ratio) && std::fabs(r.drift) < 0.10 && r.restricted_cells_off <= 1.0 &&
               r.building_block_max <= r.building_block_bound * (1.0 + 1e-9);
    return r;
}

std::vector<double> default_blowup_taus() {
    std::vector<double> t;
    for (int k = 2; k <= 9; ++k) t.push_back(std::ldexp(1.0, -k));
    return t;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope fit needs at least two points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += std::log(x[k]);
        sy += std::log(y[k]);
    }
    const double mx = sx / static_cast<double>(x.size());
    const double my = sy / static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = std::log(x[k]) - mx;
        num += dx * (std::log(y[k]) - my);
        den += dx * dx;
    }
    return num / den;
}

BlowupSeries blowup_series(const BlowupConfig& config) {
    const BlowupConfig& c = config;
    if (!(c.p1 > 1.0) || c.p2 < c.p1) throw ParameterError("blow-up series needs 1 < p1 <= p2");
    if (!(c.alpha >= 0.0) || !(c.alpha < 1.0 / c.p2)) throw ParameterError("blow-up series needs 0 <= alpha < 1/p2");
    if (!(c.a < c.b && c.b <= c.c && c.c < c.d)) throw ParameterError("blow-up geometry needs a < b <= c < d");
    BlowupSeries out;
    out.config = c;
    out.taus = c.taus.empty() ? default_blowup_taus() : c.taus;
    for (std::size_t k = 1; k < out.taus.size(); ++k)
        if (!(out.taus[k] < out.taus[k - 1])) throw ParameterError("taus must be strictly decreasing");

    const Grid1D x(0.0, 2.0, c.nx);
    const Grid1D y(0.0, 1.0, c.ny);
    const double split = 0.5 * (c.b + c.c);
    const GridFunction pv = GridFunction::sample(x, y, [&](double, double yy) { return yy < split ? c.p1 : c.p2; });
    const ExponentField p(pv);
    const ExponentField q(pv.map([&](double t) { return t / (1.0 - c.alpha * t); }));
    const ExponentField pc = conjugate_exponent(p);
    const GridFunction ones = pv.map([](double) { return 1.0; });
    const RectangleNormTable tq(ones, q);
    const RectangleNormTable tp(ones, pc);

    for (double tau : out.taus) {
        if (tau < x.h()) {
            std::ostringstream msg;
            msg << "tau = " << tau << " is below the grid width " << x.h();
            throw ResolutionError(msg.str());
        }
        if (c.x0 - tau < 0.0 || c.x0 + tau > 2.0) throw DomainError("Q_tau leaves the domain [0,2]x[0,1]");
        const CellRange q_all = pv.snap({c.x0 - tau, c.x0 + tau, c.a, c.d});
        const CellRange q1 = pv.snap({c.x0 - tau, c.x0 + tau, c.a, c.b});
        const CellRange q2 = pv.snap({c.x0 - tau, c.x0 + tau, c.c, c.d});
        const double area = 2.0 * tau * (c.d - c.a);
        const double scale = std::pow(area, c.alpha - 1.0);
        out.values.push_back(scale * tq.value(q_all) * tp.value(q_all));
        out.lower_bounds.push_back(scale * tq.value(q2) * tp.value(q1));
    }
    out.slope = loglog_slope(out.taus, out.values);
    out.lower_bound_slope = loglog_slope(out.taus, out.lower_bounds);
    out.predicted_slope = 1.0 / c.p2 - 1.0 / c.p1;
    out.passed = std::fabs(out.slope - out.predicted_slope) <= c.slope_tolerance;
    return out;
}

ExponentField corner_step_exponent(std::size_t n) {
    const Grid1D ax(0.0, 2.0, n);
    return ExponentField(
        GridFunction::sample(ax, ax, [](double x, double y) { return (x >= 1.0 && y >= 1.0) ? 3.0 : 2.0; }));
}

namespace {

ConditionReport double_average_supremum(std::size_t n) {
    const ExponentField p = corner_step_exponent(n);
    const Grid1D ax(0.0, 2.0, n);
    const GridFunction v = GridFunction::sample(ax, ax, [](double x, double y) { return 1.0 / (x * y); });
    ConditionReport r = unit_weight_trace_condition(v, p, 0.0, 0.0, p);
    r.name = "double-average";
    return r;
}

} // namespace

DoubleAverageReport verify_double_average(std::size_t n, std::size_t trials, std::uint64_t seed) {
    DoubleAverageReport r;
    const RefinementVerdict verdict =
        assess_refinement([](std::size_t m, double) { return double_average_supremum(m).value; }, n, false);
    r.supremum = double_average_supremum(n);
    attach_refinement(r.supremum, verdict);
    r.ratios = estimate_operator_norm(double_average_problem(corner_step_exponent(n)), trials, seed);
    r.ratios_refined = estimate_operator_norm(double_average_problem(corner_step_exponent(2 * n)), trials, seed);
    r.drift = r.ratios.max_ratio > 0.0 ? r.ratios_refined.max_ratio / r.ratios.max_ratio - 1.0 : 0.0;
    r.passed = verdict.verdict == Finiteness::finite && std::isfinite(r.ratios_refined.max_ratio) &&
               std::fabs(r.drift) < 0.10;
    return r;
}

GridFunction dyadic_comparison_fixture(const std::string& name, std::uint64_t seed) {
    const Grid1D ax(0.0, 8.0, 32);
    auto square = [&](double lo, double hi) {
        return GridFunction::sample(ax, ax, [=](double x, double y) {
            return (x >= lo && x < hi && y >= lo && y < hi) ? 1.0 : 0.0;
        });
    };
    if (name == "aligned") return square(0.0, 2.0);
    if (name == "straddle") return square(3.0, 5.0);
    if (name == "random") return random_block_function(GridFunction::constant(ax, ax, 1.0), derive_seed(seed, 0), 8);
    throw ParameterError("unknown fixture '" + name + "'; valid: aligned, straddle, random");
}

DyadicComparisonReport verify_dyadic_comparison(const GridFunction& f, const OrderField& alpha,
                                                const OrderField& beta, int k, std::size_t shift_samples,
                                                std::uint64_t seed) {
    if (f.dim() != 2) throw DimensionError("dyadic comparison needs a 2-D function");
    if (f.min_value() < 0.0) throw DomainError("dyadic comparison needs f >= 0");
    if (shift_samples == 0) throw ParameterError("need at least one shift sample per axis");
    const double cap = std::ldexp(1.0, k);
    if (cap < std::min(f.x().h(), f.y().h())) throw ResolutionError("2^k is below the grid width");
    const GridFunction lhs = strong_fractional_maximal(f, alpha, beta, RectFamily::size_capped(cap));

    const double radius = std::ldexp(1.0, k + 2);
    const double width = 2.0 * radius / static_cast<double>(shift_samples);
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> shifts;
    for (std::size_t u = 0; u < shift_samples; ++u)
        for (std::size_t w = 0; w < shift_samples; ++w) {
            const double t = -radius + (static_cast<double>(u) + uniform01(rng)) * width;
            const double tau = -radius + (static_cast<double>(w) + uniform01(rng)) * width;
            shifts.emplace_back(t, tau);
        }
    std::vector<GridFunction> sampled(shifts.size(), f);
    parallel_for(shifts.size(), [&](std::size_t s) {
        sampled[s] = strong_fractional_maximal(f, alpha, beta, RectFamily::dyadic_shifted(shifts[s].first, shifts[s].second));
    });
    std::vector<double> rhs(f.size(), 0.0);
    for (const GridFunction& s : sampled)
        for (std::size_t c = 0; c < f.size(); ++c) rhs[c] += s[c];
    for (double& v : rhs) v /= static_cast<double>(shifts.size());

    const GridFunction plain = strong_fractional_maximal(f, alpha, beta, RectFamily::dyadic());
    DyadicComparisonReport r;
    r.shift_samples = shift_samples;
    r.k = k;
    for (std::size_t c = 0; c < f.size(); ++c) {
        r.lhs_max = std::max(r.lhs_max, lhs[c]);
        r.rhs_max = std::max(r.rhs_max, rhs[c]);
        if (lhs[c] == 0.0) continue;
        const double ratio = rhs[c] > 0.0 ? lhs[c] / rhs[c] : std::numeric_limits<double>::infinity();
        if (ratio > r.c_min) {
            r.c_min = ratio;
            r.argmax = {f.x().midpoint(c % f.nx()), f.y().midpoint(c / f.nx())};
        }
        const double pr = plain[c] > 0.0 ? lhs[c] / plain[c] : std::numeric_limits<double>::infinity();
        r.c_unshifted = std::max(r.c_unshifted, pr);
    }
    return r;
}

} // namespace vexleb
