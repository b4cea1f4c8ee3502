#include "vexleb/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vexleb/errors.hpp"
#include "vexleb/parallel.hpp"

namespace vexleb {

namespace {

constexpr double kLengthSlack = 1e-9;

std::size_t log2_exact(std::size_t n) {
    std::size_t d = 0;
    while ((std::size_t{1} << d) < n) ++d;
    return d;
}

std::size_t dyadic_depth(const Grid1D& axis, int depth) {
    const std::size_t n = axis.n();
    std::size_t d = depth < 0 ? log2_exact(n) : static_cast<std::size_t>(depth);
    if (d > 62 || n % (std::size_t{1} << d) != 0) {
        std::ostringstream msg;
        msg << "dyadic family of depth " << d << " needs the cell count (" << n
            << ") divisible by 2^" << d;
        throw DomainError(msg.str());
    }
    return d;
}

} // namespace

RectFamily RectFamily::all_aligned() { return RectFamily{}; }

RectFamily RectFamily::dyadic(int depth) {
    RectFamily f;
    f.mode_ = Mode::dyadic;
    f.depth_ = depth;
    return f;
}

RectFamily RectFamily::dyadic_shifted(double t, double tau, int depth) {
    RectFamily f;
    f.mode_ = Mode::dyadic_shifted;
    f.depth_ = depth;
    f.shift_[0] = t;
    f.shift_[1] = tau;
    return f;
}

RectFamily RectFamily::size_capped(double cap) {
    if (!(cap > 0.0)) throw ParameterError("size cap must be positive");
    RectFamily f;
    f.mode_ = Mode::size_capped;
    f.cap_ = cap;
    return f;
}

RectFamily RectFamily::within(const Rectangle& base) const {
    RectFamily f = *this;
    f.base_ = base;
    return f;
}

std::vector<AxisInterval> RectFamily::intervals(const Grid1D& axis, int which) const {
    const std::size_t n = axis.n();
    const double h = axis.h();
    std::vector<AxisInterval> out;

    switch (mode_) {
    case Mode::all_aligned:
    case Mode::size_capped: {
        const double cap = mode_ == Mode::size_capped ? cap_ * (1.0 + kLengthSlack) : axis.length() * 2.0;
        for (std::size_t c0 = 0; c0 < n; ++c0) {
            for (std::size_t c1 = c0 + 1; c1 <= n; ++c1) {
                const double len = static_cast<double>(c1 - c0) * h;
                if (len > cap) break;
                out.push_back({c0, c1, len});
            }
        }
        break;
    }
    case Mode::dyadic: {
        const std::size_t d = dyadic_depth(axis, depth_);
        for (std::size_t l = 0; l <= d; ++l) {
            const std::size_t w = n >> l;
            for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) {
                out.push_back({k * w, (k + 1) * w, static_cast<double>(w) * h});
            }
        }
        break;
    }
    case Mode::dyadic_shifted: {
        const std::size_t d = dyadic_depth(axis, depth_);
        const auto s = static_cast<long long>(std::llround(shift_[which] / h));
        const auto nn = static_cast<long long>(n);
        for (std::size_t l = 0; l <= d; ++l) {
            const auto w = static_cast<long long>(n >> l);
            // first lattice interval whose right end lies inside the domain
            long long k = (s >= 0) ? s / w : -((-s + w - 1) / w);
            for (;; ++k) {
                const long long c0 = k * w - s;
                const long long c1 = c0 + w;
                if (c0 >= nn) break;
                if (c1 <= 0) continue;
                out.push_back({static_cast<std::size_t>(std::max(c0, 0LL)),
                               static_cast<std::size_t>(std::min(c1, nn)), static_cast<double>(w) * h});
            }
        }
        break;
    }
    }

    if (base_) {
        const auto [b0, b1] = which == 0 ? snap_interval(axis, base_->x0, base_->x1)
                                         : snap_interval(axis, base_->y0, base_->y1);
        std::erase_if(out, [b0 = b0, b1 = b1](const AxisInterval& iv) { return iv.c0 < b0 || iv.c1 > b1; });
    }
    return out;
}

std::string RectFamily::describe() const {
    std::ostringstream s;
    switch (mode_) {
    case Mode::all_aligned: s << "all-aligned"; break;
    case Mode::dyadic: s << "dyadic(depth=" << depth_ << ")"; break;
    case Mode::dyadic_shifted:
        s << "dyadic-shifted(t=" << shift_[0] << ",tau=" << shift_[1] << ",depth=" << depth_ << ")";
        break;
    case Mode::size_capped: s << "size-capped(" << cap_ << ")"; break;
    }
    if (base_) s << " within [" << base_->x0 << "," << base_->x1 << "]x[" << base_->y0 << "," << base_->y1 << "]";
    return s.str();
}

GridFunction hardy1(const GridFunction& f) {
    if (f.dim() != 1) throw DimensionError("hardy1 expects a 1-D function");
    const double h = f.x().h();
    std::vector<double> out(f.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = static_cast<double>(acc + 0.5L * f[i] * h);
        acc += static_cast<long double>(f[i]) * h;
    }
    return GridFunction(f.x(), std::move(out));
}

GridFunction hardy2(const GridFunction& f) {
    if (f.dim() != 2) throw DimensionError("hardy2 expects a 2-D function");
    const std::size_t nx = f.nx();
    const std::size_t ny = f.ny();
    const double hx = f.x().h();
    const double hy = f.y().h();
    std::vector<double> rows(f.size());
    for (std::size_t j = 0; j < ny; ++j) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < nx; ++i) {
            const double v = f.at(i, j);
            rows[j * nx + i] = static_cast<double>(acc + 0.5L * v * hx);
            acc += static_cast<long double>(v) * hx;
        }
    }
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < nx; ++i) {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = rows[j * nx + i];
            out[j * nx + i] = static_cast<double>(acc + 0.5L * v * hy);
            acc += static_cast<long double>(v) * hy;
        }
    }
    return GridFunction(f.x(), f.y(), std::move(out));
}

GridFunction hardy_average(const GridFunction& f) {
    if (f.dim() != 1) throw DimensionError("hardy_average expects a 1-D function");
    if (f.x().lo() < 0.0) throw DomainError("hardy_average needs a domain in [0, inf)");
    GridFunction h = hardy1(f);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = h[i] / f.x().midpoint(i);
    return GridFunction(f.x(), std::move(out));
}

GridFunction double_average(const GridFunction& f) {
    if (f.dim() != 2) throw DimensionError("double_average expects a 2-D function");
    if (f.x().lo() < 0.0 || f.y().lo() < 0.0) throw DomainError("double_average needs a domain in the first quadrant");
    GridFunction h = hardy2(f);
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < f.ny(); ++j) {
        const double y = f.y().midpoint(j);
        for (std::size_t i = 0; i < f.nx(); ++i) out[j * f.nx() + i] = h.at(i, j) / (f.x().midpoint(i) * y);
    }
    return GridFunction(f.x(), f.y(), std::move(out));
}

namespace {

// For each cell, the indices of the intervals containing it.
std::vector<std::vector<std::size_t>> containing(const std::vector<AxisInterval>& ivs, std::size_t n) {
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t k = 0; k < ivs.size(); ++k)
        for (std::size_t c = ivs[k].c0; c < ivs[k].c1; ++c) out[c].push_back(k);
    return out;
}

std::vector<AxisInterval> y_intervals(const GridFunction& f, const RectFamily& family) {
    if (f.dim() == 1) return {{0, 1, 1.0}};
    return family.intervals(f.y(), 1);
}

GridFunction maximal_core(const GridFunction& f, const std::vector<double>& alpha,
                          const std::vector<double>& beta, const RectFamily& family) {
    const std::size_t nx = f.nx();
    const std::size_t ny = f.ny();
    const auto xs = family.intervals(f.x(), 0);
    const auto ys = y_intervals(f, family);
    const auto cx = containing(xs, nx);
    const auto cy = containing(ys, ny);
    const BoxSums sums(f.map([](double v) { return std::fabs(v); }));
    const double m = f.cell_measure();

    std::vector<double> out(f.size(), 0.0);
    parallel_for(ny, [&](std::size_t j) {
        std::vector<double> wy(cy[j].size());
        for (std::size_t b = 0; b < cy[j].size(); ++b) wy[b] = std::pow(ys[cy[j][b]].length, beta[j] - 1.0);
        for (std::size_t i = 0; i < nx; ++i) {
            double best = 0.0;
            for (std::size_t a : cx[i]) {
                const AxisInterval& ix = xs[a];
                const double wx = std::pow(ix.length, alpha[i] - 1.0) * m;
                for (std::size_t b = 0; b < cy[j].size(); ++b) {
                    const AxisInterval& iy = ys[cy[j][b]];
                    const double s = sums.sum({ix.c0, ix.c1, iy.c0, iy.c1});
                    best = std::max(best, wx * wy[b] * s);
                }
            }
            out[j * nx + i] = best;
        }
    });
    return f.dim() == 1 ? GridFunction(f.x(), std::move(out)) : GridFunction(f.x(), f.y(), std::move(out));
}

void require_order(double a, const char* name) {
    if (!(a >= 0.0 && a < 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << a << " outside [0, 1)";
        throw ParameterError(msg.str());
    }
}

std::vector<double> order_values(const OrderField& field, const Grid1D& axis, const char* name) {
    if (!(field.values().x() == axis)) {
        throw DomainError(std::string(name) + " field does not live on the matching axis");
    }
    const auto v = field.values().values();
    return {v.begin(), v.end()};
}

} // namespace

GridFunction fractional_maximal_1d(const GridFunction& f, double alpha, const RectFamily& family) {
    if (f.dim() != 1) throw DimensionError("fractional_maximal_1d expects a 1-D function");
    require_order(alpha, "alpha");
    return maximal_core(f, std::vector<double>(f.nx(), alpha), {0.0}, family);
}

GridFunction strong_fractional_maximal(const GridFunction& f, const OrderField& alpha, const OrderField& beta,
                                       const RectFamily& family) {
    if (f.dim() != 2) throw DimensionError("strong_fractional_maximal expects a 2-D function");
    return maximal_core(f, order_values(alpha, f.x(), "alpha"), order_values(beta, f.y(), "beta"), family);
}

GridFunction strong_fractional_maximal(const GridFunction& f, double alpha, double beta, const RectFamily& family) {
    if (f.dim() != 2) throw DimensionError("strong_fractional_maximal expects a 2-D function");
    require_order(alpha, "alpha");
    require_order(beta, "beta");
    return maximal_core(f, std::vector<double>(f.nx(), alpha), std::vector<double>(f.ny(), beta), family);
}

CompanionVariant parse_companion_variant(const std::string& name) {
    if (name == "m1") return CompanionVariant::m1;
    if (name == "m2") return CompanionVariant::m2;
    if (name == "max") return CompanionVariant::max;
    if (name == "pbar") return CompanionVariant::pbar;
    if (name == "constant-q" || name == "constant_q") return CompanionVariant::constant_q;
    throw ParameterError("unknown companion variant \"" + name + "\" (m1, m2, max, pbar, constant-q)");
}

std::string to_string(CompanionVariant v) {
    switch (v) {
    case CompanionVariant::m1: return "m1";
    case CompanionVariant::m2: return "m2";
    case CompanionVariant::max: return "max";
    case CompanionVariant::pbar: return "pbar";
    case CompanionVariant::constant_q: return "constant-q";
    }
    return "?";
}

double pbar_selector(double len_i, double len_j, const ExponentField& p) {
    return len_i * len_j <= 1.0 ? p.pminus() : p.pplus();
}

GridFunction companion_maximal(const GridFunction& v, const ExponentField& p, const ExponentField& q,
                               const OrderField& alpha, const OrderField& beta, CompanionVariant variant,
                               const RectFamily& family, double tol) {
    if (v.dim() != 2) throw DimensionError("companion_maximal expects a 2-D weight");
    if (v.min_value() < 0.0) throw DomainError("companion_maximal needs v >= 0");
    const auto av = order_values(alpha, v.x(), "alpha");
    const auto bv = order_values(beta, v.y(), "beta");
    const auto xs = family.intervals(v.x(), 0);
    const auto ys = family.intervals(v.y(), 1);

    std::vector<double> rect(xs.size() * ys.size(), 0.0);
    if (variant == CompanionVariant::constant_q) {
        if (!p.is_constant() || !alpha.is_constant() || !beta.is_constant()) {
            throw ParameterError("constant-q companion needs constant p, alpha and beta");
        }
        if (!v.same_grid(q.values())) throw DomainError("weight and exponent live on different grids");
        std::vector<double> vq(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) vq[k] = v[k] == 0.0 ? 0.0 : std::pow(v[k], q[k]);
        const BoxSums sums(vq, v.nx(), v.ny());
        const double pc = p.pminus();
        const double a = alpha.minus();
        const double b = beta.minus();
        const double m = v.cell_measure();
        for (std::size_t ia = 0; ia < xs.size(); ++ia) {
            for (std::size_t jb = 0; jb < ys.size(); ++jb) {
                const double s = sums.sum({xs[ia].c0, xs[ia].c1, ys[jb].c0, ys[jb].c1}) * m;
                if (!(s > 0.0)) continue;
                rect[ia * ys.size() + jb] = std::pow(xs[ia].length, a - 1.0 / pc) *
                                            std::pow(ys[jb].length, b - 1.0 / pc) * std::pow(s, 1.0 / q.pplus());
            }
        }
    } else {
        const RectangleNormTable table(v, q, av, bv);
        parallel_for(xs.size(), [&](std::size_t ia) {
            for (std::size_t jb = 0; jb < ys.size(); ++jb) {
                const AxisInterval& ix = xs[ia];
                const AxisInterval& iy = ys[jb];
                double n = 0.0;
                try {
                    n = table.value({ix.c0, ix.c1, iy.c0, iy.c1}, ix.length, iy.length, tol);
                } catch (const NonconvergenceError& e) {
                    std::ostringstream msg;
                    msg << e.what() << " on rectangle [" << v.x().edge(ix.c0) << "," << v.x().edge(ix.c1)
                        << "]x[" << v.y().edge(iy.c0) << "," << v.y().edge(iy.c1) << "]";
                    throw NonconvergenceError(msg.str(), e.bracket_lo(), e.bracket_hi());
                }
                if (n == 0.0) continue;
                const double area = ix.length * iy.length;
                double val = 0.0;
                switch (variant) {
                case CompanionVariant::m1: val = std::pow(area, -1.0 / p.pminus()); break;
                case CompanionVariant::m2: val = std::pow(area, -1.0 / p.pplus()); break;
                case CompanionVariant::max:
                    val = std::max(std::pow(area, -1.0 / p.pminus()), std::pow(area, -1.0 / p.pplus()));
                    break;
                case CompanionVariant::pbar:
                    val = std::pow(area, -1.0 / pbar_selector(ix.length, iy.length, p));
                    break;
                case CompanionVariant::constant_q: break;
                }
                rect[ia * ys.size() + jb] = val * n;
            }
        });
    }

    const auto cx = containing(xs, v.nx());
    const auto cy = containing(ys, v.ny());
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t j = 0; j < v.ny(); ++j) {
        for (std::size_t i = 0; i < v.nx(); ++i) {
            double best = 0.0;
            for (std::size_t a : cx[i])
                for (std::size_t b : cy[j]) best = std::max(best, rect[a * ys.size() + b]);
            out[j * v.nx() + i] = best;
        }
    }
    return GridFunction(v.x(), v.y(), std::move(out));
}

} // namespace vexleb
