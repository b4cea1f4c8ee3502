#include "vexleb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vexleb/errors.hpp"

namespace vexleb {

namespace {

// Round-off allowance (in cell widths) when snapping region edges.
constexpr double kSnapSlack = 1e-9;

void require_finite(std::span<const double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            std::ostringstream msg;
            msg << "grid function value at cell " << k << " is not finite";
            throw DomainError(msg.str());
        }
    }
}

} // namespace

Grid1D::Grid1D(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
        throw ParameterError("Grid1D requires finite lo < hi");
    }
    if (n == 0) {
        throw ParameterError("Grid1D requires at least one cell");
    }
}

double Grid1D::edge(std::size_t i) const {
    if (i == n_) return hi_;
    return lo_ + (hi_ - lo_) * (static_cast<double>(i) / static_cast<double>(n_));
}

double Grid1D::midpoint(std::size_t i) const {
    return lo_ + (hi_ - lo_) * ((static_cast<double>(i) + 0.5) / static_cast<double>(n_));
}

std::pair<std::size_t, std::size_t> snap_interval(const Grid1D& axis, double a, double b) {
    const double h = axis.h();
    if (a < axis.lo() - kSnapSlack * h || b > axis.hi() + kSnapSlack * h || a > b) {
        std::ostringstream msg;
        msg << "region [" << a << ", " << b << "] outside axis [" << axis.lo() << ", "
            << axis.hi() << "]";
        throw DomainError(msg.str());
    }
    const double n = static_cast<double>(axis.n());
    double lo_cells = std::floor((a - axis.lo()) / h + kSnapSlack);
    double hi_cells = std::ceil((b - axis.lo()) / h - kSnapSlack);
    lo_cells = std::clamp(lo_cells, 0.0, n);
    hi_cells = std::clamp(hi_cells, 0.0, n);
    if (hi_cells < lo_cells) hi_cells = lo_cells;
    return {static_cast<std::size_t>(lo_cells), static_cast<std::size_t>(hi_cells)};
}

GridFunction::GridFunction(Grid1D x, std::vector<double> values)
    : x_(x), y_(0.0, 1.0, 1), dim_(1), values_(std::move(values)) {
    if (values_.size() != x_.n()) {
        throw DomainError("1-D grid function needs exactly one value per cell");
    }
    require_finite(values_);
}

GridFunction::GridFunction(Grid1D x, Grid1D y, std::vector<double> values)
    : x_(x), y_(y), dim_(2), values_(std::move(values)) {
    if (values_.size() != x_.n() * y_.n()) {
        throw DomainError("2-D grid function needs exactly one value per cell");
    }
    require_finite(values_);
}

GridFunction GridFunction::constant(const Grid1D& x, double value) {
    return GridFunction(x, std::vector<double>(x.n(), value));
}

GridFunction GridFunction::constant(const Grid1D& x, const Grid1D& y, double value) {
    return GridFunction(x, y, std::vector<double>(x.n() * y.n(), value));
}

GridFunction GridFunction::sample(const Grid1D& x, const std::function<double(double)>& f) {
    std::vector<double> v(x.n());
    for (std::size_t i = 0; i < x.n(); ++i) v[i] = f(x.midpoint(i));
    return GridFunction(x, std::move(v));
}

GridFunction GridFunction::sample(const Grid1D& x, const Grid1D& y,
                                  const std::function<double(double, double)>& f) {
    std::vector<double> v(x.n() * y.n());
    for (std::size_t j = 0; j < y.n(); ++j) {
        const double yc = y.midpoint(j);
        for (std::size_t i = 0; i < x.n(); ++i) v[j * x.n() + i] = f(x.midpoint(i), yc);
    }
    return GridFunction(x, y, std::move(v));
}

GridFunction GridFunction::from_antiderivative(const Grid1D& x,
                                               const std::function<double(double)>& antiderivative) {
    std::vector<double> v(x.n());
    double left = antiderivative(x.edge(0));
    for (std::size_t i = 0; i < x.n(); ++i) {
        const double right = antiderivative(x.edge(i + 1));
        v[i] = (right - left) / x.h();
        left = right;
    }
    return GridFunction(x, std::move(v));
}

CellRange GridFunction::snap(const Rectangle& region) const {
    CellRange r;
    std::tie(r.i0, r.i1) = snap_interval(x_, region.x0, region.x1);
    if (dim_ == 2) {
        std::tie(r.j0, r.j1) = snap_interval(y_, region.y0, region.y1);
    } else {
        r.j0 = 0;
        r.j1 = 1;
    }
    return r;
}

bool GridFunction::same_grid(const GridFunction& other) const {
    return dim_ == other.dim_ && x_ == other.x_ && y_ == other.y_;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double GridFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

GridFunction GridFunction::map(const std::function<double(double)>& f) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), f);
    return dim_ == 1 ? GridFunction(x_, std::move(v)) : GridFunction(x_, y_, std::move(v));
}

GridFunction GridFunction::scaled(double c) const {
    return map([c](double v) { return c * v; });
}

namespace {

GridFunction combine(const GridFunction& a, const GridFunction& b, double (*op)(double, double)) {
    if (!a.same_grid(b)) throw DomainError("grid functions live on different grids");
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(a[k], b[k]);
    return a.dim() == 1 ? GridFunction(a.x(), std::move(v)) : GridFunction(a.x(), a.y(), std::move(v));
}

} // namespace

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    return combine(a, b, [](double u, double v) { return u * v; });
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    return combine(a, b, [](double u, double v) { return u + v; });
}

GridFunction tensor_product(const GridFunction& u, const GridFunction& v) {
    if (u.dim() != 1 || v.dim() != 1) throw DimensionError("tensor_product expects two 1-D functions");
    std::vector<double> out(u.size() * v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < u.size(); ++i) out[j * u.size() + i] = u[i] * v[j];
    return GridFunction(u.x(), v.x(), std::move(out));
}

ExponentField::ExponentField(GridFunction values) : values_(std::move(values)) {
    pminus_ = values_.min_value();
    pplus_ = values_.max_value();
    if (!(pminus_ > 1.0)) {
        throw ExponentRangeError("exponent values must be strictly greater than 1");
    }
}

ExponentField ExponentField::constant(const Grid1D& x, double p) {
    return ExponentField(GridFunction::constant(x, p));
}

ExponentField ExponentField::constant(const Grid1D& x, const Grid1D& y, double p) {
    return ExponentField(GridFunction::constant(x, y, p));
}

OrderField::OrderField(GridFunction values) : values_(std::move(values)) {
    if (values_.dim() != 1) throw DimensionError("fractional order fields are 1-D");
    minus_ = values_.min_value();
    plus_ = values_.max_value();
    if (minus_ < 0.0 || !(plus_ < 1.0)) {
        throw ExponentRangeError("fractional order values must lie in [0, 1)");
    }
}

OrderField OrderField::constant(const Grid1D& axis, double alpha) {
    return OrderField(GridFunction::constant(axis, alpha));
}

double integrate(const GridFunction& f, const CellRange& cells) {
    if (cells.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t j = cells.j0; j < cells.j1; ++j) {
        for (std::size_t i = cells.i0; i < cells.i1; ++i) total += f.at(i, j);
    }
    return total * f.cell_measure();
}

double integrate(const GridFunction& f, const Rectangle& region) {
    return integrate(f, f.snap(region));
}

ExponentField conjugate_exponent(const ExponentField& p) {
    return ExponentField(p.values().map([](double v) { return v / (v - 1.0); }));
}

std::pair<double, double> range_bounds(const ExponentField& p, const Rectangle& region) {
    const CellRange cells = p.values().snap(region);
    if (cells.empty()) throw DomainError("range_bounds over an empty region");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = cells.j0; j < cells.j1; ++j) {
        for (std::size_t i = cells.i0; i < cells.i1; ++i) {
            lo = std::min(lo, p.at(i, j));
            hi = std::max(hi, p.at(i, j));
        }
    }
    return {lo, hi};
}

BoxSums::BoxSums(const GridFunction& f) : BoxSums(f.values(), f.nx(), f.ny()) {}

BoxSums::BoxSums(std::span<const double> values, std::size_t nx, std::size_t ny)
    : nx_(nx), ny_(ny), table_((nx + 1) * (ny + 1), 0.0L) {
    const std::size_t stride = nx + 1;
    for (std::size_t j = 0; j < ny; ++j) {
        long double row = 0.0L;
        for (std::size_t i = 0; i < nx; ++i) {
            row += values[j * nx + i];
            table_[(j + 1) * stride + i + 1] = table_[j * stride + i + 1] + row;
        }
    }
}

double BoxSums::sum(const CellRange& r) const {
    if (r.empty()) return 0.0;
    const std::size_t s = nx_ + 1;
    const long double v = table_[r.j1 * s + r.i1] - table_[r.j0 * s + r.i1] -
                          table_[r.j1 * s + r.i0] + table_[r.j0 * s + r.i0];
    return static_cast<double>(v);
}

} // namespace vexleb
