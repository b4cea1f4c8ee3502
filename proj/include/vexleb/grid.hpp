#pragma once

/**
 * Uniform grids, cellwise-constant grid functions, exponent fields and
 * midpoint quadrature.
 *
 * Every function in the library is cellwise constant: one value per cell,
 * sampled at the cell midpoint. Integrals are sums of value * cell measure,
 * so they are exact for the represented function. A 1-D function carries a
 * unit-height dummy y axis so that 1-D and 2-D data share one storage layout
 * (row-major, y outer).
 */

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace vexleb {

class Grid1D {
public:
    Grid1D(double lo, double hi, std::size_t n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t n() const { return n_; }
    double h() const { return (hi_ - lo_) / static_cast<double>(n_); }
    double length() const { return hi_ - lo_; }

    double edge(std::size_t i) const;      // lo + i*h, edge(n) == hi exactly
    double midpoint(std::size_t i) const;  // lo + (i + 1/2)*h

    bool operator==(const Grid1D& other) const = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
};

// Axis-aligned region. For 1-D data only the x extent is used.
struct Rectangle {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;

    static Rectangle interval(double a, double b) { return {a, b, 0.0, 1.0}; }

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool operator==(const Rectangle& other) const = default;
};

// Half-open cell index box [i0, i1) x [j0, j1).
struct CellRange {
    std::size_t i0 = 0;
    std::size_t i1 = 0;
    std::size_t j0 = 0;
    std::size_t j1 = 0;

    bool empty() const { return i0 >= i1 || j0 >= j1; }
    std::size_t count() const { return empty() ? 0 : (i1 - i0) * (j1 - j0); }
};

// Smallest cell-aligned index interval covering [a, b]; throws DomainError if
// [a, b] leaves the axis (beyond a round-off allowance).
std::pair<std::size_t, std::size_t> snap_interval(const Grid1D& axis, double a, double b);

class GridFunction {
public:
    GridFunction(Grid1D x, std::vector<double> values);
    GridFunction(Grid1D x, Grid1D y, std::vector<double> values);

    static GridFunction constant(const Grid1D& x, double value);
    static GridFunction constant(const Grid1D& x, const Grid1D& y, double value);
    static GridFunction sample(const Grid1D& x, const std::function<double(double)>& f);
    static GridFunction sample(const Grid1D& x, const Grid1D& y,
                               const std::function<double(double, double)>& f);
    // Cell averages (F(b) - F(a)) / h of an antiderivative F; integrals of the
    // result reproduce F exactly at cell edges.
    static GridFunction from_antiderivative(const Grid1D& x,
                                            const std::function<double(double)>& antiderivative);

    int dim() const { return dim_; }
    const Grid1D& x() const { return x_; }
    const Grid1D& y() const { return y_; }
    std::size_t nx() const { return x_.n(); }
    std::size_t ny() const { return y_.n(); }
    std::size_t size() const { return values_.size(); }
    double cell_measure() const { return x_.h() * y_.h(); }

    double operator[](std::size_t k) const { return values_[k]; }
    double at(std::size_t i, std::size_t j = 0) const { return values_[j * x_.n() + i]; }
    std::span<const double> values() const { return values_; }

    Rectangle domain() const { return {x_.lo(), x_.hi(), y_.lo(), y_.hi()}; }
    CellRange all_cells() const { return {0, x_.n(), 0, y_.n()}; }
    CellRange snap(const Rectangle& region) const;

    bool same_grid(const GridFunction& other) const;
    double max_abs() const;
    double min_value() const;
    double max_value() const;

    GridFunction map(const std::function<double(double)>& f) const;
    GridFunction scaled(double c) const;

private:
    Grid1D x_;
    Grid1D y_;
    int dim_;
    std::vector<double> values_;
};

GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);

// Outer product u(x) * v(y) of two 1-D functions.
GridFunction tensor_product(const GridFunction& u, const GridFunction& v);

/**
 * Variable exponent p(.) with values in (1, inf); caches p- and p+.
 *
 * p = 1 cells are rejected at construction so that p' is always finite.
 */
class ExponentField {
public:
    explicit ExponentField(GridFunction values);

    static ExponentField constant(const Grid1D& x, double p);
    static ExponentField constant(const Grid1D& x, const Grid1D& y, double p);

    const GridFunction& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double at(std::size_t i, std::size_t j = 0) const { return values_.at(i, j); }
    double pminus() const { return pminus_; }
    double pplus() const { return pplus_; }
    bool is_constant() const { return pminus_ == pplus_; }

private:
    GridFunction values_;
    double pminus_;
    double pplus_;
};

// Variable fractional order alpha(.) in [0, 1) on a 1-D axis.
class OrderField {
public:
    explicit OrderField(GridFunction values);

    static OrderField constant(const Grid1D& axis, double alpha);

    const GridFunction& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double minus() const { return minus_; }
    double plus() const { return plus_; }
    bool is_constant() const { return minus_ == plus_; }

private:
    GridFunction values_;
    double minus_;
    double plus_;
};

double integrate(const GridFunction& f, const Rectangle& region);
double integrate(const GridFunction& f, const CellRange& cells);

ExponentField conjugate_exponent(const ExponentField& p);

// (min, max) of p over the cells meeting region.
std::pair<double, double> range_bounds(const ExponentField& p, const Rectangle& region);

/**
 * Inclusion-exclusion box sums over a grid function, accumulated in long
 * double so that small boxes far from the origin keep their digits.
 */
class BoxSums {
public:
    explicit BoxSums(const GridFunction& f);
    BoxSums(std::span<const double> values, std::size_t nx, std::size_t ny);

    // Sum of raw cell values (not multiplied by the cell measure).
    double sum(const CellRange& r) const;

private:
    std::size_t nx_;
    std::size_t ny_;
    std::vector<long double> table_;  // (nx+1) x (ny+1)
};

} // namespace vexleb
