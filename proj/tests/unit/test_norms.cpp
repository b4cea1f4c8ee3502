#include <doctest.h>

#include "helpers.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/norms.hpp"

using namespace vexleb;

namespace {

ExponentField two_piece(const Grid1D& x) {
    return ExponentField(GridFunction::sample(x, [](double t) { return t < 0.5 ? 2.0 : 3.0; }));
}

// Root of u^3 + u^2 = 2 by plain bisection, independent of the library.
double cubic_root() {
    double lo = 0.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (m * m * m + m * m < 2.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("modular examples") {
    const Grid1D x(0.0, 1.0, 64);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const GridFunction two = GridFunction::constant(x, 2.0);
    const Rectangle all = Rectangle::interval(0, 1);
    CHECK(modular(one, ExponentField::constant(x, 2.0), all, 1.0) == doctest::Approx(1.0));
    CHECK(modular(two, ExponentField::constant(x, 2.0), all, 2.0) == doctest::Approx(1.0));
    CHECK(modular(two, two_piece(x), all, 2.0) == doctest::Approx(1.0));
    // u = 2/lambda: modular = u^2/2 + u^3/2
    const double u = 1.5;
    CHECK(modular(two, two_piece(x), all, 2.0 / u) == doctest::Approx(0.5 * u * u + 0.5 * u * u * u));
    CHECK_THROWS_AS(modular(one, ExponentField::constant(x, 2.0), all, 0.0), ParameterError);
    CHECK_THROWS_AS(modular(one, ExponentField::constant(Grid1D(0, 1, 8), 2.0), all, 1.0), DomainError);
}

TEST_CASE("modular is strictly decreasing in lambda") {
    std::mt19937_64 rng(4);
    const Grid1D x(0.0, 1.0, 50);
    const GridFunction f = testing::random_function(x, rng, 0.1, 3.0);
    const ExponentField p(testing::random_function(x, rng, 1.2, 4.0));
    double prev = modular(f, p, f.domain(), 0.1);
    for (double lam = 0.2; lam < 5.0; lam += 0.1) {
        const double m = modular(f, p, f.domain(), lam);
        CHECK(m < prev);
        prev = m;
    }
}

TEST_CASE("luxemburg norm closed forms") {
    const Grid1D x(0.0, 1.0, 64);
    const GridFunction one = GridFunction::constant(x, 1.0);
    CHECK(luxemburg_norm(one, ExponentField::constant(x, 2.0)).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(luxemburg_norm(one, ExponentField::constant(x, 2.0), Rectangle::interval(0, 0.25)).value ==
          doctest::Approx(0.5).epsilon(1e-9));
    const NormResult r = luxemburg_norm(GridFunction::constant(x, 2.0), two_piece(x));
    CHECK(std::fabs(r.value - 2.0 / cubic_root()) <= 1e-8);
    CHECK(std::fabs(r.modular_at_value - 1.0) <= r.tol);
    CHECK(r.iterations <= kMaxBisection);
}

TEST_CASE("zero function has norm zero without iterating") {
    const Grid1D x(0.0, 1.0, 8);
    const NormResult r = luxemburg_norm(GridFunction::constant(x, 0.0), ExponentField::constant(x, 3.0));
    CHECK(r.value == 0.0);
    CHECK(r.iterations == 0);
}

TEST_CASE("constant exponent agrees with the classical p-norm") {
    std::mt19937_64 rng(7);
    const Grid1D x(0.0, 3.0, 40);
    const Grid1D y(-1.0, 1.0, 25);
    for (double p0 : {1.5, 2.0, 3.0, 5.0}) {
        for (int t = 0; t < 100; ++t) {
            const GridFunction f = testing::random_function(x, y, rng, -4.0, 4.0);
            double acc = 0.0;
            for (std::size_t k = 0; k < f.size(); ++k) acc += std::pow(std::fabs(f[k]), p0) * f.cell_measure();
            const double oracle = std::pow(acc, 1.0 / p0);
            const double got = luxemburg_norm(f, ExponentField::constant(x, y, p0)).value;
            CHECK(testing::rel_err(got, oracle) <= 10 * kDefaultTol);
        }
    }
}

TEST_CASE("homogeneity and the unit-modular property") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> c(-50.0, 50.0);
    const Grid1D x(0.0, 2.0, 30);
    for (int t = 0; t < 50; ++t) {
        const GridFunction f = testing::random_function(x, x, rng, -1.0, 2.0);
        const ExponentField p(testing::random_function(x, x, rng, 1.1, 6.0));
        const double s = c(rng);
        const NormResult base = luxemburg_norm(f, p);
        const NormResult scaled = luxemburg_norm(f.scaled(s), p);
        CHECK(testing::rel_err(scaled.value, std::fabs(s) * base.value) <= 10 * kDefaultTol);
        CHECK(std::fabs(modular(f, p, f.domain(), base.value) - 1.0) <= base.tol);
    }
}

TEST_CASE("monotonicity and the Hoelder pairing") {
    std::mt19937_64 rng(12);
    const Grid1D x(0.0, 1.0, 40);
    for (int t = 0; t < 30; ++t) {
        const ExponentField p(testing::random_function(x, rng, 1.3, 5.0));
        const GridFunction f = testing::random_function(x, rng, 0.0, 1.0);
        const GridFunction g = f + testing::random_function(x, rng, 0.0, 1.0);
        CHECK(luxemburg_norm(f, p).value <= luxemburg_norm(g, p).value + kDefaultTol);
        const double pairing = integrate(f * g, f.domain());
        CHECK(pairing <= 2.0 * luxemburg_norm(f, p).value * luxemburg_norm(g, conjugate_exponent(p)).value);
    }
}

TEST_CASE("weighted norm examples") {
    const Grid1D x(0.0, 1.0, 2048);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const ExponentField p2 = ExponentField::constant(x, 2.0);
    CHECK(weighted_norm(one, one, p2).value == doctest::Approx(luxemburg_norm(one, p2).value));
    const GridFunction w = GridFunction::sample(x, [](double t) { return t; });
    CHECK(weighted_norm(one, w, p2).value == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-6));

    const Grid1D g(0.0, 1.0, 256);
    const GridFunction ww = GridFunction::sample(g, g, [](double a, double b) { return a * b; });
    double direct = 0.0;
    for (std::size_t k = 0; k < ww.size(); ++k) direct += ww[k] * ww[k] * ww.cell_measure();
    const double got = weighted_norm(GridFunction::constant(g, g, 1.0), ww, ExponentField::constant(g, g, 2.0)).value;
    CHECK(got == doctest::Approx(std::sqrt(direct)).epsilon(1e-9));
    CHECK(got == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK_THROWS_AS(weighted_norm(one, w.scaled(-1.0), p2), DomainError);
}

TEST_CASE("log-space modular handles extreme magnitudes") {
    const Grid1D x(0.0, 1.0, 4);
    const GridFunction huge = GridFunction::constant(x, 1e200);
    CHECK(luxemburg_norm(huge, ExponentField::constant(x, 3.0)).value == doctest::Approx(1e200).epsilon(1e-9));
    const GridFunction tiny = GridFunction::constant(x, 1e-200);
    CHECK(luxemburg_norm(tiny, ExponentField::constant(x, 7.0)).value == doctest::Approx(1e-200).epsilon(1e-9));
}

TEST_CASE("modular terms merge equal exponents") {
    ModularTerms m;
    m.add(std::log(0.5), 2.0);
    m.add(std::log(0.5), 2.0);
    CHECK(m.size() == 1);
    CHECK(m.solve().value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rectangle norm table matches direct norms") {
    std::mt19937_64 rng(21);
    const Grid1D x(0.0, 1.0, 16);
    const GridFunction g = testing::random_function(x, x, rng, 0.0, 2.0);
    const ExponentField q(GridFunction::sample(x, x, [](double, double b) { return b < 0.5 ? 2.0 : 3.5; }));
    const RectangleNormTable table(g, q);
    CHECK(table.grouped());
    for (const CellRange r : {CellRange{0, 16, 0, 16}, CellRange{3, 9, 5, 12}, CellRange{7, 8, 7, 9}}) {
        CHECK(table.value(r) == doctest::Approx(luxemburg_norm(g, q, r).value).epsilon(1e-9));
    }
    // Many distinct exponents force the per-cell fallback; results must not change.
    const ExponentField qr(testing::random_function(x, x, rng, 1.5, 4.0));
    const RectangleNormTable fallback(g, qr);
    CHECK_FALSE(fallback.grouped());
    CHECK(fallback.value(CellRange{2, 11, 4, 15}) ==
          doctest::Approx(luxemburg_norm(g, qr, CellRange{2, 11, 4, 15}).value).epsilon(1e-9));
}
