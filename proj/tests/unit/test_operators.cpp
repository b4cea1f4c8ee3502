#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/operators.hpp"

using namespace vexleb;

namespace {

// max over all aligned I x J containing cell (ci, cj) of |I|^(a-1)|J|^(b-1) * int |f|.
double brute_strong(const GridFunction& f, std::size_t ci, std::size_t cj, double a, double b) {
    const double hx = f.x().h(), hy = f.y().h();
    double best = 0.0;
    for (std::size_t i0 = 0; i0 <= ci; ++i0)
        for (std::size_t i1 = ci + 1; i1 <= f.nx(); ++i1)
            for (std::size_t j0 = 0; j0 <= cj; ++j0)
                for (std::size_t j1 = cj + 1; j1 <= f.ny(); ++j1) {
                    double s = 0.0;
                    for (std::size_t j = j0; j < j1; ++j)
                        for (std::size_t i = i0; i < i1; ++i) s += std::fabs(f.at(i, j));
                    const double li = (i1 - i0) * hx, lj = (j1 - j0) * hy;
                    best = std::max(best, std::pow(li, a - 1.0) * std::pow(lj, b - 1.0) * s * hx * hy);
                }
    return best;
}

} // namespace

TEST_CASE("hardy1 examples") {
    const Grid1D x(0.0, 1.0, 100);
    const GridFunction h = hardy1(GridFunction::constant(x, 1.0));
    for (std::size_t i = 0; i < x.n(); ++i) CHECK(h[i] == doctest::Approx(x.midpoint(i)).epsilon(1e-12));

    const GridFunction half = hardy1(GridFunction::sample(x, [](double t) { return t < 0.5 ? 1.0 : 0.0; }));
    CHECK(half[x.n() - 1] == doctest::Approx(0.5));

    const Grid1D y(1e-3, 1.0, 4096);
    const GridFunction hp = hardy1(GridFunction::sample(y, [](double t) { return std::pow(t, -0.45); }));
    for (std::size_t i : {std::size_t{100}, std::size_t{2000}, std::size_t{4095}}) {
        const double t = y.midpoint(i);
        const double exact = (std::pow(t, 0.55) - std::pow(1e-3, 0.55)) / 0.55;
        CHECK(testing::rel_err(hp[i], exact) < 0.005);
    }
    CHECK_THROWS_AS(hardy1(GridFunction::constant(x, x, 1.0)), DimensionError);
}

TEST_CASE("hardy2 matches a brute-force prefix sum and factorises") {
    std::mt19937_64 rng(13);
    const Grid1D x(0.0, 1.0, 32);
    const GridFunction f = testing::random_function(x, x, rng);
    const GridFunction h = hardy2(f);
    const double c = x.h() * x.h();
    for (std::size_t cj = 0; cj < 32; cj += 5)
        for (std::size_t ci = 0; ci < 32; ci += 3) {
            double s = 0.0;
            for (std::size_t j = 0; j <= cj; ++j)
                for (std::size_t i = 0; i <= ci; ++i) {
                    const double wx = i == ci ? 0.5 : 1.0, wy = j == cj ? 0.5 : 1.0;
                    s += wx * wy * f.at(i, j);
                }
            CHECK(h.at(ci, cj) == doctest::Approx(s * c).epsilon(1e-12));
        }

    const GridFunction ones = hardy2(GridFunction::constant(x, x, 1.0));
    CHECK(ones.at(7, 20) == doctest::Approx(x.midpoint(7) * x.midpoint(20)));

    const GridFunction g = testing::random_function(x, rng), k = testing::random_function(x, rng);
    const GridFunction hg = hardy1(g), hk = hardy1(k);
    const GridFunction hp = hardy2(tensor_product(g, k));
    for (std::size_t j = 0; j < 32; j += 7)
        for (std::size_t i = 0; i < 32; i += 7) CHECK(hp.at(i, j) == doctest::Approx(hg[i] * hk[j]).epsilon(1e-12));
    CHECK_THROWS_AS(hardy2(g), DimensionError);
}

TEST_CASE("double average examples") {
    const Grid1D x(0.0, 1.0, 16);
    const GridFunction a = double_average(GridFunction::constant(x, x, 3.0));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(3.0));
    const Grid1D e(0.0, 1.0, 2);
    const GridFunction corner = double_average(GridFunction(e, e, {1.0, 0.0, 0.0, 0.0}));
    // H2 at the far midpoint (3/4, 3/4) is the corner area 1/4; the average divides by 9/16.
    CHECK(corner.at(1, 1) == doctest::Approx(0.25 / (0.75 * 0.75)));
    const Grid1D fine(0.0, 1.0, 512);
    const GridFunction q = double_average(
        GridFunction::sample(fine, fine, [](double s, double t) { return s < 0.5 && t < 0.5 ? 1.0 : 0.0; }));
    CHECK(q.at(511, 511) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("fractional maximal 1-D examples") {
    const Grid1D x(0.0, 1.0, 32);
    const GridFunction one = GridFunction::constant(x, 1.0);
    for (double a : {0.0, 0.5}) {
        const GridFunction m = fractional_maximal_1d(one, a);
        for (std::size_t i = 0; i < x.n(); ++i) CHECK(m[i] == doctest::Approx(1.0));
    }
    CHECK(fractional_maximal_1d(GridFunction::constant(x, 0.0), 0.3).max_abs() == 0.0);
    CHECK_THROWS_AS(fractional_maximal_1d(one, 1.0), ParameterError);
}

TEST_CASE("strong fractional maximal examples and brute force") {
    const Grid1D x(0.0, 1.0, 16);
    const GridFunction one = GridFunction::constant(x, x, 1.0);
    CHECK(strong_fractional_maximal(one, 0.0, 0.0).at(8, 8) == doctest::Approx(1.0));
    CHECK(strong_fractional_maximal(GridFunction::constant(x, x, 0.0), 0.2, 0.2).max_abs() == 0.0);

    const GridFunction sq = GridFunction::sample(x, x, [](double a, double b) { return a < 0.5 && b < 0.5 ? 1.0 : 0.0; });
    const GridFunction m = strong_fractional_maximal(sq, 0.25, 0.25);
    CHECK(m.at(12, 12) == doctest::Approx(brute_strong(sq, 12, 12, 0.25, 0.25)).epsilon(1e-12));

    std::mt19937_64 rng(17);
    const Grid1D y(0.0, 2.0, 8);
    const GridFunction f = testing::random_function(x, y, rng, -1.0, 1.0);
    const GridFunction mf = strong_fractional_maximal(f, 0.1, 0.35);
    for (std::size_t j = 0; j < 8; j += 3)
        for (std::size_t i = 0; i < 16; i += 5) CHECK(mf.at(i, j) == doctest::Approx(brute_strong(f, i, j, 0.1, 0.35)).epsilon(1e-12));
}

TEST_CASE("variable orders are read at the evaluation point") {
    const Grid1D x(0.0, 1.0, 8);
    const GridFunction f = GridFunction::constant(x, x, 1.0);
    const OrderField a(GridFunction::sample(x, [](double t) { return t < 0.5 ? 0.0 : 0.4; }));
    const OrderField b = OrderField::constant(x, 0.0);
    const GridFunction m = strong_fractional_maximal(f, a, b);
    CHECK(m.at(1, 3) == doctest::Approx(brute_strong(f, 1, 3, 0.0, 0.0)));
    CHECK(m.at(6, 3) == doctest::Approx(brute_strong(f, 6, 3, 0.4, 0.0)));
}

TEST_CASE("family domination, truncation monotonicity and sublinearity") {
    std::mt19937_64 rng(23);
    const Grid1D x(0.0, 8.0, 16);
    for (int t = 0; t < 5; ++t) {
        const GridFunction f = testing::random_function(x, x, rng);
        const GridFunction g = testing::random_function(x, x, rng);
        const GridFunction full = strong_fractional_maximal(f, 0.2, 0.1);
        const GridFunction dy = strong_fractional_maximal(f, 0.2, 0.1, RectFamily::dyadic());
        const GridFunction c1 = strong_fractional_maximal(f, 0.2, 0.1, RectFamily::size_capped(2.0));
        const GridFunction c2 = strong_fractional_maximal(f, 0.2, 0.1, RectFamily::size_capped(4.0));
        const GridFunction sum = strong_fractional_maximal(f + g, 0.2, 0.1);
        const GridFunction mg = strong_fractional_maximal(g, 0.2, 0.1);
        const GridFunction scaled = strong_fractional_maximal(f.scaled(-3.0), 0.2, 0.1);
        for (std::size_t k = 0; k < f.size(); ++k) {
            CHECK(dy[k] <= full[k]);
            CHECK(c1[k] <= c2[k]);
            CHECK(c2[k] <= full[k]);
            CHECK(sum[k] <= full[k] + mg[k] + 1e-12);
            CHECK(scaled[k] == doctest::Approx(3.0 * full[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("rectangle families") {
    const Grid1D x(0.0, 8.0, 16);
    const auto dy = RectFamily::dyadic().intervals(x, 0);
    CHECK(dy.size() == 31);  // 1 + 2 + 4 + 8 + 16
    for (const auto& iv : dy) {
        const std::size_t len = iv.c1 - iv.c0;
        CHECK((len & (len - 1)) == 0);
        CHECK(iv.c0 % len == 0);
    }
    CHECK(RectFamily::dyadic(2).intervals(x, 0).size() == 7);
    for (const auto& iv : RectFamily::dyadic_shifted(1.5, 0.0).intervals(x, 0)) {
        CHECK(iv.c1 <= x.n());
        CHECK(iv.c0 < iv.c1);
    }
    for (const auto& iv : RectFamily::size_capped(2.0).intervals(x, 0)) CHECK(iv.length <= 2.0 + 1e-12);
    CHECK(RectFamily::all_aligned().intervals(x, 0).size() == 16 * 17 / 2);
    for (const auto& iv : RectFamily::all_aligned().within(Rectangle{2, 4, 0, 8}).intervals(x, 0)) {
        CHECK(iv.c0 >= 4);
        CHECK(iv.c1 <= 8);
    }
    CHECK_THROWS_AS(RectFamily::dyadic().intervals(Grid1D(0, 1, 12), 0), DomainError);
}

TEST_CASE("companion maximal: constant data matches the explicit integral form") {
    std::mt19937_64 rng(31);
    const Grid1D x(0.0, 1.0, 8);
    const GridFunction v = testing::random_function(x, x, rng, 0.1, 2.0);
    const double p = 2.0, q = 4.0, al = 0.3, be = 0.3;
    const ExponentField pf = ExponentField::constant(x, x, p), qf = ExponentField::constant(x, x, q);
    const OrderField a = OrderField::constant(x, al), b = OrderField::constant(x, be);
    const GridFunction m1 = companion_maximal(v, pf, qf, a, b, CompanionVariant::m1);
    const GridFunction m2 = companion_maximal(v, pf, qf, a, b, CompanionVariant::m2);
    const GridFunction cq = companion_maximal(v, pf, qf, a, b, CompanionVariant::constant_q);
    const double h = x.h();
    for (std::size_t cj = 0; cj < 8; cj += 3)
        for (std::size_t ci = 0; ci < 8; ci += 3) {
            double best = 0.0;
            for (std::size_t i0 = 0; i0 <= ci; ++i0)
                for (std::size_t i1 = ci + 1; i1 <= 8; ++i1)
                    for (std::size_t j0 = 0; j0 <= cj; ++j0)
                        for (std::size_t j1 = cj + 1; j1 <= 8; ++j1) {
                            double s = 0.0;
                            for (std::size_t j = j0; j < j1; ++j)
                                for (std::size_t i = i0; i < i1; ++i) s += std::pow(v.at(i, j), q) * h * h;
                            const double li = (i1 - i0) * h, lj = (j1 - j0) * h;
                            best = std::max(best, std::pow(li, al - 1 / p) * std::pow(lj, be - 1 / p) * std::pow(s, 1 / q));
                        }
            CHECK(m1.at(ci, cj) == doctest::Approx(best).epsilon(1e-8));
            CHECK(m2.at(ci, cj) == doctest::Approx(m1.at(ci, cj)).epsilon(1e-12));
            CHECK(cq.at(ci, cj) == doctest::Approx(best).epsilon(1e-8));
        }
    CHECK(companion_maximal(GridFunction::constant(x, x, 0.0), pf, qf, a, b, CompanionVariant::max).max_abs() == 0.0);
    CHECK_THROWS_AS(parse_companion_variant("m3"), ParameterError);
}

TEST_CASE("pbar selector area rule") {
    const Grid1D x(0.0, 4.0, 8);
    const ExponentField p(GridFunction::sample(x, x, [](double a, double) { return a < 2 ? 2.0 : 3.0; }));
    CHECK(pbar_selector(1.0, 1.0, p) == 2.0);
    CHECK(pbar_selector(2.0, 1.0, p) == 3.0);
    const ExponentField c = ExponentField::constant(x, x, 2.5);
    CHECK(pbar_selector(0.5, 0.5, c) == pbar_selector(3.0, 3.0, c));
}
