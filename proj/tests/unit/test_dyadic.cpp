#include <doctest.h>

#include "helpers.hpp"
#include "vexleb/dyadic.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/report_json.hpp"

using namespace vexleb;

TEST_CASE("tree layout") {
    const DyadicTree t(0.0, 8.0, 3);
    CHECK(t.size() == 15);
    CHECK(t.level_of(DyadicTree::index(2, 3)) == 2);
    CHECK(t.interval(DyadicTree::index(2, 3)) == std::pair{6.0, 8.0});
    CHECK(t.length(DyadicTree::index(3, 0)) == 1.0);
}

TEST_CASE("reverse doubling constant") {
    const Grid1D x(0.0, 1.0, 64);
    CHECK(rd_dyadic_check(GridFunction::constant(x, 1.0), DyadicTree(0, 1, 6)).b_star == 2.0);

    const GridFunction lin = GridFunction::from_antiderivative(x, [](double t) { return 0.5 * t * t; });
    const DyadicTree t(0, 1, 4);
    double oracle = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) {
        const auto [a, b] = t.interval(n);
        const auto [pa, pb] = t.interval((n - 1) / 2);
        oracle = std::max(oracle, (pb * pb - pa * pa) / (b * b - a * a));
    }
    CHECK(rd_dyadic_check(lin, t).b_star == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oracle == doctest::Approx(4.0));

    std::vector<double> spike(64, 1e-9);
    spike[0] = 1.0;
    const RdReport r = rd_dyadic_check(GridFunction(x, spike), DyadicTree(0, 1, 6));
    CHECK(r.b_star > r.warning_threshold);
    CHECK_FALSE(r.warnings.empty());
    std::vector<double> hole(64, 1.0);
    hole[5] = 0.0;
    CHECK_THROWS_AS(rd_dyadic_check(GridFunction(x, hole), DyadicTree(0, 1, 6)), DomainError);
}

TEST_CASE("Carleson constant") {
    const Grid1D x(0.0, 1.0, 32);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const DyadicTree t(0, 1, 5);
    std::vector<double> c(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) c[n] = std::pow(t.length(n), 1.5);
    CHECK(carleson_constant(t.with_coefficients(c), one, 2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(carleson_constant(t, one, 2.0, 3.0) == 0.0);

    std::mt19937_64 rng(71);
    const GridFunction rho = testing::random_function(x, rng, 0.5, 2.0);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (double& v : c) v = d(rng);
    const double p = 2.0, q = 3.0, pp = 2.0;
    double oracle = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
        const auto [a, b] = t.interval(n);
        double mass = 0.0;
        for (std::size_t i = 0; i < 32; ++i)
            if (x.midpoint(i) > a && x.midpoint(i) < b) mass += std::pow(rho[i], 1 - pp) * x.h();
        oracle = std::max(oracle, c[n] * std::pow(b - a, -q) * std::pow(mass, q / pp));
    }
    CHECK(carleson_constant(t.with_coefficients(c), rho, p, q) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("saturating coefficients give unit Carleson constant") {
    std::mt19937_64 rng(73);
    const Grid1D x(0.0, 1.0, 64);
    for (int k = 0; k < 5; ++k) {
        const GridFunction rho = testing::random_function(x, rng, 0.2, 3.0);
        const DyadicTree t(0, 1, 6);
        const DyadicTree c = t.with_coefficients(unit_carleson_coefficients(t, rho, 2.0, 3.0));
        CHECK(carleson_constant(c, rho, 2.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("embedding sides: root indicator is a geometric series") {
    const int depth = 5;
    const Grid1D x(0.0, 1.0, 32);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const DyadicTree t(0, 1, depth);
    std::vector<double> c(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) c[n] = std::pow(t.length(n), 1.5);
    const auto [lhs, rhs] = embedding_sides(t.with_coefficients(c), one, one, 2.0, 3.0);
    double series = 0.0;
    for (int l = 0; l <= depth; ++l) series += std::pow(2.0, -l / 2.0);
    CHECK(lhs == doctest::Approx(series).epsilon(1e-12));
    CHECK(rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedding brute force: zero, scaling and the indicator lower bound") {
    const Grid1D x(0.0, 1.0, 16);
    std::mt19937_64 rng(79);
    const GridFunction rho = testing::random_function(x, rng, 0.5, 2.0);
    const DyadicTree t(0, 1, 4);
    CHECK(embedding_bruteforce(t, rho, 2.0, 3.0, 10, 1).c_emp == 0.0);

    std::vector<double> c(t.size());
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (double& v : c) v = d(rng);
    const EmbeddingReport base = embedding_bruteforce(t.with_coefficients(c), rho, 2.0, 3.0, 20, 5);
    for (double& v : c) v *= 7.0;
    const EmbeddingReport scaled = embedding_bruteforce(t.with_coefficients(c), rho, 2.0, 3.0, 20, 5);
    CHECK(scaled.c_emp == doctest::Approx(7.0 * base.c_emp).epsilon(1e-12));
    CHECK(scaled.c1 == doctest::Approx(7.0 * base.c1).epsilon(1e-12));
    CHECK(base.c1 <= base.c_emp * (1.0 + 1e-12));
    CHECK(base.generator == "embed-v1");
}

TEST_CASE("embedding brute force is deterministic for a seed") {
    const Grid1D x(0.0, 1.0, 32);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const DyadicTree t(0, 1, 5);
    const DyadicTree c = t.with_coefficients(unit_carleson_coefficients(t, one, 2.0, 3.0));
    const EmbeddingReport a = embedding_bruteforce(c, one, 2.0, 3.0, 40, 9);
    const EmbeddingReport b = embedding_bruteforce(c, one, 2.0, 3.0, 40, 9);
    CHECK(a.c_emp == b.c_emp);
    CHECK(a.best_source == b.best_source);
}

TEST_CASE("tree JSON round trip") {
    const DyadicTree t(0.0, 4.0, 2, {1, 2, 3, 4, 5, 6, 7});
    const DyadicTree back = tree_from_json(to_json(t));
    CHECK(back.lo() == 0.0);
    CHECK(back.hi() == 4.0);
    CHECK(back.depth() == 2);
    CHECK(back.coefficients() == t.coefficients());
    CHECK_THROWS_AS(tree_from_json(Json::parse(R"({"root":[0],"depth":1})")), DomainError);
}
