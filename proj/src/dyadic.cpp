#include "vexleb/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "vexleb/errors.hpp"
#include "vexleb/parallel.hpp"
#include "vexleb/random.hpp"

namespace vexleb {

DyadicTree::DyadicTree(double lo, double hi, int depth, std::vector<double> coefficients)
    : lo_(lo), hi_(hi), depth_(depth), coefficients_(std::move(coefficients)) {
    if (!(lo < hi)) throw ParameterError("dyadic tree needs lo < hi");
    if (depth < 0 || depth > 24) throw ParameterError("dyadic tree depth must lie in [0, 24]");
    if (coefficients_.empty()) coefficients_.assign(node_count(depth), 0.0);
    if (coefficients_.size() != node_count(depth)) {
        std::ostringstream msg;
        msg << "depth " << depth << " tree needs " << node_count(depth) << " coefficients, got "
            << coefficients_.size();
        throw DimensionError(msg.str());
    }
}

int DyadicTree::level_of(std::size_t node) const {
    int l = 0;
    while (node + 1 >= (std::size_t{2} << l)) ++l;
    return l;
}

std::pair<double, double> DyadicTree::interval(std::size_t node) const {
    const int l = level_of(node);
    const std::size_t k = node + 1 - (std::size_t{1} << l);
    const double len = (hi_ - lo_) / static_cast<double>(std::size_t{1} << l);
    return {lo_ + len * static_cast<double>(k), lo_ + len * static_cast<double>(k + 1)};
}

double DyadicTree::length(std::size_t node) const {
    return (hi_ - lo_) / static_cast<double>(std::size_t{1} << level_of(node));
}

namespace {

struct NodeCells {
    std::vector<std::size_t> c0;
    std::vector<std::size_t> c1;
};

// Cell ranges of every node; nodes must sit on cell edges.
NodeCells node_cells(const DyadicTree& tree, const GridFunction& rho) {
    if (rho.dim() != 1) throw DimensionError("dyadic operations expect a 1-D density");
    NodeCells out;
    out.c0.resize(tree.size());
    out.c1.resize(tree.size());
    const Grid1D& x = rho.x();
    for (std::size_t node = 0; node < tree.size(); ++node) {
        const auto [a, b] = tree.interval(node);
        const auto [c0, c1] = snap_interval(x, a, b);
        if (std::fabs(x.edge(c0) - a) > 1e-9 * x.h() || std::fabs(x.edge(c1) - b) > 1e-9 * x.h()) {
            std::ostringstream msg;
            msg << "dyadic node [" << a << ", " << b << ") does not align with the grid";
            throw DomainError(msg.str());
        }
        out.c0[node] = c0;
        out.c1[node] = c1;
    }
    return out;
}

std::vector<double> prefix(const std::vector<double>& v, double h) {
    std::vector<double> out(v.size() + 1, 0.0);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += static_cast<long double>(v[i]) * h;
        out[i + 1] = static_cast<double>(acc);
    }
    return out;
}

void require_pq(double p, double q) {
    if (!(p > 1.0) || !(q > p)) throw ParameterError("dyadic embedding needs 1 < p < q");
}

std::string node_name(const DyadicTree& tree, std::size_t node) {
    const auto [a, b] = tree.interval(node);
    std::ostringstream s;
    s << "node " << node << " [" << a << ", " << b << ")";
    return s.str();
}

// sigma_I = int_I rho^(1-p') per node.
std::vector<double> sigma_masses(const DyadicTree& tree, const GridFunction& rho, double p, const NodeCells& cells) {
    const double pp = p / (p - 1.0);
    std::vector<double> dens(rho.nx());
    for (std::size_t i = 0; i < rho.nx(); ++i) dens[i] = rho[i] > 0.0 ? std::pow(rho[i], 1.0 - pp) : 0.0;
    const auto cum = prefix(dens, rho.x().h());
    std::vector<double> out(tree.size());
    for (std::size_t node = 0; node < tree.size(); ++node) {
        out[node] = cum[cells.c1[node]] - cum[cells.c0[node]];
        if (!(out[node] > 0.0)) throw DomainError("zero rho^(1-p') mass on " + node_name(tree, node));
    }
    return out;
}

} // namespace

RdReport rd_dyadic_check(const GridFunction& rho, const DyadicTree& tree) {
    const NodeCells cells = node_cells(tree, rho);
    if (rho.min_value() < 0.0) throw DomainError("rho must be nonnegative");
    std::vector<double> vals(rho.values().begin(), rho.values().end());
    const auto cum = prefix(vals, rho.x().h());
    std::vector<double> mass(tree.size());
    for (std::size_t node = 0; node < tree.size(); ++node) {
        mass[node] = cum[cells.c1[node]] - cum[cells.c0[node]];
        if (!(mass[node] > 0.0)) throw DomainError("zero rho mass on " + node_name(tree, node));
    }
    RdReport r;
    for (std::size_t child = 1; child < tree.size(); ++child) {
        const std::size_t parent = (child - 1) / 2;
        const double ratio = mass[parent] / mass[child];
        if (ratio > r.b_star) {
            r.b_star = ratio;
            r.parent = parent;
            r.child = child;
        }
    }
    r.member = std::isfinite(r.b_star);
    if (r.b_star > r.warning_threshold) {
        std::ostringstream msg;
        msg << "reverse-doubling constant " << r.b_star << " exceeds " << r.warning_threshold << " at "
            << node_name(tree, r.child);
        r.warnings.push_back(msg.str());
    }
    return r;
}

double carleson_constant(const DyadicTree& tree, const GridFunction& rho, double p, double q) {
    require_pq(p, q);
    const NodeCells cells = node_cells(tree, rho);
    const std::vector<double> sigma = sigma_masses(tree, rho, p, cells);
    const double pp = p / (p - 1.0);
    double c1 = 0.0;
    for (std::size_t node = 0; node < tree.size(); ++node) {
        const double c = tree.coefficient(node);
        if (c == 0.0) continue;
        c1 = std::max(c1, c * std::pow(tree.length(node), -q) * std::pow(sigma[node], q / pp));
    }
    return c1;
}

std::vector<double> unit_carleson_coefficients(const DyadicTree& tree, const GridFunction& rho, double p, double q) {
    require_pq(p, q);
    const NodeCells cells = node_cells(tree, rho);
    const std::vector<double> sigma = sigma_masses(tree, rho, p, cells);
    const double pp = p / (p - 1.0);
    std::vector<double> c(tree.size());
    for (std::size_t node = 0; node < tree.size(); ++node) {
        c[node] = std::pow(tree.length(node), q) * std::pow(sigma[node], -q / pp);
    }
    return c;
}

namespace {

struct Evaluator {
    const DyadicTree& tree;
    const GridFunction& rho;
    NodeCells cells;
    double p;
    double q;
    std::size_t lo_cell;
    std::size_t hi_cell;

    std::pair<double, double> sides(const std::vector<double>& g) const {
        const double h = rho.x().h();
        const auto cum = prefix(g, h);
        long double lhs = 0.0L;
        for (std::size_t node = 0; node < tree.size(); ++node) {
            const double c = tree.coefficient(node);
            if (c == 0.0) continue;
            const double avg = (cum[cells.c1[node]] - cum[cells.c0[node]]) / tree.length(node);
            if (avg > 0.0) lhs += c * std::pow(avg, q);
        }
        long double rhs = 0.0L;
        for (std::size_t i = lo_cell; i < hi_cell; ++i) {
            if (g[i] > 0.0) rhs += std::pow(g[i], p) * rho[i] * h;
        }
        return {static_cast<double>(lhs), std::pow(static_cast<double>(rhs), q / p)};
    }

    double ratio(const std::vector<double>& g) const {
        const auto [lhs, rhs] = sides(g);
        if (rhs == 0.0) return 0.0;
        return lhs / rhs;
    }

    // g <- (sum_{I contains cell} c_I avg_I^(q-1) / |I| / rho)^(1/(p-1))
    std::vector<double> ascend(const std::vector<double>& g) const {
        const double h = rho.x().h();
        const auto cum = prefix(g, h);
        std::vector<double> acc(g.size(), 0.0);
        for (std::size_t node = 0; node < tree.size(); ++node) {
            const double c = tree.coefficient(node);
            if (c == 0.0) continue;
            const double len = tree.length(node);
            const double avg = (cum[cells.c1[node]] - cum[cells.c0[node]]) / len;
            if (!(avg > 0.0)) continue;
            const double add = c * std::pow(avg, q - 1.0) / len;
            for (std::size_t i = cells.c0[node]; i < cells.c1[node]; ++i) acc[i] += add;
        }
        std::vector<double> out(g.size(), 0.0);
        double scale = 0.0;
        for (std::size_t i = lo_cell; i < hi_cell; ++i) {
            if (acc[i] > 0.0 && rho[i] > 0.0) out[i] = std::pow(acc[i] / rho[i], 1.0 / (p - 1.0));
            scale = std::max(scale, out[i]);
        }
        if (scale > 0.0)
            for (double& v : out) v /= scale;
        return out;
    }
};

constexpr int kAscentSteps = 60;

} // namespace

std::pair<double, double> embedding_sides(const DyadicTree& tree, const GridFunction& rho, const GridFunction& g,
                                          double p, double q) {
    require_pq(p, q);
    if (!g.same_grid(rho)) throw DomainError("g and rho live on different grids");
    const NodeCells cells = node_cells(tree, rho);
    Evaluator ev{tree, rho, cells, p, q, cells.c0[0], cells.c1[0]};
    std::vector<double> gv(g.values().begin(), g.values().end());
    for (std::size_t i = 0; i < gv.size(); ++i)
        if (i < ev.lo_cell || i >= ev.hi_cell) gv[i] = 0.0;
    return ev.sides(gv);
}

EmbeddingReport embedding_bruteforce(const DyadicTree& tree, const GridFunction& rho, double p, double q,
                                     std::size_t trials, std::uint64_t seed) {
    require_pq(p, q);
    if (!(rho.min_value() > 0.0)) throw DomainError("embedding check needs rho > 0");
    const NodeCells cells = node_cells(tree, rho);
    Evaluator ev{tree, rho, cells, p, q, cells.c0[0], cells.c1[0]};
    const std::size_t n = rho.nx();
    const double pp = p / (p - 1.0);

    EmbeddingReport r;
    r.c1 = carleson_constant(tree, rho, p, q);
    r.trials = trials;
    r.root_lo = tree.lo();
    r.root_hi = tree.hi();
    r.depth = tree.depth();

    auto consider = [&](double ratio, const std::string& source) {
        ++r.evaluated;
        if (ratio > r.c_emp) {
            r.c_emp = ratio;
            r.best_source = source;
        }
    };

    std::vector<double> bump_base(n, 0.0);
    for (std::size_t i = ev.lo_cell; i < ev.hi_cell; ++i) bump_base[i] = std::pow(rho[i], 1.0 - pp);

    for (std::size_t node = 0; node < tree.size(); ++node) {
        std::vector<double> ind(n, 0.0);
        std::vector<double> bump(n, 0.0);
        for (std::size_t i = cells.c0[node]; i < cells.c1[node]; ++i) {
            ind[i] = 1.0;
            bump[i] = bump_base[i];
        }
        consider(ev.ratio(ind), "indicator " + node_name(tree, node));
        consider(ev.ratio(bump), "bump " + node_name(tree, node));
    }

    std::vector<double> ones(n, 0.0);
    for (std::size_t i = ev.lo_cell; i < ev.hi_cell; ++i) ones[i] = 1.0;
    for (const auto* start : {&ones, &bump_base}) {
        std::vector<double> g = *start;
        for (int step = 0; step < kAscentSteps; ++step) {
            g = ev.ascend(g);
            consider(ev.ratio(g), "power iteration");
        }
    }

    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, [&](std::size_t t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        std::vector<double> g(n, 0.0);
        for (std::size_t i = ev.lo_cell; i < ev.hi_cell; ++i) g[i] = std::exp(standard_normal(rng));
        ratios[t] = ev.ratio(g);
    });
    for (std::size_t t = 0; t < trials; ++t) consider(ratios[t], "random trial " + std::to_string(t));
    return r;
}

} // namespace vexleb
