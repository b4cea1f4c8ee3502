#pragma once

// Finite dyadic trees, the dyadic reverse-doubling constant and the
// Carleson-type coefficient bound for the dyadic embedding
//   sum_I c_I (avg_I g)^q <= C (int g^p rho)^(q/p).

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vexleb/grid.hpp"

namespace vexleb {

/**
 * Dyadic intervals of [lo, hi) down to `depth` levels, stored level order:
 * node (level l, position k) has index 2^l - 1 + k and length (hi-lo) 2^-l.
 */
class DyadicTree {
public:
    DyadicTree(double lo, double hi, int depth, std::vector<double> coefficients = {});

    static std::size_t node_count(int depth) { return (std::size_t{2} << depth) - 1; }
    static std::size_t index(int level, std::size_t k) { return (std::size_t{1} << level) - 1 + k; }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int depth() const { return depth_; }
    std::size_t size() const { return coefficients_.size(); }
    int level_of(std::size_t node) const;
    std::pair<double, double> interval(std::size_t node) const;
    double length(std::size_t node) const;

    const std::vector<double>& coefficients() const { return coefficients_; }
    double coefficient(std::size_t node) const { return coefficients_[node]; }
    DyadicTree with_coefficients(std::vector<double> c) const { return DyadicTree(lo_, hi_, depth_, std::move(c)); }

private:
    double lo_;
    double hi_;
    int depth_;
    std::vector<double> coefficients_;
};

struct RdReport {
    double b_star = 0.0;
    bool member = true;
    std::size_t parent = 0;  // node index of the worst parent
    std::size_t child = 0;
    double warning_threshold = 1e6;
    std::vector<std::string> warnings;
};

// b* = max over parent/child pairs of rho(parent) / rho(child).
RdReport rd_dyadic_check(const GridFunction& rho, const DyadicTree& tree);

// Minimal C1 with c_I <= C1 |I|^q (int_I rho^(1-p'))^(-q/p').
double carleson_constant(const DyadicTree& tree, const GridFunction& rho, double p, double q);

// c_I = |I|^q (int_I rho^(1-p'))^(-q/p'), which makes C1 = 1.
std::vector<double> unit_carleson_coefficients(const DyadicTree& tree, const GridFunction& rho, double p, double q);

struct EmbeddingReport {
    double c_emp = 0.0;
    double c1 = 0.0;
    std::size_t trials = 0;
    std::size_t evaluated = 0;
    std::string best_source;
    std::string generator = "embed-v1";
    double root_lo = 0.0;
    double root_hi = 1.0;
    int depth = 0;
};

// Left side sum_I c_I (avg_I g)^q and right side (int g^p rho)^(q/p) for one g.
std::pair<double, double> embedding_sides(const DyadicTree& tree, const GridFunction& rho, const GridFunction& g,
                                          double p, double q);

/**
 * C_emp = max LHS/RHS over node indicators, rho^(1-p')-bumps on every node,
 * a fixed-start nonlinear power iteration and `trials` random exp-Gaussian
 * functions seeded from (seed, trial).
 */
EmbeddingReport embedding_bruteforce(const DyadicTree& tree, const GridFunction& rho, double p, double q,
                                     std::size_t trials, std::uint64_t seed);

} // namespace vexleb
