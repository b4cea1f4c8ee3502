#pragma once

// Modular and Luxemburg norms on variable-exponent spaces.

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "vexleb/grid.hpp"

namespace vexleb {

constexpr double kDefaultTol = 1e-10;
constexpr int kMaxBisection = 200;

struct NormResult {
    double value = 0.0;
    double modular_at_value = 0.0;
    int iterations = 0;
    double tol = kDefaultTol;
};

/**
 * A modular written as a sum of log-space terms,
 *   M(lambda) = sum_k exp(a_k - q_k * ln lambda),
 * so that huge or tiny values never overflow before the root is found.
 * Cells sharing an exponent collapse into one term.
 */
class ModularTerms {
public:
    // Adds exp(log_mass) * lambda^(-q), merging with an existing term of equal q.
    void add(double log_mass, double q);
    // Adds a term without merging (used when exponents are known to be distinct).
    void push(double log_mass, double q);

    bool empty() const { return a_.empty(); }
    std::size_t size() const { return a_.size(); }
    double evaluate_log(double log_lambda) const;
    double evaluate(double lambda) const;

    // Root of M(lambda) = 1 by bisection on ln(lambda) inside the bracket
    // [max a_k/q_k, max (ln K + a_k)/q_k]; zero terms give norm 0.
    NormResult solve(double tol = kDefaultTol, int max_iterations = kMaxBisection) const;

private:
    std::vector<double> a_;
    std::vector<double> q_;
    std::vector<double> max_;  // log-sum-exp state per term
    std::vector<double> sum_;
    std::unordered_map<double, std::size_t> index_;
};

double modular(const GridFunction& f, const ExponentField& p, const Rectangle& region, double lambda);
double modular(const GridFunction& f, const ExponentField& p, const CellRange& cells, double lambda);

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, const Rectangle& region,
                          double tol = kDefaultTol);
NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, const CellRange& cells,
                          double tol = kDefaultTol);
NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol = kDefaultTol);

NormResult weighted_norm(const GridFunction& f, const GridFunction& w, const ExponentField& p,
                         const Rectangle& region, double tol = kDefaultTol);
NormResult weighted_norm(const GridFunction& f, const GridFunction& w, const ExponentField& p,
                         double tol = kDefaultTol);

// Classical (sum |f|^p * cell measure)^(1/p) for a constant exponent.
double lebesgue_norm(const GridFunction& f, double p, const CellRange& cells);
double lebesgue_norm(const GridFunction& f, double p);

/**
 * Repeated norms of g * |I|^alpha(t) * |J|^beta(s) over cell boxes I x J with
 * exponent q, where |I| and |J| are caller-supplied lengths. Cells are grouped
 * by (q, alpha, beta); each group keeps prefix sums of cell_measure * |g|^q so
 * a rectangle costs O(groups) per modular evaluation. With more than
 * `max_groups` distinct groups the table falls back to a per-cell sum.
 */
class RectangleNormTable {
public:
    RectangleNormTable(const GridFunction& g, const ExponentField& q,
                       std::vector<double> alpha_x = {}, std::vector<double> beta_y = {},
                       std::size_t max_groups = 16);

    NormResult norm(const CellRange& cells, double len_x = 1.0, double len_y = 1.0,
                    double tol = kDefaultTol) const;
    double value(const CellRange& cells, double len_x = 1.0, double len_y = 1.0,
                 double tol = kDefaultTol) const {
        return norm(cells, len_x, len_y, tol).value;
    }

    std::size_t group_count() const { return groups_.size(); }
    bool grouped() const { return grouped_; }

private:
    struct Group {
        double q;
        double alpha;
        double beta;
        BoxSums mass;
        BoxSums support;
    };

    ModularTerms terms(const CellRange& cells, double len_x, double len_y) const;

    GridFunction g_;
    ExponentField q_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
    bool grouped_ = false;
    std::vector<Group> groups_;
};

} // namespace vexleb
