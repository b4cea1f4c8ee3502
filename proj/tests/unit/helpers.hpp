#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "vexleb/grid.hpp"

namespace testing {

inline vexleb::GridFunction random_function(const vexleb::Grid1D& x, std::mt19937_64& rng, double lo = 0.0,
                                            double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(x.n());
    for (double& t : v) t = d(rng);
    return vexleb::GridFunction(x, std::move(v));
}

inline vexleb::GridFunction random_function(const vexleb::Grid1D& x, const vexleb::Grid1D& y,
                                            std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(x.n() * y.n());
    for (double& t : v) t = d(rng);
    return vexleb::GridFunction(x, y, std::move(v));
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace testing
