#include "vexleb/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "vexleb/errors.hpp"

namespace vexleb {

void ModularTerms::push(double log_mass, double q) {
    a_.push_back(log_mass);
    q_.push_back(q);
    max_.push_back(log_mass);
    sum_.push_back(1.0);
}

void ModularTerms::add(double log_mass, double q) {
    auto it = index_.find(q);
    if (it == index_.end()) {
        index_.emplace(q, a_.size());
        push(log_mass, q);
        return;
    }
    const std::size_t k = it->second;
    if (log_mass > max_[k]) {
        sum_[k] = sum_[k] * std::exp(max_[k] - log_mass) + 1.0;
        max_[k] = log_mass;
    } else {
        sum_[k] += std::exp(log_mass - max_[k]);
    }
    a_[k] = max_[k] + std::log(sum_[k]);
}

double ModularTerms::evaluate_log(double log_lambda) const {
    double total = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) total += std::exp(a_[k] - q_[k] * log_lambda);
    return total;
}

double ModularTerms::evaluate(double lambda) const {
    if (!(lambda > 0.0)) throw ParameterError("modular needs lambda > 0");
    return evaluate_log(std::log(lambda));
}

NormResult ModularTerms::solve(double tol, int max_iterations) const {
    if (!(tol > 0.0)) throw ParameterError("norm tolerance must be positive");
    NormResult out;
    out.tol = tol;
    if (a_.empty()) return out;

    const double log_count = std::log(static_cast<double>(a_.size()));
    double lo = -std::numeric_limits<double>::infinity();
    double hi = lo;
    for (std::size_t k = 0; k < a_.size(); ++k) {
        lo = std::max(lo, a_[k] / q_[k]);
        hi = std::max(hi, (log_count + a_[k]) / q_[k]);
    }

    auto accept = [&](double s, double m, int iterations) {
        out.value = std::exp(s);
        out.modular_at_value = m;
        out.iterations = iterations;
        return out;
    };

    const double m_lo = evaluate_log(lo);
    if (std::fabs(m_lo - 1.0) <= tol) return accept(lo, m_lo, 0);
    const double m_hi = evaluate_log(hi);
    if (std::fabs(m_hi - 1.0) <= tol) return accept(hi, m_hi, 0);

    for (int it = 1; it <= max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = evaluate_log(mid);
        if (std::fabs(m - 1.0) <= tol) return accept(mid, m, it);
        if (mid <= lo || mid >= hi) break;
        if (m > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    std::ostringstream msg;
    msg << "Luxemburg bisection did not reach |modular - 1| <= " << tol;
    throw NonconvergenceError(msg.str(), std::exp(lo), std::exp(hi));
}

namespace {

void require_same_grid(const GridFunction& f, const ExponentField& p) {
    if (!f.same_grid(p.values())) throw DomainError("function and exponent live on different grids");
}

ModularTerms cell_terms(const GridFunction& f, const ExponentField& p, const CellRange& cells) {
    ModularTerms terms;
    if (cells.empty()) return terms;
    const double log_m = std::log(f.cell_measure());
    for (std::size_t j = cells.j0; j < cells.j1; ++j) {
        for (std::size_t i = cells.i0; i < cells.i1; ++i) {
            const double v = std::fabs(f.at(i, j));
            if (v == 0.0) continue;
            const double q = p.at(i, j);
            terms.add(log_m + q * std::log(v), q);
        }
    }
    return terms;
}

} // namespace

double modular(const GridFunction& f, const ExponentField& p, const CellRange& cells, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("modular needs lambda > 0");
    require_same_grid(f, p);
    if (cells.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t j = cells.j0; j < cells.j1; ++j) {
        for (std::size_t i = cells.i0; i < cells.i1; ++i) {
            const double v = std::fabs(f.at(i, j)) / lambda;
            if (v != 0.0) total += std::pow(v, p.at(i, j));
        }
    }
    return total * f.cell_measure();
}

double modular(const GridFunction& f, const ExponentField& p, const Rectangle& region, double lambda) {
    return modular(f, p, f.snap(region), lambda);
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, const CellRange& cells, double tol) {
    require_same_grid(f, p);
    return cell_terms(f, p, cells).solve(tol);
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, const Rectangle& region, double tol) {
    require_same_grid(f, p);
    return luxemburg_norm(f, p, f.snap(region), tol);
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, double tol) {
    return luxemburg_norm(f, p, f.all_cells(), tol);
}

NormResult weighted_norm(const GridFunction& f, const GridFunction& w, const ExponentField& p,
                         const Rectangle& region, double tol) {
    if (w.min_value() < 0.0) throw DomainError("weights must be nonnegative");
    return luxemburg_norm(f * w, p, region, tol);
}

NormResult weighted_norm(const GridFunction& f, const GridFunction& w, const ExponentField& p, double tol) {
    return weighted_norm(f, w, p, f.domain(), tol);
}

double lebesgue_norm(const GridFunction& f, double p, const CellRange& cells) {
    if (!(p > 0.0)) throw ParameterError("lebesgue_norm needs p > 0");
    if (cells.empty()) return 0.0;
    // Scale by the largest value so that |f|^p cannot overflow.
    double scale = 0.0;
    for (std::size_t j = cells.j0; j < cells.j1; ++j)
        for (std::size_t i = cells.i0; i < cells.i1; ++i) scale = std::max(scale, std::fabs(f.at(i, j)));
    if (scale == 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t j = cells.j0; j < cells.j1; ++j)
        for (std::size_t i = cells.i0; i < cells.i1; ++i) total += std::pow(std::fabs(f.at(i, j)) / scale, p);
    return scale * std::pow(total * f.cell_measure(), 1.0 / p);
}

double lebesgue_norm(const GridFunction& f, double p) { return lebesgue_norm(f, p, f.all_cells()); }

RectangleNormTable::RectangleNormTable(const GridFunction& g, const ExponentField& q,
                                       std::vector<double> alpha_x, std::vector<double> beta_y,
                                       std::size_t max_groups)
    : g_(g), q_(q), alpha_(std::move(alpha_x)), beta_(std::move(beta_y)) {
    require_same_grid(g, q);
    if (alpha_.empty()) alpha_.assign(g.nx(), 0.0);
    if (beta_.empty()) beta_.assign(g.ny(), 0.0);
    if (alpha_.size() != g.nx() || beta_.size() != g.ny()) {
        throw DimensionError("order arrays must match the grid axes");
    }

    std::map<std::tuple<double, double, double>, std::size_t> keys;
    const std::size_t nx = g.nx();
    const std::size_t ny = g.ny();
    std::vector<std::size_t> group_of(g.size());
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            auto key = std::make_tuple(q.at(i, j), alpha_[i], beta_[j]);
            auto [it, inserted] = keys.emplace(key, keys.size());
            group_of[j * nx + i] = it->second;
            if (keys.size() > max_groups) return;  // per-cell fallback
        }
    }

    grouped_ = true;
    std::vector<std::tuple<double, double, double>> ordered(keys.size());
    for (const auto& [key, idx] : keys) ordered[idx] = key;
    const double m = g.cell_measure();
    for (std::size_t k = 0; k < ordered.size(); ++k) {
        std::vector<double> mass(g.size(), 0.0);
        std::vector<double> support(g.size(), 0.0);
        for (std::size_t c = 0; c < g.size(); ++c) {
            if (group_of[c] != k || g[c] == 0.0) continue;
            mass[c] = m * std::pow(std::fabs(g[c]), std::get<0>(ordered[k]));
            support[c] = 1.0;
        }
        groups_.push_back(Group{std::get<0>(ordered[k]), std::get<1>(ordered[k]), std::get<2>(ordered[k]),
                                BoxSums(mass, nx, ny), BoxSums(support, nx, ny)});
    }
}

ModularTerms RectangleNormTable::terms(const CellRange& cells, double len_x, double len_y) const {
    ModularTerms out;
    if (cells.empty()) return out;
    const double lx = std::log(len_x);
    const double ly = std::log(len_y);
    if (grouped_) {
        for (const Group& grp : groups_) {
            if (grp.support.sum(cells) < 0.5) continue;
            const double s = grp.mass.sum(cells);
            if (!(s > 0.0)) continue;
            out.push(std::log(s) + grp.q * (grp.alpha * lx + grp.beta * ly), grp.q);
        }
        return out;
    }
    const double log_m = std::log(g_.cell_measure());
    for (std::size_t j = cells.j0; j < cells.j1; ++j) {
        for (std::size_t i = cells.i0; i < cells.i1; ++i) {
            const double v = std::fabs(g_.at(i, j));
            if (v == 0.0) continue;
            const double q = q_.at(i, j);
            out.push(log_m + q * (std::log(v) + alpha_[i] * lx + beta_[j] * ly), q);
        }
    }
    return out;
}

NormResult RectangleNormTable::norm(const CellRange& cells, double len_x, double len_y, double tol) const {
    if (!(len_x > 0.0) || !(len_y > 0.0)) throw ParameterError("rectangle side lengths must be positive");
    return terms(cells, len_x, len_y).solve(tol);
}

} // namespace vexleb
