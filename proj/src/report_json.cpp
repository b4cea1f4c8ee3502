#include "vexleb/report_json.hpp"

#include <cmath>

#include "vexleb/errors.hpp"

namespace vexleb {

namespace {

// Non-finite doubles have no JSON literal; they are written as strings.
Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

} // namespace

Json to_json(const Rectangle& r) { return Json::array({r.x0, r.x1, r.y0, r.y1}); }

Json to_json(const NormResult& r) {
    Json j;
    j["value"] = number(r.value);
    j["modular_at_value"] = number(r.modular_at_value);
    j["iterations"] = r.iterations;
    j["tol"] = r.tol;
    return j;
}

Json to_json(const ConditionReport& r) {
    Json j;
    j["name"] = r.name;
    j["value"] = number(r.value);
    j["arg_label"] = r.arg_label;
    j["arg"] = numbers(r.arg);
    j["resolution"] = r.resolution;
    j["truncation"] = to_json(r.truncation);
    j["finite"] = to_string(r.finite);
    Json extras = Json::object();
    for (const auto& [k, v] : r.extras) extras[k] = number(v);
    j["extras"] = extras;
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const RatioReport& r) {
    Json j;
    j["problem"] = r.problem;
    j["generator"] = r.generator;
    j["trials"] = r.trials;
    j["skipped"] = r.skipped;
    j["resolution"] = r.resolution;
    j["truncation"] = to_json(r.truncation);
    j["max_ratio"] = number(r.max_ratio);
    j["argmax"] = r.argmax;
    j["bound_low"] = number(r.bound_low);
    j["bound_high"] = number(r.bound_high);
    j["ratios"] = numbers(r.ratios);
    j["sources"] = r.sources;
    return j;
}

Json to_json(const SandwichReport& r) {
    Json j;
    j["A_M"] = to_json(r.am);
    j["A_PS"] = to_json(r.aps);
    j["empirical"] = to_json(r.empirical);
    j["upper_factor_m"] = r.upper_factor_m;
    j["upper_factor_ps"] = r.upper_factor_ps;
    j["tol"] = r.tol;
    j["upper_m_ok"] = r.upper_m_ok;
    j["upper_ps_ok"] = r.upper_ps_ok;
    j["lower_m_ok"] = r.lower_m_ok;
    j["lower_ps_ok"] = r.lower_ps_ok;
    j["passed"] = r.passed();
    return j;
}

Json to_json(const DoubleHardyReport& r) {
    Json j;
    j["B"] = to_json(r.b);
    j["coarse"] = to_json(r.coarse);
    j["fine"] = to_json(r.fine);
    j["drift"] = number(r.drift);
    j["restricted_argmax"] = numbers(r.restricted_argmax);
    j["restricted_max"] = number(r.restricted_max);
    j["restricted_cells_off"] = r.restricted_cells_off;
    j["full_ratio_at_b_argmax"] = number(r.full_ratio_at_b_argmax);
    j["building_block_max"] = number(r.building_block_max);
    j["building_block_bound"] = r.building_block_bound;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const BlowupSeries& r) {
    const BlowupConfig& c = r.config;
    Json j;
    j["config"] = {{"p1", c.p1}, {"p2", c.p2}, {"alpha", c.alpha}, {"x0", c.x0},
                   {"a", c.a},   {"b", c.b},   {"c", c.c},          {"d", c.d},
                   {"nx", c.nx}, {"ny", c.ny}, {"slope_tolerance", c.slope_tolerance}};
    j["taus"] = numbers(r.taus);
    j["values"] = numbers(r.values);
    j["lower_bounds"] = numbers(r.lower_bounds);
    j["slope"] = number(r.slope);
    j["lower_bound_slope"] = number(r.lower_bound_slope);
    j["predicted_slope"] = r.predicted_slope;
    j["passed"] = r.passed;
    return j;
}

Json to_json(const DoubleAverageReport& r) {
    Json j;
    j["supremum"] = to_json(r.supremum);
    j["ratios"] = to_json(r.ratios);
    j["ratios_refined"] = to_json(r.ratios_refined);
    j["drift"] = number(r.drift);
    j["passed"] = r.passed;
    return j;
}

Json to_json(const DyadicComparisonReport& r) {
    Json j;
    j["c_min"] = number(r.c_min);
    j["c_unshifted"] = number(r.c_unshifted);
    j["k"] = r.k;
    j["shift_samples"] = r.shift_samples;
    j["lhs_max"] = number(r.lhs_max);
    j["rhs_max"] = number(r.rhs_max);
    j["argmax"] = numbers(r.argmax);
    return j;
}

Json to_json(const RdReport& r) {
    Json j;
    j["b_star"] = number(r.b_star);
    j["member"] = r.member;
    j["parent"] = r.parent;
    j["child"] = r.child;
    j["warning_threshold"] = r.warning_threshold;
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const EmbeddingReport& r) {
    Json j;
    j["C_emp"] = number(r.c_emp);
    j["C1"] = number(r.c1);
    j["trials"] = r.trials;
    j["evaluated"] = r.evaluated;
    j["best_source"] = r.best_source;
    j["generator"] = r.generator;
    j["root"] = {r.root_lo, r.root_hi};
    j["depth"] = r.depth;
    return j;
}

Json to_json(const PartitionSequence& r) {
    Json j;
    j["p"] = r.p;
    j["levels"] = r.levels;
    j["points"] = numbers(r.points);
    j["max_level_residual"] = r.max_level_residual;
    j["max_annulus_residual"] = r.max_annulus_residual;
    return j;
}

Json to_json(const DyadicTree& t) {
    Json j;
    j["root"] = {t.lo(), t.hi()};
    j["depth"] = t.depth();
    j["coefficients"] = t.coefficients();
    return j;
}

DyadicTree tree_from_json(const Json& j) {
    try {
        const auto root = j.at("root").get<std::vector<double>>();
        if (root.size() != 2) throw DomainError("tree root must be [lo, hi]");
        std::vector<double> c;
        if (j.contains("coefficients")) c = j.at("coefficients").get<std::vector<double>>();
        return DyadicTree(root[0], root[1], j.at("depth").get<int>(), std::move(c));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed tree JSON: ") + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace vexleb
