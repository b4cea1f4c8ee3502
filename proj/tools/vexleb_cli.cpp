// vexleb: norms, operators, weight conditions and verification drivers from
// the command line. Reports go to --output (default stdout) as JSON.
//
// Exit status: 0 ok, 1 usage or domain error, 2 a checked inequality failed.

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vexleb/conditions.hpp"
#include "vexleb/dyadic.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/experiments.hpp"
#include "vexleb/grid_io.hpp"
#include "vexleb/norms.hpp"
#include "vexleb/operators.hpp"
#include "vexleb/random.hpp"
#include "vexleb/report_json.hpp"

using namespace vexleb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Args {
    std::uint64_t seed = 1;
    std::string output;
    std::string csv;

    std::string input, v, w, w1, w2, rho, tree, p_file, q_file, weight;
    std::optional<double> p, q;
    double alpha = 0.0, beta = 0.0, tol = kDefaultTol;
    std::string family = "all";
    std::vector<double> region, grid, deltas, taus;
    std::string op, name, fixture, variant = "max", rule = "local_minus";
    double c_max = 1.0, p1 = 2.0, p2 = 3.0;
    int kmax = 4, kmin = 0, depth = 5, k = 1;
    std::size_t n = 0, nx = 4096, ny = 20, trials = 50, samples = 8;
};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& s : names) out += (out.empty() ? "" : ", ") + s;
    return out;
}

GridFunction load(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string("missing --") + what + " <grid file>");
    return read_grid_file(path).function;
}

double need(const std::optional<double>& v, const char* what) {
    if (!v) throw UsageError(std::string("missing --") + what);
    return *v;
}

// Exponent from --<flag>-file, or the constant --<flag> on `like`'s grid.
ExponentField exponent(const std::string& file, const std::optional<double>& value, const GridFunction& like,
                       const char* flag) {
    if (!file.empty()) {
        ExponentField e(load(file, flag));
        if (!e.values().same_grid(like)) throw DomainError(std::string(flag) + " file lives on a different grid");
        return e;
    }
    const double c = need(value, flag);
    return ExponentField(like.map([c](double) { return c; }));
}

// Square grid from --grid lo,hi,n.
GridFunction grid_from_args(const Args& a) {
    if (a.grid.size() != 3) throw UsageError("need --grid lo,hi,n (or an input file defining the grid)");
    const Grid1D ax(a.grid[0], a.grid[1], static_cast<std::size_t>(a.grid[2]));
    return GridFunction::constant(ax, ax, 1.0);
}

RectFamily parse_family(const std::string& s) {
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "all") return RectFamily::all_aligned();
    if (head == "dyadic") return RectFamily::dyadic(tail.empty() ? -1 : std::stoi(tail));
    if (head == "capped") {
        if (tail.empty()) throw UsageError("capped family needs a size: capped:<cap>");
        return RectFamily::size_capped(std::stod(tail));
    }
    if (head == "shifted") {
        const auto comma = tail.find(',');
        if (comma == std::string::npos) throw UsageError("shifted family needs shifts: shifted:<t>,<tau>");
        return RectFamily::dyadic_shifted(std::stod(tail.substr(0, comma)), std::stod(tail.substr(comma + 1)));
    }
    throw UsageError("unknown family '" + s + "'; valid: all, dyadic[:depth], capped:<cap>, shifted:<t>,<tau>");
}

Rectangle parse_region(const std::vector<double>& r) {
    if (r.size() == 2) return Rectangle::interval(r[0], r[1]);
    if (r.size() == 4) return {r[0], r[1], r[2], r[3]};
    throw UsageError("--region takes x0,x1 or x0,x1,y0,y1");
}

OrderField order_on(const Grid1D& axis, double value) { return OrderField::constant(axis, value); }

void emit(const Args& a, const Json& report) {
    const std::string text = dump(report);
    if (a.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw DomainError("cannot write " + a.output);
    out << text;
}

void emit_csv(const Args& a, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    if (a.csv.empty()) return;
    std::ofstream out(a.csv, std::ios::binary);
    if (!out) throw DomainError("cannot write " + a.csv);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
    }
}

std::string num17(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

void emit_ratio_csv(const Args& a, const RatioReport& r) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t t = 0; t < r.ratios.size(); ++t) rows.push_back({std::to_string(t), "\"" + r.sources[t] + "\"", num17(r.ratios[t])});
    emit_csv(a, {"trial", "source", "ratio"}, rows);
}

// ----- subcommands -----

int run_norm(const Args& a) {
    const GridFunction f = load(a.input, "input");
    const ExponentField p = exponent(a.p_file, a.p, f, "p");
    const Rectangle region = a.region.empty() ? f.domain() : parse_region(a.region);
    const NormResult r = a.weight.empty() ? luxemburg_norm(f, p, region, a.tol)
                                          : weighted_norm(f, load(a.weight, "weight"), p, region, a.tol);
    emit(a, to_json(r));
    return kExitOk;
}

int run_transform(const Args& a) {
    static const std::vector<std::string> ops{"hardy1",   "hardy2", "hardy-average", "double-average",
                                              "fractional-maximal", "strong-fractional-maximal", "companion"};
    const GridFunction f = load(a.input, "input");
    if (a.output.empty()) throw UsageError("transform writes a grid file: --output <path> is required");
    GridFunction out = f;
    if (a.op == "hardy1") out = hardy1(f);
    else if (a.op == "hardy2") out = hardy2(f);
    else if (a.op == "hardy-average") out = hardy_average(f);
    else if (a.op == "double-average") out = double_average(f);
    else if (a.op == "fractional-maximal") out = fractional_maximal_1d(f, a.alpha, parse_family(a.family));
    else if (a.op == "strong-fractional-maximal")
        out = strong_fractional_maximal(f, a.alpha, a.beta, parse_family(a.family));
    else if (a.op == "companion")
        out = companion_maximal(f, exponent(a.p_file, a.p, f, "p"), exponent(a.q_file, a.q, f, "q"),
                                order_on(f.x(), a.alpha), order_on(f.y(), a.beta),
                                parse_companion_variant(a.variant), parse_family(a.family), a.tol);
    else throw UsageError("unknown operator '" + a.op + "'; valid: " + join(ops));
    write_grid_file(a.output, out);
    return kExitOk;
}

const std::vector<std::string>& condition_names() {
    static const std::vector<std::string> names{"A_M",   "A_PS",    "B",           "trace-unit",   "A_1",
                                                "A_R",   "trace-fractional", "box-mass",          "two-weight-fractional",       "class-P",
                                                "class-P-inf",      "partition",   "building-block",   "rd",
                                                "carleson"};
    return names;
}

DyadicTree tree_or_depth(const Args& a, const GridFunction& rho) {
    if (!a.tree.empty()) {
        std::ifstream in(a.tree);
        if (!in) throw DomainError("cannot read " + a.tree);
        return tree_from_json(Json::parse(in));
    }
    return DyadicTree(rho.x().lo(), rho.x().hi(), a.depth);
}

int run_check(const Args& a) {
    const std::string& name = a.name;
    Json report;
    if (name == "A_M" || name == "A_PS") {
        const GridFunction v = load(a.v, "v");
        const GridFunction w = load(a.w, "w");
        const double p = need(a.p, "p");
        const double q = need(a.q, "q");
        report = to_json(name == "A_M" ? muckenhoupt_am(v, w, p, q) : persson_stepanov_aps(v, w, p, q));
    } else if (name == "B" || name == "two-weight-fractional") {
        const GridFunction v = load(a.v, "v");
        const GridFunction w1 = load(a.w1, "w1");
        const GridFunction w2 = load(a.w2, "w2");
        const ExponentField q = exponent(a.q_file, a.q, v, "q");
        report = to_json(name == "B" ? condition_b(v, w1, w2, need(a.p, "p"), q)
                                     : two_weight_fractional_condition(v, w1, w2, need(a.p, "p"), q, order_on(v.x(), a.alpha),
                                                               order_on(v.y(), a.beta), parse_family(a.family)));
    } else if (name == "trace-unit") {
        const GridFunction v = load(a.v, "v");
        report = to_json(unit_weight_trace_condition(v, need(a.p, "p"), exponent(a.q_file, a.q, v, "q")));
    } else if (name == "A_1") {
        report = to_json(a1_condition(load(a.v, "v"), load(a.w, "w"), need(a.p, "p"), need(a.q, "q")));
    } else if (name == "A_R") {
        const GridFunction like = a.p_file.empty() ? grid_from_args(a) : load(a.p_file, "p-file");
        const ExponentField p = exponent(a.p_file, a.p, like, "p");
        const RectFamily fam = parse_family(a.family);
        report = to_json(a.q_file.empty() && !a.q ? rectangle_condition_ar(p, a.alpha, fam)
                                                  : rectangle_condition_ar(p, exponent(a.q_file, a.q, like, "q"),
                                                                           a.alpha, fam));
    } else if (name == "trace-fractional") {
        const GridFunction v = load(a.v, "v");
        const ExponentField q = exponent(a.q_file, a.q, v, "q");
        const OrderField al = order_on(v.x(), a.alpha);
        const OrderField be = order_on(v.y(), a.beta);
        const RectFamily fam = parse_family(a.family);
        if (a.p_file.empty()) {
            report = to_json(fractional_trace_condition(v, need(a.p, "p"), q, al, be, fam));
        } else {
            static const std::map<std::string, TraceExponent> rules{
                {"constant", TraceExponent::constant}, {"pbar", TraceExponent::pbar},
                {"local_minus", TraceExponent::local_minus}};
            const auto it = rules.find(a.rule);
            if (it == rules.end()) throw UsageError("unknown --rule; valid: constant, pbar, local_minus");
            report = to_json(fractional_trace_condition(v, exponent(a.p_file, a.p, v, "p"), it->second, q, al, be, fam));
        }
    } else if (name == "box-mass") {
        report = to_json(box_mass_condition(load(a.v, "v"), need(a.p, "p"), need(a.q, "q"), a.alpha, a.beta,
                                      parse_family(a.family)));
    } else if (name == "class-P" || name == "class-P-inf") {
        const ExponentField p(load(a.p_file, "p-file"));
        if (name == "class-P") {
            if (a.deltas.empty()) throw UsageError("class-P needs --deltas d1,d2,...");
            report = to_json(class_p_membership(p, a.deltas));
        } else {
            report = to_json(class_p_inf_membership(p, a.c_max));
        }
    } else if (name == "partition") {
        report = to_json(partition_sequence(load(a.w, "w"), need(a.p, "p"), a.kmax, a.kmin));
    } else if (name == "building-block") {
        report = to_json(building_block_sufficiency(load(a.rho, "rho"), need(a.p, "p")));
    } else if (name == "rd") {
        const GridFunction rho = load(a.rho, "rho");
        report = to_json(rd_dyadic_check(rho, tree_or_depth(a, rho)));
    } else if (name == "carleson") {
        const GridFunction rho = load(a.rho, "rho");
        if (a.tree.empty()) throw UsageError("carleson needs --tree <json with coefficients>");
        const DyadicTree t = tree_or_depth(a, rho);
        report["C1"] = carleson_constant(t, rho, need(a.p, "p"), need(a.q, "q"));
        report["tree"] = to_json(t);
    } else {
        throw UsageError("unknown condition '" + name + "'; valid: " + join(condition_names()));
    }
    emit(a, report);
    return kExitOk;
}

RatioProblem estimate_problem(const Args& a) {
    static const std::vector<std::string> fixtures{"sharp-average", "power1", "power2", "power3"};
    if (!a.fixture.empty()) {
        if (a.fixture == "sharp-average") {
            const Grid1D x(1e-4, 100.0, a.n ? a.n : 8192);
            const GridFunction one = GridFunction::constant(x, 1.0);
            return hardy_average_problem(one, one, 2.0, 2.0);
        }
        for (int k = 1; k <= 3; ++k) {
            if (a.fixture == "power" + std::to_string(k)) {
                HardyFixture fx = power_weight_fixture(k);
                const HardyGrids g = build_hardy_fixture(fx, a.n ? a.n : fx.n);
                return hardy1_problem(g.v, g.w, fx.p, fx.q);
            }
        }
        throw UsageError("unknown fixture '" + a.fixture + "'; valid: " + join(fixtures));
    }
    static const std::vector<std::string> ops{"hardy-average", "hardy1", "hardy2", "double-average",
                                              "strong-fractional"};
    if (a.op == "hardy-average" || a.op == "hardy1") {
        const GridFunction v = load(a.v, "v");
        const GridFunction w = load(a.w, "w");
        return a.op == "hardy1" ? hardy1_problem(v, w, need(a.p, "p"), need(a.q, "q"))
                                : hardy_average_problem(v, w, need(a.p, "p"), need(a.q, "q"));
    }
    if (a.op == "hardy2") {
        const GridFunction v = load(a.v, "v");
        return hardy2_problem(v, load(a.w1, "w1"), load(a.w2, "w2"), need(a.p, "p"),
                              exponent(a.q_file, a.q, v, "q"));
    }
    if (a.op == "double-average") {
        const GridFunction like = a.p_file.empty() ? grid_from_args(a) : load(a.p_file, "p-file");
        return double_average_problem(exponent(a.p_file, a.p, like, "p"));
    }
    if (a.op == "strong-fractional") {
        const GridFunction v = load(a.v, "v");
        return strong_fractional_problem(v, load(a.w, "w"), need(a.p, "p"), exponent(a.q_file, a.q, v, "q"), a.alpha,
                                         a.beta, parse_family(a.family));
    }
    throw UsageError("unknown operator '" + a.op + "'; valid: " + join(ops) + " (or --fixture " + join(fixtures) +
                     ")");
}

int run_estimate(const Args& a) {
    const RatioReport r = estimate_operator_norm(estimate_problem(a), a.trials, a.seed);
    emit(a, to_json(r));
    emit_ratio_csv(a, r);
    return kExitOk;
}

int run_blowup(const Args& a) {
    BlowupConfig c;
    c.p1 = a.p1;
    c.p2 = a.p2;
    c.alpha = a.alpha;
    c.nx = a.nx;
    c.ny = a.ny;
    c.taus = a.taus;
    const BlowupSeries s = blowup_series(c);
    emit(a, to_json(s));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < s.taus.size(); ++k)
        rows.push_back({num17(s.taus[k]), num17(s.values[k]), num17(s.lower_bounds[k])});
    emit_csv(a, {"tau", "A_tau", "lower_bound"}, rows);
    return s.passed ? kExitOk : kExitAssertion;
}

int run_embed(const Args& a) {
    const double p = a.p.value_or(2.0);
    const double q = a.q.value_or(3.0);
    DyadicTree t = [&] {
        if (a.tree.empty()) return DyadicTree(0.0, 1.0, a.depth);
        std::ifstream in(a.tree);
        if (!in) throw DomainError("cannot read " + a.tree);
        return tree_from_json(Json::parse(in));
    }();
    const GridFunction rho = a.rho.empty()
                                 ? GridFunction::constant(Grid1D(t.lo(), t.hi(), std::size_t{1} << t.depth()), 1.0)
                                 : load(a.rho, "rho");
    if (a.tree.empty()) t = t.with_coefficients(unit_carleson_coefficients(t, rho, p, q));
    const double pp = p / (p - 1.0);
    Json report;
    report["tree"] = to_json(t);
    report["rd"] = to_json(rd_dyadic_check(rho.map([pp](double r) { return std::pow(r, 1.0 - pp); }), t));
    report["embedding"] = to_json(embedding_bruteforce(t, rho, p, q, a.trials, a.seed));
    emit(a, report);
    return kExitOk;
}

int run_verify(const Args& a) {
    static const std::vector<std::string> drivers{"double-hardy", "double-average", "sandwich", "dyadic-cmp"};
    if (a.name == "double-hardy") {
        const DoubleHardyReport r = verify_double_hardy(unit_double_hardy_fixture(a.p.value_or(2.0), a.q.value_or(2.0)),
                                                    a.n ? a.n : 64, a.trials, a.seed);
        emit(a, to_json(r));
        emit_ratio_csv(a, r.coarse);
        return r.passed ? kExitOk : kExitAssertion;
    }
    if (a.name == "double-average") {
        const DoubleAverageReport r = verify_double_average(a.n ? a.n : 64, a.trials, a.seed);
        emit(a, to_json(r));
        emit_ratio_csv(a, r.ratios);
        return r.passed ? kExitOk : kExitAssertion;
    }
    if (a.name == "sandwich") {
        const std::string fx_name = a.fixture.empty() ? "power1" : a.fixture;
        HardyFixture fx;
        if (fx_name == "fat-tail") fx = fat_tail_fixture();
        else if (fx_name == "power1") fx = power_weight_fixture(1);
        else if (fx_name == "power2") fx = power_weight_fixture(2);
        else if (fx_name == "power3") fx = power_weight_fixture(3);
        else throw UsageError("unknown fixture '" + fx_name + "'; valid: power1, power2, power3, fat-tail");
        if (a.n) fx.n = a.n;
        const SandwichReport r = hardy_sandwich(fx, a.trials, a.seed);
        emit(a, to_json(r));
        emit_ratio_csv(a, r.empirical);
        return r.passed() ? kExitOk : kExitAssertion;
    }
    if (a.name == "dyadic-cmp") {
        const GridFunction f = dyadic_comparison_fixture(a.fixture.empty() ? "straddle" : a.fixture, a.seed);
        const OrderField al = order_on(f.x(), a.alpha);
        const OrderField be = order_on(f.y(), a.beta);
        const DyadicComparisonReport lo = verify_dyadic_comparison(f, al, be, a.k, a.samples, a.seed);
        const DyadicComparisonReport hi = verify_dyadic_comparison(f, al, be, a.k, 2 * a.samples, a.seed);
        const double change = std::fabs(hi.c_min / lo.c_min - 1.0);
        const bool passed = std::isfinite(lo.c_min) && std::isfinite(hi.c_min) && change < 0.20;
        Json report;
        report["coarse"] = to_json(lo);
        report["fine"] = to_json(hi);
        report["relative_change"] = std::isfinite(change) ? Json(change) : Json("nan");
        report["passed"] = passed;
        emit(a, report);
        return passed ? kExitOk : kExitAssertion;
    }
    throw UsageError("unknown driver '" + a.name + "'; valid: " + join(drivers));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-exponent Lebesgue space norms, operators and weight conditions"};
    app.require_subcommand(1);
    app.fallthrough();
    Args a;
    app.add_option("--seed", a.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("-o,--output", a.output, "Report path (default stdout); grid file for transform");
    app.add_option("--csv", a.csv, "Write plot data (tau/A_tau or trial/ratio) to this path");

    auto add_p = [&](CLI::App* s) {
        s->add_option("--p", a.p, "Constant exponent p");
        s->add_option("--p-file", a.p_file, "Exponent field p(.) as a grid file");
    };
    auto add_q = [&](CLI::App* s) {
        s->add_option("--q", a.q, "Constant exponent q");
        s->add_option("--q-file", a.q_file, "Exponent field q(.) as a grid file");
    };
    auto add_orders = [&](CLI::App* s) {
        s->add_option("--alpha", a.alpha, "Fractional order in x")->capture_default_str();
        s->add_option("--beta", a.beta, "Fractional order in y")->capture_default_str();
        s->add_option("--family", a.family, "all | dyadic[:depth] | capped:<cap> | shifted:<t>,<tau>")
            ->capture_default_str();
    };

    CLI::App* norm = app.add_subcommand("norm", "Luxemburg or weighted norm of a grid function");
    norm->add_option("--input", a.input, "Grid file")->required();
    add_p(norm);
    norm->add_option("--weight", a.weight, "Weight w; computes ||f w||");
    norm->add_option("--region", a.region, "x0,x1[,y0,y1]")->delimiter(',');
    norm->add_option("--tol", a.tol, "Modular tolerance")->capture_default_str();

    CLI::App* transform = app.add_subcommand("transform", "Apply an operator, write a grid file");
    transform->add_option("--op", a.op, "Operator name")->required();
    transform->add_option("--input", a.input, "Grid file")->required();
    add_p(transform);
    add_q(transform);
    add_orders(transform);
    transform->add_option("--variant", a.variant, "Companion variant: m1, m2, max, pbar, constant-q");
    transform->add_option("--tol", a.tol, "Modular tolerance")->capture_default_str();

    CLI::App* check = app.add_subcommand("check", "Evaluate a named weight or exponent condition");
    check->add_option("name", a.name, "Condition name")->required();
    for (auto [flag, target] : std::vector<std::pair<const char*, std::string*>>{
             {"--v", &a.v}, {"--w", &a.w}, {"--w1", &a.w1}, {"--w2", &a.w2}, {"--rho", &a.rho}, {"--tree", &a.tree}}) {
        check->add_option(flag, *target, "Grid file (tree: JSON)");
    }
    add_p(check);
    add_q(check);
    add_orders(check);
    check->add_option("--grid", a.grid, "lo,hi,n square grid for constant fields")->delimiter(',');
    check->add_option("--rule", a.rule, "trace-fractional size rule: constant, pbar, local_minus")->capture_default_str();
    check->add_option("--deltas", a.deltas, "class-P candidate deltas")->delimiter(',');
    check->add_option("--c-max", a.c_max, "class-P-inf threshold")->capture_default_str();
    check->add_option("--kmax", a.kmax, "partition: top level")->capture_default_str();
    check->add_option("--kmin", a.kmin, "partition: bottom level")->capture_default_str();
    check->add_option("--depth", a.depth, "rd: tree depth when no --tree")->capture_default_str();

    CLI::App* estimate = app.add_subcommand("estimate", "Empirical operator-norm ratios");
    estimate->add_option("--op", a.op, "hardy-average, hardy1, hardy2, double-average, strong-fractional");
    estimate->add_option("--fixture", a.fixture, "Built-in fixture: sharp-average, power1..3");
    for (auto [flag, target] : std::vector<std::pair<const char*, std::string*>>{
             {"--v", &a.v}, {"--w", &a.w}, {"--w1", &a.w1}, {"--w2", &a.w2}}) {
        estimate->add_option(flag, *target, "Grid file");
    }
    add_p(estimate);
    add_q(estimate);
    add_orders(estimate);
    estimate->add_option("--grid", a.grid, "lo,hi,n square grid for constant fields")->delimiter(',');
    estimate->add_option("--n", a.n, "Fixture resolution");
    estimate->add_option("--trials", a.trials, "Random trials")->capture_default_str();

    CLI::App* blowup = app.add_subcommand("blowup", "A_tau series for the two-valued step exponent");
    blowup->add_option("--p1", a.p1, "Exponent on the lower strip")->capture_default_str();
    blowup->add_option("--p2", a.p2, "Exponent on the upper strip")->capture_default_str();
    blowup->add_option("--alpha", a.alpha, "Fractional order")->capture_default_str();
    blowup->add_option("--nx", a.nx, "Cells on [0,2]")->capture_default_str();
    blowup->add_option("--ny", a.ny, "Cells on [0,1]")->capture_default_str();
    blowup->add_option("--taus", a.taus, "Decreasing half-widths")->delimiter(',');

    CLI::App* embed = app.add_subcommand("embed", "Dyadic embedding constant by brute force");
    embed->add_option("--tree", a.tree, "Tree JSON {root, depth, coefficients}");
    embed->add_option("--depth", a.depth, "Depth of the default tree on [0,1)")->capture_default_str();
    embed->add_option("--rho", a.rho, "Weight grid file (default rho = 1, one cell per leaf)");
    embed->add_option("--p", a.p, "Exponent p (default 2)");
    embed->add_option("--q", a.q, "Exponent q (default 3)");
    embed->add_option("--trials", a.trials, "Random trials")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "Run a verification driver: double-hardy, double-average, sandwich, dyadic-cmp");
    verify->add_option("name", a.name, "Driver name")->required();
    verify->add_option("--n", a.n, "Resolution");
    verify->add_option("--trials", a.trials, "Random trials")->capture_default_str();
    verify->add_option("--fixture", a.fixture, "sandwich: power1..3, fat-tail; dyadic-cmp: aligned, straddle, random");
    verify->add_option("--p", a.p, "double-hardy: p");
    verify->add_option("--q", a.q, "double-hardy: constant q");
    verify->add_option("--alpha", a.alpha, "dyadic-cmp: order in x")->capture_default_str();
    verify->add_option("--beta", a.beta, "dyadic-cmp: order in y")->capture_default_str();
    verify->add_option("--k", a.k, "dyadic-cmp: size cap exponent")->capture_default_str();
    verify->add_option("--samples", a.samples, "dyadic-cmp: shifts per axis (also run at twice this)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*norm) return run_norm(a);
        if (*transform) return run_transform(a);
        if (*check) return run_check(a);
        if (*estimate) return run_estimate(a);
        if (*blowup) return run_blowup(a);
        if (*embed) return run_embed(a);
        if (*verify) return run_verify(a);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
