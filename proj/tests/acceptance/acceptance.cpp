// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <algorithm>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "vexleb/conditions.hpp"
#include "vexleb/dyadic.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/experiments.hpp"
#include "vexleb/grid_io.hpp"
#include "vexleb/norms.hpp"

using namespace vexleb;

namespace {

// Tolerances and limits, one block per criterion.
constexpr double kNormRelErr = 1e-8;
constexpr double kNormTol = 1e-10;
constexpr double kTwoPieceErr = 1e-8;
constexpr double kNormSeconds = 5.0;

constexpr double kSharpLow = 1.90;
constexpr double kSharpHigh = 2.0 * (1.0 + 0.02);
constexpr double kSharpSeconds = 30.0;

constexpr double kSandwichTol = 0.05;
constexpr double kSandwichSeconds = 60.0;

constexpr double kSlopeLow = -0.197;
constexpr double kSlopeHigh = -0.137;
constexpr double kControlSlope = 0.01;
constexpr double kBlowupSeconds = 120.0;

constexpr double kRectangleErr = 1e-9;

constexpr double kQuarterErr = 1e-6;
constexpr double kDrift = 0.10;

constexpr double kEmbedFactor = 8.0;
constexpr double kDepthDrift = 2.0;
constexpr double kEmbedSeconds = 60.0;

constexpr double kShiftChange = 0.20;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome luxemburg_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> cells(16, 256);
    std::uniform_real_distribution<double> exponent(1.1, 8.0), mag(-3.0, 3.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Grid1D x(0.0, 1.0 + t * 0.05, cells(rng));
        std::vector<double> v(x.n());
        for (double& s : v) s = std::pow(10.0, mag(rng));
        const double p = exponent(rng);
        long double sum = 0.0L;
        for (double s : v) sum += std::pow(static_cast<long double>(s), p) * x.h();
        const double exact = static_cast<double>(std::pow(sum, 1.0L / p));
        const double got = luxemburg_norm(GridFunction(x, v), ExponentField::constant(x, p), kNormTol).value;
        worst = std::max(worst, std::fabs(got - exact) / exact);
    }
    const Grid1D x(0.0, 1.0, 64);
    const ExponentField two_piece(GridFunction::sample(x, [](double s) { return s < 0.5 ? 2.0 : 3.0; }));
    const double two = luxemburg_norm(GridFunction::constant(x, 2.0), two_piece, kNormTol).value;
    const double secs = elapsed_since(t0);
    return {worst <= kNormRelErr && std::fabs(two - 2.0) <= kTwoPieceErr && secs < kNormSeconds,
            fmt("max rel err %.2e over 100 fixtures (<= %.0e), two-piece %.12f (2 +- %.0e)", worst, kNormRelErr, two,
                kTwoPieceErr)};
}

Outcome sharp_average_constant() {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid1D x(1e-4, 100.0, 8192);
    const GridFunction one = GridFunction::constant(x, 1.0);
    const RatioReport r = estimate_operator_norm(hardy_average_problem(one, one, 2.0, 2.0), 200, 1);
    const double secs = elapsed_since(t0);
    return {r.max_ratio >= kSharpLow && r.max_ratio <= kSharpHigh && secs < kSharpSeconds,
            fmt("max ratio %.4f from '%s' (needs >= %.2f and <= %.2f)", r.max_ratio, r.argmax.c_str(), kSharpLow,
                kSharpHigh)};
}

Outcome hardy_sandwich_fixtures() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int which = 1; which <= 3; ++which) {
        const SandwichReport r = hardy_sandwich(power_weight_fixture(which), 50, 1, kSandwichTol);
        const bool fixture_ok = r.lower_m_ok && r.upper_m_ok && r.upper_ps_ok;
        ok = ok && fixture_ok;
        detail += fmt("%sfixture %d: A_M %.3f A_PS %.3f C_emp %.3f%s", which > 1 ? "; " : "", which, r.am.value,
                      r.aps.value, r.empirical.max_ratio, fixture_ok ? "" : " VIOLATED");
    }
    const double secs = elapsed_since(t0);
    return {ok && secs < kSandwichSeconds, detail};
}

Outcome necessity_blowup() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (double alpha : {0.0, 0.1}) {
        BlowupConfig c;
        c.alpha = alpha;
        const BlowupSeries s = blowup_series(c);
        ok = ok && s.slope >= kSlopeLow && s.slope <= kSlopeHigh;
        detail += fmt("alpha %.1f slope %.4f (lower-bound chain %.4f); ", alpha, s.slope, s.lower_bound_slope);
    }
    BlowupConfig control;
    control.p2 = control.p1;
    const BlowupSeries s = blowup_series(control);
    ok = ok && std::fabs(s.slope) < kControlSlope;
    detail += fmt("control slope %.4f; window [%.3f, %.3f]", s.slope, kSlopeLow, kSlopeHigh);
    const double secs = elapsed_since(t0);
    return {ok && secs < kBlowupSeconds, detail};
}

Outcome rectangle_sufficiency() {
    const Grid1D x(0.0, 1.0, 32);
    double worst = 0.0;
    for (double p : {2.0, 3.0})
        for (double alpha : {0.0, 0.25})
            worst = std::max(worst, std::fabs(rectangle_condition_ar(ExponentField::constant(x, x, p), alpha).value - 1.0));
    return {worst <= kRectangleErr, fmt("max |A_R - 1| = %.2e over p in {2,3}, alpha in {0,1/4}", worst)};
}

Outcome double_hardy() {
    const DoubleHardyReport r = verify_double_hardy(unit_double_hardy_fixture(), 64, 20, 1);
    const bool ok = std::fabs(r.b.value - 0.25) <= kQuarterErr && std::isfinite(r.coarse.max_ratio) &&
                    std::isfinite(r.fine.max_ratio) && std::fabs(r.drift) < kDrift && r.restricted_cells_off <= 1.0;
    return {ok, fmt("B %.8f, max ratio %.5f -> %.5f (drift %.4f), location off by %.0f cells", r.b.value,
                    r.coarse.max_ratio, r.fine.max_ratio, r.drift, r.restricted_cells_off)};
}

Outcome double_average_supremum() {
    bool ok = true;
    std::string detail;
    for (std::size_t n : {64u, 128u}) {
        const DoubleAverageReport r = verify_double_average(n, 50, 1);
        const bool this_ok = r.supremum.finite == Finiteness::finite && std::isfinite(r.ratios.max_ratio) &&
                             std::isfinite(r.ratios_refined.max_ratio) && std::fabs(r.drift) < kDrift;
        ok = ok && this_ok;
        detail += fmt("%sN %zu: sup %.4f %s, ratios %.4f -> %.4f", n == 64 ? "" : "; ", n, r.supremum.value,
                      to_string(r.supremum.finite).c_str(), r.ratios.max_ratio, r.ratios_refined.max_ratio);
    }
    return {ok, detail};
}

Outcome dyadic_embedding() {
    const auto t0 = std::chrono::steady_clock::now();
    const double p = 2.0, q = 3.0;
    const Grid1D x(0.0, 1.0, 64);
    const GridFunction rho = GridFunction::constant(x, 1.0);
    std::vector<double> factors;
    for (int depth = 1; depth <= 6; ++depth) {
        const DyadicTree t(0.0, 1.0, depth);
        const DyadicTree c = t.with_coefficients(unit_carleson_coefficients(t, rho, p, q));
        const EmbeddingReport r = embedding_bruteforce(c, rho, p, q, 200, 1);
        factors.push_back(r.c_emp / r.c1);
    }
    const double k_max = *std::max_element(factors.begin(), factors.end());
    const double k_min = *std::min_element(factors.begin(), factors.end());

    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss(0.0, 1.5);
    int violations = 0;
    for (int inst = 0; inst < 200; ++inst) {
        const int depth = 1 + inst % 6;
        const DyadicTree t(0.0, 1.0, depth);
        std::vector<double> c = unit_carleson_coefficients(t, rho, p, q);
        for (double& v : c) v *= std::exp(gauss(rng));
        const EmbeddingReport r = embedding_bruteforce(t.with_coefficients(c), rho, p, q, 40, inst);
        if (r.c_emp > k_max * r.c1 * (1.0 + 1e-12)) ++violations;
    }
    const double secs = elapsed_since(t0);
    std::string per_depth;
    for (double f : factors) per_depth += fmt("%s%.3f", per_depth.empty() ? "" : " ", f);
    const bool ok = k_max <= kEmbedFactor && k_max / k_min < kDepthDrift && violations == 0 && secs < kEmbedSeconds;
    return {ok, fmt("C_emp/C1 by depth 1..6: %s (max/min %.3f); K = %.3f, %d of 200 random instances violate",
                    per_depth.c_str(), k_max / k_min, k_max, violations)};
}

Outcome shifted_dyadic() {
    bool ok = true;
    std::string detail;
    const Grid1D ax(0.0, 8.0, 32);
    const OrderField order = OrderField::constant(ax, 0.2);
    for (const char* name : {"aligned", "straddle", "random"}) {
        const GridFunction f = dyadic_comparison_fixture(name, 1);
        const DyadicComparisonReport lo = verify_dyadic_comparison(f, order, order, 1, 8, 1);
        const DyadicComparisonReport hi = verify_dyadic_comparison(f, order, order, 1, 16, 1);
        const double change = std::fabs(hi.c_min / lo.c_min - 1.0);
        const bool this_ok = std::isfinite(lo.c_min) && std::isfinite(hi.c_min) && change < kShiftChange;
        ok = ok && this_ok;
        detail += fmt("%s%s C %.3f -> %.3f (%.1f%%)", detail.empty() ? "" : "; ", name, lo.c_min, hi.c_min,
                      100.0 * change);
    }
    return {ok, detail};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / fmt("vexleb_acceptance_%d", static_cast<int>(::getpid()));
    fs::create_directories(work);
    const Grid1D x(0.0, 1.0, 64);
    write_grid_file((work / "f.grid").string(), GridFunction::sample(x, [](double s) { return 1.0 + s * s; }));

    const std::string cli = VEXLEB_CLI_PATH;
    const std::vector<std::string> commands{
        "norm --input " + (work / "f.grid").string() + " --p 3",
        "transform --op hardy1 --input " + (work / "f.grid").string() + " --output {out}",
        "check A_R --p 2 --alpha 0.25 --grid 0,1,8",
        "estimate --fixture sharp-average --n 512 --trials 20",
        "blowup --nx 1024",
        "embed --depth 4 --trials 50",
        "verify double-hardy --n 16 --trials 10",
        "verify double-average --n 16 --trials 10",
        "verify dyadic-cmp --fixture random --samples 4",
    };
    int differing = 0, broken = 0;
    std::string which;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        std::string out[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path file = work / fmt("run%zu_%d.out", k, rep);
            std::string cmd = commands[k];
            const auto slot = cmd.find("{out}");
            if (slot != std::string::npos) cmd.replace(slot, 5, file.string());
            else cmd += " --output " + file.string();
            const int status = std::system((cli + " --seed 7 " + cmd + " 2>/dev/null").c_str());
            if (status != 0 && WEXITSTATUS(status) != 2) ++broken;
            out[rep] = slurp(file);
        }
        if (out[0].empty() || out[0] != out[1]) {
            ++differing;
            which += " [" + commands[k] + "]";
        }
    }
    fs::remove_all(work);
    return {differing == 0 && broken == 0,
            fmt("%zu commands run twice, %d differ, %d failed to run%s", commands.size(), differing, broken,
                which.c_str())};
}

} // namespace

int main() {
    run(1, "Luxemburg norm correctness", luxemburg_correctness);
    run(2, "sharp averaging Hardy constant", sharp_average_constant);
    run(3, "weighted Hardy sandwich", hardy_sandwich_fixtures);
    run(4, "necessity blow-up slope", necessity_blowup);
    run(5, "rectangle condition for constant exponents", rectangle_sufficiency);
    run(6, "double Hardy condition and extremal location", double_hardy);
    run(7, "double average supremum finiteness", double_average_supremum);
    run(8, "dyadic Carleson embedding", dyadic_embedding);
    run(9, "shifted dyadic pointwise comparison", shifted_dyadic);
    run(10, "CLI determinism", cli_determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
