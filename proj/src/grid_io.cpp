#include "vexleb/grid_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vexleb/errors.hpp"

namespace vexleb {

namespace {

Grid1D parse_axis(const nlohmann::json& axis) {
    if (!axis.is_array() || axis.size() != 3) {
        throw DomainError("grid header axis must be [lo, hi, n]");
    }
    const double lo = axis[0].get<double>();
    const double hi = axis[1].get<double>();
    const auto n = axis[2].get<long long>();
    if (n <= 0) throw DomainError("grid header axis needs a positive cell count");
    return Grid1D(lo, hi, static_cast<std::size_t>(n));
}

nlohmann::json axis_json(const Grid1D& g) {
    return nlohmann::json::array({g.lo(), g.hi(), g.n()});
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

GridFile read_grid_file(std::istream& in) {
    std::string header_line;
    if (!std::getline(in, header_line)) throw DomainError("grid file is empty");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("grid file header is not valid JSON: ") + e.what());
    }
    const int dim = header.value("dim", 0);
    if (dim != 1 && dim != 2) throw DomainError("grid header needs \"dim\" 1 or 2");
    if (!header.contains("x")) throw DomainError("grid header is missing \"x\"");
    const Grid1D x = parse_axis(header["x"]);

    FieldKind kind = FieldKind::function;
    if (header.contains("kind")) {
        const std::string k = header["kind"].get<std::string>();
        if (k == "exponent") {
            kind = FieldKind::exponent;
        } else if (k != "function") {
            throw DomainError("unknown grid field kind \"" + k + "\"");
        }
    }

    std::size_t expected = x.n();
    std::optional<Grid1D> y;
    if (dim == 2) {
        if (!header.contains("y")) throw DomainError("2-D grid header is missing \"y\"");
        y = parse_axis(header["y"]);
        expected *= y->n();
    }

    std::vector<double> values;
    values.reserve(expected);
    std::string token;
    while (in >> token) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw DomainError("grid file value \"" + token + "\" is not a number");
        }
        values.push_back(v);
    }
    if (values.size() != expected) {
        std::ostringstream msg;
        msg << "grid file holds " << values.size() << " values, header promises " << expected;
        throw DomainError(msg.str());
    }

    GridFunction f = y ? GridFunction(x, *y, std::move(values)) : GridFunction(x, std::move(values));
    if (kind == FieldKind::exponent) ExponentField check(f);
    return {std::move(f), kind};
}

GridFile read_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open grid file " + path);
    return read_grid_file(in);
}

void write_grid_file(std::ostream& out, const GridFunction& f, FieldKind kind) {
    nlohmann::json header;
    header["dim"] = f.dim();
    header["x"] = axis_json(f.x());
    if (f.dim() == 2) header["y"] = axis_json(f.y());
    if (kind == FieldKind::exponent) header["kind"] = "exponent";
    out << header.dump() << '\n';
    for (std::size_t j = 0; j < f.ny(); ++j) {
        for (std::size_t i = 0; i < f.nx(); ++i) {
            if (i) out << ' ';
            out << format_double(f.at(i, j));
        }
        out << '\n';
    }
}

void write_grid_file(const std::string& path, const GridFunction& f, FieldKind kind) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write grid file " + path);
    write_grid_file(out, f, kind);
}

} // namespace vexleb
