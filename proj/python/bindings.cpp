#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vexleb/conditions.hpp"
#include "vexleb/dyadic.hpp"
#include "vexleb/errors.hpp"
#include "vexleb/experiments.hpp"
#include "vexleb/norms.hpp"
#include "vexleb/operators.hpp"
#include "vexleb/report_json.hpp"

namespace py = pybind11;
using namespace vexleb;

namespace {

// Reports cross the boundary as JSON text; the package decodes them into dicts.
template <class R>
std::string report(const R& r) {
    return to_json(r).dump();
}

std::vector<double> values_of(const GridFunction& f) { return {f.values().begin(), f.values().end()}; }

} // namespace

PYBIND11_MODULE(_vexleb, m) {
    m.doc() = "Variable-exponent Lebesgue norms, Hardy-type operators and weight conditions";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<NonconvergenceError>(m, "NonconvergenceError", PyExc_RuntimeError);

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<double, double, std::size_t>(), py::arg("lo"), py::arg("hi"), py::arg("n"))
        .def_property_readonly("lo", &Grid1D::lo)
        .def_property_readonly("hi", &Grid1D::hi)
        .def_property_readonly("n", &Grid1D::n)
        .def_property_readonly("h", &Grid1D::h)
        .def("edge", &Grid1D::edge)
        .def("midpoint", &Grid1D::midpoint);

    py::class_<Rectangle>(m, "Rectangle")
        .def(py::init<double, double, double, double>(), py::arg("x0"), py::arg("x1"), py::arg("y0") = 0.0,
             py::arg("y1") = 1.0)
        .def_readwrite("x0", &Rectangle::x0)
        .def_readwrite("x1", &Rectangle::x1)
        .def_readwrite("y0", &Rectangle::y0)
        .def_readwrite("y1", &Rectangle::y1);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<Grid1D, std::vector<double>>(), py::arg("x"), py::arg("values"))
        .def(py::init<Grid1D, Grid1D, std::vector<double>>(), py::arg("x"), py::arg("y"), py::arg("values"))
        .def_static("constant", py::overload_cast<const Grid1D&, double>(&GridFunction::constant))
        .def_static("constant2", py::overload_cast<const Grid1D&, const Grid1D&, double>(&GridFunction::constant))
        .def_static("sample", py::overload_cast<const Grid1D&, const std::function<double(double)>&>(&GridFunction::sample))
        .def_static("sample2", py::overload_cast<const Grid1D&, const Grid1D&,
                                                 const std::function<double(double, double)>&>(&GridFunction::sample))
        .def_property_readonly("dim", &GridFunction::dim)
        .def_property_readonly("x", &GridFunction::x)
        .def_property_readonly("y", &GridFunction::y)
        .def_property_readonly("values", &values_of)
        .def("__len__", &GridFunction::size);

    py::class_<ExponentField>(m, "ExponentField")
        .def(py::init<GridFunction>())
        .def_static("constant", py::overload_cast<const Grid1D&, double>(&ExponentField::constant))
        .def_static("constant2", py::overload_cast<const Grid1D&, const Grid1D&, double>(&ExponentField::constant))
        .def_property_readonly("pminus", &ExponentField::pminus)
        .def_property_readonly("pplus", &ExponentField::pplus);

    m.def("integrate", py::overload_cast<const GridFunction&, const Rectangle&>(&integrate));
    m.def("luxemburg_norm", [](const GridFunction& f, const ExponentField& p, double tol) {
        return luxemburg_norm(f, p, tol).value;
    }, py::arg("f"), py::arg("p"), py::arg("tol") = kDefaultTol);
    m.def("modular", [](const GridFunction& f, const ExponentField& p, double lambda) {
        return modular(f, p, f.domain(), lambda);
    });

    m.def("hardy1", &hardy1);
    m.def("hardy2", &hardy2);
    m.def("hardy_average", &hardy_average);
    m.def("double_average", &double_average);

    m.def("muckenhoupt_am", [](const GridFunction& v, const GridFunction& w, double p, double q) {
        return report(muckenhoupt_am(v, w, p, q));
    });
    m.def("persson_stepanov_aps", [](const GridFunction& v, const GridFunction& w, double p, double q) {
        return report(persson_stepanov_aps(v, w, p, q));
    });
    m.def("condition_b", [](const GridFunction& v, const GridFunction& w1, const GridFunction& w2, double p,
                            const ExponentField& q) { return report(condition_b(v, w1, w2, p, q)); });
    m.def("rectangle_condition_ar", [](const ExponentField& p, double alpha) {
        return report(rectangle_condition_ar(p, alpha));
    });

    m.def("hardy_sandwich", [](int fixture, std::size_t trials, std::uint64_t seed) {
        return report(hardy_sandwich(power_weight_fixture(fixture), trials, seed));
    }, py::arg("fixture"), py::arg("trials") = 50, py::arg("seed") = 1);
    m.def("blowup_series", [](double p1, double p2, double alpha, std::size_t nx) {
        BlowupConfig c;
        c.p1 = p1;
        c.p2 = p2;
        c.alpha = alpha;
        c.nx = nx;
        return report(blowup_series(c));
    }, py::arg("p1") = 2.0, py::arg("p2") = 3.0, py::arg("alpha") = 0.0, py::arg("nx") = 4096);
    m.def("verify_double_hardy", [](std::size_t n, std::size_t trials, std::uint64_t seed) {
        return report(verify_double_hardy(unit_double_hardy_fixture(), n, trials, seed));
    }, py::arg("n") = 64, py::arg("trials") = 20, py::arg("seed") = 1);
    m.def("embedding", [](int depth, double p, double q, std::size_t trials, std::uint64_t seed) {
        const Grid1D x(0.0, 1.0, std::size_t{1} << depth);
        const GridFunction rho = GridFunction::constant(x, 1.0);
        const DyadicTree t(0.0, 1.0, depth);
        return report(embedding_bruteforce(t.with_coefficients(unit_carleson_coefficients(t, rho, p, q)), rho, p, q,
                                           trials, seed));
    }, py::arg("depth"), py::arg("p") = 2.0, py::arg("q") = 3.0, py::arg("trials") = 100, py::arg("seed") = 1);
}
