#include "polyserendip/barycentric.hpp"
#include "polyserendip/error.hpp"
#include "polyserendip/fem.hpp"
#include "polyserendip/geometry.hpp"
#include "polyserendip/serendipity.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace polyserendip;

namespace {

Polygon make_polygon(const std::vector<std::array<double, 2>>& vertices, bool allow_collinear)
{
    std::vector<Point> pts;
    pts.reserve(vertices.size());
    for (const auto& v : vertices) {
        pts.emplace_back(v[0], v[1]);
    }
    return Polygon(std::move(pts), allow_collinear ? Convexity::AllowCollinear : Convexity::Strict);
}

Eigen::MatrixX2d as_rows(const std::vector<Vector>& g)
{
    Eigen::MatrixX2d out(static_cast<Eigen::Index>(g.size()), 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = g[i].transpose();
    }
    return out;
}

py::dict eval_dict(const SerendipityEval& e)
{
    py::dict d;
    d["xi"] = e.xi_values;
    d["psi"] = e.psi_values;
    d["xi_gradients"] = as_rows(e.xi_gradients);
    d["psi_gradients"] = as_rows(e.psi_gradients);
    return d;
}

} // namespace

PYBIND11_MODULE(_polyserendip, m)
{
    m.doc() = "Quadratic serendipity elements on convex polygons";

    static py::exception<Error> base(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const InvalidInput& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    py::enum_<CoordinateKind>(m, "CoordinateKind")
        .value("Wachspress", CoordinateKind::Wachspress)
        .value("MeanValue", CoordinateKind::MeanValue)
        .value("Triangulation", CoordinateKind::Triangulation);

    py::enum_<Strategy>(m, "Strategy")
        .value("Auto", Strategy::Auto)
        .value("UnitSquare", Strategy::UnitSquare)
        .value("RegularPolygon", Strategy::RegularPolygon)
        .value("Quadrilateral", Strategy::Quadrilateral)
        .value("Generic", Strategy::Generic);

    py::class_<Polygon>(m, "Polygon")
        .def(py::init(&make_polygon), py::arg("vertices"), py::arg("allow_collinear") = false)
        .def_property_readonly("size", &Polygon::size)
        .def_property_readonly("area", &Polygon::area)
        .def_property_readonly("diameter", &Polygon::diameter)
        .def_property_readonly("centroid", &Polygon::centroid)
        .def_property_readonly("vertices",
            [](const Polygon& p) {
                return std::vector<Point>(p.vertices().begin(), p.vertices().end());
            })
        .def("contains", &Polygon::contains, py::arg("point"), py::arg("margin") = 0.0);

    m.def(
        "coordinates",
        [](const Polygon& p, CoordinateKind kind, const Point& x) {
            const CoordEval e = eval_coords(p, kind, x);
            return py::make_tuple(e.values, as_rows(e.gradients));
        },
        py::arg("polygon"), py::arg("kind"), py::arg("point"),
        "Barycentric values and gradients at an interior point.");

    py::class_<SerendipityMap>(m, "SerendipityMap")
        .def_readonly("A", &SerendipityMap::A)
        .def_readonly("B", &SerendipityMap::B)
        .def_readonly("strategy", &SerendipityMap::strategy)
        .def_property_readonly("n", &SerendipityMap::n);

    m.def("build_map", &build_map, py::arg("polygon"), py::arg("strategy") = Strategy::Auto);
    m.def("basis_nodes", &basis_nodes, py::arg("polygon"));
    m.def("nodal_table", &nodal_table, py::arg("polygon"), py::arg("map"));
    m.def(
        "eval_basis",
        [](const Polygon& p, CoordinateKind kind, const SerendipityMap& map, const Point& x) {
            return eval_dict(eval_basis(p, kind, map, x));
        },
        py::arg("polygon"), py::arg("kind"), py::arg("map"), py::arg("point"));

    m.def(
        "verify_constraints",
        [](const Polygon& p, const SerendipityMap& map, double tol) {
            const ConstraintReport r = verify_constraints(p, map, tol);
            py::dict d;
            d["max_residual"] = r.max_residual;
            d["worst_column"] = r.worst_column;
            d["tolerance"] = r.tolerance;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("polygon"), py::arg("map"), py::arg("tolerance") = 1e-9);

    m.def(
        "trapezoid_mesh",
        [](int n, double offset) {
            const PolyMesh mesh = trapezoid_mesh(n, offset);
            return py::make_tuple(mesh.vertices(), mesh.cells());
        },
        py::arg("n"), py::arg("offset") = 0.25, "Vertices and cells of the n x n trapezoid mesh.");

    m.def(
        "convergence",
        [](const std::vector<int>& levels, CoordinateKind kind, double offset, int threads) {
            ConvergenceOptions opt;
            opt.levels = levels;
            opt.kind = kind;
            opt.offset = offset;
            opt.threads = threads;
            std::vector<ConvergenceRow> rows;
            {
                const py::gil_scoped_release release;
                rows = convergence_study(sine_exp_problem(), opt);
            }
            py::list out;
            for (const ConvergenceRow& r : rows) {
                py::dict d;
                d["n"] = r.n;
                d["dofs"] = r.dofs;
                d["l2_error"] = r.l2_error;
                d["l2_rate"] = r.l2_rate;
                d["h1_error"] = r.h1_error;
                d["h1_rate"] = r.h1_rate;
                out.append(d);
            }
            return out;
        },
        py::arg("levels"), py::arg("kind") = CoordinateKind::MeanValue, py::arg("offset") = 0.25,
        py::arg("threads") = 1, "Poisson study with u = sin(x) exp(y) on trapezoid meshes.");
}
