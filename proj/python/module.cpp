#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hyperstore/cli.hpp"
#include "hyperstore/errors.hpp"
#include "hyperstore/geometry.hpp"
#include "hyperstore/oracle.hpp"
#include "hyperstore/repository.hpp"
#include "hyperstore/separator.hpp"

namespace py = pybind11;
using namespace hyperstore;

namespace {

std::vector<Point> to_points(const std::vector<std::vector<double>>& rows) {
    std::vector<Point> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.emplace_back(r);
    return pts;
}

std::vector<Plane> to_planes(const std::vector<std::vector<double>>& rows) {
    std::vector<Plane> planes;
    planes.reserve(rows.size());
    for (const auto& r : rows) planes.push_back({r, false});
    return planes;
}

SeparatorConfig make_config(std::uint64_t seed, double epsilon, double delta0,
                            std::size_t max_retries) {
    SeparatorConfig c;
    c.seed = seed;
    c.epsilon = epsilon;
    c.delta0 = delta0;
    c.max_retries = max_retries;
    c.validate();
    return c;
}

py::dict ops_dict(const OpCounter& c) {
    py::dict d;
    d["multiplications"] = c.multiplications;
    d["additions"] = c.additions;
    d["sign_evals"] = c.sign_evaluations;
    d["bit_comparisons"] = c.bit_comparisons;
    return d;
}

const char* reason_name(AbsentReason r) {
    switch (r) {
        case AbsentReason::none: return "none";
        case AbsentReason::new_quadrant: return "new_quadrant";
        case AbsentReason::coordinate_mismatch: return "coordinate_mismatch";
    }
    return "none";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Integer repository addressed by hyperplane sign vectors";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<IncidentPoint>(m, "IncidentPoint", base.ptr());
    py::register_exception<DuplicatePoint>(m, "DuplicatePoint", base.ptr());
    py::register_exception<GeometryExhausted>(m, "GeometryExhausted", base.ptr());
    py::register_exception<Overflow>(m, "Overflow", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());

    m.def("to_point", [](std::uint64_t v, std::size_t n, unsigned base) {
        return map_to_point(v, IntegerMapping{n, base}).coords;
    }, py::arg("value"), py::arg("n"), py::arg("base") = 10);

    m.def("primes_below", &oracle::primes_below, py::arg("bound"));

    m.def("orientation_vector", [](const std::vector<std::vector<double>>& planes,
                                   const std::vector<double>& point, double epsilon) {
        OpCounter ops;
        const auto ov = orientation_vector(to_planes(planes), Point(point), epsilon, ops);
        return py::make_tuple(ov.to_string(), ops_dict(ops));
    }, py::arg("planes"), py::arg("point"), py::arg("epsilon") = default_epsilon,
       "Sign string ('+'/'-' per plane) and the operation counts.");

    m.def("verify_separation", [](const std::vector<std::vector<double>>& points,
                                  const std::vector<std::vector<double>>& planes, double epsilon) {
        const auto v = oracle::verify_separation(to_points(points), to_planes(planes), epsilon);
        return py::make_tuple(v.passed(), v.passed() ? std::string() : v.describe());
    }, py::arg("points"), py::arg("planes"), py::arg("epsilon") = default_epsilon);

    m.def("separate", [](const std::vector<std::vector<double>>& points, std::size_t n,
                         std::uint64_t seed, double epsilon, double delta0, std::size_t max_retries) {
        const auto pts = to_points(points);
        SeparationState st = [&] {
            py::gil_scoped_release nogil;
            return run(pts, n, make_config(seed, epsilon, delta0, max_retries));
        }();
        // Orientation vectors in input order.
        std::vector<std::string> ovs(pts.size());
        for (const Member& mem : st.members()) ovs[mem.key] = mem.ov.to_string();
        std::vector<std::vector<double>> planes;
        for (const Plane& p : st.planes()) planes.push_back(p.alpha);
        py::dict d;
        d["planes"] = planes;
        d["orientation_vectors"] = ovs;
        d["q_initial"] = st.initial_planes();
        d["q_emitted"] = st.emitted_planes();
        d["counters"] = ops_dict(st.counters().total());
        return d;
    }, py::arg("points"), py::arg("n"), py::arg("seed") = 1, py::arg("epsilon") = default_epsilon,
       py::arg("delta0") = 1e-4, py::arg("max_retries") = 8);

    m.def("bench", [](const std::string& spec, std::uint64_t seed, std::size_t repeat) {
        cli::RunConfig c;
        c.seed = seed;
        std::vector<cli::BenchReport> reports;
        {
            py::gil_scoped_release nogil;
            reports = cli::run_bench(spec, c, repeat);
        }
        std::vector<std::string> lines;
        for (const auto& r : reports) lines.push_back(r.to_json());
        return lines;
    }, py::arg("spec"), py::arg("seed") = 1, py::arg("repeat") = 1,
       "JSON report per repetition.");

    py::class_<Repository>(m, "Repository")
        .def(py::init([](std::size_t n, unsigned base, std::uint64_t seed, double epsilon,
                         double delta0, std::size_t max_retries) {
            return Repository(IntegerMapping{n, base}, make_config(seed, epsilon, delta0, max_retries));
        }), py::arg("n"), py::arg("base") = 10, py::arg("seed") = 1,
            py::arg("epsilon") = default_epsilon, py::arg("delta0") = 1e-4,
            py::arg("max_retries") = 8)
        .def_static("build", [](const std::vector<std::uint64_t>& values, std::size_t n,
                                std::uint64_t seed, unsigned base) {
            py::gil_scoped_release nogil;
            return Repository::build(values, n, make_config(seed, default_epsilon, 1e-4, 8), base);
        }, py::arg("values"), py::arg("n"), py::arg("seed") = 1, py::arg("base") = 10)
        .def("query", [](const Repository& r, std::uint64_t v) {
            const QueryResult q = r.query(v);
            py::dict d;
            d["found"] = q.found;
            d["reason"] = reason_name(q.reason);
            d["quadrant_owner"] = q.quadrant_owner ? py::cast(*q.quadrant_owner) : py::none();
            d["ops"] = ops_dict(q.ops);
            return d;
        }, py::arg("value"))
        .def("__contains__", &Repository::contains)
        .def("insert", [](Repository& r, const std::vector<std::uint64_t>& values) {
            const InsertReport rep = r.insert(values);
            py::dict d;
            d["inserted"] = rep.inserted;
            d["duplicates"] = rep.duplicates;
            d["planes_added"] = rep.planes_added();
            return d;
        }, py::arg("values"))
        .def("grow_dimension", &Repository::grow_dimension, py::arg("n"))
        .def("dumps", [](const Repository& r) {
            std::ostringstream out;
            r.save(out);
            return out.str();
        })
        .def_static("loads", [](const std::string& text) {
            std::istringstream in(text);
            return Repository::load(in);
        }, py::arg("text"))
        .def("save", &Repository::save_file, py::arg("path"))
        .def_static("load", &Repository::load_file, py::arg("path"))
        .def("svg", &cli::render_svg)
        .def("values", &Repository::values)
        .def("__len__", &Repository::size)
        .def_property_readonly("dimension", &Repository::dimension)
        .def_property_readonly("initial_dimension", &Repository::initial_dimension)
        .def_property_readonly("plane_count", &Repository::plane_count)
        .def_property_readonly("planes", [](const Repository& r) {
            std::vector<std::vector<double>> planes;
            for (const Plane& p : r.state().planes()) planes.push_back(p.alpha);
            return planes;
        })
        .def("orientation_vector", [](const Repository& r, std::uint64_t v) -> py::object {
            OpCounter ops;
            const Point p = map_to_point(v, r.mapping());
            const auto idx = [&]() -> std::optional<std::size_t> {
                try {
                    return r.state().find(
                        orientation_vector(r.state().planes(), p, r.state().config().epsilon, ops), ops);
                } catch (const IncidentPoint&) {
                    return std::nullopt;
                }
            }();
            if (idx && r.state().members()[*idx].point == p)
                return py::cast(r.state().members()[*idx].ov.to_string());
            return py::none();
        }, py::arg("value"), "Sign string of a stored value, or None.");
}
