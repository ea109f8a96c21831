// Python bindings: each analysis returns its JSON report as a string, which
// the deckmap package decodes.

#include "deckmap/deck.hpp"
#include "deckmap/detect.hpp"
#include "deckmap/dynren.hpp"
#include "deckmap/error.hpp"
#include "deckmap/parse.hpp"
#include "deckmap/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

namespace py = pybind11;
using namespace deckmap;

namespace {

using Params = std::map<std::string, std::string>;

ParamBindings bind(const Params& params) {
    ParamBindings out;
    for (const auto& [name, value] : params) {
        out.insert(parse_binding(name + "=" + value));
    }
    return out;
}

PointValue point(const std::string& text) {
    return PointValue(SpherePoint::from_string(text));
}

std::string analyze(const std::string& expr, const Params& params) {
    RationalMap f = parse_map(expr, bind(params));
    Json rep = report_envelope("analyze");
    rep["map"] = to_json(f);
    rep["critical_data"] = to_json(critical_data(f, Mode::Exact));
    rep["postcritical_orbit"] = to_json(postcritical_orbit(f));
    return rep.dump();
}

std::string deck(const std::string& expr, std::size_t k, const Params& params, int precision, std::size_t workers) {
    DeckOptions o;
    o.precision_bits = precision;
    o.workers = workers;
    RationalMap f = parse_map(expr, bind(params));
    Json rep = report_envelope("deck");
    rep["map"] = to_json(f);
    rep["deck"] = to_json(deck_group(f, k, o));
    return rep.dump();
}

std::string detect(const std::string& expr, std::size_t k, std::size_t d, const Params& params) {
    RationalMap F = parse_map(expr, bind(params));
    Json rep = report_envelope("detect");
    rep["map"] = to_json(F);
    rep["detection"] = to_json(d == 2 ? detect_quadratic(F, k) : detect_higher_degree(F, d, k));
    return rep.dump();
}

std::string shared(const std::string& e1, const std::string& e2, std::size_t max_k, const Params& params) {
    auto b = bind(params);
    RationalMap f = parse_map(e1, b);
    RationalMap g = parse_map(e2, b);
    Json rep = report_envelope("shared");
    rep["f"] = to_json(f);
    rep["g"] = to_json(g);
    rep["shared"] = to_json(shared_iterate_analysis(f, g, max_k));
    return rep.dump();
}

py::tuple render_image(const std::string& target, const std::string& expr, std::size_t width, std::size_t height,
                       std::size_t max_iter, std::size_t workers, const Params& params) {
    RenderSpec spec;
    spec.target = render_target_from_string(target);
    if (!expr.empty()) {
        spec.map = parse_map(expr, bind(params));
    }
    spec.width = width;
    spec.height = height;
    spec.max_iter = max_iter;
    spec.workers = workers;
    RenderResult r;
    {
        py::gil_scoped_release release;
        r = render(spec);
    }
    return py::make_tuple(py::bytes(to_ppm(r)), render_metadata(spec, r).dump());
}

} // namespace

PYBIND11_MODULE(_deckmap, m) {
    m.doc() = "Deck groups, critical-point detection and dynamics of bicritical rational maps";

    static py::exception<Error> exc(m, "DeckmapError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::tuple args = py::make_tuple(std::string(to_string(e.kind())), std::string(e.what()));
            PyErr_SetObject(exc.ptr(), args.ptr());
        }
    });

    m.def("parse_map", [](const std::string& expr, const Params& params) { return parse_map(expr, bind(params)).to_string(); },
          py::arg("expr"), py::arg("params") = Params{});
    m.def("compose", [](const std::string& f, const std::string& g) {
        return ratmap_compose(parse_map(f), parse_map(g)).to_string();
    });
    m.def("iterate", [](const std::string& f, std::size_t k) { return ratmap_iterate(parse_map(f), k).to_string(); });
    m.def("maps_equal", [](const std::string& f, const std::string& g) { return parse_map(f) == parse_map(g); });
    m.def("analyze", &analyze, py::arg("expr"), py::arg("params") = Params{});
    m.def("deck", &deck, py::arg("expr"), py::arg("k") = 1, py::arg("params") = Params{}, py::arg("precision") = 53,
          py::arg("workers") = 0);
    m.def("detect", &detect, py::arg("expr"), py::arg("k"), py::arg("degree") = 2, py::arg("params") = Params{});
    m.def("shared", &shared, py::arg("f"), py::arg("g"), py::arg("max_k") = 4, py::arg("params") = Params{});
    m.def("mobius_factor", [](const std::string& f, const std::string& g) {
        return mobius_factor(parse_map(f), parse_map(g)).to_string();
    });
    m.def("cross_ratio", [](const std::string& v1, const std::string& v2, const std::string& a, const std::string& b) {
        CrossRatio cr = cross_ratio(point(v1), point(v2), point(a), point(b));
        Json out;
        out["value"] = to_json(cr.value);
        out["exact"] = cr.exact;
        out["equals_minus_one"] = cr.equals_minus_one;
        out["root_of_x2_6x_1"] = cr.root_of_x2_6x_1;
        out["in_lattes_set"] = cr.in_lattes_set();
        return out.dump();
    });
    m.def("render", &render_image, py::arg("target"), py::arg("expr") = "", py::arg("width") = 64, py::arg("height") = 64,
          py::arg("max_iter") = 200, py::arg("workers") = 0, py::arg("params") = Params{});
    m.attr("SCHEMA") = kReportSchema;
}
