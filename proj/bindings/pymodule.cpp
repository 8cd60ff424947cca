#include "phimod/serialize.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace phimod;

namespace {

ClassLabel make_label(const std::string& kind, int e, int trace, std::optional<int> mu,
                      std::optional<int> field_index, std::optional<int> epsilon,
                      std::optional<std::string> alpha) {
    ClassLabel L;
    if (kind == "Dc")
        L.kind = Kind::Dc;
    else if (kind == "Dpc")
        L.kind = Kind::Dpc;
    else if (kind == "Dpcg")
        L.kind = Kind::Dpcg;
    else if (kind == "Dpcng")
        L.kind = Kind::Dpcng;
    else
        throw py::value_error("kind must be one of Dc, Dpc, Dpcg, Dpcng");
    L.e = e;
    L.trace = trace;
    L.mu = mu;
    L.field_index = field_index;
    L.epsilon = epsilon;
    if (alpha) {
        if (*alpha == "inf")
            L.alpha = ProjQ3::infinity();
        else
            L.alpha = ProjQ3::finite(Rational(*alpha));
    }
    return L;
}

}  // namespace

PYBIND11_MODULE(_phimod3, m) {
    m.doc() = "filtered (phi, Gal(K/Q3))-module classification for p = 3";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<unclassifiable>(m, "Unclassifiable", PyExc_RuntimeError);
    py::register_exception<singular_curve>(m, "SingularCurve", PyExc_ValueError);

    m.def(
        "classify_text",
        [](const std::string& text) {
            FilteredModule D = read_module(text);
            ConditionsReport rep = check_conditions(D);
            nlohmann::json j{{"classified", rep.all_pass()},
                             {"conditions", conditions_to_json(rep)}};
            if (rep.all_pass()) j["label"] = classify(D).str();
            return j.dump();
        },
        py::arg("text"),
        "Classify a module given as JSON text; returns a JSON report string.");

    m.def(
        "canonical_module_text",
        [](const std::string& kind, int e, int trace, std::optional<int> mu,
           std::optional<int> field_index, std::optional<int> epsilon,
           std::optional<std::string> alpha) {
            return write_module(
                canonical_module(make_label(kind, e, trace, mu, field_index, epsilon, alpha)));
        },
        py::arg("kind"), py::arg("e"), py::arg("trace"), py::arg("mu") = std::nullopt,
        py::arg("field_index") = std::nullopt, py::arg("epsilon") = std::nullopt,
        py::arg("alpha") = std::nullopt,
        "Serialize the canonical module of a Table 1 label to JSON text.");

    m.def(
        "ec_info",
        [](const std::string& spec, const std::string& field) {
            CurveF3q E = parse_curve(spec, field == "f9" ? 2 : 1);
            AutGroupDescription aut = automorphism_group(E);
            int trace = frobenius_trace(E);
            return py::dict(
                py::arg("curve") = E.str(), py::arg("point_count") = point_count(E),
                py::arg("trace") = trace, py::arg("supersingular") = (trace % 3 == 0),
                py::arg("aut_order") = aut.order, py::arg("aut_shape") = aut.shape);
        },
        py::arg("spec"), py::arg("field") = "f3",
        "Point count, Frobenius trace, and automorphism data of a Weierstrass curve.");

    m.def(
        "fields",
        [](int e) {
            std::vector<std::string> out;
            for (const auto& c : catalog_fields(e)) out.push_back(c.label);
            return out;
        },
        py::arg("e"), "Catalog field labels with the given ramification index.");

    m.def(
        "k0_roundtrip",
        [](const std::string& s) { return k0_to_string(k0_from_string(s)); },
        py::arg("entry"), "Parse a K0 entry string and re-serialize it canonically.");

    m.def(
        "verify_table",
        [](int samples, unsigned seed) {
            Table1Report t1 = verify_table1(samples, seed);
            std::vector<Table2Row> t2 = verify_table2();
            bool all = t1.all_pass();
            for (const auto& r : t2) all = all && r.pass;
            nlohmann::json j{{"table1", table1_to_json(t1)},
                             {"table2", table2_to_json(t2)},
                             {"all_pass", all}};
            return j.dump();
        },
        py::arg("samples") = 3, py::arg("seed") = 20240913u,
        "Re-derive the classification table; returns a JSON report string.");
}
