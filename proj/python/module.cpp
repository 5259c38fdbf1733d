#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cychom/cli.hpp"

namespace py = pybind11;
using namespace cychom;

namespace {

SpecFile spec_from(const std::string& text_or_name) {
    if (text_or_name.find('[') != std::string::npos) return parse_spec(text_or_name);
    SpecFile out;
    out.payload = BuiltinRef{text_or_name};
    return out;
}

Window window_from(std::pair<int, int> degrees, std::pair<int, int> upow, int margin) {
    Window w;
    w.degree_lo = degrees.first;
    w.degree_hi = degrees.second;
    w.upow_lo = upow.first;
    w.upow_hi = upow.second;
    w.margin = margin;
    w.validate();
    return w;
}

py::list table_rows(const ModuleTable& t) {
    py::list rows;
    for (int k = t.lo; k <= t.hi; ++k) {
        py::dict row;
        row["degree"] = k;
        row["dim"] = t.at(k).dim;
        row["u_rank"] = t.at(k).u_rank;
        row["trust"] = trust_name(t.at(k).trust);
        rows.append(row);
    }
    return rows;
}

py::dict report_dict(const Report& rep) {
    py::dict out;
    out["command"] = rep.command;
    out["input"] = rep.input;
    if (!rep.flavour.empty()) out["flavour"] = rep.flavour;
    if (rep.table) out["rows"] = table_rows(*rep.table);
    if (rep.checks) {
        py::list checks;
        for (auto& item : rep.checks->items) {
            py::dict c;
            c["name"] = item.name;
            c["pass"] = item.pass;
            if (!item.witness.empty()) c["witness"] = item.witness;
            checks.append(c);
        }
        out["checks"] = checks;
    }
    out["pass"] = rep.ok();
    return out;
}

}  // namespace

PYBIND11_MODULE(_cychom, m) {
    m.doc() = "exact cyclic homology of mixed complexes over finite windows";

    m.def(
        "homology",
        [](const std::string& spec, const std::string& flavour, std::pair<int, int> degrees,
           std::pair<int, int> upow, int margin, int cap) {
            Report rep =
                cmd_homology(spec_from(spec), flavour_from_name(flavour),
                             window_from(degrees, upow, margin), cap);
            return report_dict(rep);
        },
        py::arg("spec"), py::arg("flavour"), py::arg("degrees") = std::pair<int, int>{0, 8},
        py::arg("upow") = std::pair<int, int>{-8, 8}, py::arg("margin") = 2, py::arg("cap") = -1,
        "Flavour homology table of a builtin name or spec-file text.");

    m.def(
        "verify",
        [](const std::string& spec, const std::string& suite, std::pair<int, int> degrees,
           std::pair<int, int> upow, int margin, int cap) {
            Report rep =
                cmd_verify(spec_from(spec), suite, window_from(degrees, upow, margin), cap);
            return report_dict(rep);
        },
        py::arg("spec"), py::arg("suite") = "all", py::arg("degrees") = std::pair<int, int>{0, 8},
        py::arg("upow") = std::pair<int, int>{-8, 8}, py::arg("margin") = 2, py::arg("cap") = -1,
        "Structural verification ledger for a builtin name or spec-file text.");

    m.def(
        "loop",
        [](const std::string& spec, bool relative, std::pair<int, int> degrees, int margin) {
            Report rep = cmd_loop(spec_from(spec), relative,
                                  window_from(degrees, {-8, 8}, margin));
            return report_dict(rep);
        },
        py::arg("spec"), py::arg("relative") = false,
        py::arg("degrees") = std::pair<int, int>{0, 8}, py::arg("margin") = 2,
        "Equivariant loop-space table of a model spec or sphere builtin.");

    m.def("flavours", [] {
        py::list out;
        for (Flavour f : all_flavours()) out.append(std::string(flavour_traits(f).name));
        return out;
    });
    m.def("builtins", [] {
        return std::vector<std::string>{"point_dga", "point_mixed", "es1", "sphere2", "sphere3",
                                        "sphere4", "sphere5"};
    });
    m.def("canonical_spec", [](const std::string& text) { return print_spec(parse_spec(text)); },
          "Parse a spec file and print its canonical form.");
}
