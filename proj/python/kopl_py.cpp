#include <sstream>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kopl/errors.hpp"
#include "kopl/fixtures.hpp"
#include "kopl/generator.hpp"
#include "kopl/interpreter.hpp"
#include "kopl/kb.hpp"
#include "kopl/program.hpp"
#include "kopl/sparql.hpp"

namespace py = pybind11;
using namespace kopl;

namespace {

/// Python object from JSON text, via the standard json module.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& o) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

/// Owns the KB so interpreters and generators built on it stay valid.
struct PyKb {
    std::shared_ptr<const KnowledgeBase> kb;
};

} // namespace

PYBIND11_MODULE(kopl, m) {
    m.doc() = "Knowledge base, program interpreter, SPARQL subset and question generator";

    // the module keeps the type alive, so a borrowed pointer suffices
    static PyObject* error_type = py::exception<Error>(m, "KoplError", PyExc_RuntimeError).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(error_code_name(e.code()));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::class_<PyKb>(m, "KnowledgeBase")
        .def_static("load", [](const std::string& path) { return PyKb{std::make_shared<KnowledgeBase>(KnowledgeBase::load_file(path))}; },
                    py::arg("path"))
        .def_static("from_dict",
                    [](const py::object& doc) { return PyKb{std::make_shared<KnowledgeBase>(KnowledgeBase::from_json(from_python(doc)))}; })
        .def_static("nba_mini", [] { return PyKb{std::make_shared<KnowledgeBase>(fixtures::nba_mini())}; })
        .def_static("expanded",
                    [](std::size_t entities, std::uint64_t seed) {
                        return PyKb{std::make_shared<KnowledgeBase>(KnowledgeBase::from_json(fixtures::expand_nba_mini(entities, seed)))};
                    },
                    py::arg("entities") = 500, py::arg("seed") = 7)
        .def_property_readonly("entity_count", [](const PyKb& k) { return k.kb->entities().size(); })
        .def_property_readonly("concept_count", [](const PyKb& k) { return k.kb->concepts().size(); })
        .def_property_readonly("relation_count", [](const PyKb& k) { return k.kb->relations().size(); })
        .def("to_dict", [](const PyKb& k) { return to_python(k.kb->to_json()); })
        .def("run",
             [](const PyKb& k, const std::string& program) { return Interpreter(*k.kb).run(parse_program(program)); },
             py::arg("program"), "Execute a program (text or JSON form) and return the answer string.")
        .def("trace",
             [](const PyKb& k, const std::string& program) {
                 const auto p = parse_program(program);
                 return to_python(trace_to_json(*k.kb, p, Interpreter(*k.kb).execute(p).trace));
             },
             py::arg("program"))
        .def("query",
             [](const PyKb& k, const std::string& sparql) {
                 const auto a = sparql::Evaluator(*k.kb).answer(sparql::parse_sparql(sparql));
                 return a.unique ? py::object(py::str(a.answer)) : py::object(py::none());
             },
             py::arg("sparql"), "Unique answer of a SPARQL query, or None.")
        .def("generate",
             [](const PyKb& k, const py::object& config, std::optional<std::uint64_t> seed, std::optional<std::size_t> count) {
                 auto c = config.is_none() ? GeneratorConfig{} : GeneratorConfig::from_json(from_python(config));
                 if (seed) c.seed = *seed;
                 if (count) c.count = *count;
                 std::ostringstream out;
                 Generator(*k.kb, c).write_jsonl(out);
                 py::list items;
                 std::istringstream in(out.str());
                 for (std::string line; std::getline(in, line);) items.append(to_python(nlohmann::json::parse(line)));
                 return items;
             },
             py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("count") = py::none());

    m.def("parse_program", [](const std::string& text) { return to_python(program_to_json(parse_program(text))); }, py::arg("text"),
          "Program as a list of {function, inputs, dependencies}.");
    m.def("serialize_program", [](const py::object& calls) { return serialize(program_from_json(from_python(calls))); }, py::arg("calls"));
    m.def("compile", [](const std::string& program) { return sparql::render(sparql::compile(parse_program(program))); },
          py::arg("program"), "SPARQL text for a program.");
    m.def("functions", [] {
        std::vector<std::string> out;
        for (auto f : all_functions()) out.emplace_back(function_name(f));
        return out;
    });
}
