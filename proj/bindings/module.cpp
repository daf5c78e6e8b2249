/* module.cpp -- the _rmoore python extension */

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rmoore/dot.hpp"
#include "rmoore/examples.hpp"
#include "rmoore/minimize.hpp"
#include "rmoore/monoid.hpp"
#include "rmoore/specfmt.hpp"

namespace py = pybind11;
using namespace rmoore;

namespace {

Word word_from(const std::string& text) { return parse_word(text); }

py::object target_to_py(const specfmt::CompiledTarget& target) {
    if (std::holds_alternative<Machine>(target)) return py::cast(std::get<Machine>(target));
    return py::cast(std::get<ProductDef>(target));
}

}  // namespace

PYBIND11_MODULE(_rmoore, m) {
    m.doc() = "compositional Moore machine toolkit";

    py::register_exception<Error>(m, "RmooreError");

    py::class_<Symbol>(m, "Symbol")
        .def_static("parse", [](const std::string& text) { return Symbol::parse(text); })
        .def_property_readonly("name", &Symbol::name)
        .def_property_readonly("params", [](const Symbol& s) { return s.params(); })
        .def("__str__", [](const Symbol& s) { return s.str(); })
        .def("__repr__", [](const Symbol& s) { return "Symbol(" + s.str() + ")"; })
        .def("__eq__", [](const Symbol& a, const Symbol& b) { return a == b; })
        .def("__hash__", [](const Symbol& s) { return s.id(); });

    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init([](const std::vector<std::string>& symbols) {
            std::vector<Symbol> parsed;
            parsed.reserve(symbols.size());
            for (const auto& s : symbols) parsed.push_back(Symbol::parse(s));
            return Alphabet(parsed);
        }))
        .def("__len__", &Alphabet::size)
        .def("__contains__",
             [](const Alphabet& a, const std::string& s) { return a.contains(Symbol::parse(s)); })
        .def("symbols", [](const Alphabet& a) {
            std::vector<std::string> out;
            for (Symbol s : a.symbols()) out.push_back(s.str());
            return out;
        });

    py::class_<Machine>(m, "Machine")
        .def_property_readonly("is_table", &Machine::is_table)
        .def_property_readonly("state_count", &Machine::state_count)
        .def_property_readonly("alphabet", &Machine::alphabet)
        .def_property_readonly("start", &Machine::start)
        .def("output", [](const Machine& m, StateId s) { return m.output(s).str(); })
        .def("next",
             [](const Machine& m, StateId s, const std::string& a) {
                 return m.next(s, Symbol::parse(a));
             })
        .def("state_name", &Machine::state_name);

    py::class_<StringFunction>(m, "StringFunction")
        .def("__call__",
             [](const StringFunction& f, const std::string& word) {
                 return f(word_from(word)).str();
             })
        .def_property_readonly("alphabet", &StringFunction::alphabet)
        .def_property_readonly("machine", [](const StringFunction& f) {
            return f.machine() ? py::cast(*f.machine()) : py::none();
        });

    py::class_<ProductDef>(m, "ProductDef")
        .def_property_readonly("factor_count", &ProductDef::factor_count)
        .def_property_readonly("alphabet", &ProductDef::alphabet);

    py::class_<RecursionState>(m, "RecursionState")
        .def(py::init<const ProductDef&>())
        .def_property_readonly("output",
                               [](const RecursionState& rs) { return rs.output().str(); })
        .def("u", [](const RecursionState& rs, std::size_t i) { return render_word(rs.u(i)); })
        .def("signature", &RecursionState::signature);

    py::class_<Theorem1Report>(m, "Theorem1Report")
        .def_readonly("ok", &Theorem1Report::ok)
        .def_readonly("words_checked", &Theorem1Report::words_checked)
        .def_property_readonly("counterexample", [](const Theorem1Report& r) {
            return r.counterexample ? py::cast(render_word(*r.counterexample)) : py::none();
        });

    py::class_<CascadeReport>(m, "CascadeReport")
        .def_readonly("cascade", &CascadeReport::cascade)
        .def_readonly("offenders", &CascadeReport::offenders);

    py::class_<MinimizedMachine>(m, "MinimizedMachine")
        .def_readonly("machine", &MinimizedMachine::machine)
        .def_readonly("class_of", &MinimizedMachine::class_of)
        .def("witness", [](const MinimizedMachine& m, std::uint32_t a, std::uint32_t b) {
            return render_word(m.witness(a, b));
        });

    py::class_<EquivalenceResult>(m, "EquivalenceResult")
        .def_readonly("equivalent", &EquivalenceResult::equivalent)
        .def_property_readonly("counterexample", [](const EquivalenceResult& r) {
            return r.counterexample ? py::cast(render_word(*r.counterexample)) : py::none();
        })
        .def("__bool__", [](const EquivalenceResult& r) { return r.equivalent; });

    py::class_<MonoidTable>(m, "MonoidTable")
        .def("__len__", &MonoidTable::size)
        .def_property_readonly("identity", &MonoidTable::identity)
        .def("mul", &MonoidTable::mul)
        .def("witness", [](const MonoidTable& t, std::size_t i) {
            return render_word(t.element(i).shortest_witness);
        })
        .def("mapping", [](const MonoidTable& t, std::size_t i) {
            return t.element(i).mapping;
        });

    py::class_<MonoidClassification>(m, "MonoidClassification")
        .def_readonly("is_group", &MonoidClassification::is_group)
        .def_readonly("is_aperiodic", &MonoidClassification::is_aperiodic)
        .def_readonly("element_count", &MonoidClassification::element_count)
        .def_readonly("idempotent_count", &MonoidClassification::idempotent_count);

    m.def("delta_star", [](const Machine& machine, StateId s, const std::string& w) {
        return delta_star(machine, s, word_from(w));
    });
    m.def("representing_function", &representing_function);
    m.def("remap_output", [](const StringFunction& f, const py::function& g) {
        return remap_output(f, [g](Symbol s) {
            return Symbol::parse(g(s.str()).cast<std::string>());
        });
    });
    m.def("recursion_eval", [](const ProductDef& p, const std::string& w) {
        return recursion_eval(p, word_from(w)).str();
    });
    m.def("step", [](const ProductDef& p, const RecursionState& rs, const std::string& a) {
        return step(p, rs, Symbol::parse(a));
    });
    m.def("expand_product", &expand_product);
    m.def("recursion_reachable_machine", &recursion_reachable_machine);
    m.def("check_theorem1", &check_theorem1, py::arg("product"), py::arg("max_len"),
          py::arg("budget") = 4'000'000);
    m.def("is_cascade", &is_cascade);
    m.def("binary_encode", &binary_encode);
    m.def("reachable", &reachable);
    m.def("minimize", &minimize);
    m.def(
        "equivalent",
        [](const Machine& a, const Machine& b, std::optional<std::size_t> bound) {
            return equivalent(a, b, bound);
        },
        py::arg("m1"), py::arg("m2"), py::arg("bound") = py::none());
    m.def("transition_monoid", &transition_monoid, py::arg("minimized"),
          py::arg("cap") = kDefaultMonoidCap);
    m.def("congruent", [](const StringFunction& f, const std::string& w, const std::string& u) {
        return congruent(f, word_from(w), word_from(u));
    });
    m.def("classify", &classify);
    m.def("to_dot", &to_dot, py::arg("machine"), py::arg("graph_name") = "rmoore");

    auto ex = m.def_submodule("examples");
    ex.def("make_cell", [](const std::vector<std::string>& values) {
        std::vector<Symbol> parsed;
        for (const auto& v : values) parsed.push_back(Symbol::parse(v));
        return examples::make_cell(parsed);
    });
    ex.def("make_counter", &examples::make_counter);
    ex.def(
        "make_stack",
        [](std::size_t depth, const std::vector<std::string>& values) {
            examples::StackConfig config;
            config.depth = depth;
            for (const auto& v : values) config.values.push_back(Symbol::parse(v));
            return examples::make_stack(config);
        },
        py::arg("depth"), py::arg("values"));
    ex.def("stack_top",
           [](const std::string& out) { return examples::stack_top(Symbol::parse(out)).str(); });
    ex.def("stack_empty",
           [](const std::string& out) { return examples::stack_empty(Symbol::parse(out)); });
    ex.def("stack_full",
           [](const std::string& out) { return examples::stack_full(Symbol::parse(out)); });
    py::enum_<examples::CarryGuard>(ex, "CarryGuard")
        .value("carry_chain", examples::CarryGuard::carry_chain)
        .value("skip_below_zero", examples::CarryGuard::skip_below_zero);
    ex.def("make_ripple", &examples::make_ripple, py::arg("n"),
           py::arg("guard") = examples::CarryGuard::carry_chain);
    ex.def("make_ripple_value", &examples::make_ripple_value, py::arg("n"),
           py::arg("guard") = examples::CarryGuard::carry_chain);
    ex.def(
        "make_network",
        [](std::size_t nodes, const std::vector<std::string>& messages, std::size_t capacity,
           const std::vector<std::vector<std::string>>& initial, std::size_t arbiter_start) {
            examples::NetworkConfig config;
            config.node_count = nodes;
            for (const auto& message : messages)
                config.messages.push_back(Symbol::parse(message));
            config.queue_capacity = capacity;
            for (const auto& queue : initial) {
                std::vector<Symbol> q;
                for (const auto& s : queue) q.push_back(Symbol::parse(s));
                config.initial_queues.push_back(std::move(q));
            }
            config.arbiter_start = arbiter_start;
            return examples::make_network(config);
        },
        py::arg("nodes"), py::arg("messages"), py::arg("capacity") = 2,
        py::arg("initial") = std::vector<std::vector<std::string>>{},
        py::arg("arbiter_start") = 0);
    ex.def("make_length", []() { return examples::make_length(); });

    auto sf = m.def_submodule("specfmt");
    sf.def("render_canonical", [](const std::string& text) {
        return specfmt::render(specfmt::parse(text));
    });
    sf.def("compile_text", [](const std::string& text) {
        auto compiled = specfmt::compile(specfmt::parse(text));
        py::dict out;
        for (const auto& [name, target] : compiled.targets)
            out[py::str(name)] = target_to_py(target);
        return out;
    });
}
