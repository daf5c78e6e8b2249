/* cli.cpp */

#include "rmoore/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "rmoore/dot.hpp"
#include "rmoore/minimize.hpp"
#include "rmoore/specfmt.hpp"

namespace rmoore {
namespace cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitUnknownTarget = 2;
constexpr int kExitBadWord = 3;
constexpr int kExitDivergence = 4;
constexpr int kExitInfinite = 5;
constexpr int kExitMonoidCap = 6;

struct LoadedSpec {
    specfmt::SpecDocument doc;
    specfmt::CompiledSpec compiled;
};

std::optional<LoadedSpec> load_spec(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "rmoore: cannot open \"" << path << "\"\n";
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        LoadedSpec spec;
        spec.doc = specfmt::parse(buffer.str());
        spec.compiled = specfmt::compile(spec.doc);
        return spec;
    } catch (const Error& e) {
        err << "rmoore: " << e.what() << "\n";
        return std::nullopt;
    }
}

const Alphabet& target_alphabet(const specfmt::CompiledTarget& target) {
    if (std::holds_alternative<Machine>(target))
        return std::get<Machine>(target).alphabet();
    return std::get<ProductDef>(target).alphabet();
}

/// Target as a machine; products are expanded.
Machine target_machine(const specfmt::CompiledTarget& target) {
    if (std::holds_alternative<Machine>(target)) {
        const Machine& m = std::get<Machine>(target);
        if (!m.is_table())
            throw InfiniteMachineError("target is generator-backed (infinite)");
        return m;
    }
    return expand_product(std::get<ProductDef>(target));
}

std::string word_or_empty(const Word& w) { return w.empty() ? "Λ" : render_word(w); }

std::optional<std::vector<std::size_t>> parse_factor_path(const std::string& text) {
    if (text.empty()) return std::vector<std::size_t>{};
    std::vector<std::size_t> path;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto slash = text.find('/', pos);
        std::string piece = text.substr(pos, slash == std::string::npos ? slash : slash - pos);
        try {
            std::size_t idx = std::stoull(piece);
            if (idx < 1) return std::nullopt;
            path.push_back(idx);
        } catch (...) {
            return std::nullopt;
        }
        if (slash == std::string::npos) break;
        pos = slash + 1;
    }
    return path;
}

/// Follows a 1-based factor path into nested products: every path element
/// must name a nested-product factor, and the returned state/def pair is
/// the product it names. Null when the path leaves the nesting.
const RecursionState* locate(const RecursionState& rs,
                             const std::vector<std::size_t>& path, const ProductDef** def,
                             const ProductDef& root) {
    const RecursionState* current = &rs;
    *def = &root;
    for (std::size_t idx : path) {
        if (idx > (*def)->factor_count()) return nullptr;
        const Factor& f = (*def)->factors()[idx - 1];
        if (f.is_machine()) return nullptr;
        current = current->nested(idx);
        *def = &f.product();
    }
    return current;
}

}  // namespace

int cmd_run(const std::string& spec_path, const std::string& target,
            const std::vector<std::string>& word_tokens, bool trace,
            const std::string& factor_path, std::ostream& out, std::ostream& err) {
    auto spec = load_spec(spec_path, err);
    if (!spec) return kExitParse;
    const specfmt::CompiledTarget* compiled = spec->compiled.find(target);
    if (!compiled) {
        err << "rmoore: unknown target \"" << target << "\"\n";
        return kExitUnknownTarget;
    }

    Word word;
    if (word_tokens.empty()) {
        // fall back to the spec's run directive for this target, if any
        for (const auto& directive : spec->compiled.run)
            if (directive.target == target) {
                word = directive.word;
                break;
            }
    } else {
        std::string joined;
        for (const auto& token : word_tokens) {
            if (!joined.empty()) joined += ' ';
            joined += token;
        }
        try {
            word = parse_word(joined);
        } catch (const Error& e) {
            err << "rmoore: " << e.what() << "\n";
            return kExitBadWord;
        }
    }
    const Alphabet& alphabet = target_alphabet(*compiled);
    for (Symbol a : word) {
        if (!alphabet.contains(a)) {
            err << "rmoore: symbol \"" << a.str() << "\" is not in the target alphabet\n";
            return kExitBadWord;
        }
    }

    auto path = parse_factor_path(factor_path);
    if (!path) {
        err << "rmoore: bad --factor path \"" << factor_path << "\"\n";
        return kExitUnknownTarget;
    }
    if (!path->empty() && !std::holds_alternative<ProductDef>(*compiled)) {
        err << "rmoore: --factor needs a product target\n";
        return kExitUnknownTarget;
    }

    if (std::holds_alternative<ProductDef>(*compiled)) {
        const ProductDef& p = std::get<ProductDef>(*compiled);
        RecursionState rs(p);
        std::size_t index = 0;
        for (Symbol a : word) {
            step_in_place(p, rs, a);
            ++index;
            if (trace) {
                out << "step " << index << ": " << a.str() << " -> " << rs.output().str()
                    << "\n";
                const ProductDef* scope = &p;
                const RecursionState* view = &rs;
                std::string prefix;
                if (!path->empty()) {
                    view = locate(rs, *path, &scope, p);
                    if (!view) {
                        err << "rmoore: --factor path does not name a nested product factor\n";
                        return kExitUnknownTarget;
                    }
                    for (std::size_t element : *path)
                        prefix += std::to_string(element) + "/";
                }
                for (std::size_t i = 1; i <= scope->factor_count(); ++i)
                    out << "  u" << prefix << i << " = " << word_or_empty(view->u(i))
                        << "\n";
            }
        }
        out << rs.output().str() << "\n";
        return kExitOk;
    }

    const Machine& m = std::get<Machine>(*compiled);
    StateId state = m.start();
    std::size_t index = 0;
    for (Symbol a : word) {
        state = m.next(state, a);
        ++index;
        if (trace)
            out << "step " << index << ": " << a.str() << " -> state " << m.state_name(state)
                << " / " << m.output(state).str() << "\n";
    }
    out << m.output(state).str() << "\n";
    return kExitOk;
}

int cmd_check(const std::string& spec_path, const std::string& target, std::size_t max_len,
              const std::optional<std::string>& against, std::ostream& out,
              std::ostream& err) {
    auto spec = load_spec(spec_path, err);
    if (!spec) return kExitParse;
    const specfmt::CompiledTarget* compiled = spec->compiled.find(target);
    if (!compiled) {
        err << "rmoore: unknown target \"" << target << "\"\n";
        return kExitUnknownTarget;
    }
    if (!std::holds_alternative<ProductDef>(*compiled)) {
        err << "rmoore: target \"" << target << "\" is not a product\n";
        return kExitInfinite;
    }
    const ProductDef& p = std::get<ProductDef>(*compiled);

    try {
        Theorem1Report report;
        if (against) {
            const specfmt::CompiledTarget* reference = spec->compiled.find(*against);
            if (!reference) {
                err << "rmoore: unknown target \"" << *against << "\"\n";
                return kExitUnknownTarget;
            }
            report = check_against(p, representing_function(target_machine(*reference)),
                                   max_len);
        } else {
            report = check_theorem1(p, max_len);
        }
        if (report.ok) {
            out << "agreement on " << report.words_checked << " words (length <= " << max_len
                << ")\n";
            return kExitOk;
        }
        out << "divergence on \"" << word_or_empty(*report.counterexample)
            << "\": recursion " << report.recursion_output->str() << ", machine "
            << report.machine_output->str() << "\n";
        return kExitDivergence;
    } catch (const InfiniteMachineError& e) {
        err << "rmoore: " << e.what() << "\n";
        return kExitInfinite;
    }
}

namespace {

void print_machine_table(const Machine& m, std::ostream& out) {
    out << "start: q" << m.start() << "\n";
    for (std::uint32_t s = 0; s < m.state_count(); ++s) {
        out << "q" << s << " / " << m.output(s).str() << ":";
        for (Symbol a : m.alphabet().symbols())
            out << " " << a.str() << "->q" << m.next(s, a);
        out << "\n";
    }
}

specfmt::SpecDocument machine_document(const std::string& name, const Machine& m) {
    specfmt::TableMachineDef def;
    std::vector<Symbol> alphabet = m.alphabet().symbols();
    def.alphabet = alphabet;
    def.start = static_cast<std::uint32_t>(m.start());
    for (std::uint32_t s = 0; s < m.state_count(); ++s) {
        specfmt::StateDef state;
        state.output = m.output(s);
        for (Symbol a : m.alphabet().symbols())
            state.next.push_back(static_cast<std::uint32_t>(m.next(s, a)));
        def.states.push_back(std::move(state));
    }
    specfmt::SpecDocument doc;
    doc.machines.push_back(specfmt::MachineEntry{name, std::move(def)});
    return doc;
}

}  // namespace

int cmd_minimize(const std::string& spec_path, const std::string& target,
                 const std::optional<std::string>& out_path, std::ostream& out,
                 std::ostream& err) {
    auto spec = load_spec(spec_path, err);
    if (!spec) return kExitParse;
    const specfmt::CompiledTarget* compiled = spec->compiled.find(target);
    if (!compiled) {
        err << "rmoore: unknown target \"" << target << "\"\n";
        return kExitUnknownTarget;
    }
    try {
        Machine m = target_machine(*compiled);
        MinimizedMachine minimized = minimize(m);
        out << "states: " << m.state_count() << " -> " << minimized.machine.state_count()
            << "\n";
        print_machine_table(minimized.machine, out);
        if (out_path) {
            std::ofstream file(*out_path, std::ios::binary);
            if (!file) {
                err << "rmoore: cannot write \"" << *out_path << "\"\n";
                return kExitParse;
            }
            file << specfmt::render(machine_document(target + "_min", minimized.machine));
        }
        return kExitOk;
    } catch (const InfiniteMachineError& e) {
        err << "rmoore: " << e.what() << "\n";
        return kExitInfinite;
    }
}

int cmd_monoid(const std::string& spec_path, const std::string& target, std::size_t cap,
               std::ostream& out, std::ostream& err) {
    auto spec = load_spec(spec_path, err);
    if (!spec) return kExitParse;
    const specfmt::CompiledTarget* compiled = spec->compiled.find(target);
    if (!compiled) {
        err << "rmoore: unknown target \"" << target << "\"\n";
        return kExitUnknownTarget;
    }
    try {
        MinimizedMachine minimized = minimize(target_machine(*compiled));
        MonoidTable monoid = transition_monoid(minimized, cap);
        MonoidClassification cls = classify(monoid);
        out << "elements: " << cls.element_count << "\n";
        out << "is_group: " << (cls.is_group ? "true" : "false") << "\n";
        out << "is_aperiodic: " << (cls.is_aperiodic ? "true" : "false") << "\n";
        out << "idempotents: " << cls.idempotent_count << "\n";
        for (std::size_t i = 0; i < monoid.size(); ++i)
            out << "e" << i << " = " << word_or_empty(monoid.element(i).shortest_witness)
                << "\n";
        out << "cayley:\n";
        for (std::size_t i = 0; i < monoid.size(); ++i) {
            out << "e" << i << ":";
            for (std::size_t j = 0; j < monoid.size(); ++j)
                out << " "
                    << monoid.mul(static_cast<std::uint32_t>(i),
                                  static_cast<std::uint32_t>(j));
            out << "\n";
        }
        return kExitOk;
    } catch (const MonoidSizeError& e) {
        err << "rmoore: " << e.what() << "\n";
        return kExitMonoidCap;
    } catch (const InfiniteMachineError& e) {
        err << "rmoore: " << e.what() << "\n";
        return kExitInfinite;
    }
}

int cmd_dot(const std::string& spec_path, const std::string& target,
            const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto spec = load_spec(spec_path, err);
    if (!spec) return kExitParse;
    const specfmt::CompiledTarget* compiled = spec->compiled.find(target);
    if (!compiled) {
        err << "rmoore: unknown target \"" << target << "\"\n";
        return kExitUnknownTarget;
    }
    try {
        MinimizedMachine minimized = minimize(target_machine(*compiled));
        std::string dot = to_dot(minimized.machine);
        if (out_path == "-") {
            out << dot;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                err << "rmoore: cannot write \"" << out_path << "\"\n";
                return kExitParse;
            }
            file << dot;
        }
        return kExitOk;
    } catch (const InfiniteMachineError& e) {
        err << "rmoore: " << e.what() << "\n";
        return kExitInfinite;
    }
}

}  // namespace cli
}  // namespace rmoore
