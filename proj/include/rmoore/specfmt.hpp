/* specfmt.hpp -- the textual spec format for machines and products
 *
 * Compositions are data: a spec document is JSON carrying alphabets,
 * machine tables or builtin references, rule-based products, and run
 * directives. parse() returns a structured document (or positioned
 * errors), render() emits the canonical text (parse . render = identity),
 * and compile() instantiates everything, keeping rule-based connection
 * maps in inspectable form.
 *
 * Builtins: cell, counter, length (machines); stack, ripple, network
 * (products).
 */

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rmoore/product.hpp"

namespace rmoore {
namespace specfmt {

inline constexpr int kFormatVersion = 1;

struct AlphabetDef {
    std::string name;
    std::vector<Symbol> symbols;
};

struct BuiltinRef {
    std::string builtin;
    nlohmann::ordered_json params;  // interpreted at compile time
};

struct StateDef {
    std::string name;  // optional; "" when unnamed
    Symbol output;
    std::vector<std::uint32_t> next;  // one target per alphabet symbol
};

struct TableMachineDef {
    std::variant<std::string, std::vector<Symbol>> alphabet;  // reference or inline
    std::optional<std::vector<Symbol>> outputs;
    std::uint32_t start = 0;
    std::vector<StateDef> states;
};

struct MachineEntry {
    std::string name;
    std::variant<TableMachineDef, BuiltinRef> def;
};

struct OutputSelector {
    OutputMap::Kind kind = OutputMap::Kind::tuple;  // never opaque
    std::uint32_t factor = 1;                       // project
    std::uint64_t base = 2;                         // weighted_sum
    std::vector<std::pair<std::vector<Symbol>, Symbol>> entries;  // table
    std::optional<Symbol> fallback;                               // table

    OutputMap to_output_map() const;
};

struct RuleProductDef {
    std::variant<std::string, std::vector<Symbol>> alphabet;
    std::vector<std::string> factors;  // names of machines or earlier products
    std::vector<ConnectionRule> rules;
    OutputSelector output;
};

struct ProductEntry {
    std::string name;
    std::variant<RuleProductDef, BuiltinRef> def;
};

struct RunDirective {
    std::string target;
    Word word;
};

struct SpecDocument {
    std::vector<AlphabetDef> alphabets;
    std::vector<MachineEntry> machines;
    std::vector<ProductEntry> products;
    std::vector<RunDirective> run;
};

/// Throws SpecParseError carrying every collected issue.
SpecDocument parse(const std::string& text);

/// Canonical text: fixed key order, two-space indent, trailing newline.
std::string render(const SpecDocument& doc);

using CompiledTarget = std::variant<Machine, ProductDef>;

struct CompiledSpec {
    /// Declaration order preserved.
    std::vector<std::pair<std::string, CompiledTarget>> targets;
    std::vector<RunDirective> run;

    const CompiledTarget* find(const std::string& name) const;
};

/// Instantiates every machine and product. Throws BadParameterError /
/// AlphabetMismatchError on bad builtin params or emission type mismatches.
CompiledSpec compile(const SpecDocument& doc);

/// Instantiate one builtin by registered name ("cell", "counter",
/// "length", "stack", "ripple", "network") with JSON params.
CompiledTarget instantiate_builtin(const std::string& builtin,
                                   const nlohmann::ordered_json& params);

}  // namespace specfmt
}  // namespace rmoore
