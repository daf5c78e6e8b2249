/* specfmt.cpp */

#include "rmoore/specfmt.hpp"

#include <algorithm>
#include <set>

#include "rmoore/examples.hpp"

namespace rmoore {
namespace specfmt {

using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- parsing

struct Parser {
    std::vector<ParseIssue> issues;
    const std::string* text = nullptr;

    void issue(const std::string& path, const std::string& message) {
        issues.push_back(ParseIssue{0, 0, path, message});
    }

    void position_of(std::size_t byte, std::size_t& line, std::size_t& column) const {
        line = 1;
        column = 1;
        for (std::size_t i = 0; i + 1 < byte && i < text->size(); ++i) {
            if ((*text)[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    }

    bool expect_keys(const ordered_json& obj, const std::string& path,
                     const std::set<std::string>& allowed) {
        bool ok = true;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key())) {
                issue(path, "unknown key \"" + it.key() + "\"");
                ok = false;
            }
        }
        return ok;
    }

    std::optional<Symbol> symbol(const ordered_json& j, const std::string& path) {
        if (!j.is_string()) {
            issue(path, "expected a symbol string");
            return std::nullopt;
        }
        try {
            return Symbol::parse(j.get<std::string>());
        } catch (const Error& e) {
            issue(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<std::vector<Symbol>> symbol_list(const ordered_json& j,
                                                   const std::string& path) {
        if (!j.is_array()) {
            issue(path, "expected an array of symbols");
            return std::nullopt;
        }
        std::vector<Symbol> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto s = symbol(j[i], path + "[" + std::to_string(i) + "]");
            if (!s) return std::nullopt;
            out.push_back(*s);
        }
        return out;
    }

    std::optional<FeedbackRef> feedback_ref(const ordered_json& j, const std::string& path) {
        if (j.is_number_unsigned() || j.is_number_integer()) {
            auto v = j.get<std::int64_t>();
            if (v < 1) {
                issue(path, "factor reference must be >= 1");
                return std::nullopt;
            }
            return FeedbackRef::absolute(static_cast<std::int32_t>(v));
        }
        if (j.is_string()) {
            std::string s = j.get<std::string>();
            if (s == "i") return FeedbackRef::rel(0);
            if (s.size() >= 2 && s[0] == 'i' && (s[1] == '+' || s[1] == '-')) {
                try {
                    int offset = std::stoi(s.substr(1));
                    return FeedbackRef::rel(offset);
                } catch (...) {
                }
            }
        }
        issue(path, "expected a factor index or \"i\", \"i+1\", \"i-1\", ...");
        return std::nullopt;
    }

    std::string render_err;
};

std::string feedback_text(const FeedbackRef& ref) {
    if (!ref.relative) return std::to_string(ref.value);
    if (ref.value == 0) return "i";
    return ref.value > 0 ? "i+" + std::to_string(ref.value)
                         : "i-" + std::to_string(-ref.value);
}

ordered_json feedback_json(const FeedbackRef& ref) {
    if (!ref.relative) return ref.value;
    return feedback_text(ref);
}

std::optional<EmitItem> parse_emit_item(Parser& p, const ordered_json& j,
                                        const std::string& path) {
    if (!j.is_string()) {
        p.issue(path, "expected an emission string");
        return std::nullopt;
    }
    std::string s = j.get<std::string>();
    if (s.empty()) {
        p.issue(path, "empty emission item");
        return std::nullopt;
    }
    if (s[0] == '?') return EmitItem::bound(s.substr(1));
    if (s.rfind("out(", 0) == 0 && s.back() == ')') {
        ordered_json inner;
        std::string body = s.substr(4, s.size() - 5);
        // out(3) or out(i+1)
        if (!body.empty() && std::all_of(body.begin(), body.end(),
                                         [](char c) { return c >= '0' && c <= '9'; }))
            inner = std::stoll(body);
        else
            inner = body;
        auto ref = p.feedback_ref(inner, path);
        if (!ref) return std::nullopt;
        return EmitItem::feedback(*ref);
    }
    try {
        return EmitItem::lit(Symbol::parse(s));
    } catch (const Error& e) {
        p.issue(path, e.what());
        return std::nullopt;
    }
}

std::string emit_item_text(const EmitItem& item) {
    switch (item.kind) {
        case EmitItem::Kind::literal:
            return item.literal->str();
        case EmitItem::Kind::param:
            return "?" + item.param;
        case EmitItem::Kind::feedback:
            return "out(" + feedback_text(item.ref) + ")";
    }
    return {};
}

std::optional<ConnectionRule> parse_rule(Parser& p, const ordered_json& j,
                                         const std::string& path) {
    if (!j.is_object()) {
        p.issue(path, "expected a rule object");
        return std::nullopt;
    }
    p.expect_keys(j, path, {"factor", "input", "guards", "emit"});
    ConnectionRule rule;

    if (!j.contains("factor")) {
        p.issue(path, "rule needs a \"factor\"");
        return std::nullopt;
    }
    const auto& f = j["factor"];
    if (f.is_string() && f.get<std::string>() == "any") {
        rule.factor = std::nullopt;
    } else if (f.is_number_unsigned() && f.get<std::uint64_t>() >= 1) {
        rule.factor = static_cast<std::uint32_t>(f.get<std::uint64_t>());
    } else {
        p.issue(path + ".factor", "expected a 1-based index or \"any\"");
        return std::nullopt;
    }

    if (!j.contains("input") || !j["input"].is_string()) {
        p.issue(path, "rule needs an \"input\" pattern string");
        return std::nullopt;
    }
    try {
        rule.input = SymbolPattern::parse(j["input"].get<std::string>());
    } catch (const Error& e) {
        p.issue(path + ".input", e.what());
        return std::nullopt;
    }

    if (j.contains("guards")) {
        if (!j["guards"].is_array()) {
            p.issue(path + ".guards", "expected an array");
            return std::nullopt;
        }
        for (std::size_t g = 0; g < j["guards"].size(); ++g) {
            const auto& gj = j["guards"][g];
            std::string gpath = path + ".guards[" + std::to_string(g) + "]";
            if (!gj.is_object()) {
                p.issue(gpath, "expected a guard object");
                return std::nullopt;
            }
            p.expect_keys(gj, gpath, {"out", "op", "value", "other"});
            if (!gj.contains("out") || !gj.contains("op")) {
                p.issue(gpath, "guard needs \"out\" and \"op\"");
                return std::nullopt;
            }
            Guard guard;
            auto subject = p.feedback_ref(gj["out"], gpath + ".out");
            if (!subject) return std::nullopt;
            guard.subject = *subject;
            std::string op = gj["op"].is_string() ? gj["op"].get<std::string>() : "";
            if (op != "eq" && op != "ne") {
                p.issue(gpath + ".op", "expected \"eq\" or \"ne\"");
                return std::nullopt;
            }
            guard.negated = op == "ne";
            if (gj.contains("value") == gj.contains("other")) {
                p.issue(gpath, "guard needs exactly one of \"value\" or \"other\"");
                return std::nullopt;
            }
            if (gj.contains("value")) {
                auto s = p.symbol(gj["value"], gpath + ".value");
                if (!s) return std::nullopt;
                guard.rhs = *s;
            } else {
                auto other = p.feedback_ref(gj["other"], gpath + ".other");
                if (!other) return std::nullopt;
                guard.rhs = *other;
            }
            rule.guards.push_back(std::move(guard));
        }
    }

    if (!j.contains("emit") || !j["emit"].is_array()) {
        p.issue(path, "rule needs an \"emit\" array");
        return std::nullopt;
    }
    for (std::size_t e = 0; e < j["emit"].size(); ++e) {
        auto item = parse_emit_item(p, j["emit"][e], path + ".emit[" + std::to_string(e) + "]");
        if (!item) return std::nullopt;
        rule.emit.push_back(std::move(*item));
    }

    // every bound-parameter emission must be bound by the input pattern
    for (const auto& item : rule.emit) {
        if (item.kind != EmitItem::Kind::param) continue;
        bool bound = false;
        for (const auto& param : rule.input.params)
            if (param.binder && param.binder_name == item.param) bound = true;
        if (!bound)
            p.issue(path, "emission \"?" + item.param + "\" is not bound by the input pattern");
    }
    return rule;
}

std::optional<OutputSelector> parse_output(Parser& p, const ordered_json& j,
                                           const std::string& path) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        p.issue(path, "expected an output selector object with a \"kind\"");
        return std::nullopt;
    }
    OutputSelector sel;
    std::string kind = j["kind"].get<std::string>();
    if (kind == "tuple") {
        p.expect_keys(j, path, {"kind"});
        sel.kind = OutputMap::Kind::tuple;
    } else if (kind == "project") {
        p.expect_keys(j, path, {"kind", "factor"});
        sel.kind = OutputMap::Kind::project;
        if (!j.contains("factor") || !j["factor"].is_number_unsigned() ||
            j["factor"].get<std::uint64_t>() < 1) {
            p.issue(path, "project needs a 1-based \"factor\"");
            return std::nullopt;
        }
        sel.factor = static_cast<std::uint32_t>(j["factor"].get<std::uint64_t>());
    } else if (kind == "weighted_sum") {
        p.expect_keys(j, path, {"kind", "base"});
        sel.kind = OutputMap::Kind::weighted_sum;
        if (!j.contains("base") || !j["base"].is_number_unsigned() ||
            j["base"].get<std::uint64_t>() < 2) {
            p.issue(path, "weighted_sum needs a \"base\" >= 2");
            return std::nullopt;
        }
        sel.base = j["base"].get<std::uint64_t>();
    } else if (kind == "table") {
        p.expect_keys(j, path, {"kind", "entries", "default"});
        sel.kind = OutputMap::Kind::table;
        if (!j.contains("entries") || !j["entries"].is_array()) {
            p.issue(path, "table needs an \"entries\" array");
            return std::nullopt;
        }
        for (std::size_t e = 0; e < j["entries"].size(); ++e) {
            const auto& ej = j["entries"][e];
            std::string epath = path + ".entries[" + std::to_string(e) + "]";
            if (!ej.is_object() || !ej.contains("when") || !ej.contains("then")) {
                p.issue(epath, "expected {\"when\": [...], \"then\": symbol}");
                return std::nullopt;
            }
            p.expect_keys(ej, epath, {"when", "then"});
            auto when = p.symbol_list(ej["when"], epath + ".when");
            auto then = p.symbol(ej["then"], epath + ".then");
            if (!when || !then) return std::nullopt;
            sel.entries.emplace_back(std::move(*when), *then);
        }
        if (j.contains("default")) {
            auto fallback = p.symbol(j["default"], path + ".default");
            if (!fallback) return std::nullopt;
            sel.fallback = *fallback;
        }
    } else {
        p.issue(path, "unknown output kind \"" + kind + "\"");
        return std::nullopt;
    }
    return sel;
}

const std::set<std::string> kMachineBuiltins = {"cell", "counter", "length"};
const std::set<std::string> kProductBuiltins = {"stack", "ripple", "network"};

}  // namespace

SpecDocument parse(const std::string& text) {
    Parser p;
    p.text = &text;

    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        ParseIssue issue;
        p.position_of(e.byte, issue.line, issue.column);
        issue.message = e.what();
        throw SpecParseError({issue});
    }

    SpecDocument doc;
    if (!root.is_object()) {
        p.issue("", "document root must be an object");
        throw SpecParseError(std::move(p.issues));
    }
    p.expect_keys(root, "", {"specfmt_version", "alphabets", "machines", "products", "run"});
    if (!root.contains("specfmt_version") ||
        root["specfmt_version"] != ordered_json(kFormatVersion))
        p.issue("", "missing or unsupported \"specfmt_version\" (expected " +
                        std::to_string(kFormatVersion) + ")");

    std::set<std::string> alphabet_names;
    std::set<std::string> machine_names;
    std::set<std::string> product_names;

    if (root.contains("alphabets")) {
        if (!root["alphabets"].is_array()) {
            p.issue("alphabets", "expected an array");
        } else {
            for (std::size_t i = 0; i < root["alphabets"].size(); ++i) {
                const auto& aj = root["alphabets"][i];
                std::string path = "alphabets[" + std::to_string(i) + "]";
                if (!aj.is_object() || !aj.contains("name") || !aj.contains("symbols")) {
                    p.issue(path, "expected {\"name\": ..., \"symbols\": [...]}");
                    continue;
                }
                p.expect_keys(aj, path, {"name", "symbols"});
                AlphabetDef def;
                def.name = aj["name"].is_string() ? aj["name"].get<std::string>() : "";
                if (def.name.empty()) {
                    p.issue(path, "alphabet needs a non-empty name");
                    continue;
                }
                if (!alphabet_names.insert(def.name).second)
                    p.issue(path, "duplicate alphabet \"" + def.name + "\"");
                auto symbols = p.symbol_list(aj["symbols"], path + ".symbols");
                if (!symbols) continue;
                def.symbols = std::move(*symbols);
                doc.alphabets.push_back(std::move(def));
            }
        }
    }

    auto parse_alphabet_field =
        [&](const ordered_json& j,
            const std::string& path) -> std::optional<std::variant<std::string, std::vector<Symbol>>> {
        if (j.is_string()) {
            std::string name = j.get<std::string>();
            if (!alphabet_names.count(name)) {
                p.issue(path, "unresolved alphabet \"" + name + "\"");
                return std::nullopt;
            }
            return std::variant<std::string, std::vector<Symbol>>(name);
        }
        auto symbols = p.symbol_list(j, path);
        if (!symbols) return std::nullopt;
        return std::variant<std::string, std::vector<Symbol>>(std::move(*symbols));
    };

    if (root.contains("machines")) {
        if (!root["machines"].is_array()) {
            p.issue("machines", "expected an array");
        } else {
            for (std::size_t i = 0; i < root["machines"].size(); ++i) {
                const auto& mj = root["machines"][i];
                std::string path = "machines[" + std::to_string(i) + "]";
                if (!mj.is_object() || !mj.contains("name") || !mj["name"].is_string()) {
                    p.issue(path, "machine needs a \"name\"");
                    continue;
                }
                MachineEntry entry;
                entry.name = mj["name"].get<std::string>();
                if (!machine_names.insert(entry.name).second)
                    p.issue(path, "duplicate machine \"" + entry.name + "\"");

                if (mj.contains("builtin")) {
                    p.expect_keys(mj, path, {"name", "builtin", "params"});
                    BuiltinRef ref;
                    ref.builtin = mj["builtin"].is_string() ? mj["builtin"].get<std::string>() : "";
                    if (!kMachineBuiltins.count(ref.builtin)) {
                        p.issue(path, "unknown machine builtin \"" + ref.builtin + "\"");
                        continue;
                    }
                    ref.params = mj.contains("params") ? mj["params"]
                                                       : ordered_json::object();
                    entry.def = std::move(ref);
                    doc.machines.push_back(std::move(entry));
                    continue;
                }

                p.expect_keys(mj, path, {"name", "alphabet", "outputs", "start", "states"});
                if (!mj.contains("alphabet") || !mj.contains("states")) {
                    p.issue(path, "table machine needs \"alphabet\" and \"states\"");
                    continue;
                }
                TableMachineDef def;
                auto alphabet = parse_alphabet_field(mj["alphabet"], path + ".alphabet");
                if (!alphabet) continue;
                def.alphabet = std::move(*alphabet);
                if (mj.contains("outputs")) {
                    auto outs = p.symbol_list(mj["outputs"], path + ".outputs");
                    if (!outs) continue;
                    def.outputs = std::move(*outs);
                }
                def.start = mj.contains("start") && mj["start"].is_number_unsigned()
                                ? mj["start"].get<std::uint32_t>()
                                : 0;
                if (!mj["states"].is_array() || mj["states"].empty()) {
                    p.issue(path + ".states", "expected a non-empty array");
                    continue;
                }
                bool bad = false;
                for (std::size_t s = 0; s < mj["states"].size(); ++s) {
                    const auto& sj = mj["states"][s];
                    std::string spath = path + ".states[" + std::to_string(s) + "]";
                    if (!sj.is_object() || !sj.contains("output") || !sj.contains("next")) {
                        p.issue(spath, "state needs \"output\" and \"next\"");
                        bad = true;
                        break;
                    }
                    p.expect_keys(sj, spath, {"name", "output", "next"});
                    StateDef state;
                    if (sj.contains("name") && sj["name"].is_string())
                        state.name = sj["name"].get<std::string>();
                    auto out = p.symbol(sj["output"], spath + ".output");
                    if (!out) {
                        bad = true;
                        break;
                    }
                    state.output = *out;
                    if (!sj["next"].is_array()) {
                        p.issue(spath + ".next", "expected an array of state indices");
                        bad = true;
                        break;
                    }
                    for (const auto& t : sj["next"]) {
                        if (!t.is_number_unsigned()) {
                            p.issue(spath + ".next", "expected state indices");
                            bad = true;
                            break;
                        }
                        state.next.push_back(t.get<std::uint32_t>());
                    }
                    if (bad) break;
                    def.states.push_back(std::move(state));
                }
                if (bad) continue;
                entry.def = std::move(def);
                doc.machines.push_back(std::move(entry));
            }
        }
    }

    if (root.contains("products")) {
        if (!root["products"].is_array()) {
            p.issue("products", "expected an array");
        } else {
            for (std::size_t i = 0; i < root["products"].size(); ++i) {
                const auto& pj = root["products"][i];
                std::string path = "products[" + std::to_string(i) + "]";
                if (!pj.is_object() || !pj.contains("name") || !pj["name"].is_string()) {
                    p.issue(path, "product needs a \"name\"");
                    continue;
                }
                ProductEntry entry;
                entry.name = pj["name"].get<std::string>();
                if (machine_names.count(entry.name) || !product_names.insert(entry.name).second)
                    p.issue(path, "duplicate definition \"" + entry.name + "\"");

                if (pj.contains("builtin")) {
                    p.expect_keys(pj, path, {"name", "builtin", "params"});
                    BuiltinRef ref;
                    ref.builtin = pj["builtin"].is_string() ? pj["builtin"].get<std::string>() : "";
                    if (!kProductBuiltins.count(ref.builtin)) {
                        p.issue(path, "unknown product builtin \"" + ref.builtin + "\"");
                        continue;
                    }
                    ref.params = pj.contains("params") ? pj["params"]
                                                       : ordered_json::object();
                    entry.def = std::move(ref);
                    doc.products.push_back(std::move(entry));
                    continue;
                }

                p.expect_keys(pj, path, {"name", "alphabet", "factors", "rules", "output"});
                if (!pj.contains("alphabet") || !pj.contains("factors") ||
                    !pj.contains("output")) {
                    p.issue(path, "product needs \"alphabet\", \"factors\" and \"output\"");
                    continue;
                }
                RuleProductDef def;
                auto alphabet = parse_alphabet_field(pj["alphabet"], path + ".alphabet");
                if (!alphabet) continue;
                def.alphabet = std::move(*alphabet);
                if (!pj["factors"].is_array() || pj["factors"].empty()) {
                    p.issue(path + ".factors", "expected a non-empty array of names");
                    continue;
                }
                bool bad = false;
                for (const auto& fj : pj["factors"]) {
                    if (!fj.is_string()) {
                        p.issue(path + ".factors", "expected names");
                        bad = true;
                        break;
                    }
                    std::string fname = fj.get<std::string>();
                    if (!machine_names.count(fname) && !product_names.count(fname)) {
                        p.issue(path + ".factors", "unresolved factor \"" + fname + "\"");
                        bad = true;
                        break;
                    }
                    if (fname == entry.name) {
                        p.issue(path + ".factors", "a product cannot contain itself");
                        bad = true;
                        break;
                    }
                    def.factors.push_back(std::move(fname));
                }
                if (bad) continue;
                if (pj.contains("rules")) {
                    if (!pj["rules"].is_array()) {
                        p.issue(path + ".rules", "expected an array");
                        continue;
                    }
                    for (std::size_t r = 0; r < pj["rules"].size(); ++r) {
                        auto rule = parse_rule(p, pj["rules"][r],
                                               path + ".rules[" + std::to_string(r) + "]");
                        if (!rule) {
                            bad = true;
                            break;
                        }
                        // absolute references must stay within the factor list
                        auto n = static_cast<std::int32_t>(def.factors.size());
                        auto check_abs = [&](const FeedbackRef& ref) {
                            if (!ref.relative && ref.value > n)
                                p.issue(path + ".rules[" + std::to_string(r) + "]",
                                        "factor reference out(" + std::to_string(ref.value) +
                                            ") exceeds the factor count");
                        };
                        for (const auto& guard : rule->guards) {
                            check_abs(guard.subject);
                            if (std::holds_alternative<FeedbackRef>(guard.rhs))
                                check_abs(std::get<FeedbackRef>(guard.rhs));
                        }
                        for (const auto& item : rule->emit)
                            if (item.kind == EmitItem::Kind::feedback) check_abs(item.ref);
                        if (rule->factor && static_cast<std::int32_t>(*rule->factor) > n)
                            p.issue(path + ".rules[" + std::to_string(r) + "]",
                                    "rule factor exceeds the factor count");
                        def.rules.push_back(std::move(*rule));
                    }
                    if (bad) continue;
                }
                auto output = parse_output(p, pj["output"], path + ".output");
                if (!output) continue;
                def.output = std::move(*output);
                entry.def = std::move(def);
                doc.products.push_back(std::move(entry));
            }
        }
    }

    if (root.contains("run")) {
        if (!root["run"].is_array()) {
            p.issue("run", "expected an array");
        } else {
            for (std::size_t i = 0; i < root["run"].size(); ++i) {
                const auto& rj = root["run"][i];
                std::string path = "run[" + std::to_string(i) + "]";
                if (!rj.is_object() || !rj.contains("target") || !rj["target"].is_string()) {
                    p.issue(path, "run directive needs a \"target\"");
                    continue;
                }
                p.expect_keys(rj, path, {"target", "word"});
                RunDirective directive;
                directive.target = rj["target"].get<std::string>();
                if (!machine_names.count(directive.target) &&
                    !product_names.count(directive.target))
                    p.issue(path, "unresolved target \"" + directive.target + "\"");
                if (rj.contains("word")) {
                    if (!rj["word"].is_string()) {
                        p.issue(path + ".word", "expected a word string");
                        continue;
                    }
                    try {
                        directive.word = parse_word(rj["word"].get<std::string>());
                    } catch (const Error& e) {
                        p.issue(path + ".word", e.what());
                        continue;
                    }
                }
                doc.run.push_back(std::move(directive));
            }
        }
    }

    if (!p.issues.empty()) throw SpecParseError(std::move(p.issues));
    return doc;
}

// --------------------------------------------------------------- rendering

namespace {

ordered_json symbols_json(const std::vector<Symbol>& symbols) {
    ordered_json arr = ordered_json::array();
    for (Symbol s : symbols) arr.push_back(s.str());
    return arr;
}

ordered_json alphabet_field_json(const std::variant<std::string, std::vector<Symbol>>& a) {
    if (std::holds_alternative<std::string>(a)) return std::get<std::string>(a);
    return symbols_json(std::get<std::vector<Symbol>>(a));
}

ordered_json rule_json(const ConnectionRule& rule) {
    ordered_json j;
    if (rule.factor)
        j["factor"] = *rule.factor;
    else
        j["factor"] = "any";
    j["input"] = rule.input.str();
    if (!rule.guards.empty()) {
        ordered_json guards = ordered_json::array();
        for (const auto& guard : rule.guards) {
            ordered_json gj;
            gj["out"] = feedback_json(guard.subject);
            gj["op"] = guard.negated ? "ne" : "eq";
            if (std::holds_alternative<Symbol>(guard.rhs))
                gj["value"] = std::get<Symbol>(guard.rhs).str();
            else
                gj["other"] = feedback_json(std::get<FeedbackRef>(guard.rhs));
            guards.push_back(std::move(gj));
        }
        j["guards"] = std::move(guards);
    }
    ordered_json emit = ordered_json::array();
    for (const auto& item : rule.emit) emit.push_back(emit_item_text(item));
    j["emit"] = std::move(emit);
    return j;
}

ordered_json output_json(const OutputSelector& sel) {
    ordered_json j;
    switch (sel.kind) {
        case OutputMap::Kind::tuple:
            j["kind"] = "tuple";
            break;
        case OutputMap::Kind::project:
            j["kind"] = "project";
            j["factor"] = sel.factor;
            break;
        case OutputMap::Kind::weighted_sum:
            j["kind"] = "weighted_sum";
            j["base"] = sel.base;
            break;
        case OutputMap::Kind::table: {
            j["kind"] = "table";
            ordered_json entries = ordered_json::array();
            for (const auto& [when, then] : sel.entries) {
                ordered_json e;
                e["when"] = symbols_json(when);
                e["then"] = then.str();
                entries.push_back(std::move(e));
            }
            j["entries"] = std::move(entries);
            if (sel.fallback) j["default"] = sel.fallback->str();
            break;
        }
        case OutputMap::Kind::opaque:
            throw BadParameterError("opaque output maps are not serializable");
    }
    return j;
}

}  // namespace

std::string render(const SpecDocument& doc) {
    ordered_json root;
    root["specfmt_version"] = kFormatVersion;
    if (!doc.alphabets.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& def : doc.alphabets) {
            ordered_json j;
            j["name"] = def.name;
            j["symbols"] = symbols_json(def.symbols);
            arr.push_back(std::move(j));
        }
        root["alphabets"] = std::move(arr);
    }
    if (!doc.machines.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& entry : doc.machines) {
            ordered_json j;
            j["name"] = entry.name;
            if (std::holds_alternative<BuiltinRef>(entry.def)) {
                const auto& ref = std::get<BuiltinRef>(entry.def);
                j["builtin"] = ref.builtin;
                j["params"] = ref.params;
            } else {
                const auto& def = std::get<TableMachineDef>(entry.def);
                j["alphabet"] = alphabet_field_json(def.alphabet);
                if (def.outputs) j["outputs"] = symbols_json(*def.outputs);
                j["start"] = def.start;
                ordered_json states = ordered_json::array();
                for (const auto& state : def.states) {
                    ordered_json sj;
                    if (!state.name.empty()) sj["name"] = state.name;
                    sj["output"] = state.output.str();
                    sj["next"] = state.next;
                    states.push_back(std::move(sj));
                }
                j["states"] = std::move(states);
            }
            arr.push_back(std::move(j));
        }
        root["machines"] = std::move(arr);
    }
    if (!doc.products.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& entry : doc.products) {
            ordered_json j;
            j["name"] = entry.name;
            if (std::holds_alternative<BuiltinRef>(entry.def)) {
                const auto& ref = std::get<BuiltinRef>(entry.def);
                j["builtin"] = ref.builtin;
                j["params"] = ref.params;
            } else {
                const auto& def = std::get<RuleProductDef>(entry.def);
                j["alphabet"] = alphabet_field_json(def.alphabet);
                j["factors"] = def.factors;
                ordered_json rules = ordered_json::array();
                for (const auto& rule : def.rules) rules.push_back(rule_json(rule));
                j["rules"] = std::move(rules);
                j["output"] = output_json(def.output);
            }
            arr.push_back(std::move(j));
        }
        root["products"] = std::move(arr);
    }
    if (!doc.run.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& directive : doc.run) {
            ordered_json j;
            j["target"] = directive.target;
            j["word"] = render_word(directive.word);
            arr.push_back(std::move(j));
        }
        root["run"] = std::move(arr);
    }
    return root.dump(2) + "\n";
}

// --------------------------------------------------------------- compiling

OutputMap OutputSelector::to_output_map() const {
    switch (kind) {
        case OutputMap::Kind::tuple:
            return OutputMap::tuple();
        case OutputMap::Kind::project:
            return OutputMap::project(factor);
        case OutputMap::Kind::weighted_sum:
            return OutputMap::weighted_sum(base);
        case OutputMap::Kind::table:
            return OutputMap::table(entries, fallback);
        case OutputMap::Kind::opaque:
            break;
    }
    throw BadParameterError("bad output selector");
}

namespace {

struct ParamReader {
    const ordered_json& params;
    std::string context;

    ParamReader(const ordered_json& params, std::string context)
        : params(params), context(std::move(context)) {
        if (!params.is_object())
            throw BadParameterError(this->context + ": params must be an object");
    }

    void allow(const std::set<std::string>& keys) const {
        for (auto it = params.begin(); it != params.end(); ++it)
            if (!keys.count(it.key()))
                throw BadParameterError(context + ": unknown param \"" + it.key() + "\"");
    }

    std::uint64_t uint(const std::string& key, std::optional<std::uint64_t> fallback = {}) const {
        if (!params.contains(key)) {
            if (fallback) return *fallback;
            throw BadParameterError(context + ": missing param \"" + key + "\"");
        }
        if (!params[key].is_number_unsigned())
            throw BadParameterError(context + ": param \"" + key +
                                    "\" must be a non-negative integer");
        return params[key].get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!params.contains(key)) return fallback;
        if (!params[key].is_boolean())
            throw BadParameterError(context + ": param \"" + key + "\" must be a boolean");
        return params[key].get<bool>();
    }

    std::string text(const std::string& key, std::string fallback) const {
        if (!params.contains(key)) return fallback;
        if (!params[key].is_string())
            throw BadParameterError(context + ": param \"" + key + "\" must be a string");
        return params[key].get<std::string>();
    }

    std::vector<Symbol> symbols(const std::string& key, bool required) const {
        if (!params.contains(key)) {
            if (!required) return {};
            throw BadParameterError(context + ": missing param \"" + key + "\"");
        }
        if (!params[key].is_array())
            throw BadParameterError(context + ": param \"" + key +
                                    "\" must be an array of symbols");
        std::vector<Symbol> out;
        for (const auto& s : params[key]) {
            if (!s.is_string())
                throw BadParameterError(context + ": param \"" + key +
                                        "\" must contain symbol strings");
            out.push_back(Symbol::parse(s.get<std::string>()));
        }
        return out;
    }
};

examples::CarryGuard guard_from_text(const std::string& text, const std::string& context) {
    if (text == "carry_chain") return examples::CarryGuard::carry_chain;
    if (text == "skip_below_zero") return examples::CarryGuard::skip_below_zero;
    throw BadParameterError(context +
                            ": guard must be \"carry_chain\" or \"skip_below_zero\"");
}

}  // namespace

CompiledTarget instantiate_builtin(const std::string& builtin, const ordered_json& params) {
    ParamReader reader(params, "builtin \"" + builtin + "\"");
    if (builtin == "cell") {
        reader.allow({"values"});
        auto values = reader.symbols("values", true);
        return examples::make_cell(values);
    }
    if (builtin == "counter") {
        reader.allow({"n"});
        auto n = reader.uint("n");
        if (n < 1) throw BadParameterError("builtin \"counter\": n must be at least 1");
        return examples::make_counter(n);
    }
    if (builtin == "length") {
        reader.allow({"alphabet"});
        auto symbols = reader.symbols("alphabet", false);
        StringFunction f = symbols.empty() ? examples::make_length()
                                           : examples::make_length(Alphabet(symbols));
        return *f.machine();
    }
    if (builtin == "stack") {
        reader.allow({"n", "values"});
        examples::StackConfig config;
        config.depth = reader.uint("n");
        config.values = reader.symbols("values", true);
        if (config.depth < 1)
            throw BadParameterError("builtin \"stack\": n must be at least 1");
        return examples::make_stack(config);
    }
    if (builtin == "ripple") {
        reader.allow({"n", "value", "guard"});
        auto n = reader.uint("n");
        if (n < 1) throw BadParameterError("builtin \"ripple\": n must be at least 1");
        auto guard = guard_from_text(reader.text("guard", "carry_chain"), "builtin \"ripple\"");
        return reader.boolean("value", false) ? examples::make_ripple_value(n, guard)
                                              : examples::make_ripple(n, guard);
    }
    if (builtin == "network") {
        reader.allow({"nodes", "messages", "capacity", "initial", "arbiter_start"});
        examples::NetworkConfig config;
        config.node_count = reader.uint("nodes");
        config.messages = reader.symbols("messages", true);
        config.queue_capacity = reader.uint("capacity", 2);
        config.arbiter_start = reader.uint("arbiter_start", 0);
        if (params.contains("initial")) {
            if (!params["initial"].is_array())
                throw BadParameterError("builtin \"network\": initial must be an array");
            for (const auto& queue : params["initial"]) {
                if (!queue.is_array())
                    throw BadParameterError(
                        "builtin \"network\": initial entries must be arrays");
                std::vector<Symbol> q;
                for (const auto& s : queue) {
                    if (!s.is_string())
                        throw BadParameterError(
                            "builtin \"network\": initial entries must hold symbols");
                    q.push_back(Symbol::parse(s.get<std::string>()));
                }
                config.initial_queues.push_back(std::move(q));
            }
        }
        return examples::make_network(config);
    }
    throw BadParameterError("unknown builtin \"" + builtin + "\"");
}

const CompiledTarget* CompiledSpec::find(const std::string& name) const {
    for (const auto& [target_name, target] : targets)
        if (target_name == name) return &target;
    return nullptr;
}

CompiledSpec compile(const SpecDocument& doc) {
    std::map<std::string, Alphabet> alphabets;
    for (const auto& def : doc.alphabets) alphabets.emplace(def.name, Alphabet(def.symbols));

    auto resolve_alphabet = [&](const std::variant<std::string, std::vector<Symbol>>& a) {
        if (std::holds_alternative<std::string>(a))
            return alphabets.at(std::get<std::string>(a));
        return Alphabet(std::get<std::vector<Symbol>>(a));
    };

    CompiledSpec spec;
    spec.run = doc.run;

    for (const auto& entry : doc.machines) {
        if (std::holds_alternative<BuiltinRef>(entry.def)) {
            const auto& ref = std::get<BuiltinRef>(entry.def);
            spec.targets.emplace_back(entry.name, instantiate_builtin(ref.builtin, ref.params));
            continue;
        }
        const auto& def = std::get<TableMachineDef>(entry.def);
        Alphabet alphabet = resolve_alphabet(def.alphabet);
        std::vector<Symbol> gamma;
        std::vector<std::vector<std::uint32_t>> delta;
        std::vector<std::string> names;
        bool any_named = false;
        for (const auto& state : def.states) {
            gamma.push_back(state.output);
            if (state.next.size() != alphabet.size())
                throw BadParameterError("machine \"" + entry.name +
                                        "\": every state needs one transition per symbol");
            delta.push_back(state.next);
            names.push_back(state.name);
            if (!state.name.empty()) any_named = true;
        }
        std::optional<Alphabet> outputs;
        if (def.outputs) outputs = Alphabet(*def.outputs);
        spec.targets.emplace_back(
            entry.name,
            Machine::table(alphabet, std::move(gamma), std::move(delta), def.start,
                           any_named ? std::move(names) : std::vector<std::string>{},
                           std::move(outputs)));
    }

    for (const auto& entry : doc.products) {
        if (std::holds_alternative<BuiltinRef>(entry.def)) {
            const auto& ref = std::get<BuiltinRef>(entry.def);
            spec.targets.emplace_back(entry.name, instantiate_builtin(ref.builtin, ref.params));
            continue;
        }
        const auto& def = std::get<RuleProductDef>(entry.def);
        Alphabet alphabet = resolve_alphabet(def.alphabet);
        std::vector<Factor> factors;
        for (const auto& fname : def.factors) {
            const CompiledTarget* target = spec.find(fname);
            if (!target)
                throw BadParameterError("product \"" + entry.name + "\": factor \"" + fname +
                                        "\" must be defined before it is used");
            if (std::holds_alternative<Machine>(*target))
                factors.emplace_back(std::get<Machine>(*target));
            else
                factors.emplace_back(std::get<ProductDef>(*target));
        }
        // literal emissions with a concrete factor index type-check against
        // that factor's alphabet
        for (const auto& rule : def.rules) {
            if (!rule.factor) continue;
            const Alphabet& target = factors[*rule.factor - 1].alphabet();
            for (const auto& item : rule.emit)
                if (item.kind == EmitItem::Kind::literal && !target.contains(*item.literal))
                    throw AlphabetMismatchError(
                        "product \"" + entry.name + "\": rule for factor " +
                        std::to_string(*rule.factor) + " emits \"" + item.literal->str() +
                        "\" which is not in that factor's alphabet");
        }
        spec.targets.emplace_back(entry.name,
                                  ProductDef(std::move(factors), alphabet,
                                             ConnectionMap::from_rules(def.rules),
                                             def.output.to_output_map()));
    }
    return spec;
}

}  // namespace specfmt
}  // namespace rmoore
