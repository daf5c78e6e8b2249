/* product.cpp */

#include "rmoore/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace rmoore {

std::int32_t FeedbackRef::resolve(std::int32_t i, std::int32_t n) const {
    std::int32_t j = relative ? i + value : value;
    if (j < 1 || j > n) return 0;
    return j;
}

SymbolPattern SymbolPattern::parse(std::string_view text) {
    if (text == "any") return any();
    SymbolPattern p;
    auto bracket = text.find('[');
    if (bracket == std::string_view::npos) {
        p.name = Symbol::parse(text).name();
        return p;
    }
    p.name = std::string(text.substr(0, bracket));
    if (text.back() != ']')
        throw UnknownSymbolError("missing ']' in pattern \"" + std::string(text) + "\"");
    std::string_view inner = text.substr(bracket + 1, text.size() - bracket - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
        auto comma = inner.find(',', pos);
        std::string_view piece =
            inner.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
        Param param;
        if (!piece.empty() && piece.front() == '?') {
            param.binder = true;
            param.binder_name = std::string(piece.substr(1));
            if (param.binder_name.empty())
                throw UnknownSymbolError("empty binder in pattern \"" + std::string(text) + "\"");
        } else {
            param.literal = Symbol::parse(piece);
        }
        p.params.push_back(std::move(param));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return p;
}

std::string SymbolPattern::str() const {
    if (wildcard) return "any";
    std::string out = name;
    if (!params.empty()) {
        out += '[';
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i) out += ',';
            out += params[i].binder ? "?" + params[i].binder_name : params[i].literal->str();
        }
        out += ']';
    }
    return out;
}

bool SymbolPattern::matches(Symbol s,
                            std::vector<std::pair<std::string, Symbol>>& bindings) const {
    if (wildcard) return true;
    if (s.name() != name || s.params().size() != params.size()) return false;
    auto mark = bindings.size();
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].binder) {
            bindings.emplace_back(params[i].binder_name, s.params()[i]);
        } else if (*params[i].literal != s.params()[i]) {
            bindings.resize(mark);
            return false;
        }
    }
    return true;
}

ConnectionMap ConnectionMap::from_rules(std::vector<ConnectionRule> rules) {
    ConnectionMap m;
    m.rules_ = std::make_shared<const std::vector<ConnectionRule>>(std::move(rules));
    return m;
}

ConnectionMap ConnectionMap::opaque(Fn fn) {
    ConnectionMap m;
    m.fn_ = std::move(fn);
    return m;
}

bool ConnectionMap::is_rule_based() const { return rules_ != nullptr; }

const std::vector<ConnectionRule>& ConnectionMap::rules() const {
    if (!rules_)
        throw OpaqueConnectionError("connection map is an opaque callable; no rules to inspect");
    return *rules_;
}

namespace {

Symbol resolve_feedback(const FeedbackRef& ref, std::uint32_t factor,
                        std::span<const Symbol> feedback, bool* in_range) {
    auto j = ref.resolve(static_cast<std::int32_t>(factor),
                         static_cast<std::int32_t>(feedback.size()));
    if (j == 0) {
        *in_range = false;
        return feedback.empty() ? Symbol::make("_") : feedback[0];
    }
    *in_range = true;
    return feedback[static_cast<std::size_t>(j - 1)];
}

}  // namespace

Word ConnectionMap::emit(std::uint32_t factor, Symbol input,
                         std::span<const Symbol> feedback) const {
    if (fn_) return fn_(factor, input, feedback);
    std::vector<std::pair<std::string, Symbol>> bindings;
    for (const auto& rule : *rules_) {
        if (rule.factor && *rule.factor != factor) continue;
        bindings.clear();
        if (!rule.input.matches(input, bindings)) continue;
        bool all_hold = true;
        for (const auto& guard : rule.guards) {
            bool ok = false;
            Symbol lhs = resolve_feedback(guard.subject, factor, feedback, &ok);
            if (!ok) {
                all_hold = false;
                break;
            }
            Symbol rhs = lhs;
            if (std::holds_alternative<Symbol>(guard.rhs)) {
                rhs = std::get<Symbol>(guard.rhs);
            } else {
                rhs = resolve_feedback(std::get<FeedbackRef>(guard.rhs), factor, feedback, &ok);
                if (!ok) {
                    all_hold = false;
                    break;
                }
            }
            if ((lhs == rhs) == guard.negated) {
                all_hold = false;
                break;
            }
        }
        if (!all_hold) continue;
        Word out;
        out.reserve(rule.emit.size());
        for (const auto& item : rule.emit) {
            switch (item.kind) {
                case EmitItem::Kind::literal:
                    out.push_back(*item.literal);
                    break;
                case EmitItem::Kind::param: {
                    auto it = std::find_if(bindings.begin(), bindings.end(),
                                           [&](const auto& b) { return b.first == item.param; });
                    if (it == bindings.end())
                        throw UnknownSymbolError("emission references unbound parameter \"" +
                                                 item.param + "\"");
                    out.push_back(it->second);
                    break;
                }
                case EmitItem::Kind::feedback: {
                    bool ok = false;
                    Symbol s = resolve_feedback(item.ref, factor, feedback, &ok);
                    if (!ok)
                        throw UnknownStateError(
                            "emission feedback reference out of range for factor " +
                            std::to_string(factor));
                    out.push_back(s);
                    break;
                }
            }
        }
        return out;
    }
    return {};
}

OutputMap OutputMap::tuple() { return OutputMap{}; }

OutputMap OutputMap::project(std::uint32_t factor) {
    OutputMap m;
    m.kind_ = Kind::project;
    m.project_ = factor;
    return m;
}

OutputMap OutputMap::weighted_sum(std::uint64_t base) {
    OutputMap m;
    m.kind_ = Kind::weighted_sum;
    m.base_ = base;
    return m;
}

OutputMap OutputMap::table(std::vector<std::pair<std::vector<Symbol>, Symbol>> entries,
                           std::optional<Symbol> fallback) {
    OutputMap m;
    m.kind_ = Kind::table;
    m.entries_ = std::make_shared<const std::vector<std::pair<std::vector<Symbol>, Symbol>>>(
        std::move(entries));
    m.fallback_ = fallback;
    return m;
}

OutputMap OutputMap::opaque(Fn fn) {
    OutputMap m;
    m.kind_ = Kind::opaque;
    m.fn_ = std::move(fn);
    return m;
}

const std::vector<std::pair<std::vector<Symbol>, Symbol>>& OutputMap::entries() const {
    static const std::vector<std::pair<std::vector<Symbol>, Symbol>> empty;
    return entries_ ? *entries_ : empty;
}

Symbol OutputMap::apply(std::span<const Symbol> outputs) const {
    switch (kind_) {
        case Kind::tuple:
            return Symbol::make("tuple", {outputs.begin(), outputs.end()});
        case Kind::project:
            if (project_ < 1 || project_ > outputs.size())
                throw UnknownStateError("projection index out of range");
            return outputs[project_ - 1];
        case Kind::weighted_sum: {
            std::uint64_t total = 0;
            std::uint64_t weight = 1;
            for (Symbol s : outputs) {
                const std::string& digits = s.name();
                if (digits.empty() || !s.params().empty() ||
                    !std::all_of(digits.begin(), digits.end(),
                                 [](char c) { return c >= '0' && c <= '9'; }))
                    throw UnknownSymbolError("weighted sum needs numeral outputs, got \"" +
                                             s.str() + "\"");
                total += std::stoull(digits) * weight;
                weight *= base_;
            }
            return Symbol::make(std::to_string(total));
        }
        case Kind::table: {
            for (const auto& [when, then] : *entries_) {
                if (when.size() == outputs.size() &&
                    std::equal(when.begin(), when.end(), outputs.begin()))
                    return then;
            }
            if (fallback_) return *fallback_;
            throw UnknownSymbolError("output table has no entry for the factor outputs");
        }
        case Kind::opaque:
            return fn_(outputs);
    }
    throw UnknownStateError("bad output map kind");
}

Factor::Factor(Machine m) : v_(std::move(m)) {}
Factor::Factor(ProductDef p) : v_(std::make_shared<const ProductDef>(std::move(p))) {}

bool Factor::is_machine() const { return std::holds_alternative<Machine>(v_); }
const Machine& Factor::machine() const { return std::get<Machine>(v_); }
const ProductDef& Factor::product() const {
    return *std::get<std::shared_ptr<const ProductDef>>(v_);
}

const Alphabet& Factor::alphabet() const {
    return is_machine() ? machine().alphabet() : product().alphabet();
}

bool Factor::is_finite() const {
    if (is_machine()) return machine().is_table();
    for (const auto& f : product().factors())
        if (!f.is_finite()) return false;
    return true;
}

struct ProductDef::Impl {
    std::vector<Factor> factors;
    Alphabet alphabet;
    ConnectionMap g;
    OutputMap h;
};

ProductDef::ProductDef(std::vector<Factor> factors, Alphabet alphabet, ConnectionMap g,
                       OutputMap h)
    : impl_(std::make_shared<Impl>(
          Impl{std::move(factors), std::move(alphabet), std::move(g), std::move(h)})) {}

const std::vector<Factor>& ProductDef::factors() const { return impl_->factors; }
std::size_t ProductDef::factor_count() const { return impl_->factors.size(); }
const Alphabet& ProductDef::alphabet() const { return impl_->alphabet; }
const ConnectionMap& ProductDef::connection() const { return impl_->g; }
const OutputMap& ProductDef::output_map() const { return impl_->h; }

namespace {

Symbol cursor_output(const Factor& f, StateId state, const RecursionState* nested) {
    if (f.is_machine()) return f.machine().output(state);
    return nested->output();
}

}  // namespace

RecursionState::RecursionState(const ProductDef& p) : output_(Symbol::make("_")) {
    cursors_.reserve(p.factor_count());
    std::vector<Symbol> outs;
    outs.reserve(p.factor_count());
    for (const auto& f : p.factors()) {
        Cursor c;
        if (f.is_machine()) {
            c.state = f.machine().start();
        } else {
            c.nested_ = std::make_unique<RecursionState>(f.product());
        }
        outs.push_back(cursor_output(f, c.state, c.nested_.get()));
        cursors_.push_back(std::move(c));
    }
    output_ = p.output_map().apply(outs);
}

RecursionState::RecursionState(const RecursionState& other) : output_(other.output_) {
    cursors_.reserve(other.cursors_.size());
    for (const auto& c : other.cursors_) {
        Cursor copy;
        copy.state = c.state;
        copy.u = c.u;
        if (c.nested_) copy.nested_ = std::make_unique<RecursionState>(*c.nested_);
        cursors_.push_back(std::move(copy));
    }
}

RecursionState& RecursionState::operator=(const RecursionState& other) {
    if (this != &other) *this = RecursionState(other);
    return *this;
}

const Word& RecursionState::u(std::size_t factor) const { return cursors_.at(factor - 1).u; }

StateId RecursionState::machine_state(std::size_t factor) const {
    const Cursor& c = cursors_.at(factor - 1);
    if (c.nested_) throw UnknownStateError("factor is a nested product, not a machine");
    return c.state;
}

const RecursionState* RecursionState::nested(std::size_t factor) const {
    return cursors_.at(factor - 1).nested_.get();
}

Symbol factor_output(const ProductDef& p, const RecursionState& rs, std::size_t factor) {
    const Factor& f = p.factors().at(factor - 1);
    if (f.is_machine()) return f.machine().output(rs.machine_state(factor));
    return rs.nested(factor)->output();
}

std::vector<StateId> RecursionState::signature() const {
    std::vector<StateId> sig;
    for (const auto& c : cursors_) {
        if (c.nested_) {
            auto inner = c.nested_->signature();
            sig.insert(sig.end(), inner.begin(), inner.end());
        } else {
            sig.push_back(c.state);
        }
    }
    return sig;
}

void step_in_place(const ProductDef& p, RecursionState& rs, Symbol a) {
    if (!p.alphabet().contains(a))
        throw UnknownSymbolError("symbol \"" + a.str() +
                                 "\" is not in the product alphabet");
    const std::size_t n = p.factor_count();
    std::vector<Symbol> feedback;
    feedback.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        feedback.push_back(cursor_output(p.factors()[i], rs.cursors_[i].state,
                                         rs.cursors_[i].nested_.get()));
    // All emissions are computed from the pre-step feedback before any
    // factor moves.
    std::vector<Word> emissions;
    emissions.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        emissions.push_back(
            p.connection().emit(static_cast<std::uint32_t>(i + 1), a, feedback));
    std::vector<Symbol> outs;
    outs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Factor& f = p.factors()[i];
        auto& cursor = rs.cursors_[i];
        for (Symbol sym : emissions[i]) {
            if (!f.alphabet().contains(sym))
                throw AlphabetMismatchError("connection map emitted \"" + sym.str() +
                                            "\" which is not in factor " +
                                            std::to_string(i + 1) + "'s alphabet");
            if (f.is_machine())
                cursor.state = f.machine().next(cursor.state, sym);
            else
                step_in_place(f.product(), *cursor.nested_, sym);
            cursor.u.push_back(sym);
        }
        outs.push_back(cursor_output(f, cursor.state, cursor.nested_.get()));
    }
    rs.output_ = p.output_map().apply(outs);
}

RecursionState step(const ProductDef& p, const RecursionState& rs, Symbol a) {
    RecursionState next = rs;
    step_in_place(p, next, a);
    return next;
}

Symbol recursion_eval(const ProductDef& p, const Word& w) {
    RecursionState rs(p);
    for (Symbol a : w) step_in_place(p, rs, a);
    return rs.output();
}

Machine expand_product(const ProductDef& p) {
    // Nested product factors are expanded to explicit machines first.
    std::vector<Machine> factors;
    factors.reserve(p.factor_count());
    for (const auto& f : p.factors()) {
        if (f.is_machine()) {
            if (!f.machine().is_table())
                throw InfiniteMachineError(
                    "expand_product needs finite table factors; factor " +
                    std::to_string(factors.size() + 1) + " is generator-backed");
            factors.push_back(f.machine());
        } else {
            factors.push_back(expand_product(f.product()));
        }
    }
    const std::size_t n = factors.size();
    std::size_t total = 1;
    for (const auto& m : factors) total *= m.state_count();

    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    std::vector<std::string> names;
    gamma.reserve(total);
    delta.reserve(total);
    names.reserve(total);

    std::vector<std::uint32_t> tuple(n, 0);
    std::vector<Symbol> outs;
    for (std::size_t id = 0; id < total; ++id) {
        // decode id, factor 1 most significant
        std::size_t rest = id;
        for (std::size_t i = n; i-- > 0;) {
            tuple[i] = static_cast<std::uint32_t>(rest % factors[i].state_count());
            rest /= factors[i].state_count();
        }
        outs.clear();
        std::string name = "(";
        for (std::size_t i = 0; i < n; ++i) {
            outs.push_back(factors[i].output(tuple[i]));
            if (i) name += ',';
            name += factors[i].state_name(tuple[i]);
        }
        name += ')';
        gamma.push_back(p.output_map().apply(outs));
        names.push_back(n == 0 ? "()" : name);

        std::vector<std::uint32_t> row;
        row.reserve(p.alphabet().size());
        for (Symbol a : p.alphabet().symbols()) {
            std::size_t target = 0;
            for (std::size_t i = 0; i < n; ++i) {
                Word emitted = p.connection().emit(static_cast<std::uint32_t>(i + 1), a, outs);
                for (Symbol sym : emitted)
                    if (!factors[i].alphabet().contains(sym))
                        throw AlphabetMismatchError("connection map emitted \"" + sym.str() +
                                                    "\" which is not in factor " +
                                                    std::to_string(i + 1) + "'s alphabet");
                StateId moved = delta_star(factors[i], tuple[i], emitted);
                target = target * factors[i].state_count() + moved;
            }
            row.push_back(static_cast<std::uint32_t>(target));
        }
        delta.push_back(std::move(row));
    }

    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i)
        start = start * factors[i].state_count() + factors[i].start();
    return Machine::table(p.alphabet(), std::move(gamma), std::move(delta), start,
                          std::move(names));
}

Machine recursion_reachable_machine(const ProductDef& p) {
    for (const auto& f : p.factors())
        if (!f.is_finite())
            throw InfiniteMachineError("recursion graph needs finite factors");

    std::map<std::vector<StateId>, std::uint32_t> ids;
    std::deque<RecursionState> frontier;
    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;

    RecursionState init(p);
    ids.emplace(init.signature(), 0);
    gamma.push_back(init.output());
    delta.emplace_back();
    frontier.push_back(std::move(init));

    std::uint32_t current = 0;
    while (!frontier.empty()) {
        RecursionState rs = std::move(frontier.front());
        frontier.pop_front();
        auto& row = delta[current];
        row.reserve(p.alphabet().size());
        for (Symbol a : p.alphabet().symbols()) {
            RecursionState moved = step(p, rs, a);
            auto sig = moved.signature();
            auto [it, fresh] = ids.emplace(std::move(sig), static_cast<std::uint32_t>(gamma.size()));
            if (fresh) {
                gamma.push_back(moved.output());
                delta.emplace_back();
                frontier.push_back(std::move(moved));
            }
            row.push_back(it->second);
        }
        ++current;
    }
    return Machine::table(p.alphabet(), std::move(gamma), std::move(delta), 0);
}

Theorem1Report check_against(const ProductDef& p, const StringFunction& reference,
                             std::size_t max_len, std::uint64_t budget) {
    struct Node {
        Word word;
        RecursionState rs;
        StateId machine_state;
    };
    const std::optional<Machine>& ref_machine = reference.machine();

    Theorem1Report report;
    auto compare = [&](const Node& node) -> bool {
        Symbol lhs = node.rs.output();
        Symbol rhs = ref_machine ? ref_machine->output(node.machine_state)
                                 : reference(node.word);
        ++report.words_checked;
        if (lhs != rhs) {
            report.ok = false;
            report.counterexample = node.word;
            report.recursion_output = lhs;
            report.machine_output = rhs;
            return false;
        }
        return true;
    };

    std::deque<Node> frontier;
    frontier.push_back(
        Node{{}, RecursionState(p), ref_machine ? ref_machine->start() : StateId{0}});
    if (!compare(frontier.front())) return report;

    while (!frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        if (node.word.size() == max_len) continue;
        for (Symbol a : p.alphabet().symbols()) {
            if (report.words_checked >= budget)
                throw BudgetExceededError("word budget exceeded after " +
                                              std::to_string(report.words_checked) + " words",
                                          report.words_checked);
            Node child{node.word, step(p, node.rs, a),
                       ref_machine ? ref_machine->next(node.machine_state, a) : StateId{0}};
            child.word.push_back(a);
            if (!compare(child)) return report;
            if (child.word.size() < max_len) frontier.push_back(std::move(child));
        }
    }
    return report;
}

Theorem1Report check_theorem1(const ProductDef& p, std::size_t max_len, std::uint64_t budget) {
    return check_against(p, representing_function(expand_product(p)), max_len, budget);
}

namespace {

void collect_refs(const FeedbackRef& ref, std::int32_t i, std::int32_t n,
                  std::set<std::pair<std::uint32_t, std::uint32_t>>& offending) {
    auto j = ref.resolve(i, n);
    if (j == 0) return;  // never resolvable for this factor
    if (j >= i)
        offending.emplace(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
}

}  // namespace

CascadeReport is_cascade(const ProductDef& p) {
    const auto& rules = p.connection().rules();
    const auto n = static_cast<std::int32_t>(p.factor_count());
    std::set<std::pair<std::uint32_t, std::uint32_t>> offending;
    for (std::int32_t i = 1; i <= n; ++i) {
        for (const auto& rule : rules) {
            if (rule.factor && static_cast<std::int32_t>(*rule.factor) != i) continue;
            for (const auto& guard : rule.guards) {
                collect_refs(guard.subject, i, n, offending);
                if (std::holds_alternative<FeedbackRef>(guard.rhs))
                    collect_refs(std::get<FeedbackRef>(guard.rhs), i, n, offending);
            }
            for (const auto& item : rule.emit)
                if (item.kind == EmitItem::Kind::feedback)
                    collect_refs(item.ref, i, n, offending);
        }
    }
    CascadeReport report;
    report.offenders.assign(offending.begin(), offending.end());
    report.cascade = report.offenders.empty();
    return report;
}

ProductDef binary_encode(const Machine& m) {
    const std::size_t n = m.state_count();  // throws for generator-backed machines
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;

    const Symbol zero = Symbol::make("0");
    const Symbol one = Symbol::make("1");

    if (k == 0) {
        return ProductDef({}, m.alphabet(), ConnectionMap::from_rules({}),
                          OutputMap::table({}, m.output(0)));
    }

    Alphabet bit_alphabet({zero, one});
    auto clamp = [n](std::size_t s) { return s < n ? s : n - 1; };

    std::vector<Factor> factors;
    factors.reserve(k);
    for (std::size_t b = 0; b < k; ++b) {
        std::uint32_t start_bit = (m.start() >> b) & 1;
        factors.emplace_back(Machine::table(bit_alphabet, {zero, one}, {{0, 1}, {0, 1}},
                                            start_bit));
    }

    auto decode = [k, clamp](std::span<const Symbol> bits) {
        std::size_t s = 0;
        for (std::size_t b = 0; b < k; ++b)
            if (bits[b].name() == "1") s |= std::size_t{1} << b;
        return clamp(s);
    };

    Machine source = m;
    ConnectionMap g = ConnectionMap::opaque(
        [source, decode, zero, one](std::uint32_t factor, Symbol a,
                                    std::span<const Symbol> feedback) -> Word {
            auto next = source.next(decode(feedback), a);
            return {((next >> (factor - 1)) & 1) ? one : zero};
        });

    // h as a finite lookup over all bit combinations, indices clamped the
    // same way g clamps them.
    std::vector<std::pair<std::vector<Symbol>, Symbol>> entries;
    entries.reserve(std::size_t{1} << k);
    for (std::size_t s = 0; s < (std::size_t{1} << k); ++s) {
        std::vector<Symbol> bits;
        bits.reserve(k);
        for (std::size_t b = 0; b < k; ++b)
            bits.push_back(((s >> b) & 1) ? one : zero);
        entries.emplace_back(std::move(bits), m.output(clamp(s)));
    }
    return ProductDef(std::move(factors), m.alphabet(), std::move(g),
                      OutputMap::table(std::move(entries)));
}

}  // namespace rmoore
