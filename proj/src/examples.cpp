/* examples.cpp */

#include "rmoore/examples.hpp"

#include <algorithm>
#include <map>

namespace rmoore {
namespace examples {

namespace {

const Symbol kEmpty = Symbol::make(kEmptyName);
const Symbol kTick = Symbol::make("tick");

}  // namespace

Machine make_cell(const std::vector<Symbol>& values) {
    if (values.empty()) throw BadParameterError("a cell needs at least one value");
    Alphabet alphabet{values};

    // one state per possible output; EMPTY is the start state
    std::vector<Symbol> outputs;
    outputs.push_back(kEmpty);
    for (Symbol v : values)
        if (v != kEmpty) outputs.push_back(v);

    std::vector<Symbol> gamma = outputs;
    std::map<std::uint32_t, std::uint32_t> state_of;
    for (std::uint32_t s = 0; s < outputs.size(); ++s) state_of[outputs[s].id()] = s;

    std::vector<std::vector<std::uint32_t>> delta(outputs.size());
    for (std::uint32_t s = 0; s < outputs.size(); ++s)
        for (Symbol v : values) delta[s].push_back(state_of.at(v.id()));

    std::vector<std::string> names;
    names.reserve(outputs.size());
    for (Symbol out : outputs) names.push_back(out.str());
    return Machine::table(alphabet, std::move(gamma), std::move(delta), 0, std::move(names));
}

Machine make_counter(std::uint64_t n) {
    if (n < 1) throw BadParameterError("counter modulus must be at least 1");
    Alphabet alphabet({kTick});
    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    gamma.reserve(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        gamma.push_back(Symbol::make(std::to_string(s)));
        delta.push_back({static_cast<std::uint32_t>((s + 1) % n)});
    }
    return Machine::table(alphabet, std::move(gamma), std::move(delta), 0);
}

ProductDef make_stack(const StackConfig& config) {
    if (config.depth < 1) throw BadParameterError("stack depth must be at least 1");
    std::vector<Symbol> cell_values = config.values;
    if (std::find(cell_values.begin(), cell_values.end(), kEmpty) == cell_values.end())
        cell_values.push_back(kEmpty);
    if (cell_values.size() < 2)
        throw BadParameterError("a stack needs at least one storable value");

    const auto n = static_cast<std::uint32_t>(config.depth);
    Machine cell = make_cell(cell_values);
    std::vector<Factor> factors(config.depth, Factor(cell));

    std::vector<Symbol> inputs;
    for (Symbol v : cell_values)
        if (v != kEmpty) inputs.push_back(Symbol::make("PUSH", {v}));
    const Symbol pop = Symbol::make("POP");
    inputs.push_back(pop);

    std::vector<ConnectionRule> rules;
    rules.push_back({1, SymbolPattern::parse("PUSH[?v]"), {}, {EmitItem::bound("v")}});
    rules.push_back({n, SymbolPattern::parse("POP"), {}, {EmitItem::lit(kEmpty)}});
    rules.push_back({std::nullopt, SymbolPattern::parse("PUSH[?v]"), {},
                     {EmitItem::feedback(FeedbackRef::rel(-1))}});
    rules.push_back({std::nullopt, SymbolPattern::parse("POP"), {},
                     {EmitItem::feedback(FeedbackRef::rel(+1))}});

    return ProductDef(std::move(factors), Alphabet(std::move(inputs)),
                      ConnectionMap::from_rules(std::move(rules)), OutputMap::tuple());
}

Symbol stack_top(Symbol tuple_output) {
    if (tuple_output.params().empty())
        throw BadParameterError("not a stack output: " + tuple_output.str());
    return tuple_output.params().front();
}

bool stack_empty(Symbol tuple_output) { return stack_top(tuple_output) == kEmpty; }

bool stack_full(Symbol tuple_output) {
    if (tuple_output.params().empty())
        throw BadParameterError("not a stack output: " + tuple_output.str());
    return tuple_output.params().back() != kEmpty;
}

namespace {

ProductDef make_ripple_with(std::size_t n, CarryGuard guard, OutputMap h) {
    if (n < 1) throw BadParameterError("ripple cascade needs at least one counter");
    const Symbol zero = Symbol::make("0");
    const Symbol one = Symbol::make("1");

    Machine t2 = make_counter(2);
    std::vector<Factor> factors(n, Factor(t2));

    std::vector<ConnectionRule> rules;
    rules.push_back({1, SymbolPattern::any(), {}, {EmitItem::lit(kTick)}});
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (guard == CarryGuard::carry_chain) {
            // advance iff every lower counter reads 1
            std::vector<Guard> guards;
            for (std::int32_t j = 1; j < static_cast<std::int32_t>(i); ++j)
                guards.push_back(Guard{FeedbackRef::absolute(j), false, one});
            rules.push_back({i, SymbolPattern::any(), std::move(guards),
                             {EmitItem::lit(kTick)}});
        } else {
            // skip when some counter j < i-1 reads 0, advance otherwise
            for (std::int32_t j = 1; j + 1 < static_cast<std::int32_t>(i); ++j)
                rules.push_back({i, SymbolPattern::any(),
                                 {Guard{FeedbackRef::absolute(j), false, zero}}, {}});
            rules.push_back({i, SymbolPattern::any(), {}, {EmitItem::lit(kTick)}});
        }
    }
    return ProductDef(std::move(factors), Alphabet({kTick}),
                      ConnectionMap::from_rules(std::move(rules)), std::move(h));
}

}  // namespace

ProductDef make_ripple(std::size_t n, CarryGuard guard) {
    return make_ripple_with(n, guard, OutputMap::tuple());
}

ProductDef make_ripple_value(std::size_t n, CarryGuard guard) {
    return make_ripple_with(n, guard, OutputMap::weighted_sum(2));
}

namespace {

const Symbol kNull = Symbol::make("NULL");
const Symbol kReady = Symbol::make("ready");
const Symbol kBusy = Symbol::make("busy");
const Symbol kTickUpper = Symbol::make("TICK");

}  // namespace

Symbol node_output(Symbol message_or_null, bool ready) {
    return Symbol::make("out", {message_or_null, ready ? kReady : kBusy});
}

Symbol parse_node_message(Symbol out) {
    if (out.name() != "out" || out.params().size() != 2)
        throw BadParameterError("malformed node output \"" + out.str() +
                                "\": expected out[message,ready|busy]");
    return out.params()[0];
}

bool parse_node_ready(Symbol out) {
    if (out.name() != "out" || out.params().size() != 2 ||
        (out.params()[1] != kReady && out.params()[1] != kBusy))
        throw BadParameterError("malformed node output \"" + out.str() +
                                "\": expected out[message,ready|busy]");
    return out.params()[1] == kReady;
}

Machine make_echo_node(const std::vector<Symbol>& messages, std::size_t capacity,
                       const std::vector<Symbol>& initial_queue) {
    if (messages.empty()) throw BadParameterError("a node needs a message alphabet");
    if (capacity < 1) throw BadParameterError("queue capacity must be at least 1");
    if (initial_queue.size() > capacity)
        throw BadParameterError("initial queue exceeds the capacity");

    std::vector<Symbol> inputs;
    inputs.reserve(messages.size() + 1);
    for (Symbol m : messages) inputs.push_back(Symbol::make("RECV", {m}));
    inputs.push_back(kTickUpper);
    Alphabet alphabet{inputs};

    // states = all queues of length <= capacity, shortest first then in
    // message order
    std::vector<std::vector<Symbol>> queues{{}};
    for (std::size_t len = 1; len <= capacity; ++len) {
        std::vector<std::vector<Symbol>> layer;
        for (const auto& queue : queues) {
            if (queue.size() + 1 != len) continue;
            for (Symbol m : messages) {
                auto extended = queue;
                extended.push_back(m);
                layer.push_back(std::move(extended));
            }
        }
        queues.insert(queues.end(), layer.begin(), layer.end());
    }
    std::map<std::vector<std::uint32_t>, std::uint32_t> state_of;
    auto ids = [](const std::vector<Symbol>& q) {
        std::vector<std::uint32_t> v;
        v.reserve(q.size());
        for (Symbol m : q) v.push_back(m.id());
        return v;
    };
    for (std::uint32_t s = 0; s < queues.size(); ++s) state_of[ids(queues[s])] = s;

    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    std::vector<std::string> names;
    for (const auto& queue : queues) {
        bool full = queue.size() == capacity;
        gamma.push_back(node_output(queue.empty() ? kNull : queue.front(), !full));
        std::string name = "q(";
        for (std::size_t i = 0; i < queue.size(); ++i) {
            if (i) name += ',';
            name += queue[i].str();
        }
        name += ')';
        names.push_back(std::move(name));

        std::vector<std::uint32_t> row;
        for (Symbol input : inputs) {
            if (input == kTickUpper) {
                row.push_back(state_of.at(ids(queue)));
                continue;
            }
            Symbol m = input.params()[0];
            auto next = queue;
            if (!next.empty() && next.front() == m) {
                next.erase(next.begin());  // own broadcast heard: delivered
            } else if (next.size() < capacity) {
                next.push_back(m);
            }
            row.push_back(state_of.at(ids(next)));
        }
        delta.push_back(std::move(row));
    }
    auto start = state_of.at(ids(initial_queue));
    return Machine::table(alphabet, std::move(gamma), std::move(delta), start,
                          std::move(names));
}

Machine make_round_robin_arbiter(std::size_t node_count, std::size_t start) {
    if (node_count < 1) throw BadParameterError("arbiter needs at least one node");
    if (start > node_count) throw BadParameterError("arbiter start out of range");
    const Symbol zero = Symbol::make("0");
    const Symbol one = Symbol::make("1");

    std::vector<Symbol> inputs;
    inputs.reserve(std::size_t{1} << node_count);
    for (std::size_t bits = 0; bits < (std::size_t{1} << node_count); ++bits) {
        std::vector<Symbol> flags;
        flags.reserve(node_count);
        for (std::size_t i = 0; i < node_count; ++i)
            flags.push_back(((bits >> i) & 1) ? one : zero);
        inputs.push_back(Symbol::make("flags", std::move(flags)));
    }

    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    for (std::size_t granted = 0; granted <= node_count; ++granted) {
        gamma.push_back(Symbol::make("sel", {Symbol::make(std::to_string(granted))}));
        std::vector<std::uint32_t> row;
        for (std::size_t bits = 0; bits < (std::size_t{1} << node_count); ++bits) {
            std::uint32_t next = 0;
            for (std::size_t offset = 1; offset <= node_count; ++offset) {
                std::size_t candidate = (granted + offset - 1) % node_count + 1;
                if ((bits >> (candidate - 1)) & 1) {
                    next = static_cast<std::uint32_t>(candidate);
                    break;
                }
            }
            row.push_back(next);
        }
        delta.push_back(std::move(row));
    }
    return Machine::table(Alphabet(std::move(inputs)), std::move(gamma), std::move(delta),
                          start);
}

ProductDef make_network(const NetworkConfig& config) {
    const std::size_t n = config.node_count;
    if (n < 1) throw BadParameterError("network needs at least one node");
    if (config.messages.empty()) throw BadParameterError("network needs a message alphabet");

    std::vector<Factor> factors;
    factors.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<Machine> custom;
        if (i < config.nodes.size()) custom = config.nodes[i];
        if (custom) {
            if (!custom->is_table())
                throw BadParameterError("network nodes must be finite table machines");
            for (std::uint32_t s = 0; s < custom->state_count(); ++s) {
                Symbol out = custom->output(s);
                parse_node_ready(out);  // validates the (m, c) shape
                Symbol m = parse_node_message(out);
                if (m != kNull &&
                    std::find(config.messages.begin(), config.messages.end(), m) ==
                        config.messages.end())
                    throw BadParameterError("node output message \"" + m.str() +
                                            "\" is not in the message alphabet");
            }
            factors.emplace_back(*custom);
        } else {
            std::vector<Symbol> initial;
            if (i < config.initial_queues.size()) initial = config.initial_queues[i];
            factors.emplace_back(
                make_echo_node(config.messages, config.queue_capacity, initial));
        }
    }
    factors.emplace_back(config.arbiter ? *config.arbiter
                                        : make_round_robin_arbiter(n, config.arbiter_start));

    Alphabet alphabet({kTickUpper});
    const Symbol zero = Symbol::make("0");
    const Symbol one = Symbol::make("1");

    ConnectionMap g = ConnectionMap::opaque(
        [n, zero, one](std::uint32_t factor, Symbol a,
                       std::span<const Symbol> feedback) -> Word {
            Symbol sel = feedback[n];
            if (sel.name() != "sel" || sel.params().size() != 1)
                throw BadParameterError("malformed arbiter output \"" + sel.str() + "\"");
            std::size_t granted = std::stoull(sel.params()[0].name());
            if (factor == n + 1) {
                std::vector<Symbol> flags;
                flags.reserve(n);
                for (std::size_t i = 0; i < n; ++i)
                    flags.push_back(parse_node_message(feedback[i]) == kNull ? zero : one);
                return {Symbol::make("flags", std::move(flags))};
            }
            if (granted >= 1 && granted <= n) {
                Symbol message = parse_node_message(feedback[granted - 1]);
                if (message != kNull && parse_node_ready(feedback[factor - 1]))
                    return {Symbol::make("RECV", {message}), a};
            }
            return {a};
        });

    return ProductDef(std::move(factors), alphabet, std::move(g), OutputMap::tuple());
}

StringFunction make_length(const Alphabet& alphabet) {
    Machine counter = Machine::generator(
        alphabet, 0, [](StateId s, Symbol) { return s + 1; },
        [](StateId s) { return Symbol::make(std::to_string(s)); });
    return representing_function(counter);
}

StringFunction make_length() { return make_length(Alphabet({kTick})); }

}  // namespace examples
}  // namespace rmoore
