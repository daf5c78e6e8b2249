/* machine.cpp */

#include "rmoore/machine.hpp"

#include <algorithm>
#include <unordered_set>

namespace rmoore {

struct Machine::Impl {
    Alphabet alphabet;
    std::optional<Alphabet> outputs;
    StateId start = 0;

    // table backend
    bool table = false;
    std::vector<Symbol> gamma;
    std::vector<std::uint32_t> delta;  // [state * |alphabet| + symbol index]
    std::vector<std::string> names;

    // generator backend
    std::function<StateId(StateId, Symbol)> gen_delta;
    std::function<Symbol(StateId)> gen_gamma;
};

Machine Machine::table(Alphabet alphabet, std::vector<Symbol> gamma,
                       std::vector<std::vector<std::uint32_t>> delta, StateId start,
                       std::vector<std::string> state_names,
                       std::optional<Alphabet> outputs) {
    auto impl = std::make_shared<Impl>();
    impl->table = true;
    const std::size_t n = gamma.size();
    if (n == 0) throw UnknownStateError("a machine needs at least one state");
    if (delta.size() != n)
        throw UnknownStateError("delta must have one row per state");
    if (start >= n) throw UnknownStateError("start state out of range");
    impl->delta.reserve(n * alphabet.size());
    for (const auto& row : delta) {
        if (row.size() != alphabet.size())
            throw UnknownStateError("delta row size must equal the alphabet size");
        for (auto target : row) {
            if (target >= n) throw UnknownStateError("delta target out of range");
            impl->delta.push_back(target);
        }
    }
    if (outputs) {
        for (const auto& out : gamma)
            if (!outputs->contains(out))
                throw UnknownSymbolError("gamma value \"" + out.str() +
                                         "\" is not in the declared output alphabet");
        impl->outputs = std::move(outputs);
    } else {
        std::vector<Symbol> seen;
        std::unordered_set<std::uint32_t> ids;
        for (const auto& out : gamma)
            if (ids.insert(out.id()).second) seen.push_back(out);
        impl->outputs = Alphabet(std::move(seen));
    }
    if (!state_names.empty() && state_names.size() != n)
        throw UnknownStateError("state_names must be empty or name every state");
    impl->alphabet = std::move(alphabet);
    impl->gamma = std::move(gamma);
    impl->names = std::move(state_names);
    impl->start = start;
    Machine m;
    m.impl_ = std::move(impl);
    return m;
}

Machine Machine::generator(Alphabet alphabet, StateId start,
                           std::function<StateId(StateId, Symbol)> delta,
                           std::function<Symbol(StateId)> gamma) {
    auto impl = std::make_shared<Impl>();
    impl->alphabet = std::move(alphabet);
    impl->start = start;
    impl->gen_delta = std::move(delta);
    impl->gen_gamma = std::move(gamma);
    Machine m;
    m.impl_ = std::move(impl);
    return m;
}

bool Machine::is_table() const { return impl_->table; }

std::size_t Machine::state_count() const {
    if (!impl_->table)
        throw InfiniteMachineError("machine is generator-backed; its state set is not enumerable");
    return impl_->gamma.size();
}

const Alphabet& Machine::alphabet() const { return impl_->alphabet; }
const std::optional<Alphabet>& Machine::outputs() const { return impl_->outputs; }
StateId Machine::start() const { return impl_->start; }

Symbol Machine::output(StateId s) const {
    if (impl_->table) {
        if (s >= impl_->gamma.size())
            throw UnknownStateError("state " + std::to_string(s) + " out of range");
        return impl_->gamma[s];
    }
    return impl_->gen_gamma(s);
}

StateId Machine::next(StateId s, Symbol a) const {
    auto idx = impl_->alphabet.find(a);
    if (!idx)
        throw UnknownSymbolError("symbol \"" + a.str() + "\" is not in the machine alphabet");
    if (impl_->table) {
        if (s >= impl_->gamma.size())
            throw UnknownStateError("state " + std::to_string(s) + " out of range");
        return impl_->delta[s * impl_->alphabet.size() + *idx];
    }
    return impl_->gen_delta(s, a);
}

std::string Machine::state_name(StateId s) const {
    if (impl_->table && s < impl_->names.size() && !impl_->names[s].empty())
        return impl_->names[s];
    return std::to_string(s);
}

MachineBuilder::MachineBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

std::uint32_t MachineBuilder::add_state(Symbol output, std::string name) {
    gamma_.push_back(output);
    delta_.emplace_back(alphabet_.size());
    names_.push_back(std::move(name));
    return static_cast<std::uint32_t>(gamma_.size() - 1);
}

void MachineBuilder::set_transition(std::uint32_t from, Symbol input, std::uint32_t to) {
    if (from >= delta_.size() || to >= delta_.size())
        throw UnknownStateError("transition endpoint out of range");
    delta_[from][alphabet_.index_of(input)] = to;
}

void MachineBuilder::set_start(std::uint32_t start) {
    if (start >= gamma_.size()) throw UnknownStateError("start state out of range");
    start_ = start;
}

Machine MachineBuilder::build(std::optional<Alphabet> outputs) const {
    std::vector<std::vector<std::uint32_t>> delta;
    delta.reserve(delta_.size());
    for (std::size_t s = 0; s < delta_.size(); ++s) {
        std::vector<std::uint32_t> row;
        row.reserve(alphabet_.size());
        for (std::size_t a = 0; a < alphabet_.size(); ++a) {
            if (!delta_[s][a])
                throw UnknownStateError("missing transition from state " + std::to_string(s) +
                                        " on \"" + alphabet_.at(a).str() + "\"");
            row.push_back(*delta_[s][a]);
        }
        delta.push_back(std::move(row));
    }
    bool any_named = std::any_of(names_.begin(), names_.end(),
                                 [](const std::string& n) { return !n.empty(); });
    return Machine::table(alphabet_, gamma_, std::move(delta), start_,
                          any_named ? names_ : std::vector<std::string>{},
                          std::move(outputs));
}

StateId delta_star(const Machine& m, StateId s, const Word& w) {
    for (Symbol a : w) s = m.next(s, a);
    return s;
}

StringFunction::StringFunction(Alphabet alphabet, std::function<Symbol(const Word&)> eval,
                               std::optional<Machine> backing)
    : alphabet_(std::move(alphabet)), eval_(std::move(eval)), machine_(std::move(backing)) {}

Symbol StringFunction::operator()(const Word& w) const {
    for (Symbol a : w)
        if (!alphabet_.contains(a))
            throw UnknownSymbolError("symbol \"" + a.str() +
                                     "\" is not in the function's alphabet");
    return eval_(w);
}

const Alphabet& StringFunction::alphabet() const { return alphabet_; }
const std::optional<Machine>& StringFunction::machine() const { return machine_; }

StringFunction representing_function(const Machine& m) {
    return StringFunction(
        m.alphabet(), [m](const Word& w) { return m.output(delta_star(m, m.start(), w)); }, m);
}

StringFunction remap_output(const StringFunction& f,
                            const std::function<Symbol(Symbol)>& g) {
    std::optional<Machine> backing;
    if (f.machine()) {
        const Machine& m = *f.machine();
        if (m.is_table()) {
            std::size_t n = m.state_count();
            std::vector<Symbol> gamma;
            std::vector<std::vector<std::uint32_t>> delta(n);
            std::vector<std::string> names;
            gamma.reserve(n);
            for (std::uint32_t s = 0; s < n; ++s) {
                gamma.push_back(g(m.output(s)));
                delta[s].reserve(m.alphabet().size());
                for (Symbol a : m.alphabet().symbols())
                    delta[s].push_back(static_cast<std::uint32_t>(m.next(s, a)));
                names.push_back(m.state_name(s));
            }
            backing = Machine::table(m.alphabet(), std::move(gamma), std::move(delta),
                                     m.start(), std::move(names));
        } else {
            backing = Machine::generator(
                m.alphabet(), m.start(),
                [m](StateId s, Symbol a) { return m.next(s, a); },
                [m, g](StateId s) { return g(m.output(s)); });
        }
    }
    StringFunction inner = f;
    return StringFunction(
        f.alphabet(), [inner, g](const Word& w) { return g(inner(w)); }, std::move(backing));
}

}  // namespace rmoore
