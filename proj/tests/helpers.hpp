/* helpers.hpp -- shared test oracles and generators
 *
 * Everything here is independent of the library paths it is used to
 * check: the stack oracle replays the shift equations over a plain
 * vector, reachability is a set-based BFS, and congruence is brute-forced
 * over explicit contexts.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rmoore/machine.hpp"

namespace rmoore::test {

// Deterministic generator (splitmix64); avoids libstdc++ distribution
// differences.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    bool flip() { return next() & 1; }

private:
    std::uint64_t state_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string fixture_dir() {
    const char* dir = std::getenv("RMOORE_FIXTURES");
    return dir ? dir : "fixtures";
}

inline std::string test_fixture_dir() {
    const char* dir = std::getenv("RMOORE_TEST_FIXTURES");
    return dir ? dir : "tests/fixtures";
}

/// Plain-vector stack replaying the shift behavior directly: PUSH moves
/// every cell one slot deeper and writes v into cell 1 (the deepest value
/// falls off); POP moves every cell one slot up and writes EMPTY into
/// cell n. POP on an all-EMPTY stack is the same unconditional shift.
class ListStackOracle {
public:
    explicit ListStackOracle(std::size_t depth)
        : cells_(depth, Symbol::make("EMPTY")) {}

    void apply(Symbol input) {
        if (input.name() == "PUSH") {
            for (std::size_t i = cells_.size(); i-- > 1;) cells_[i] = cells_[i - 1];
            cells_[0] = input.params().at(0);
        } else if (input.name() == "POP") {
            for (std::size_t i = 0; i + 1 < cells_.size(); ++i) cells_[i] = cells_[i + 1];
            cells_.back() = Symbol::make("EMPTY");
        } else {
            throw std::runtime_error("oracle: unexpected input " + input.str());
        }
    }

    Symbol top() const { return cells_.front(); }
    bool empty() const { return cells_.front() == Symbol::make("EMPTY"); }
    bool full() const { return cells_.back() != Symbol::make("EMPTY"); }
    const std::vector<Symbol>& cells() const { return cells_; }

private:
    std::vector<Symbol> cells_;
};

/// Set-based reachability count, kept separate from the library BFS.
inline std::size_t reachable_count_oracle(const Machine& m) {
    std::set<StateId> seen{m.start()};
    std::vector<StateId> todo{m.start()};
    while (!todo.empty()) {
        StateId s = todo.back();
        todo.pop_back();
        for (Symbol a : m.alphabet().symbols()) {
            StateId t = m.next(s, a);
            if (seen.insert(t).second) todo.push_back(t);
        }
    }
    return seen.size();
}

/// All words over `alphabet` of length <= max_len in length-lex order.
inline std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::size_t layer_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (Symbol a : alphabet.symbols()) {
                Word w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        }
        layer_begin = layer_end;
    }
    return out;
}

/// Uniformly random table machine with small state/alphabet sizes.
inline Machine random_machine(Rng& rng, std::size_t max_states,
                              std::size_t alphabet_size, std::size_t output_pool) {
    std::size_t states = 1 + rng.below(max_states);
    std::vector<Symbol> alphabet;
    for (std::size_t a = 0; a < alphabet_size; ++a)
        alphabet.push_back(Symbol::make(std::string(1, static_cast<char>('a' + a))));
    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    for (std::size_t s = 0; s < states; ++s) {
        gamma.push_back(Symbol::make(std::to_string(rng.below(output_pool))));
        std::vector<std::uint32_t> row;
        for (std::size_t a = 0; a < alphabet_size; ++a)
            row.push_back(static_cast<std::uint32_t>(rng.below(states)));
        delta.push_back(std::move(row));
    }
    auto start = static_cast<std::uint32_t>(rng.below(states));
    return Machine::table(Alphabet(alphabet), std::move(gamma), std::move(delta), start);
}

inline Word random_word(Rng& rng, const Alphabet& alphabet, std::size_t max_len) {
    Word w;
    std::size_t len = rng.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        w.push_back(alphabet.at(rng.below(alphabet.size())));
    return w;
}

}  // namespace rmoore::test

#include "rmoore/product.hpp"

namespace rmoore::test {

/// Random well-formed rule-based product: <=3 factors of <=4 states over
/// <=3-symbol alphabets, <=5 rules with concrete factor indices so every
/// emission stays inside its factor's alphabet.
inline ProductDef random_rule_product(Rng& rng) {
    std::size_t n = 1 + rng.below(3);
    std::vector<Machine> machines;
    std::vector<Factor> factors;
    for (std::size_t i = 0; i < n; ++i) {
        Machine m = random_machine(rng, 4, 1 + rng.below(3), 3);
        machines.push_back(m);
        factors.emplace_back(m);
    }

    std::vector<Symbol> inputs;
    std::size_t input_count = 1 + rng.below(3);
    for (std::size_t a = 0; a < input_count; ++a)
        inputs.push_back(Symbol::make(std::string(1, static_cast<char>('x' + a))));
    Alphabet alphabet{inputs};

    auto random_output_symbol = [&](std::size_t factor) {
        const Alphabet& outs = *machines[factor].outputs();
        return outs.at(rng.below(outs.size()));
    };

    std::vector<ConnectionRule> rules;
    std::size_t rule_count = rng.below(6);
    for (std::size_t r = 0; r < rule_count; ++r) {
        ConnectionRule rule;
        auto factor = static_cast<std::uint32_t>(1 + rng.below(n));
        rule.factor = factor;
        if (rng.flip()) {
            rule.input = SymbolPattern::any();
        } else {
            SymbolPattern pattern;
            pattern.name = inputs[rng.below(inputs.size())].name();
            rule.input = pattern;
        }
        std::size_t guard_count = rng.below(3);
        for (std::size_t g = 0; g < guard_count; ++g) {
            Guard guard;
            auto subject = static_cast<std::int32_t>(1 + rng.below(n));
            guard.subject = FeedbackRef::absolute(subject);
            guard.negated = rng.flip();
            if (rng.flip())
                guard.rhs = random_output_symbol(subject - 1);
            else
                guard.rhs = FeedbackRef::absolute(static_cast<std::int32_t>(1 + rng.below(n)));
            rule.guards.push_back(std::move(guard));
        }
        std::size_t emit_count = rng.below(3);
        const Alphabet& target = machines[factor - 1].alphabet();
        for (std::size_t e = 0; e < emit_count; ++e)
            rule.emit.push_back(EmitItem::lit(target.at(rng.below(target.size()))));
        rules.push_back(std::move(rule));
    }

    OutputMap h = OutputMap::tuple();
    switch (rng.below(3)) {
        case 0:
            h = OutputMap::tuple();
            break;
        case 1:
            h = OutputMap::project(static_cast<std::uint32_t>(1 + rng.below(n)));
            break;
        case 2: {
            std::vector<std::pair<std::vector<Symbol>, Symbol>> entries;
            std::size_t entry_count = rng.below(4);
            for (std::size_t e = 0; e < entry_count; ++e) {
                std::vector<Symbol> when;
                for (std::size_t i = 0; i < n; ++i) when.push_back(random_output_symbol(i));
                entries.emplace_back(std::move(when),
                                     Symbol::make(std::to_string(rng.below(3))));
            }
            h = OutputMap::table(std::move(entries),
                                 Symbol::make(std::to_string(rng.below(3))));
            break;
        }
    }
    return ProductDef(std::move(factors), alphabet, ConnectionMap::from_rules(std::move(rules)),
                      std::move(h));
}

}  // namespace rmoore::test
