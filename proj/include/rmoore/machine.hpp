/* machine.hpp -- Moore machines and their representing string functions
 *
 * A Machine is the 6-tuple (alphabet, outputs, states, start, delta, gamma).
 * Table-backed machines have dense integer state ids and enumerable state
 * sets; generator-backed machines supply delta/gamma as code so that
 * infinite-state functions (e.g. an input-length counter) can be hosted.
 * Finite-only operations reject generator-backed machines with
 * InfiniteMachineError.
 */

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmoore/symbol.hpp"

namespace rmoore {

using StateId = std::uint64_t;

class Machine {
public:
    /// Table backend. delta is indexed [state][alphabet index]; gamma has
    /// one output per state. The outputs alphabet is the set of distinct
    /// gamma values in state order unless given explicitly.
    static Machine table(Alphabet alphabet, std::vector<Symbol> gamma,
                         std::vector<std::vector<std::uint32_t>> delta, StateId start,
                         std::vector<std::string> state_names = {},
                         std::optional<Alphabet> outputs = std::nullopt);

    /// Generator backend: state ids are arbitrary; the state set is not
    /// enumerable and may be infinite.
    static Machine generator(Alphabet alphabet, StateId start,
                             std::function<StateId(StateId, Symbol)> delta,
                             std::function<Symbol(StateId)> gamma);

    bool is_table() const;
    /// Throws InfiniteMachineError for generator-backed machines.
    std::size_t state_count() const;

    const Alphabet& alphabet() const;
    /// Known for table machines only.
    const std::optional<Alphabet>& outputs() const;
    StateId start() const;

    Symbol output(StateId s) const;
    StateId next(StateId s, Symbol a) const;

    /// Display name for a state: the assigned name, else the decimal id.
    std::string state_name(StateId s) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Incremental construction of table machines.
class MachineBuilder {
public:
    explicit MachineBuilder(Alphabet alphabet);
    std::uint32_t add_state(Symbol output, std::string name = {});
    void set_transition(std::uint32_t from, Symbol input, std::uint32_t to);
    void set_start(std::uint32_t start);
    /// Validates that delta is total; throws UnknownStateError otherwise.
    Machine build(std::optional<Alphabet> outputs = std::nullopt) const;

private:
    Alphabet alphabet_;
    std::vector<Symbol> gamma_;
    std::vector<std::vector<std::optional<std::uint32_t>>> delta_;
    std::vector<std::string> names_;
    std::uint32_t start_ = 0;
};

/// delta extended to words: fold of next() from s over w, left to right.
StateId delta_star(const Machine& m, StateId s, const Word& w);

/// A total, deterministic function from words to output symbols. Carries
/// its backing machine when one exists so finite analyses can reuse it.
class StringFunction {
public:
    StringFunction(Alphabet alphabet, std::function<Symbol(const Word&)> eval,
                   std::optional<Machine> backing = std::nullopt);

    Symbol operator()(const Word& w) const;
    const Alphabet& alphabet() const;
    const std::optional<Machine>& machine() const;

private:
    Alphabet alphabet_;
    std::function<Symbol(const Word&)> eval_;
    std::optional<Machine> machine_;
};

/// f(w) = gamma(delta_star(start, w)).
StringFunction representing_function(const Machine& m);

/// Post-compose the output: result(w) = g(f(w)). The backing machine, when
/// present, is rebuilt with gamma' = g . gamma over the same states.
StringFunction remap_output(const StringFunction& f,
                            const std::function<Symbol(Symbol)>& g);

}  // namespace rmoore
