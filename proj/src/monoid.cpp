/* monoid.cpp */

#include "rmoore/monoid.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace rmoore {

namespace {

std::string pack(const std::vector<std::uint32_t>& mapping) {
    std::string key;
    key.reserve(mapping.size() * sizeof(std::uint32_t));
    for (auto v : mapping)
        key.append(reinterpret_cast<const char*>(&v), sizeof(v));
    return key;
}

std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& first,
                                   const std::vector<std::uint32_t>& then) {
    std::vector<std::uint32_t> out(first.size());
    for (std::size_t s = 0; s < first.size(); ++s) out[s] = then[first[s]];
    return out;
}

}  // namespace

MonoidTable::MonoidTable(std::vector<StateMapElement> elements, std::size_t state_count)
    : elements_(std::move(elements)), state_count_(state_count) {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        index_.emplace(pack(elements_[i].mapping), static_cast<std::uint32_t>(i));
}

std::uint32_t MonoidTable::mul(std::uint32_t e1, std::uint32_t e2) const {
    return index_of(compose(elements_.at(e1).mapping, elements_.at(e2).mapping));
}

std::uint32_t MonoidTable::index_of(const std::vector<std::uint32_t>& mapping) const {
    auto it = index_.find(pack(mapping));
    if (it == index_.end())
        throw UnknownStateError("state map is not an element of the monoid");
    return it->second;
}

MonoidTable transition_monoid(const MinimizedMachine& m, std::size_t cap) {
    const Machine& machine = m.machine;
    const std::size_t k = machine.state_count();

    std::vector<std::vector<std::uint32_t>> letter_maps;
    letter_maps.reserve(machine.alphabet().size());
    for (Symbol a : machine.alphabet().symbols()) {
        std::vector<std::uint32_t> map(k);
        for (std::uint32_t s = 0; s < k; ++s)
            map[s] = static_cast<std::uint32_t>(machine.next(s, a));
        letter_maps.push_back(std::move(map));
    }

    std::vector<StateMapElement> elements;
    std::unordered_map<std::string, std::uint32_t> seen;
    std::deque<std::uint32_t> frontier;

    std::vector<std::uint32_t> identity(k);
    std::iota(identity.begin(), identity.end(), 0);
    seen.emplace(pack(identity), 0);
    elements.push_back(StateMapElement{std::move(identity), {}});
    frontier.push_back(0);

    while (!frontier.empty()) {
        auto idx = frontier.front();
        frontier.pop_front();
        for (std::size_t a = 0; a < letter_maps.size(); ++a) {
            auto mapping = compose(elements[idx].mapping, letter_maps[a]);
            auto key = pack(mapping);
            if (seen.count(key)) continue;
            if (elements.size() >= cap)
                throw MonoidSizeError("monoid exceeds the element cap of " +
                                      std::to_string(cap));
            Word witness = elements[idx].shortest_witness;
            witness.push_back(machine.alphabet().at(a));
            seen.emplace(std::move(key), static_cast<std::uint32_t>(elements.size()));
            frontier.push_back(static_cast<std::uint32_t>(elements.size()));
            elements.push_back(StateMapElement{std::move(mapping), std::move(witness)});
        }
    }
    return MonoidTable(std::move(elements), k);
}

bool congruent(const StringFunction& f, const Word& w, const Word& u) {
    if (!f.machine() || !f.machine()->is_table())
        throw InfiniteMachineError(
            "congruence is decidable only for functions backed by a finite machine");
    for (Symbol a : w)
        if (!f.alphabet().contains(a))
            throw UnknownSymbolError("symbol \"" + a.str() + "\" is not in the alphabet");
    for (Symbol a : u)
        if (!f.alphabet().contains(a))
            throw UnknownSymbolError("symbol \"" + a.str() + "\" is not in the alphabet");

    const Machine machine = minimize(*f.machine()).machine;
    const std::size_t k = machine.state_count();
    auto map_of = [&](const Word& word) {
        std::vector<std::uint32_t> map(k);
        for (std::uint32_t s = 0; s < k; ++s)
            map[s] = static_cast<std::uint32_t>(delta_star(machine, s, word));
        return map;
    };
    return map_of(w) == map_of(u);
}

MonoidClassification classify(const MonoidTable& t) {
    MonoidClassification c;
    c.element_count = t.size();
    c.is_group = true;
    c.is_aperiodic = true;

    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& mapping = t.element(i).mapping;
        // invertible iff the map is a bijection; in a finite monoid of
        // bijections every element has an inverse among its own powers
        std::vector<bool> hit(mapping.size(), false);
        bool bijective = true;
        for (auto v : mapping) {
            if (hit[v]) {
                bijective = false;
                break;
            }
            hit[v] = true;
        }
        if (!bijective) c.is_group = false;

        if (t.mul(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)) == i)
            ++c.idempotent_count;

        // aperiodic iff the power trajectory stabilizes at a fixpoint
        std::vector<bool> visited(t.size(), false);
        auto x = static_cast<std::uint32_t>(i);
        while (!visited[x]) {
            visited[x] = true;
            x = t.mul(x, static_cast<std::uint32_t>(i));
        }
        if (t.mul(x, static_cast<std::uint32_t>(i)) != x) c.is_aperiodic = false;
    }
    return c;
}

}  // namespace rmoore
