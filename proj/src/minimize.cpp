/* minimize.cpp */

#include "rmoore/minimize.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace rmoore {

Machine reachable(const Machine& m) {
    const std::size_t n = m.state_count();
    std::vector<std::uint32_t> order;  // old ids in discovery order
    std::vector<std::uint32_t> new_id(n, UINT32_MAX);
    std::deque<std::uint32_t> frontier;
    auto visit = [&](StateId s) {
        if (new_id[s] == UINT32_MAX) {
            new_id[s] = static_cast<std::uint32_t>(order.size());
            order.push_back(static_cast<std::uint32_t>(s));
            frontier.push_back(static_cast<std::uint32_t>(s));
        }
    };
    visit(m.start());
    while (!frontier.empty()) {
        auto s = frontier.front();
        frontier.pop_front();
        for (Symbol a : m.alphabet().symbols()) visit(m.next(s, a));
    }

    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    std::vector<std::string> names;
    gamma.reserve(order.size());
    for (auto old : order) {
        gamma.push_back(m.output(old));
        names.push_back(m.state_name(old));
        std::vector<std::uint32_t> row;
        row.reserve(m.alphabet().size());
        for (Symbol a : m.alphabet().symbols())
            row.push_back(new_id[m.next(old, a)]);
        delta.push_back(std::move(row));
    }
    return Machine::table(m.alphabet(), std::move(gamma), std::move(delta), 0,
                          std::move(names));
}

const Word& MinimizedMachine::witness(std::uint32_t a, std::uint32_t b) const {
    if (a == b) throw UnknownStateError("no witness between a state and itself");
    if (a > b) std::swap(a, b);
    const std::size_t k = machine.state_count();
    // upper triangular index for pair (a, b), a < b
    std::size_t idx = a * (2 * k - a - 1) / 2 + (b - a - 1);
    return witnesses.at(idx);
}

namespace {

/// Shortest word after which two states of one machine differ in output;
/// both states must be inequivalent.
Word distinguishing_word(const Machine& m, std::uint32_t p, std::uint32_t q) {
    const std::size_t n = m.state_count();
    auto key = [n](std::uint32_t a, std::uint32_t b) { return a * n + b; };
    struct Parent {
        std::uint32_t from_p, from_q;
        Symbol sym;
    };
    std::unordered_map<std::uint64_t, Parent> parent;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> frontier;
    std::vector<bool> seen(n * n, false);
    auto reconstruct = [&](std::uint32_t a, std::uint32_t b) {
        Word w;
        while (a != p || b != q) {
            auto it = parent.find(key(a, b));
            w.push_back(it->second.sym);
            a = it->second.from_p;
            b = it->second.from_q;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };
    seen[key(p, q)] = true;
    if (m.output(p) != m.output(q)) return {};
    frontier.emplace_back(p, q);
    while (!frontier.empty()) {
        auto [a, b] = frontier.front();
        frontier.pop_front();
        for (Symbol sym : m.alphabet().symbols()) {
            auto na = static_cast<std::uint32_t>(m.next(a, sym));
            auto nb = static_cast<std::uint32_t>(m.next(b, sym));
            if (seen[key(na, nb)]) continue;
            seen[key(na, nb)] = true;
            parent.emplace(key(na, nb), Parent{a, b, sym});
            if (m.output(na) != m.output(nb)) return reconstruct(na, nb);
            frontier.emplace_back(na, nb);
        }
    }
    throw UnknownStateError("states are observationally equivalent; no witness exists");
}

}  // namespace

MinimizedMachine minimize(const Machine& m) {
    Machine r = reachable(m);
    const std::size_t n = r.state_count();
    const std::size_t asize = r.alphabet().size();

    // initial partition by output
    std::vector<std::uint32_t> block(n);
    {
        std::unordered_map<std::uint32_t, std::uint32_t> by_output;
        for (std::uint32_t s = 0; s < n; ++s) {
            auto [it, fresh] = by_output.emplace(
                r.output(s).id(), static_cast<std::uint32_t>(by_output.size()));
            block[s] = it->second;
        }
    }
    // refine by successor blocks until stable
    while (true) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> by_sig;
        std::vector<std::uint32_t> next_block(n);
        for (std::uint32_t s = 0; s < n; ++s) {
            std::vector<std::uint32_t> sig;
            sig.reserve(asize + 1);
            sig.push_back(block[s]);
            for (Symbol a : r.alphabet().symbols())
                sig.push_back(block[r.next(s, a)]);
            auto [it, fresh] = by_sig.emplace(std::move(sig),
                                              static_cast<std::uint32_t>(by_sig.size()));
            next_block[s] = it->second;
        }
        bool same = by_sig.size() ==
                    static_cast<std::size_t>(1 + *std::max_element(block.begin(), block.end()));
        block.swap(next_block);
        if (same) break;
    }

    // quotient machine, then renumber blocks in BFS order from the start
    const std::uint32_t blocks = 1 + *std::max_element(block.begin(), block.end());
    std::vector<std::uint32_t> rep(blocks, UINT32_MAX);
    for (std::uint32_t s = 0; s < n; ++s)
        if (rep[block[s]] == UINT32_MAX) rep[block[s]] = s;

    std::vector<std::uint32_t> bfs_id(blocks, UINT32_MAX);
    std::vector<std::uint32_t> order;
    std::deque<std::uint32_t> frontier;
    auto visit = [&](std::uint32_t b) {
        if (bfs_id[b] == UINT32_MAX) {
            bfs_id[b] = static_cast<std::uint32_t>(order.size());
            order.push_back(b);
            frontier.push_back(b);
        }
    };
    visit(block[0]);  // start of reachable machine is state 0
    while (!frontier.empty()) {
        auto b = frontier.front();
        frontier.pop_front();
        for (Symbol a : r.alphabet().symbols())
            visit(block[r.next(rep[b], a)]);
    }

    std::vector<Symbol> gamma;
    std::vector<std::vector<std::uint32_t>> delta;
    for (auto b : order) {
        gamma.push_back(r.output(rep[b]));
        std::vector<std::uint32_t> row;
        row.reserve(asize);
        for (Symbol a : r.alphabet().symbols())
            row.push_back(bfs_id[block[r.next(rep[b], a)]]);
        delta.push_back(std::move(row));
    }

    MinimizedMachine result{
        Machine::table(r.alphabet(), std::move(gamma), std::move(delta), 0), {}, {}};

    // class_of maps the original machine's reachable ids
    {
        const std::size_t orig = m.state_count();
        std::vector<std::uint32_t> orig_to_reach(orig, UINT32_MAX);
        // recompute the reachable() numbering on the original machine
        std::deque<StateId> bfs;
        std::vector<std::uint32_t> numbered;
        auto visit_orig = [&](StateId s) {
            if (orig_to_reach[s] == UINT32_MAX) {
                orig_to_reach[s] = static_cast<std::uint32_t>(numbered.size());
                numbered.push_back(static_cast<std::uint32_t>(s));
                bfs.push_back(s);
            }
        };
        visit_orig(m.start());
        while (!bfs.empty()) {
            auto s = bfs.front();
            bfs.pop_front();
            for (Symbol a : m.alphabet().symbols()) visit_orig(m.next(s, a));
        }
        for (auto old : numbered)
            result.class_of[old] = bfs_id[block[orig_to_reach[old]]];
    }

    // witnesses for every minimized pair, shortest with alphabet-order ties
    const std::size_t k = result.machine.state_count();
    result.witnesses.reserve(k * (k - 1) / 2);
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = a + 1; b < k; ++b)
            result.witnesses.push_back(distinguishing_word(result.machine, a, b));
    return result;
}

EquivalenceResult equivalent(const Machine& m1, const Machine& m2,
                             std::optional<std::size_t> bound) {
    if (!(m1.alphabet() == m2.alphabet()))
        throw AlphabetMismatchError("machines have different input alphabets");
    if (!m1.is_table() || !m2.is_table())
        throw InfiniteMachineError("equivalence check needs finite table machines");

    const std::size_t n1 = m1.state_count();
    const std::size_t n2 = m2.state_count();
    auto key = [n2](StateId a, StateId b) { return a * n2 + b; };
    struct Parent {
        StateId from1, from2;
        Symbol sym;
    };
    std::unordered_map<std::uint64_t, Parent> parent;
    std::vector<bool> seen(n1 * n2, false);
    std::deque<std::tuple<StateId, StateId, std::size_t>> frontier;

    auto reconstruct = [&](StateId a, StateId b) {
        Word w;
        while (a != m1.start() || b != m2.start()) {
            auto it = parent.find(key(a, b));
            w.push_back(it->second.sym);
            a = it->second.from1;
            b = it->second.from2;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    seen[key(m1.start(), m2.start())] = true;
    if (m1.output(m1.start()) != m2.output(m2.start()))
        return {false, Word{}};
    frontier.emplace_back(m1.start(), m2.start(), 0);
    while (!frontier.empty()) {
        auto [a, b, depth] = frontier.front();
        frontier.pop_front();
        if (bound && depth == *bound) continue;
        for (Symbol sym : m1.alphabet().symbols()) {
            StateId na = m1.next(a, sym);
            StateId nb = m2.next(b, sym);
            if (seen[key(na, nb)]) continue;
            seen[key(na, nb)] = true;
            parent.emplace(key(na, nb), Parent{a, b, sym});
            if (m1.output(na) != m2.output(nb))
                return {false, reconstruct(na, nb)};
            frontier.emplace_back(na, nb, depth + 1);
        }
    }
    return {true, std::nullopt};
}

}  // namespace rmoore
