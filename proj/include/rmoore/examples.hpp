/* examples.hpp -- library of ready-made machines and products
 *
 * Storage cells, bounded stacks built from cells, broadcast network with
 * an arbiter, modular tick counters, ripple-carry counter cascades, and
 * the (infinite-state) input-length function. All constructors are pure;
 * the produced definitions are immutable.
 */

#pragma once

#include "rmoore/product.hpp"

namespace rmoore {
namespace examples {

inline const std::string kEmptyName = "EMPTY";

/// Last-letter storage cell: outputs the most recent input symbol, EMPTY
/// before any input. One state per possible output; the input alphabet is
/// exactly `values` (which may or may not include EMPTY itself).
Machine make_cell(const std::vector<Symbol>& values);

/// Modular tick counter: n states over alphabet {tick}, output = the
/// current residue as a numeral; starts at 0.
Machine make_counter(std::uint64_t n);

struct StackConfig {
    std::size_t depth = 3;
    /// Storable values; EMPTY is always added as the idle cell value.
    std::vector<Symbol> values;
};

/// Depth-n stack as a product of storage cells. Inputs are PUSH[v] for
/// each non-EMPTY value plus POP. PUSH shifts right (cell 1 takes v, cell
/// i>1 takes cell i-1's old value, the deepest value falls off when full);
/// POP shifts left (cell n takes EMPTY). h exposes the full cell tuple.
ProductDef make_stack(const StackConfig& config);

/// Accessors over the stack's tuple output.
Symbol stack_top(Symbol tuple_output);
bool stack_empty(Symbol tuple_output);
bool stack_full(Symbol tuple_output);

/// Which condition lets counter i advance in the ripple cascade.
enum class CarryGuard {
    /// Counter i advances exactly when counters 1..i-1 all read 1: the
    /// ripple-carry chain. Default.
    carry_chain,
    /// Counter i skips when some counter j < i-1 reads 0 (so counter 2
    /// advances unconditionally). Kept for comparison; does not count in
    /// binary.
    skip_below_zero,
};

/// Cascade of n two-state counters over {tick}; h is the output tuple.
ProductDef make_ripple(std::size_t n, CarryGuard guard = CarryGuard::carry_chain);

/// Same cascade with h = sum of counter outputs weighted by powers of two,
/// i.e. the value read in binary. With the carry_chain guard this behaves
/// as a mod-2^n counter.
ProductDef make_ripple_value(std::size_t n, CarryGuard guard = CarryGuard::carry_chain);

struct NetworkConfig {
    std::size_t node_count = 3;
    std::vector<Symbol> messages;
    std::size_t queue_capacity = 2;
    /// Initial per-node transmit queues (front first). Missing entries are
    /// empty queues.
    std::vector<std::vector<Symbol>> initial_queues;
    /// Arbiter start state: 0 = nothing granted yet, j>=1 = node j granted.
    std::size_t arbiter_start = 0;
    /// Optional replacements for the default echo nodes / round-robin
    /// arbiter; shapes are validated against the network conventions.
    std::vector<std::optional<Machine>> nodes;
    std::optional<Machine> arbiter;
};

/// Node output symbols are out[m,c] with m a message or NULL and c
/// ready/busy.
Symbol node_output(Symbol message_or_null, bool ready);
Symbol parse_node_message(Symbol out);  // the m component
bool parse_node_ready(Symbol out);      // the c component

/// Bounded-queue echo node: RECV[m] enqueues m unless m equals the queued
/// front, which is dropped instead (the node hears its own broadcast and
/// takes it as delivery); TICK leaves the queue alone. Output is
/// out[front-or-NULL, ready/busy], busy exactly when the queue is full.
Machine make_echo_node(const std::vector<Symbol>& messages, std::size_t capacity,
                       const std::vector<Symbol>& initial_queue);

/// Round-robin arbiter: input flags[b1,...,bn] gives the pending bit of
/// every node; the next grant scans from the last granted index. Output
/// sel[j], with sel[0] when nothing is pending.
Machine make_round_robin_arbiter(std::size_t node_count, std::size_t start = 0);

/// Broadcast network over the single input TICK: n node factors plus the
/// arbiter as factor n+1. Per tick, if the arbiter's current grant j has a
/// pending message m != NULL, every ready node (the sender included)
/// consumes RECV[m] TICK and the others just TICK; the arbiter consumes
/// the pending-flags vector.
ProductDef make_network(const NetworkConfig& config);

/// Word-length measure: L(empty) = 0, L(wa) = L(w) + 1, as a
/// generator-backed function. Finite-only operations reject it.
StringFunction make_length(const Alphabet& alphabet);
StringFunction make_length();  // over {tick}

}  // namespace examples
}  // namespace rmoore
