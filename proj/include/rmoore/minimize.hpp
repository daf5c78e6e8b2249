/* minimize.hpp -- reachable-state extraction and observational minimization
 *
 * minimize() quotients a finite machine by observational equivalence.
 * Distinct minimized states always disagree on the output reached by some
 * word; a shortest such witness is stored for every pair. Minimized state
 * ids follow BFS discovery order from the start state, so results are
 * deterministic and suitable for golden tests.
 */

#pragma once

#include <map>
#include <optional>

#include "rmoore/machine.hpp"

namespace rmoore {

/// The machine restricted to states reachable from start, renumbered in
/// BFS discovery order (alphabet order per layer). Behavior is unchanged.
Machine reachable(const Machine& m);

struct MinimizedMachine {
    Machine machine;
    /// original reachable state id -> minimized state id
    std::map<StateId, std::uint32_t> class_of;

    /// Shortest word (alphabet-order tie break) distinguishing two distinct
    /// minimized states: following it from each yields different outputs.
    const Word& witness(std::uint32_t a, std::uint32_t b) const;

    std::vector<Word> witnesses;  // flat upper-triangular storage
};

/// Moore partition refinement over reachable(m): the initial partition is
/// by output, refined by successor blocks until a fixpoint.
MinimizedMachine minimize(const Machine& m);

struct EquivalenceResult {
    bool equivalent = true;
    std::optional<Word> counterexample;  // shortest distinguishing word
};

/// Behavioral equality of two machines over the same input alphabet.
/// Without a bound the check is complete (pair BFS over the reachable
/// product); with a bound it decides "no word of length <= bound
/// distinguishes them".
EquivalenceResult equivalent(const Machine& m1, const Machine& m2,
                             std::optional<std::size_t> bound = std::nullopt);

}  // namespace rmoore
