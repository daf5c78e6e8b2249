/* monoid.hpp -- the transition monoid of a minimized machine
 *
 * Elements are the distinct state maps induced by words; multiplication is
 * map composition (apply the left word first). Each element keeps the
 * shortest word inducing it, ties broken length-lexicographically in
 * alphabet order. For a minimized reachable machine this monoid coincides
 * with the syntactic congruence of the represented function, which is what
 * congruent() decides.
 */

#pragma once

#include <cstdint>

#include "rmoore/minimize.hpp"

namespace rmoore {

inline constexpr std::size_t kDefaultMonoidCap = 10'000;

struct StateMapElement {
    std::vector<std::uint32_t> mapping;  // minimized state -> minimized state
    Word shortest_witness;
};

class MonoidTable {
public:
    MonoidTable(std::vector<StateMapElement> elements, std::size_t state_count);

    std::size_t size() const { return elements_.size(); }
    const StateMapElement& element(std::size_t i) const { return elements_.at(i); }
    const std::vector<StateMapElement>& elements() const { return elements_; }

    std::uint32_t identity() const { return 0; }
    /// Index of [w1 . w2]: composition applying e1's mapping, then e2's.
    std::uint32_t mul(std::uint32_t e1, std::uint32_t e2) const;
    std::uint32_t index_of(const std::vector<std::uint32_t>& mapping) const;

private:
    std::vector<StateMapElement> elements_;
    std::unordered_map<std::string, std::uint32_t> index_;  // packed mapping -> element
    std::size_t state_count_;
};

/// Closure of the letter-induced maps under composition, discovered by BFS
/// from the identity so witnesses come out shortest. Aborts with
/// MonoidSizeError past `cap` elements.
MonoidTable transition_monoid(const MinimizedMachine& m, std::size_t cap = kDefaultMonoidCap);

/// w and u are congruent iff they induce the same state map on the
/// minimized machine of f; equivalently f(z.w.y) = f(z.u.y) for all
/// contexts z, y. Requires a finite (machine-backed) function.
bool congruent(const StringFunction& f, const Word& w, const Word& u);

struct MonoidClassification {
    bool is_group = false;
    bool is_aperiodic = false;
    std::size_t element_count = 0;
    std::size_t idempotent_count = 0;
};

/// is_group: every element is invertible (all maps bijective).
/// is_aperiodic: no nontrivial subgroup; every element satisfies
/// x^k = x^(k+1) for some k.
MonoidClassification classify(const MonoidTable& t);

}  // namespace rmoore
