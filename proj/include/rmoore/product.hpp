/* product.hpp -- the general product of machines with feedback
 *
 * A ProductDef combines factors (machines, or nested products) with a
 * connection map g and an output map h. Per composite input a, factor i
 * consumes the word g(i, a, feedback) where feedback is the vector of all
 * factor outputs before the step; an empty emission means the factor skips
 * the turn. The composite can be evaluated two ways: incrementally via a
 * RecursionState, or by expanding to an explicit machine over the full
 * Cartesian state set. check_theorem1 cross-checks the two routes.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rmoore/machine.hpp"

namespace rmoore {

/// Reference to a factor output, absolute out(3) or relative out(i-1)
/// where i is the factor the rule is being evaluated for.
struct FeedbackRef {
    bool relative = false;
    std::int32_t value = 0;  // absolute: 1-based factor index; relative: offset from i

    static FeedbackRef absolute(std::int32_t j) { return {false, j}; }
    static FeedbackRef rel(std::int32_t offset) { return {true, offset}; }
    /// 1-based referenced index for a rule applied at factor i; 0 if out of
    /// range for an n-factor product.
    std::int32_t resolve(std::int32_t i, std::int32_t n) const;
    bool operator==(const FeedbackRef&) const = default;
};

/// Input pattern: a wildcard, or a symbol name with per-parameter literal
/// or binder ("?v") patterns. Binders capture the matched parameter.
struct SymbolPattern {
    struct Param {
        bool binder = false;
        std::string binder_name;         // when binder
        std::optional<Symbol> literal;   // when !binder
        bool operator==(const Param&) const = default;
    };
    bool wildcard = false;
    std::string name;
    std::vector<Param> params;

    static SymbolPattern any() { return {true, {}, {}}; }
    /// Parses "any", "POP", "PUSH[?v]", "RECV[m1]".
    static SymbolPattern parse(std::string_view text);
    std::string str() const;
    bool matches(Symbol s, std::vector<std::pair<std::string, Symbol>>& bindings) const;
    bool operator==(const SymbolPattern&) const = default;
};

/// Equality/inequality between a factor output and a literal or another
/// factor output.
struct Guard {
    FeedbackRef subject;
    bool negated = false;
    std::variant<Symbol, FeedbackRef> rhs;
    bool operator==(const Guard&) const = default;
};

/// One emission element: a literal symbol, a parameter bound by the input
/// pattern, or a feedback reference (the referenced factor's output).
struct EmitItem {
    enum class Kind { literal, param, feedback };
    Kind kind = Kind::literal;
    std::optional<Symbol> literal;
    std::string param;
    FeedbackRef ref;

    static EmitItem lit(Symbol s) { return {Kind::literal, s, {}, {}}; }
    static EmitItem bound(std::string name) { return {Kind::param, std::nullopt, std::move(name), {}}; }
    static EmitItem feedback(FeedbackRef r) { return {Kind::feedback, std::nullopt, {}, r}; }
    bool operator==(const EmitItem&) const = default;
};

struct ConnectionRule {
    std::optional<std::uint32_t> factor;  // 1-based; nullopt matches any factor
    SymbolPattern input = SymbolPattern::any();
    std::vector<Guard> guards;
    std::vector<EmitItem> emit;
};

/// g: (factor index, input, feedback vector) -> word for that factor.
/// Rule-based maps are statically inspectable and serializable; opaque
/// maps are arbitrary callables.
class ConnectionMap {
public:
    using Fn = std::function<Word(std::uint32_t, Symbol, std::span<const Symbol>)>;

    static ConnectionMap from_rules(std::vector<ConnectionRule> rules);
    static ConnectionMap opaque(Fn fn);

    bool is_rule_based() const;
    const std::vector<ConnectionRule>& rules() const;  // throws OpaqueConnectionError

    /// Ordered first-match-wins evaluation; no matching rule emits the
    /// empty word. Guards referencing out-of-range factors fail the rule;
    /// emitting an out-of-range reference is an error.
    Word emit(std::uint32_t factor, Symbol input, std::span<const Symbol> feedback) const;

private:
    std::shared_ptr<const std::vector<ConnectionRule>> rules_;
    Fn fn_;
};

/// h: vector of factor outputs -> composite output symbol.
class OutputMap {
public:
    enum class Kind { tuple, project, weighted_sum, table, opaque };
    using Fn = std::function<Symbol(std::span<const Symbol>)>;

    /// Combines the outputs into one symbol tuple[x1,...,xn].
    static OutputMap tuple();
    static OutputMap project(std::uint32_t factor);  // 1-based
    /// Reads each output as a decimal digit value and emits the numeral
    /// sum(x_i * base^(i-1)).
    static OutputMap weighted_sum(std::uint64_t base);
    static OutputMap table(std::vector<std::pair<std::vector<Symbol>, Symbol>> entries,
                           std::optional<Symbol> fallback = std::nullopt);
    static OutputMap opaque(Fn fn);

    Kind kind() const { return kind_; }
    std::uint32_t project_factor() const { return project_; }
    std::uint64_t base() const { return base_; }
    const std::vector<std::pair<std::vector<Symbol>, Symbol>>& entries() const;
    const std::optional<Symbol>& fallback() const { return fallback_; }

    Symbol apply(std::span<const Symbol> outputs) const;

private:
    Kind kind_ = Kind::tuple;
    std::uint32_t project_ = 1;
    std::uint64_t base_ = 2;
    std::shared_ptr<const std::vector<std::pair<std::vector<Symbol>, Symbol>>> entries_;
    std::optional<Symbol> fallback_;
    Fn fn_;
};

class ProductDef;

/// A product factor: a machine, or a nested product.
class Factor {
public:
    Factor(Machine m);
    Factor(ProductDef p);

    bool is_machine() const;
    const Machine& machine() const;
    const ProductDef& product() const;

    const Alphabet& alphabet() const;
    bool is_finite() const;

private:
    std::variant<Machine, std::shared_ptr<const ProductDef>> v_;
};

class ProductDef {
public:
    ProductDef(std::vector<Factor> factors, Alphabet alphabet, ConnectionMap g, OutputMap h);

    const std::vector<Factor>& factors() const;
    std::size_t factor_count() const;
    const Alphabet& alphabet() const;
    const ConnectionMap& connection() const;
    const OutputMap& output_map() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Incremental evaluation state: per-factor accumulated words u_i plus the
/// factor cursors they lead to, and the current composite output.
class RecursionState {
public:
    explicit RecursionState(const ProductDef& p);
    RecursionState(const RecursionState& other);
    RecursionState& operator=(const RecursionState& other);
    RecursionState(RecursionState&&) noexcept = default;
    RecursionState& operator=(RecursionState&&) noexcept = default;

    Symbol output() const { return output_; }
    std::size_t factor_count() const { return cursors_.size(); }
    const Word& u(std::size_t factor) const;  // 1-based
    /// Current state of a machine factor (1-based index).
    StateId machine_state(std::size_t factor) const;
    /// Nested recursion state of factor (1-based); null for machine factors.
    const RecursionState* nested(std::size_t factor) const;

    /// Flattened per-factor state ids (nested products flattened in order);
    /// two states with equal signatures are behaviorally identical.
    std::vector<StateId> signature() const;

private:
    struct Cursor {
        StateId state = 0;                        // machine factors
        std::unique_ptr<RecursionState> nested_;  // nested product factors
        Word u;
    };
    std::vector<Cursor> cursors_;
    Symbol output_;
    friend RecursionState step(const ProductDef&, const RecursionState&, Symbol);
    friend void step_in_place(const ProductDef&, RecursionState&, Symbol);
};

/// One-letter extension: every factor advances by g(i, a, pre-step
/// feedback), then the composite output is recomputed.
RecursionState step(const ProductDef& p, const RecursionState& rs, Symbol a);
void step_in_place(const ProductDef& p, RecursionState& rs, Symbol a);

/// Output of one factor at the current recursion state (1-based).
Symbol factor_output(const ProductDef& p, const RecursionState& rs, std::size_t factor);

/// f(w) by simultaneous recursion; the product state set is never built.
Symbol recursion_eval(const ProductDef& p, const Word& w);

/// The explicit product machine over the full Cartesian product of factor
/// states (unreachable tuples included). Factors must be finite; nested
/// products are expanded first.
Machine expand_product(const ProductDef& p);

/// The machine of reachable RecursionState signatures, discovered by BFS
/// from the initial state. Behaviorally equal to expand_product but
/// restricted to reachable states.
Machine recursion_reachable_machine(const ProductDef& p);

struct Theorem1Report {
    bool ok = true;
    std::uint64_t words_checked = 0;
    std::optional<Word> counterexample;
    std::optional<Symbol> recursion_output;
    std::optional<Symbol> machine_output;
};

/// Compares recursion_eval(p, w) against reference(w) for every word of
/// length <= max_len in length-lexicographic order; stops at the first
/// divergence. Throws BudgetExceededError past `budget` words.
Theorem1Report check_against(const ProductDef& p, const StringFunction& reference,
                             std::size_t max_len, std::uint64_t budget = 4'000'000);

/// The dual-route check: reference = representing function of
/// expand_product(p).
Theorem1Report check_theorem1(const ProductDef& p, std::size_t max_len,
                              std::uint64_t budget = 4'000'000);

struct CascadeReport {
    bool cascade = true;
    /// (factor, referenced factor) pairs with referenced >= factor.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offenders;
};

/// True iff every rule that can apply to factor i references only factors
/// j < i, in guards and emissions alike. Requires a rule-based map.
CascadeReport is_cascade(const ProductDef& p);

/// Encodes a finite machine as a product of ceil(log2(|S|)) two-state
/// bit factors; each factor's output is one bit of the state index. A
/// one-state machine yields a zero-factor constant product.
ProductDef binary_encode(const Machine& m);

}  // namespace rmoore
