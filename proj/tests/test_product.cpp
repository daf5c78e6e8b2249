/* test_product.cpp -- the general product, both evaluation routes */

#include "doctest.h"
#include "helpers.hpp"
#include "rmoore/examples.hpp"
#include "rmoore/minimize.hpp"

using namespace rmoore;
using namespace rmoore::test;

namespace {

/// Two mod-2 counters in lockstep (both consume every tick), output = xor.
ProductDef lockstep_xor() {
    Machine t2 = examples::make_counter(2);
    std::vector<ConnectionRule> rules;
    rules.push_back({std::nullopt, SymbolPattern::any(), {},
                     {EmitItem::lit(Symbol::parse("tick"))}});
    const Symbol zero = Symbol::parse("0");
    const Symbol one = Symbol::parse("1");
    OutputMap h = OutputMap::table({{{zero, zero}, zero},
                                    {{zero, one}, one},
                                    {{one, zero}, one},
                                    {{one, one}, zero}});
    return ProductDef({Factor(t2), Factor(t2)}, Alphabet({Symbol::parse("tick")}),
                      ConnectionMap::from_rules(std::move(rules)), std::move(h));
}

/// One factor wired through unchanged: one echo rule per symbol, h =
/// projection.
ProductDef identity_product(const Machine& m) {
    std::vector<ConnectionRule> rules;
    for (Symbol a : m.alphabet().symbols()) {
        SymbolPattern pattern;
        pattern.name = a.name();
        for (Symbol p : a.params())
            pattern.params.push_back({false, {}, p});
        rules.push_back({1, pattern, {}, {EmitItem::lit(a)}});
    }
    return ProductDef({Factor(m)}, m.alphabet(), ConnectionMap::from_rules(std::move(rules)),
                      OutputMap::project(1));
}

}  // namespace

TEST_CASE("expanded product has the full cartesian state set") {
    ProductDef p = lockstep_xor();
    Machine expanded = expand_product(p);
    CHECK(expanded.state_count() == 4);  // 2 x 2, unreachable tuples retained
    CHECK(reachable_count_oracle(expanded) == 2);  // lockstep: (0,0) and (1,1)
    CHECK(expanded.output(expanded.start()) == Symbol::parse("0"));
}

TEST_CASE("stack product starts all-EMPTY") {
    ProductDef stack = examples::make_stack({3, {Symbol::parse("a"), Symbol::parse("b")}});
    CHECK(recursion_eval(stack, {}) == Symbol::parse("tuple[EMPTY,EMPTY,EMPTY]"));
    Machine expanded = expand_product(stack);
    CHECK(expanded.state_count() == 27);
}

TEST_CASE("recursion over the stack follows the shift rules") {
    ProductDef stack = examples::make_stack({3, {Symbol::parse("a"), Symbol::parse("b")}});
    Symbol out = recursion_eval(stack, parse_word("PUSH[a] PUSH[b]"));
    CHECK(examples::stack_top(out) == Symbol::parse("b"));
    CHECK(out.params()[1] == Symbol::parse("a"));  // second cell holds the older push
}

TEST_CASE("ripple value counts ticks in binary") {
    ProductDef h3 = examples::make_ripple_value(3);
    Word w;
    for (int i = 0; i < 5; ++i) w.push_back(Symbol::parse("tick"));
    CHECK(recursion_eval(h3, w) == Symbol::parse("5"));
}

TEST_CASE("empty word evaluates h over the factor starts") {
    Rng rng(47);
    for (int i = 0; i < 10; ++i) {
        ProductDef p = random_rule_product(rng);
        RecursionState rs(p);
        CHECK(recursion_eval(p, {}) == rs.output());
        for (std::size_t f = 1; f <= p.factor_count(); ++f) CHECK(rs.u(f).empty());
    }
}

TEST_CASE("stack POP at the start shifts EMPTY through every cell") {
    ProductDef stack = examples::make_stack({3, {Symbol::parse("a"), Symbol::parse("b")}});
    RecursionState rs(stack);
    rs = step(stack, rs, Symbol::parse("POP"));
    for (std::size_t i = 1; i <= 3; ++i)
        CHECK(rs.u(i) == parse_word("EMPTY"));  // cell 3 from the POP rule, others shifted
    CHECK(rs.output() == Symbol::parse("tuple[EMPTY,EMPTY,EMPTY]"));
}

TEST_CASE("higher ripple counters skip while the carry is not set") {
    ProductDef g3 = examples::make_ripple(3);
    RecursionState rs(g3);
    rs = step(g3, rs, Symbol::parse("tick"));  // counter 1 reads 0 before the step
    CHECK(rs.u(1).size() == 1);
    CHECK(rs.u(2).empty());
    CHECK(rs.u(3).empty());
}

TEST_CASE("step extends words monotonically and matches recursion_eval") {
    Rng rng(53);
    for (int i = 0; i < 20; ++i) {
        ProductDef p = random_rule_product(rng);
        Word w = random_word(rng, p.alphabet(), 6);
        RecursionState rs(p);
        std::vector<std::size_t> lengths(p.factor_count(), 0);
        Word consumed;
        for (Symbol a : w) {
            rs = step(p, rs, a);
            consumed.push_back(a);
            for (std::size_t f = 1; f <= p.factor_count(); ++f) {
                CHECK(rs.u(f).size() >= lengths[f - 1]);
                lengths[f - 1] = rs.u(f).size();
            }
            CHECK(rs.output() == recursion_eval(p, consumed));
        }
    }
}

TEST_CASE("per-factor words accumulate exactly the emissions") {
    ProductDef p = lockstep_xor();
    RecursionState rs(p);
    const ConnectionMap& g = p.connection();
    std::vector<std::size_t> expected(p.factor_count(), 0);
    Word w;
    for (int t = 0; t < 5; ++t) {
        Symbol a = Symbol::parse("tick");
        std::vector<Symbol> feedback;
        for (std::size_t f = 1; f <= p.factor_count(); ++f)
            feedback.push_back(factor_output(p, rs, f));
        for (std::size_t f = 1; f <= p.factor_count(); ++f)
            expected[f - 1] += g.emit(static_cast<std::uint32_t>(f), a, feedback).size();
        rs = step(p, rs, a);
        for (std::size_t f = 1; f <= p.factor_count(); ++f)
            CHECK(rs.u(f).size() == expected[f - 1]);
    }
}

TEST_CASE("the two evaluation routes agree") {
    CHECK(check_theorem1(lockstep_xor(), 8).ok);

    ProductDef stack2 = examples::make_stack({2, {Symbol::parse("a"), Symbol::parse("b")}});
    Theorem1Report stack_report = check_theorem1(stack2, 6);
    CHECK(stack_report.ok);
    // 3^0 + ... + 3^6 words over PUSH[a], PUSH[b], POP
    CHECK(stack_report.words_checked == 1093);

    Rng rng(61);
    Machine m = random_machine(rng, 4, 2, 3);
    CHECK(check_theorem1(identity_product(m), 6).ok);
}

TEST_CASE("checking against a different behavior finds the shortest divergence") {
    ProductDef p = identity_product(examples::make_counter(2));
    StringFunction t3 = representing_function(examples::make_counter(3));
    Theorem1Report report = check_against(p, t3, 8);
    CHECK_FALSE(report.ok);
    REQUIRE(report.counterexample);
    CHECK(render_word(*report.counterexample) == "tick tick");
    CHECK(*report.recursion_output == Symbol::parse("0"));
    CHECK(*report.machine_output == Symbol::parse("2"));
}

TEST_CASE("word budget aborts with progress attached") {
    ProductDef p = lockstep_xor();
    CHECK_THROWS_AS(check_theorem1(p, 20, 10), BudgetExceededError);
    try {
        check_theorem1(p, 20, 10);
    } catch (const BudgetExceededError& e) {
        CHECK(e.words_checked == 10);
    }
}

TEST_CASE("cascade detection reads rule dependencies") {
    for (std::size_t n : {2u, 3u, 4u}) {
        CascadeReport report = is_cascade(examples::make_ripple(n));
        CHECK(report.cascade);
        CHECK(report.offenders.empty());
    }

    ProductDef stack = examples::make_stack({3, {Symbol::parse("a"), Symbol::parse("b")}});
    CascadeReport report = is_cascade(stack);
    CHECK_FALSE(report.cascade);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> expected{{1, 2}, {2, 3}};
    CHECK(report.offenders == expected);

    Machine t2 = examples::make_counter(2);
    CHECK(is_cascade(identity_product(t2)).cascade);

    ProductDef opaque(
        {Factor(t2)}, t2.alphabet(),
        ConnectionMap::opaque([](std::uint32_t, Symbol a, std::span<const Symbol>) {
            return Word{a};
        }),
        OutputMap::project(1));
    CHECK_THROWS_AS(is_cascade(opaque), OpaqueConnectionError);
}

TEST_CASE("binary encoding uses ceil(log2(states)) bit factors") {
    Rng rng(71);
    Machine five = random_machine(rng, 1, 2, 3);
    while (five.state_count() != 5) five = random_machine(rng, 8, 2, 3);
    CHECK(binary_encode(five).factor_count() == 3);

    Machine t2 = examples::make_counter(2);
    CHECK(binary_encode(t2).factor_count() == 1);

    Machine t4 = examples::make_counter(4);
    ProductDef encoded = binary_encode(t4);
    CHECK(encoded.factor_count() == 2);
    CHECK(check_against(encoded, representing_function(t4), 10).ok);
}

TEST_CASE("one-state machines encode as the zero-factor constant product") {
    Machine constant = Machine::table(Alphabet::parse("x"), {Symbol::parse("k")}, {{0}}, 0);
    ProductDef encoded = binary_encode(constant);
    CHECK(encoded.factor_count() == 0);
    CHECK(recursion_eval(encoded, parse_word("x x x")) == Symbol::parse("k"));
    Machine expanded = expand_product(encoded);
    CHECK(expanded.state_count() == 1);
    CHECK(check_theorem1(encoded, 4).ok);
}

TEST_CASE("reachable recursion states stay within the factor-count bound") {
    Rng rng(83);
    for (int i = 0; i < 15; ++i) {
        ProductDef p = random_rule_product(rng);
        std::size_t bound = 1;
        for (const Factor& f : p.factors()) bound *= f.machine().state_count();
        Machine graph = recursion_reachable_machine(p);
        CHECK(graph.state_count() <= bound);
    }
}

TEST_CASE("both routes minimize to the same quotient") {
    Rng rng(89);
    for (int i = 0; i < 10; ++i) {
        ProductDef p = random_rule_product(rng);
        std::size_t via_expansion = minimize(expand_product(p)).machine.state_count();
        std::size_t via_recursion = minimize(recursion_reachable_machine(p)).machine.state_count();
        CHECK(via_expansion == via_recursion);
    }
}

TEST_CASE("foreign emissions are rejected on both routes") {
    Machine t2 = examples::make_counter(2);
    std::vector<ConnectionRule> rules;
    rules.push_back({1, SymbolPattern::any(), {}, {EmitItem::lit(Symbol::parse("zap"))}});
    ProductDef p({Factor(t2)}, Alphabet({Symbol::parse("tick")}),
                 ConnectionMap::from_rules(std::move(rules)), OutputMap::project(1));
    CHECK_THROWS_AS(recursion_eval(p, parse_word("tick")), AlphabetMismatchError);
    CHECK_THROWS_AS(expand_product(p), AlphabetMismatchError);
    CHECK_THROWS_AS(recursion_eval(p, parse_word("boom")), UnknownSymbolError);
}

TEST_CASE("generator-backed factors cannot be expanded") {
    StringFunction length = examples::make_length();
    ProductDef p = identity_product(*length.machine());
    CHECK_THROWS_AS(expand_product(p), InfiniteMachineError);
    // the recursion route still works
    CHECK(recursion_eval(p, parse_word("tick tick")) == Symbol::parse("2"));
}
