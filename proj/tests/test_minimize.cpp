/* test_minimize.cpp -- reachability, quotients, witnesses, equivalence */

#include "doctest.h"
#include "helpers.hpp"
#include "rmoore/examples.hpp"
#include "rmoore/minimize.hpp"

using namespace rmoore;
using namespace rmoore::test;

namespace {

ProductDef lockstep_pair() {
    Machine t2 = examples::make_counter(2);
    std::vector<ConnectionRule> rules;
    rules.push_back({std::nullopt, SymbolPattern::any(), {},
                     {EmitItem::lit(Symbol::parse("tick"))}});
    return ProductDef({Factor(t2), Factor(t2)}, Alphabet({Symbol::parse("tick")}),
                      ConnectionMap::from_rules(std::move(rules)), OutputMap::tuple());
}

}  // namespace

TEST_CASE("reachable strips the unreachable product tuples") {
    Machine expanded = expand_product(lockstep_pair());
    CHECK(expanded.state_count() == 4);
    Machine r = reachable(expanded);
    CHECK(r.state_count() == 2);
    CHECK(r.state_count() == reachable_count_oracle(expanded));
    // behavior unchanged
    StringFunction before = representing_function(expanded);
    StringFunction after = representing_function(r);
    for (const Word& w : words_up_to(expanded.alphabet(), 6)) CHECK(before(w) == after(w));
}

TEST_CASE("reachable is a fixpoint on already-reachable machines") {
    Machine t5 = examples::make_counter(5);
    CHECK(reachable(t5).state_count() == 5);
    CHECK(reachable(reachable(t5)).state_count() == 5);
}

TEST_CASE("single-value stack reaches only monotone cell contents") {
    // contents reachable by shifts over one value: (E,E), (a,E), (a,a)
    ProductDef stack2 = examples::make_stack({2, {Symbol::parse("a")}});
    Machine expanded = expand_product(stack2);
    CHECK(expanded.state_count() == 4);
    CHECK(reachable(expanded).state_count() == 3);
    CHECK(reachable_count_oracle(expanded) == 3);
}

TEST_CASE("counters are already minimal") {
    for (std::uint64_t n = 1; n <= 8; ++n)
        CHECK(minimize(examples::make_counter(n)).machine.state_count() == n);
}

TEST_CASE("constant output collapses everything") {
    Rng rng(101);
    Machine m = random_machine(rng, 12, 2, 3);
    StringFunction f = representing_function(m);
    Machine constant = *remap_output(f, [](Symbol) { return Symbol::parse("k"); }).machine();
    CHECK(minimize(constant).machine.state_count() == 1);
}

TEST_CASE("minimize is idempotent and preserves behavior") {
    Rng rng(103);
    for (int i = 0; i < 25; ++i) {
        Machine m = random_machine(rng, 12, 2, 3);
        MinimizedMachine minimized = minimize(m);
        CHECK(minimize(minimized.machine).machine.state_count() ==
              minimized.machine.state_count());
        StringFunction before = representing_function(m);
        StringFunction after = representing_function(minimized.machine);
        for (const Word& w : words_up_to(m.alphabet(), 5)) CHECK(before(w) == after(w));
    }
}

TEST_CASE("stored witnesses distinguish their state pairs on replay") {
    Rng rng(107);
    for (int i = 0; i < 15; ++i) {
        Machine m = random_machine(rng, 10, 2, 3);
        MinimizedMachine minimized = minimize(m);
        const Machine& q = minimized.machine;
        for (std::uint32_t a = 0; a < q.state_count(); ++a)
            for (std::uint32_t b = a + 1; b < q.state_count(); ++b) {
                const Word& w = minimized.witness(a, b);
                CHECK(q.output(delta_star(q, a, w)) != q.output(delta_star(q, b, w)));
            }
    }
}

TEST_CASE("class_of maps reachable originals onto their quotient state") {
    Machine expanded = expand_product(lockstep_pair());
    MinimizedMachine minimized = minimize(expanded);
    CHECK(minimized.class_of.size() == 2);  // only the reachable tuples appear
    for (const auto& [original, cls] : minimized.class_of)
        CHECK(expanded.output(original) == minimized.machine.output(cls));
}

TEST_CASE("equivalence is reflexive and separates different counters") {
    Machine t4 = examples::make_counter(4);
    CHECK(equivalent(t4, t4).equivalent);

    StringFunction t8 = representing_function(examples::make_counter(8));
    Machine remapped = *remap_output(t8, [](Symbol s) {
                            return Symbol::make(std::to_string(std::stoull(s.name()) % 4));
                        }).machine();
    CHECK(equivalent(t4, remapped).equivalent);

    EquivalenceResult split = equivalent(examples::make_counter(2), examples::make_counter(3));
    CHECK_FALSE(split.equivalent);
    REQUIRE(split.counterexample);
    CHECK(render_word(*split.counterexample) == "tick tick");  // outputs 0 vs 2
}

TEST_CASE("bounded equivalence stops at the bound") {
    // counters mod 5 and mod 6 first disagree after five ticks
    Machine t5 = examples::make_counter(5);
    Machine t6 = examples::make_counter(6);
    CHECK(equivalent(t5, t6, 4).equivalent);
    EquivalenceResult at5 = equivalent(t5, t6, 5);
    CHECK_FALSE(at5.equivalent);
    CHECK(at5.counterexample->size() == 5);
    CHECK_FALSE(equivalent(t5, t6).equivalent);
}

TEST_CASE("equivalence needs a shared alphabet") {
    Machine t2 = examples::make_counter(2);
    Machine cell = examples::make_cell({Symbol::parse("a")});
    CHECK_THROWS_AS(equivalent(t2, cell), AlphabetMismatchError);
}
