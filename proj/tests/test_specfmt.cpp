/* test_specfmt.cpp -- the JSON spec format: parse, render, compile
 *
 * Set RMOORE_REGEN=1 to rewrite the shipped fixtures in canonical form
 * instead of asserting byte equality.
 */

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "rmoore/examples.hpp"
#include "rmoore/minimize.hpp"
#include "rmoore/specfmt.hpp"

using namespace rmoore;
using namespace rmoore::test;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> fixture_files() {
    std::vector<std::string> files;
    for (const auto& dir : {fixture_dir(), test_fixture_dir()})
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

TEST_CASE("shipped fixtures are canonical and round-trip byte-exact") {
    bool regen = std::getenv("RMOORE_REGEN") != nullptr;
    for (const std::string& path : fixture_files()) {
        CAPTURE(path);
        std::string bytes = read_file(path);
        std::string canonical = specfmt::render(specfmt::parse(bytes));
        if (regen && canonical != bytes) {
            std::ofstream out(path, std::ios::binary);
            out << canonical;
            continue;
        }
        CHECK(canonical == bytes);
        // canonical form is a fixpoint
        CHECK(specfmt::render(specfmt::parse(canonical)) == canonical);
    }
}

TEST_CASE("parse and render invert each other on a programmatic document") {
    specfmt::SpecDocument doc;
    doc.alphabets.push_back({"bits", {Symbol::parse("0"), Symbol::parse("1")}});

    specfmt::TableMachineDef machine;
    machine.alphabet = std::string("bits");
    machine.start = 1;
    machine.states.push_back({"even", Symbol::parse("yes"), {0, 1}});
    machine.states.push_back({"", Symbol::parse("no"), {1, 0}});
    doc.machines.push_back({"parity", std::move(machine)});

    specfmt::RuleProductDef product;
    product.alphabet = std::vector<Symbol>{Symbol::parse("0"), Symbol::parse("1")};
    product.factors = {"parity", "parity"};
    ConnectionRule rule;
    rule.factor = 2;
    rule.input = SymbolPattern::parse("1");
    rule.guards.push_back(Guard{FeedbackRef::absolute(1), true, Symbol::parse("yes")});
    rule.guards.push_back(Guard{FeedbackRef::rel(-1), false, FeedbackRef::absolute(2)});
    rule.emit = {EmitItem::lit(Symbol::parse("1")), EmitItem::feedback(FeedbackRef::rel(-1))};
    product.rules.push_back(std::move(rule));
    product.output.kind = OutputMap::Kind::weighted_sum;
    product.output.base = 3;
    doc.products.push_back({"pair", std::move(product)});

    doc.run.push_back({"pair", parse_word("1 0 1")});

    std::string text = specfmt::render(doc);
    specfmt::SpecDocument back = specfmt::parse(text);
    CHECK(specfmt::render(back) == text);
}

TEST_CASE("an empty document parses to an empty spec") {
    specfmt::SpecDocument doc = specfmt::parse("{\"specfmt_version\": 1}");
    CHECK(doc.alphabets.empty());
    CHECK(doc.machines.empty());
    CHECK(doc.products.empty());
    CHECK(doc.run.empty());
}

TEST_CASE("unresolved names are reported with the offender") {
    std::string text = R"({
      "specfmt_version": 1,
      "products": [
        {"name": "p", "alphabet": ["x"], "factors": ["foo"],
         "rules": [], "output": {"kind": "tuple"}}
      ]
    })";
    try {
        specfmt::parse(text);
        FAIL("expected a parse error");
    } catch (const SpecParseError& e) {
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry a position") {
    try {
        specfmt::parse("{\n  \"specfmt_version\": 1,\n}");
        FAIL("expected a parse error");
    } catch (const SpecParseError& e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].line == 3);
    }
}

TEST_CASE("validation collects issues across the document") {
    std::string text = R"({
      "specfmt_version": 1,
      "machines": [
        {"name": "m", "alphabet": "nowhere", "states": [{"output": "x", "next": [0]}]},
        {"name": "m", "builtin": "counter", "params": {"n": 2}}
      ],
      "run": [{"target": "ghost", "word": "x"}]
    })";
    try {
        specfmt::parse(text);
        FAIL("expected a parse error");
    } catch (const SpecParseError& e) {
        CHECK(e.issues().size() >= 3);  // bad alphabet ref, duplicate name, ghost target
    }
}

TEST_CASE("guard and emission references must stay inside the factor list") {
    std::string text = R"({
      "specfmt_version": 1,
      "machines": [{"name": "t", "builtin": "counter", "params": {"n": 2}}],
      "products": [
        {"name": "p", "alphabet": ["tick"], "factors": ["t"],
         "rules": [{"factor": 1, "input": "any",
                    "guards": [{"out": 5, "op": "eq", "value": "0"}], "emit": []}],
         "output": {"kind": "tuple"}}
      ]
    })";
    CHECK_THROWS_AS(specfmt::parse(text), SpecParseError);
}

TEST_CASE("emissions must bind their parameters") {
    std::string text = R"({
      "specfmt_version": 1,
      "machines": [{"name": "t", "builtin": "counter", "params": {"n": 2}}],
      "products": [
        {"name": "p", "alphabet": ["tick"], "factors": ["t"],
         "rules": [{"factor": 1, "input": "any", "emit": ["?v"]}],
         "output": {"kind": "tuple"}}
      ]
    })";
    CHECK_THROWS_AS(specfmt::parse(text), SpecParseError);
}

TEST_CASE("the stack fixture compiles to the constructed stack's behavior") {
    auto doc = specfmt::parse(read_file(fixture_dir() + "/stack3.json"));
    auto compiled = specfmt::compile(doc);
    const auto* target = compiled.find("stack3");
    REQUIRE(target);
    REQUIRE(std::holds_alternative<ProductDef>(*target));
    const ProductDef& fixture_stack = std::get<ProductDef>(*target);

    ProductDef built = examples::make_stack({3, {Symbol::parse("a"), Symbol::parse("b")}});
    CHECK(equivalent(expand_product(fixture_stack), expand_product(built)).equivalent);
    CHECK(check_theorem1(fixture_stack, 5).ok);
    CHECK_FALSE(is_cascade(fixture_stack).cascade);
}

TEST_CASE("the ripple fixture keeps its rules inspectable through compile") {
    auto compiled = specfmt::compile(specfmt::parse(read_file(fixture_dir() + "/ripple2.json")));
    const auto* g2 = compiled.find("g2");
    REQUIRE(g2);
    CHECK(is_cascade(std::get<ProductDef>(*g2)).cascade);
    const auto* h2 = compiled.find("h2");
    REQUIRE(h2);
    CHECK(equivalent(expand_product(std::get<ProductDef>(*h2)),
                     examples::make_counter(4)).equivalent);
}

TEST_CASE("the nested fixture compiles products as factors") {
    auto compiled = specfmt::compile(specfmt::parse(read_file(fixture_dir() + "/nested.json")));
    const auto* outer = compiled.find("outer");
    REQUIRE(outer);
    const ProductDef& p = std::get<ProductDef>(*outer);
    CHECK_FALSE(p.factors()[0].is_machine());
    CHECK(check_theorem1(p, 5).ok);
}

TEST_CASE("builtin parameters are validated at compile time") {
    std::string text = R"({
      "specfmt_version": 1,
      "machines": [{"name": "bad", "builtin": "counter", "params": {"n": 0}}]
    })";
    specfmt::SpecDocument doc = specfmt::parse(text);
    CHECK_THROWS_AS(specfmt::compile(doc), BadParameterError);

    std::string unknown = R"({
      "specfmt_version": 1,
      "machines": [{"name": "bad", "builtin": "cell", "params": {"wat": 1}}]
    })";
    CHECK_THROWS_AS(specfmt::compile(specfmt::parse(unknown)), BadParameterError);
}

TEST_CASE("literal emissions are type-checked against the factor alphabet") {
    std::string text = R"({
      "specfmt_version": 1,
      "machines": [{"name": "t", "builtin": "counter", "params": {"n": 2}}],
      "products": [
        {"name": "p", "alphabet": ["x"], "factors": ["t"],
         "rules": [{"factor": 1, "input": "any", "emit": ["zap"]}],
         "output": {"kind": "tuple"}}
      ]
    })";
    specfmt::SpecDocument doc = specfmt::parse(text);
    CHECK_THROWS_AS(specfmt::compile(doc), AlphabetMismatchError);
}

TEST_CASE("the length builtin compiles to a generator-backed machine") {
    auto compiled = specfmt::compile(specfmt::parse(read_file(fixture_dir() + "/cell.json")));
    const auto* len = compiled.find("len");
    REQUIRE(len);
    REQUIRE(std::holds_alternative<Machine>(*len));
    CHECK_FALSE(std::get<Machine>(*len).is_table());
}
