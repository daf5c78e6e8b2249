/* test_cli.cpp -- the rmoore tool: exit codes, output, determinism
 *
 * Spawns the built binary (RMOORE_BIN) against the shipped fixtures.
 */

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"

using namespace rmoore::test;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* bin = std::getenv("RMOORE_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = env_prefix + "\"" + bin + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fixture(const std::string& name) { return fixture_dir() + "/" + name; }
std::string test_fixture(const std::string& name) { return test_fixture_dir() + "/" + name; }

}  // namespace

TEST_CASE("run prints the final output and traces the factor words") {
    CmdResult plain = run_cli("run " + fixture("stack3.json") + " stack3 'PUSH[a]' POP");
    CHECK(plain.exit_code == 0);
    CHECK(plain.out == "tuple[EMPTY,EMPTY,EMPTY]\n");

    CmdResult traced =
        run_cli("run " + fixture("stack3.json") + " stack3 'PUSH[a]' POP --trace");
    CHECK(traced.exit_code == 0);
    CHECK(traced.out.find("step 1: PUSH[a] -> tuple[a,EMPTY,EMPTY]") != std::string::npos);
    CHECK(traced.out.find("step 2: POP -> tuple[EMPTY,EMPTY,EMPTY]") != std::string::npos);
    CHECK(traced.out.find("u1 = a") != std::string::npos);
}

TEST_CASE("run on the empty word prints the initial output with no trace rows") {
    CmdResult result = run_cli("run " + fixture("ripple2.json") + " g2 --trace");
    // no word arguments and no matching directive word is the empty word
    CmdResult h2 = run_cli("run " + fixture("ripple2.json") + " h2");
    CHECK(h2.exit_code == 0);
    // h2 has a run directive with three ticks
    CHECK(h2.out == "3\n");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "tuple[0,0]\n");
    CHECK(result.out.find("step") == std::string::npos);
}

TEST_CASE("run rejects foreign symbols and unknown targets") {
    CHECK(run_cli("run " + fixture("stack3.json") + " stack3 zap").exit_code == 3);
    CHECK(run_cli("run " + fixture("stack3.json") + " nope POP").exit_code == 2);
    CHECK(run_cli("run /no/such/file.json t POP").exit_code == 1);
}

TEST_CASE("run drills into nested factors by path") {
    CmdResult result =
        run_cli("run " + fixture("nested.json") + " outer 'PUSH[a]' --trace --factor 1");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("u1/1 = a") != std::string::npos);
    CHECK(result.out.find("u1/2 = EMPTY") != std::string::npos);
    CHECK(run_cli("run " + fixture("nested.json") + " outer 'PUSH[a]' --trace --factor 2")
              .exit_code == 2);  // factor 2 is a plain machine
}

TEST_CASE("check agrees on well-formed products") {
    CmdResult result = run_cli("check " + fixture("ripple2.json") + " g2 --max-len 8");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "agreement on 9 words (length <= 8)\n");
    // a machine target cannot be checked
    CHECK(run_cli("check " + fixture("counter5.json") + " t5").exit_code == 5);
}

TEST_CASE("check against a reference exposes corrupted wiring") {
    std::string corrupt = test_fixture("stack3_corrupt.json");
    // the corrupted product still satisfies the dual-route equality
    CHECK(run_cli("check " + corrupt + " stack3_corrupt --max-len 4").exit_code == 0);
    // but diverges from the real stack within three letters
    CmdResult vs = run_cli("check " + corrupt +
                           " stack3_corrupt --against stack3_ref --max-len 4");
    CHECK(vs.exit_code == 4);
    CHECK(vs.out.find("divergence on \"PUSH[a] POP\"") != std::string::npos);
}

TEST_CASE("minimize reports the state counts and the table") {
    CmdResult result = run_cli("minimize " + fixture("counter5.json") + " t5");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("states: 5 -> 5") == 0);
    CHECK(result.out.find("q0 / 0: tick->q1") != std::string::npos);

    CHECK(run_cli("minimize " + fixture("cell.json") + " len").exit_code == 5);
}

TEST_CASE("minimize can write the quotient back as a spec") {
    fs::path out = fs::temp_directory_path() / "rmoore_min_t5.json";
    CmdResult result =
        run_cli("minimize " + fixture("counter5.json") + " t5 --out " + out.string());
    CHECK(result.exit_code == 0);
    CmdResult reread = run_cli("run " + out.string() + " t5_min tick tick");
    CHECK(reread.exit_code == 0);
    CHECK(reread.out == "2\n");
    fs::remove(out);
}

TEST_CASE("monoid prints the classification and cayley table") {
    CmdResult result = run_cli("monoid " + fixture("counter5.json") + " t5");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("elements: 5") == 0);
    CHECK(result.out.find("is_group: true") != std::string::npos);
    CHECK(result.out.find("is_aperiodic: false") != std::string::npos);
    CHECK(result.out.find("e1 = tick") != std::string::npos);
    CHECK(result.out.find("cayley:") != std::string::npos);

    CmdResult cell = run_cli("monoid " + fixture("cell.json") + " cell");
    CHECK(cell.exit_code == 0);
    CHECK(cell.out.find("elements: 4") == 0);
    CHECK(cell.out.find("is_aperiodic: true") != std::string::npos);

    CHECK(run_cli("monoid " + fixture("counter5.json") + " t5",
                  "RMOORE_MONOID_CAP=3 ").exit_code == 6);
    CHECK(run_cli("monoid " + fixture("cell.json") + " len").exit_code == 5);
}

TEST_CASE("dot output is deterministic and marks the start") {
    CmdResult first = run_cli("dot " + fixture("counter5.json") + " t5 -");
    CmdResult second = run_cli("dot " + fixture("counter5.json") + " t5 -");
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("digraph rmoore {") == 0);
    CHECK(first.out.find("__start -> q0;") != std::string::npos);
    CHECK(first.out.find("q4 -> q0 [label=\"tick\"];") != std::string::npos);

    fs::path out = fs::temp_directory_path() / "rmoore_t5.dot";
    CHECK(run_cli("dot " + fixture("counter5.json") + " t5 " + out.string()).exit_code == 0);
    CHECK(read_file(out.string()) == first.out);
    fs::remove(out);
}

TEST_CASE("repeated invocations are byte-identical") {
    for (const char* args : {"run stack3.json stack3 'PUSH[b]' 'PUSH[a]' --trace",
                             "monoid stack3.json stack3", "minimize stack3.json stack3"}) {
        std::string full = std::string(args);
        auto pos = full.find("stack3.json");
        full = full.substr(0, pos) + fixture("stack3.json") + full.substr(pos + 11);
        CmdResult a = run_cli(full);
        CmdResult b = run_cli(full);
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
    }
}
