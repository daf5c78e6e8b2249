/* rmoore_main.cpp -- the rmoore command line tool */

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "rmoore/cli.hpp"
#include "rmoore/monoid.hpp"

namespace {

std::size_t monoid_cap_from_env() {
    const char* value = std::getenv("RMOORE_MONOID_CAP");
    if (!value) return rmoore::kDefaultMonoidCap;
    try {
        return std::stoull(value);
    } catch (...) {
        std::cerr << "rmoore: ignoring bad RMOORE_MONOID_CAP \"" << value << "\"\n";
        return rmoore::kDefaultMonoidCap;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compositional Moore machine toolkit"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string target;
    std::vector<std::string> word_tokens;
    bool trace = false;
    std::string factor_path;
    std::size_t max_len = 6;
    std::optional<std::string> against;
    std::optional<std::string> out_path;
    std::string dot_path;

    auto* run = app.add_subcommand("run", "evaluate a target on a word");
    run->add_option("spec", spec_path, "spec file")->required();
    run->add_option("target", target, "target name")->required();
    run->add_option("word", word_tokens, "input word as rendered symbols");
    run->add_flag("--trace", trace, "print per-step factor words");
    run->add_option("--factor", factor_path, "drill into a nested product, e.g. 2/1");

    auto* check = app.add_subcommand("check", "cross-check the two evaluation routes");
    check->add_option("spec", spec_path, "spec file")->required();
    check->add_option("target", target, "product to check")->required();
    check->add_option("--max-len", max_len, "word length bound")->capture_default_str();
    check->add_option("--against", against,
                      "compare against another target's behavior instead of the expansion");

    auto* minimize = app.add_subcommand("minimize", "print the minimized machine");
    minimize->add_option("spec", spec_path, "spec file")->required();
    minimize->add_option("target", target, "target name")->required();
    minimize->add_option("--out", out_path, "also write the table as a spec file");

    auto* monoid = app.add_subcommand("monoid", "print the transition monoid");
    monoid->add_option("spec", spec_path, "spec file")->required();
    monoid->add_option("target", target, "target name")->required();

    auto* dot = app.add_subcommand("dot", "write the minimized machine as Graphviz DOT");
    dot->add_option("spec", spec_path, "spec file")->required();
    dot->add_option("target", target, "target name")->required();
    dot->add_option("out", dot_path, "output path, or - for stdout")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return rmoore::cli::cmd_run(spec_path, target, word_tokens, trace, factor_path,
                                    std::cout, std::cerr);
    if (check->parsed())
        return rmoore::cli::cmd_check(spec_path, target, max_len, against, std::cout,
                                      std::cerr);
    if (minimize->parsed())
        return rmoore::cli::cmd_minimize(spec_path, target, out_path, std::cout, std::cerr);
    if (monoid->parsed())
        return rmoore::cli::cmd_monoid(spec_path, target, monoid_cap_from_env(), std::cout,
                                       std::cerr);
    if (dot->parsed())
        return rmoore::cli::cmd_dot(spec_path, target, dot_path, std::cout, std::cerr);
    return 0;
}
