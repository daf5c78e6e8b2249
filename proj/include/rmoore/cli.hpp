/* cli.hpp -- command implementations behind the rmoore tool
 *
 * Each command returns its process exit code and writes to the given
 * streams, so the tool surface is unit-testable without spawning. Exit
 * codes: 0 ok, 1 spec parse/compile error, 2 unknown target (or factor
 * path), 3 bad word, 4 divergence found, 5 infinite/non-product target,
 * 6 monoid cap exceeded.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmoore/monoid.hpp"
#include "rmoore/product.hpp"

namespace rmoore {
namespace cli {

struct RunReport {
    Word word;
    std::vector<Symbol> step_outputs;  // one entry per consumed symbol
    Symbol final_output;
    /// Rendered trace lines, step-major; empty without --trace.
    std::vector<std::string> trace;
    int exit_status = 0;
};

int cmd_run(const std::string& spec_path, const std::string& target,
            const std::vector<std::string>& word_tokens, bool trace,
            const std::string& factor_path, std::ostream& out, std::ostream& err);

int cmd_check(const std::string& spec_path, const std::string& target, std::size_t max_len,
              const std::optional<std::string>& against, std::ostream& out,
              std::ostream& err);

int cmd_minimize(const std::string& spec_path, const std::string& target,
                 const std::optional<std::string>& out_path, std::ostream& out,
                 std::ostream& err);

int cmd_monoid(const std::string& spec_path, const std::string& target, std::size_t cap,
               std::ostream& out, std::ostream& err);

int cmd_dot(const std::string& spec_path, const std::string& target,
            const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace rmoore
