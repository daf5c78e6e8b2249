/* errors.hpp -- exception types shared across the library */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmoore {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A word or emission contained a symbol outside the relevant alphabet.
class UnknownSymbolError : public Error {
public:
    using Error::Error;
};

class UnknownStateError : public Error {
public:
    using Error::Error;
};

/// A finite-only operation was applied to a generator-backed machine or
/// function with no finite table.
class InfiniteMachineError : public Error {
public:
    using Error::Error;
};

/// Two definitions disagree on their alphabet, or a connection map emitted
/// a symbol foreign to the target factor.
class AlphabetMismatchError : public Error {
public:
    using Error::Error;
};

/// Static dependency analysis was requested on an opaque (callable-only)
/// connection map.
class OpaqueConnectionError : public Error {
public:
    using Error::Error;
};

class MonoidSizeError : public Error {
public:
    using Error::Error;
};

class BadParameterError : public Error {
public:
    using Error::Error;
};

/// Word enumeration exceeded its budget; carries how far it got.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, std::uint64_t words_checked)
        : Error(what), words_checked(words_checked) {}
    std::uint64_t words_checked;
};

struct ParseIssue {
    std::size_t line = 0;  // 1-based; 0 when the issue has no text position
    std::size_t column = 0;
    std::string path;  // document path such as "machines[2].states[0]"
    std::string message;

    std::string str() const;
};

class SpecParseError : public Error {
public:
    explicit SpecParseError(std::vector<ParseIssue> issues);
    const std::vector<ParseIssue>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<ParseIssue>& issues);
    std::vector<ParseIssue> issues_;
};

}  // namespace rmoore
