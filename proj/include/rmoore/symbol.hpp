/* symbol.hpp -- interned symbols, alphabets and words
 *
 * Symbols are the elements of both input and output alphabets. A symbol is
 * a name plus an optional parameter list (itself made of symbols), written
 * name[p1,...,pk]. Symbols are interned process-wide so equality and
 * hashing are O(1); the rendered form round-trips through parse().
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmoore/errors.hpp"

namespace rmoore {

class Symbol {
public:
    /// The placeholder symbol "_".
    Symbol();
    static Symbol make(std::string_view name, std::vector<Symbol> params = {});
    static Symbol parse(std::string_view text);

    const std::string& name() const;
    const std::vector<Symbol>& params() const;
    /// Canonical rendering name[p1,...,pk]; just the name when there are
    /// no parameters.
    const std::string& str() const;

    bool operator==(const Symbol& other) const { return id_ == other.id_; }
    bool operator!=(const Symbol& other) const { return id_ != other.id_; }

    std::uint32_t id() const { return id_; }

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_;
    friend struct SymbolInterner;
};

using Word = std::vector<Symbol>;

/// Whitespace-separated rendered symbols; "" parses to the empty word.
Word parse_word(std::string_view text);
std::string render_word(const Word& w);

inline Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/// A finite ordered set of symbols. Iteration order is declaration order.
class Alphabet {
public:
    Alphabet();
    explicit Alphabet(std::vector<Symbol> symbols);
    static Alphabet parse(std::string_view space_separated);

    std::size_t size() const;
    bool contains(Symbol s) const;
    /// Position of s in declaration order; throws UnknownSymbolError.
    std::uint32_t index_of(Symbol s) const;
    std::optional<std::uint32_t> find(Symbol s) const;
    Symbol at(std::size_t i) const;
    const std::vector<Symbol>& symbols() const;

    bool operator==(const Alphabet& other) const;

private:
    struct Data;
    std::shared_ptr<const Data> data_;
};

}  // namespace rmoore

template <>
struct std::hash<rmoore::Symbol> {
    std::size_t operator()(const rmoore::Symbol& s) const noexcept {
        return std::hash<std::uint32_t>{}(s.id());
    }
};
