/* symbol.cpp -- symbol interner and the name[p1,...,pk] grammar */

#include "rmoore/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace rmoore {

namespace {

struct SymbolData {
    std::string name;
    std::vector<Symbol> params;
    std::string rendered;
};

bool is_token_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           c == '-' || c == '+';
}

}  // namespace

struct SymbolInterner {
    std::mutex mutex;
    std::vector<std::unique_ptr<SymbolData>> table;
    std::unordered_map<std::string_view, std::uint32_t> by_rendering;

    SymbolInterner() { intern("_", {}); }  // id 0: the placeholder

    static SymbolInterner& instance() {
        static SymbolInterner interner;
        return interner;
    }

    Symbol intern(std::string name, std::vector<Symbol> params) {
        std::string rendered = name;
        if (!params.empty()) {
            rendered += '[';
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (i) rendered += ',';
                rendered += params[i].str();
            }
            rendered += ']';
        }
        std::lock_guard lock(mutex);
        if (auto it = by_rendering.find(rendered); it != by_rendering.end())
            return Symbol(it->second);
        auto data = std::make_unique<SymbolData>(
            SymbolData{std::move(name), std::move(params), std::move(rendered)});
        auto id = static_cast<std::uint32_t>(table.size());
        by_rendering.emplace(data->rendered, id);
        table.push_back(std::move(data));
        return Symbol(id);
    }

    const SymbolData& get(std::uint32_t id) {
        std::lock_guard lock(mutex);
        return *table[id];
    }
};

Symbol::Symbol() : id_(0) {
    SymbolInterner::instance();  // the placeholder is pre-interned at id 0
}

Symbol Symbol::make(std::string_view name, std::vector<Symbol> params) {
    if (name.empty()) throw UnknownSymbolError("symbol name must not be empty");
    for (char c : name) {
        if (!is_token_char(c))
            throw UnknownSymbolError("invalid character '" + std::string(1, c) +
                                     "' in symbol name \"" + std::string(name) + "\"");
    }
    return SymbolInterner::instance().intern(std::string(name), std::move(params));
}

const std::string& Symbol::name() const { return SymbolInterner::instance().get(id_).name; }
const std::vector<Symbol>& Symbol::params() const {
    return SymbolInterner::instance().get(id_).params;
}
const std::string& Symbol::str() const { return SymbolInterner::instance().get(id_).rendered; }

namespace {

// symbol := token ('[' symbol (',' symbol)* ']')?
Symbol parse_symbol_at(std::string_view text, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < text.size() && is_token_char(text[pos])) ++pos;
    if (pos == start)
        throw UnknownSymbolError("expected symbol at offset " + std::to_string(pos) +
                                 " in \"" + std::string(text) + "\"");
    std::string name(text.substr(start, pos - start));
    std::vector<Symbol> params;
    if (pos < text.size() && text[pos] == '[') {
        ++pos;
        while (true) {
            params.push_back(parse_symbol_at(text, pos));
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos >= text.size() || text[pos] != ']')
            throw UnknownSymbolError("missing ']' in \"" + std::string(text) + "\"");
        ++pos;
    }
    return Symbol::make(name, std::move(params));
}

}  // namespace

Symbol Symbol::parse(std::string_view text) {
    std::size_t pos = 0;
    Symbol s = parse_symbol_at(text, pos);
    if (pos != text.size())
        throw UnknownSymbolError("trailing characters after symbol in \"" +
                                 std::string(text) + "\"");
    return s;
}

Word parse_word(std::string_view text) {
    Word w;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
            ++end;
        w.push_back(Symbol::parse(text.substr(pos, end - pos)));
        pos = end;
    }
    return w;
}

std::string render_word(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i].str();
    }
    return out;
}

struct Alphabet::Data {
    std::vector<Symbol> symbols;
    std::unordered_map<std::uint32_t, std::uint32_t> index;
};

Alphabet::Alphabet() : data_(std::make_shared<Data>()) {}

Alphabet::Alphabet(std::vector<Symbol> symbols) {
    auto data = std::make_shared<Data>();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        auto [it, fresh] = data->index.emplace(symbols[i].id(), static_cast<std::uint32_t>(i));
        if (!fresh)
            throw UnknownSymbolError("duplicate symbol \"" + symbols[i].str() +
                                     "\" in alphabet");
    }
    data->symbols = std::move(symbols);
    data_ = std::move(data);
}

Alphabet Alphabet::parse(std::string_view space_separated) {
    return Alphabet(parse_word(space_separated));
}

std::size_t Alphabet::size() const { return data_->symbols.size(); }
bool Alphabet::contains(Symbol s) const { return data_->index.count(s.id()) != 0; }

std::uint32_t Alphabet::index_of(Symbol s) const {
    auto it = data_->index.find(s.id());
    if (it == data_->index.end())
        throw UnknownSymbolError("symbol \"" + s.str() + "\" is not in the alphabet");
    return it->second;
}

std::optional<std::uint32_t> Alphabet::find(Symbol s) const {
    auto it = data_->index.find(s.id());
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(std::size_t i) const { return data_->symbols.at(i); }
const std::vector<Symbol>& Alphabet::symbols() const { return data_->symbols; }

bool Alphabet::operator==(const Alphabet& other) const {
    return data_ == other.data_ || data_->symbols == other.data_->symbols;
}

std::string ParseIssue::str() const {
    std::ostringstream out;
    if (line > 0) out << "line " << line << ", column " << column << ": ";
    if (!path.empty()) out << path << ": ";
    out << message;
    return out.str();
}

SpecParseError::SpecParseError(std::vector<ParseIssue> issues)
    : Error(join(issues)), issues_(std::move(issues)) {}

std::string SpecParseError::join(const std::vector<ParseIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) out += '\n';
        out += issue.str();
    }
    return out.empty() ? "spec parse error" : out;
}

}  // namespace rmoore
