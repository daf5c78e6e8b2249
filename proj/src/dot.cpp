/* dot.cpp */

#include "rmoore/dot.hpp"

#include <sstream>

namespace rmoore {

namespace {

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const Machine& m, const std::string& graph_name) {
    const std::size_t n = m.state_count();
    std::ostringstream out;
    out << "digraph " << graph_name << " {\n";
    out << "  rankdir=LR;\n";
    out << "  __start [shape=point, label=\"\"];\n";
    out << "  __start -> q" << m.start() << ";\n";
    for (std::size_t s = 0; s < n; ++s)
        out << "  q" << s << " [shape=circle, label=\"" << s << " / "
            << escape(m.output(s).str()) << "\"];\n";
    for (std::size_t s = 0; s < n; ++s)
        for (Symbol a : m.alphabet().symbols())
            out << "  q" << s << " -> q" << m.next(s, a) << " [label=\""
                << escape(a.str()) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace rmoore
