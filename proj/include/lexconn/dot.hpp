#ifndef LEXCONN_DOT_HPP
#define LEXCONN_DOT_HPP

#include <array>
#include <map>
#include <string>

#include "product.hpp"
#include "steiner.hpp"

namespace lexconn {

/// Graphviz rendering of a packing in G∘H: one colour per tree, one-type
/// edges solid, two-type dashed, three-type dotted. Unused product edges are
/// drawn light grey. Vertices are labelled "(g,h)".
inline std::string to_dot(const ProductGraph& p, const TreePacking& pack)
{
    static constexpr std::array palette {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
        "#7f7f7f"};
    auto style = [&](const Edge& e) {
        switch (p.classify(e)) {
        case EdgeType::OneType:
            return "solid";
        case EdgeType::TwoType:
            return "dashed";
        case EdgeType::ThreeType:
            return "dotted";
        }
        return "solid";
    };
    std::map<Edge, int> owner;
    for (int i = 0; i < pack.size(); ++i)
        for (const auto& e : pack.trees[static_cast<std::size_t>(i)].edges)
            owner[e.normalized()] = i;

    std::string out = "graph packing {\n  node [shape=circle, fontsize=10];\n";
    for (Vertex v = 0; v < p.graph().order(); ++v) {
        const bool terminal = std::find(pack.terminals.begin(), pack.terminals.end(), v) != pack.terminals.end();
        out += "  " + std::to_string(v) + " [label=\"" + to_string(p.coords(v)) + "\"" + (terminal ? ", shape=doublecircle" : "") + "];\n";
    }
    for (const auto& e : p.graph().edges()) {
        out += "  " + std::to_string(e.u) + " -- " + std::to_string(e.v) + " [style=" + style(e);
        auto it = owner.find(e.normalized());
        if (it != owner.end())
            out += std::string(", color=\"") + palette[static_cast<std::size_t>(it->second) % palette.size()] + "\", penwidth=2, label=\"T"
                + std::to_string(it->second + 1) + "\"";
        else
            out += ", color=\"#dddddd\"";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

} // namespace lexconn

#endif // LEXCONN_DOT_HPP
