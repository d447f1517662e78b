#ifndef LEXCONN_PRODUCT_HPP
#define LEXCONN_PRODUCT_HPP

#include <string>
#include <vector>

#include "graph.hpp"

namespace lexconn {

/// Product vertex (g, h): g indexes the first factor, h the second.
struct ProductVertex {
    Vertex g {};
    Vertex h {};

    friend bool operator==(const ProductVertex&, const ProductVertex&) = default;
    friend auto operator<=>(const ProductVertex&, const ProductVertex&) = default;
};

inline std::string to_string(ProductVertex p) { return "(" + std::to_string(p.g) + "," + std::to_string(p.h) + ")"; }

/// One-type: G-edge, same H coordinate. Two-type: same G vertex, H-edge.
/// Three-type: G-edge, different H coordinates.
enum class EdgeType { OneType, TwoType, ThreeType };

inline const char* to_string(EdgeType t)
{
    switch (t) {
    case EdgeType::OneType:
        return "one";
    case EdgeType::TwoType:
        return "two";
    case EdgeType::ThreeType:
        return "three";
    }
    return "?";
}

/// Lexicographic product G∘H. Vertex (g,h) has flat index g*n2 + h, so
/// every H-layer is a contiguous index range.
class ProductGraph {
public:
    ProductGraph(Graph g, Graph h) : g_(std::move(g)), h_(std::move(h)), graph_(build(g_, h_)) {}

    [[nodiscard]] const Graph& graph() const noexcept { return graph_; }
    [[nodiscard]] const Graph& first() const noexcept { return g_; }
    [[nodiscard]] const Graph& second() const noexcept { return h_; }
    [[nodiscard]] int n1() const noexcept { return g_.order(); }
    [[nodiscard]] int n2() const noexcept { return h_.order(); }

    [[nodiscard]] Vertex flat(Vertex g, Vertex h) const
    {
        if (!g_.contains(g) || !h_.contains(h))
            throw GraphError("product vertex " + lexconn::to_string(ProductVertex {g, h}) + " out of range");
        return g * n2() + h;
    }
    [[nodiscard]] Vertex flat(ProductVertex p) const { return flat(p.g, p.h); }

    [[nodiscard]] ProductVertex coords(Vertex v) const
    {
        if (!graph_.contains(v))
            throw GraphError("product vertex " + std::to_string(v) + " out of range");
        return {v / n2(), v % n2()};
    }

    [[nodiscard]] EdgeType classify(Vertex a, Vertex b) const
    {
        if (!graph_.has_edge(a, b))
            throw GraphError("(" + std::to_string(a) + "," + std::to_string(b) + ") is not a product edge");
        const auto pa = coords(a);
        const auto pb = coords(b);
        if (pa.g == pb.g)
            return EdgeType::TwoType;
        return pa.h == pb.h ? EdgeType::OneType : EdgeType::ThreeType;
    }
    [[nodiscard]] EdgeType classify(Edge e) const { return classify(e.u, e.v); }
    [[nodiscard]] EdgeType classify(EdgeId id) const { return classify(graph_.edge(id)); }

    /// H(u): the copy of H over G-vertex u.
    [[nodiscard]] std::vector<Vertex> h_layer(Vertex u) const
    {
        if (!g_.contains(u))
            throw GraphError("G-vertex " + std::to_string(u) + " out of range");
        std::vector<Vertex> out;
        for (Vertex h = 0; h < n2(); ++h)
            out.push_back(u * n2() + h);
        return out;
    }

    /// G(v): the copy of G at H-coordinate v.
    [[nodiscard]] std::vector<Vertex> g_layer(Vertex v) const
    {
        if (!h_.contains(v))
            throw GraphError("H-vertex " + std::to_string(v) + " out of range");
        std::vector<Vertex> out;
        for (Vertex g = 0; g < n1(); ++g)
            out.push_back(g * n2() + v);
        return out;
    }

    /// The G-edge an inter-layer product edge lies over, or nullopt for two-type edges.
    [[nodiscard]] std::optional<Edge> g_projection(Edge e) const
    {
        const auto a = coords(e.u).g;
        const auto b = coords(e.v).g;
        if (a == b)
            return std::nullopt;
        return make_edge(a, b);
    }

private:
    static Graph build(const Graph& g, const Graph& h)
    {
        const int n2 = h.order();
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(g.size() * n2 * n2 + g.order() * h.size()));
        for (Vertex u = 0; u < g.order(); ++u)
            for (const auto& e : h.sorted_edges())
                edges.push_back({u * n2 + e.u, u * n2 + e.v});
        for (const auto& e : g.sorted_edges())
            for (Vertex a = 0; a < n2; ++a)
                for (Vertex b = 0; b < n2; ++b)
                    edges.push_back({e.u * n2 + a, e.v * n2 + b});
        std::sort(edges.begin(), edges.end());
        return Graph(g.order() * n2, std::move(edges));
    }

    Graph g_;
    Graph h_;
    Graph graph_;
};

inline ProductGraph lex_product(const Graph& g, const Graph& h) { return ProductGraph(g, h); }

inline EdgeType classify_edge(const ProductGraph& p, Edge e) { return p.classify(e); }

/// K_W: the product restricted to the H-layers over W, keeping only the
/// inter-layer (one- and three-type) edges. Re-indexed; `to_product`
/// maps local ids back to flat product ids.
struct LayerSubgraph {
    Graph graph;
    std::vector<Vertex> to_product;
};

inline LayerSubgraph k_subgraph(const ProductGraph& p, std::span<const Vertex> w)
{
    if (w.size() < 2)
        throw GraphError("k_subgraph needs at least two G-vertices");
    std::vector<Vertex> layers(w.begin(), w.end());
    std::sort(layers.begin(), layers.end());
    if (std::adjacent_find(layers.begin(), layers.end()) != layers.end())
        throw GraphError("k_subgraph: repeated G-vertex");
    const int n2 = p.n2();
    std::vector<Vertex> to_product;
    std::vector<int> local(static_cast<std::size_t>(p.graph().order()), -1);
    for (auto u : layers)
        for (auto v : p.h_layer(u)) {
            local[static_cast<std::size_t>(v)] = static_cast<int>(to_product.size());
            to_product.push_back(v);
        }
    std::vector<Edge> edges;
    for (const auto& e : p.graph().edges()) {
        const auto a = local[static_cast<std::size_t>(e.u)];
        const auto b = local[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0 && e.u / n2 != e.v / n2)
            edges.push_back({a, b});
    }
    return {Graph(static_cast<int>(to_product.size()), std::move(edges)), std::move(to_product)};
}

} // namespace lexconn

#endif // LEXCONN_PRODUCT_HPP
