#ifndef LEXCONN_BOUNDS_HPP
#define LEXCONN_BOUNDS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "connectivity.hpp"
#include "construct.hpp"
#include "graph.hpp"
#include "product.hpp"
#include "steiner.hpp"

namespace lexconn {

class BoundsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An inequality that did not hold. Never expected; signals a bug or a
/// counterexample.
class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

    inline void require_connected_g(const Graph& g)
    {
        if (!is_connected(g))
            throw BoundsError("G must be connected");
        if (g.order() < 3)
            throw BoundsError("G needs at least three vertices (lambda3(G) is undefined for |V(G)| = " + std::to_string(g.order()) + ")");
    }

    /// lambda3 with the product-bound conventions: 0 for disconnected or
    /// two-vertex graphs.
    inline int lambda3_or_zero(const Graph& g, const SearchOptions& opts)
    {
        if (g.order() < 3 || !is_connected(g))
            return 0;
        return lambda_k(g, 3, opts);
    }

} // namespace detail

/// lambda3(H) + lambda3(G)|V(H)|.
inline int lower_bound_thm1(const Graph& g, const Graph& h, const SearchOptions& opts = {})
{
    detail::require_connected_g(g);
    return detail::lambda3_or_zero(h, opts) + lambda_k(g, 3, opts) * h.order();
}

inline int upper_bound_thm2(const Graph& g, const Graph& h, const SearchOptions& opts = {})
{
    detail::require_connected_g(g);
    const int n2 = h.order();
    const int l3 = lambda_k(g, 3, opts);
    return std::min((4 * l3 + 2) / 3 * n2 * n2, min_degree(h) + min_degree(g) * n2);
}

/// min{lambda(G)|V(H)|^2, delta(H) + delta(G)|V(H)|}: the edge-connectivity of G∘H.
inline int yangxu_lambda(const Graph& g, const Graph& h)
{
    if (g.order() < 2 || h.order() < 2)
        throw BoundsError("both factors must be non-trivial");
    if (!is_connected(g))
        throw BoundsError("G must be connected");
    const int n2 = h.order();
    return std::min(edge_connectivity(g) * n2 * n2, min_degree(h) + min_degree(g) * n2);
}

/// Writing lambda = 4s + r with 0 <= r < 4: 3s + ceil(r/2).
inline int prop42_lower(int lambda)
{
    if (lambda < 0)
        throw std::invalid_argument("negative edge-connectivity");
    return 3 * (lambda / 4) + (lambda % 4 + 1) / 2;
}

struct FactorStats {
    int order = 0;
    int size = 0;
    int min_degree = 0;
    bool connected = false;
    int lambda = 0;
    /// Absent for graphs with fewer than three vertices.
    std::optional<int> lambda3;
};

inline FactorStats factor_stats(const Graph& g, const SearchOptions& opts = {})
{
    FactorStats s;
    s.order = g.order();
    s.size = g.size();
    s.min_degree = min_degree(g);
    s.connected = is_connected(g);
    s.lambda = g.order() >= 2 ? edge_connectivity(g) : 0;
    if (g.order() >= 3)
        s.lambda3 = lambda_k(g, 3, opts);
    return s;
}

struct InequalityCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// The graph-level inequalities: lambda3 <= lambda <= delta, the delta-1
/// bound for adjacent minimum-degree vertices, the degree condition on
/// every edge, and prop42_lower(lambda) <= lambda3. `lambda3` must be exact.
inline std::vector<InequalityCheck> graph_inequalities(const Graph& g, int lambda, int lambda3, const std::string& label)
{
    std::vector<InequalityCheck> out;
    const int delta = min_degree(g);
    auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({label + ": " + std::move(name), ok, std::move(detail)}); };
    add("lambda3 <= lambda", lambda3 <= lambda, std::to_string(lambda3) + " <= " + std::to_string(lambda));
    add("lambda <= delta", lambda <= delta, std::to_string(lambda) + " <= " + std::to_string(delta));
    for (const auto& e : g.edges()) {
        if (g.degree(e.u) == delta && g.degree(e.v) == delta) {
            add("adjacent min-degree vertices give lambda3 <= delta-1", lambda3 <= delta - 1,
                "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + "): " + std::to_string(lambda3) + " <= " + std::to_string(delta - 1));
            break;
        }
    }
    const auto low = std::find_if(g.edges().begin(), g.edges().end(),
        [&](const Edge& e) { return std::max(g.degree(e.u), g.degree(e.v)) < lambda3 + 1; });
    if (low == g.edges().end())
        add("every edge has an end of degree >= lambda3+1", true, "lambda3 = " + std::to_string(lambda3));
    else
        add("every edge has an end of degree >= lambda3+1", false,
            "edge (" + std::to_string(low->u) + "," + std::to_string(low->v) + ") has degrees " + std::to_string(g.degree(low->u)) + ", "
                + std::to_string(g.degree(low->v)));
    add("prop42_lower(lambda) <= lambda3", prop42_lower(lambda) <= lambda3,
        std::to_string(prop42_lower(lambda)) + " <= " + std::to_string(lambda3));
    return out;
}

struct AuditOptions {
    /// Run exact search on the product when the sandwich does not close.
    bool exact = false;
    /// Exact search only for products with at most this many edges.
    int exact_edge_budget = 30;
    /// Terminal triples handed to the construction, stride-sampled.
    int construct_cap = 200;
    SearchOptions search {};
};

struct BoundReport {
    FactorStats g;
    FactorStats h;
    int product_order = 0;
    int product_size = 0;
    int product_lambda = 0;
    int lower_thm1 = 0;
    int upper_thm2 = 0;
    int yangxu_lambda = 0;
    /// Smallest packing the construction produced over the sampled triples.
    int constructed = 0;
    int construct_triples = 0;
    int construct_fallback_groups = 0;
    std::optional<int> exact_lambda3;
    /// "sandwich", "search", or empty when unknown.
    std::string exact_method;
    /// A terminal set attaining the exact value (flat product ids).
    std::vector<Vertex> exact_witness;
    std::vector<InequalityCheck> checks;
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.passed; });
    }

    [[nodiscard]] std::optional<InequalityCheck> first_failure() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return c;
        return std::nullopt;
    }
};

/// Indices 0, k, 2k, ... below `count` with the stride k chosen so at most `cap` remain.
inline std::vector<std::size_t> stride_sample(std::size_t count, std::size_t cap)
{
    std::vector<std::size_t> out;
    if (count == 0 || cap == 0)
        return out;
    const std::size_t stride = (count + cap - 1) / cap;
    for (std::size_t i = 0; i < count; i += stride)
        out.push_back(i);
    return out;
}

inline BoundReport audit(const Graph& g, const Graph& h, const AuditOptions& opts = {})
{
    detail::require_connected_g(g);
    if (h.order() < 2)
        throw BoundsError("H must be non-trivial");
    BoundReport r;
    r.g = factor_stats(g, opts.search);
    r.h = factor_stats(h, opts.search);
    const ProductGraph p(g, h);
    r.product_order = p.graph().order();
    r.product_size = p.graph().size();
    r.product_lambda = edge_connectivity(p.graph());

    r.lower_thm1 = (r.h.connected && r.h.lambda3 ? *r.h.lambda3 : 0) + *r.g.lambda3 * h.order();
    r.upper_thm2 = std::min((4 * *r.g.lambda3 + 2) / 3 * h.order() * h.order(), r.h.min_degree + r.g.min_degree * h.order());
    r.yangxu_lambda = yangxu_lambda(g, h);
    if (h.order() < 3)
        r.notes.push_back("|V(H)| = 2: lambda3(H) taken as 0");

    auto check = [&](std::string name, bool ok, std::string detail) { r.checks.push_back({std::move(name), ok, std::move(detail)}); };

    // Construction over sampled triples.
    PackingConstructor builder(g, h, opts.search);
    const auto triples = detail::k_subsets(p.graph().order(), 3);
    r.constructed = -1;
    for (auto i : stride_sample(triples.size(), static_cast<std::size_t>(opts.construct_cap))) {
        const auto& t = triples[i];
        ++r.construct_triples;
        try {
            const auto result = builder.construct({t[0], t[1], t[2]});
            r.construct_fallback_groups += result.fallback_groups();
            const auto size = result.packing.size();
            r.constructed = r.constructed < 0 ? size : std::min(r.constructed, size);
        } catch (const ConstructionDefect& err) {
            check("construction", false, "triple {" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "}: " + err.what());
        }
    }
    if (r.constructed < 0)
        r.constructed = 0;
    check("lower_thm1 = constructed", r.constructed == r.lower_thm1,
        std::to_string(r.lower_thm1) + " = " + std::to_string(r.constructed) + " over " + std::to_string(r.construct_triples) + " triples");
    check("lower_thm1 <= upper_thm2", r.lower_thm1 <= r.upper_thm2, std::to_string(r.lower_thm1) + " <= " + std::to_string(r.upper_thm2));
    check("yangxu_lambda = lambda(G∘H)", r.yangxu_lambda == r.product_lambda,
        std::to_string(r.yangxu_lambda) + " = " + std::to_string(r.product_lambda));

    // Exact value: sandwich closure, else search within budget.
    if (r.lower_thm1 == r.upper_thm2) {
        r.exact_lambda3 = r.lower_thm1;
        r.exact_method = "sandwich";
    } else if (opts.exact && r.product_size <= opts.exact_edge_budget) {
        auto w = lambda_k_witness(p.graph(), 3, opts.search);
        r.exact_lambda3 = w.value;
        r.exact_method = "search";
        r.exact_witness = std::move(w.terminals);
    } else if (opts.exact) {
        r.notes.push_back("exact search skipped: product has " + std::to_string(r.product_size) + " edges, budget "
            + std::to_string(opts.exact_edge_budget));
    }
    if (r.exact_lambda3) {
        const int e = *r.exact_lambda3;
        check("lower_thm1 <= lambda3(G∘H) <= upper_thm2", r.lower_thm1 <= e && e <= r.upper_thm2,
            std::to_string(r.lower_thm1) + " <= " + std::to_string(e) + " <= " + std::to_string(r.upper_thm2));
        if (r.exact_method == "search") {
            const auto product_checks = graph_inequalities(p.graph(), r.product_lambda, e, "G∘H");
            r.checks.insert(r.checks.end(), product_checks.begin(), product_checks.end());
        } else {
            check("G∘H: lambda3 <= lambda", e <= r.product_lambda, std::to_string(e) + " <= " + std::to_string(r.product_lambda));
        }
    }

    // Factor-level inequalities.
    auto g_checks = graph_inequalities(g, r.g.lambda, *r.g.lambda3, "G");
    r.checks.insert(r.checks.end(), g_checks.begin(), g_checks.end());
    if (r.h.lambda3) {
        auto h_checks = graph_inequalities(h, r.h.lambda, *r.h.lambda3, "H");
        r.checks.insert(r.checks.end(), h_checks.begin(), h_checks.end());
    }
    return r;
}

inline nlohmann::ordered_json to_json(const FactorStats& s)
{
    nlohmann::ordered_json j;
    j["order"] = s.order;
    j["size"] = s.size;
    j["min_degree"] = s.min_degree;
    j["connected"] = s.connected;
    j["lambda"] = s.lambda;
    j["lambda3"] = s.lambda3 ? nlohmann::ordered_json(*s.lambda3) : nlohmann::ordered_json(nullptr);
    return j;
}

inline nlohmann::ordered_json to_json(const BoundReport& r)
{
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["G"] = to_json(r.g);
    j["H"] = to_json(r.h);
    j["product"] = {{"order", r.product_order}, {"size", r.product_size}, {"lambda", r.product_lambda}};
    j["lower_thm1"] = r.lower_thm1;
    j["upper_thm2"] = r.upper_thm2;
    j["yangxu_lambda"] = r.yangxu_lambda;
    j["constructed"] = r.constructed;
    j["construct_triples"] = r.construct_triples;
    j["construct_fallback_groups"] = r.construct_fallback_groups;
    j["exact_lambda3"] = r.exact_lambda3 ? nlohmann::ordered_json(*r.exact_lambda3) : nlohmann::ordered_json(nullptr);
    j["exact_method"] = r.exact_method.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.exact_method);
    j["exact_witness"] = r.exact_witness;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    j["notes"] = r.notes;
    j["passed"] = r.passed();
    return j;
}

/// Throws AuditFailure naming the first violated inequality.
inline void require_passed(const BoundReport& r)
{
    if (auto f = r.first_failure())
        throw AuditFailure(f->name + " failed: " + f->detail);
}

} // namespace lexconn

#endif // LEXCONN_BOUNDS_HPP
