#ifndef LEXCONN_CORPUS_HPP
#define LEXCONN_CORPUS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "connectivity.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "steiner.hpp"

namespace lexconn {

namespace detail {

    inline std::vector<Edge> all_pairs(int n)
    {
        std::vector<Edge> out;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                out.push_back({u, v});
        return out;
    }

    inline Graph graph_from_mask(int n, const std::vector<Edge>& pairs, std::uint64_t mask)
    {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask >> i & 1U)
                edges.push_back(pairs[i]);
        return Graph(n, std::move(edges));
    }

    /// Smallest edge mask over all vertex relabellings.
    inline std::uint64_t canonical_mask(int n, const std::vector<Edge>& pairs, std::uint64_t mask)
    {
        std::vector<int> index(static_cast<std::size_t>(n * n), -1);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            index[static_cast<std::size_t>(pairs[i].u * n + pairs[i].v)] = static_cast<int>(i);
            index[static_cast<std::size_t>(pairs[i].v * n + pairs[i].u)] = static_cast<int>(i);
        }
        std::vector<Vertex> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        auto best = mask;
        do {
            std::uint64_t image = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1U) {
                    const auto a = perm[static_cast<std::size_t>(pairs[i].u)];
                    const auto b = perm[static_cast<std::size_t>(pairs[i].v)];
                    image |= std::uint64_t {1} << index[static_cast<std::size_t>(a * n + b)];
                }
            best = std::min(best, image);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

} // namespace detail

/// All connected graphs on n labelled vertices, in edge-mask order. With
/// `dedup`, one representative per isomorphism class.
inline std::vector<Graph> connected_graphs(int n, bool dedup = false)
{
    if (n < 1 || n > 8)
        throw std::invalid_argument("connected_graphs supports 1 <= n <= 8");
    const auto pairs = detail::all_pairs(n);
    std::vector<Graph> out;
    std::set<std::uint64_t> seen;
    const std::uint64_t limit = std::uint64_t {1} << pairs.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        // A connected graph needs at least n-1 edges.
        if (std::popcount(mask) < n - 1)
            continue;
        auto g = detail::graph_from_mask(n, pairs, mask);
        if (!is_connected(g))
            continue;
        if (dedup && !seen.insert(detail::canonical_mask(n, pairs, mask)).second)
            continue;
        out.push_back(std::move(g));
    }
    return out;
}

inline std::vector<Graph> connected_graphs(int min_n, int max_n, bool dedup)
{
    std::vector<Graph> out;
    for (int n = min_n; n <= max_n; ++n) {
        auto part = connected_graphs(n, dedup);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

struct CorpusGraphResult {
    bool skipped = false;
    int lambda = 0;
    int lambda3 = 0;
    std::vector<InequalityCheck> failures;
};

/// Exact lambda3 under the search budget, then the graph-level inequalities.
/// Graphs whose search exceeds the budget come back skipped.
inline CorpusGraphResult check_corpus_graph(const Graph& g, const SearchOptions& opts)
{
    CorpusGraphResult r;
    r.lambda = edge_connectivity(g);
    try {
        r.lambda3 = lambda_k(g, 3, opts);
    } catch (const SearchBudgetExceeded&) {
        r.skipped = true;
        return r;
    }
    for (auto& c : graph_inequalities(g, r.lambda, r.lambda3, "G"))
        if (!c.passed)
            r.failures.push_back(std::move(c));
    return r;
}

struct CorpusSummary {
    int graphs = 0;
    int checked = 0;
    int skipped = 0;
    int violations = 0;
    /// First few violations, "n=..: edges ..: check".
    std::vector<std::string> examples;

    [[nodiscard]] double skip_rate() const { return graphs == 0 ? 0.0 : static_cast<double>(skipped) / graphs; }
};

inline CorpusSummary run_corpus(const std::vector<Graph>& graphs, const SearchOptions& opts, int jobs = 1)
{
    SearchOptions inner = opts;
    inner.jobs = 1;
    const auto results = parallel_map(graphs.size(), jobs, [&](std::size_t i) { return check_corpus_graph(graphs[i], inner); });
    CorpusSummary s;
    s.graphs = static_cast<int>(graphs.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (r.skipped) {
            ++s.skipped;
            continue;
        }
        ++s.checked;
        s.violations += static_cast<int>(r.failures.size());
        for (const auto& f : r.failures)
            if (s.examples.size() < 10) {
                std::string edges;
                for (const auto& e : graphs[i].edges())
                    edges += " " + std::to_string(e.u) + "-" + std::to_string(e.v);
                s.examples.push_back("n=" + std::to_string(graphs[i].order()) + " edges" + edges + ": " + f.name + " (" + f.detail + ")");
            }
    }
    return s;
}

} // namespace lexconn

#endif // LEXCONN_CORPUS_HPP
