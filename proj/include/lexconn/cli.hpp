#ifndef LEXCONN_CLI_HPP
#define LEXCONN_CLI_HPP

#include <algorithm>
#include <fstream>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bounds.hpp"
#include "connectivity.hpp"
#include "construct.hpp"
#include "corpus.hpp"
#include "dot.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "steiner.hpp"

namespace lexconn::cli {

enum ExitCode : int { Ok = 0, DomainError = 1, AuditFailed = 2, UsageError = 3 };

class UsageFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "(g,h)" or a flat product index.
inline Vertex parse_terminal(const ProductGraph& p, const std::string& text)
{
    static const std::regex pair(R"(\s*\(?\s*(\d+)\s*,\s*(\d+)\s*\)?\s*)");
    static const std::regex flat(R"(\s*(\d+)\s*)");
    std::smatch m;
    if (std::regex_match(text, m, pair))
        return p.flat(std::stoi(m[1]), std::stoi(m[2]));
    if (std::regex_match(text, m, flat)) {
        const auto v = std::stoi(m[1]);
        if (!p.graph().contains(v))
            throw GraphError("terminal " + text + " out of range (product has " + std::to_string(p.graph().order()) + " vertices)");
        return v;
    }
    throw UsageFailure("cannot parse terminal \"" + text + "\"; expected (g,h) or a flat index");
}

inline std::string edge_text(const ProductGraph& p, const Edge& e) { return to_string(p.coords(e.u)) + "-" + to_string(p.coords(e.v)); }

inline std::string edge_text(const Edge& e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

inline void print_report(std::ostream& out, const BoundReport& r)
{
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("n/a"); };
    out << "G: n=" << r.g.order << " m=" << r.g.size << " delta=" << r.g.min_degree << " lambda=" << r.g.lambda << " lambda3=" << opt(r.g.lambda3)
        << "\n";
    out << "H: n=" << r.h.order << " m=" << r.h.size << " delta=" << r.h.min_degree << " lambda=" << r.h.lambda << " lambda3=" << opt(r.h.lambda3)
        << "\n";
    out << "product: n=" << r.product_order << " m=" << r.product_size << " lambda=" << r.product_lambda << "\n";
    out << "lower_thm1=" << r.lower_thm1 << " constructed=" << r.constructed << " (" << r.construct_triples << " triples, "
        << r.construct_fallback_groups << " fallback groups)\n";
    out << "upper_thm2=" << r.upper_thm2 << " yangxu_lambda=" << r.yangxu_lambda << "\n";
    out << "exact_lambda3=" << opt(r.exact_lambda3);
    if (!r.exact_method.empty())
        out << " (" << r.exact_method << ")";
    out << "\n";
    for (const auto& c : r.checks)
        out << (c.passed ? "  ok   " : "  FAIL ") << c.name << ": " << c.detail << "\n";
    for (const auto& n : r.notes)
        out << "  note " << n << "\n";
    out << (r.passed() ? "audit passed" : "audit FAILED") << "\n";
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app {"Generalized 3-edge-connectivity of lexicographic products", "lexconn"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a path, cycle, complete or empty graph");
    std::string gen_kind;
    int gen_n = 0;
    std::string gen_out;
    gen->add_option("family", gen_kind, "path | cycle | complete | empty")->required();
    gen->add_option("n", gen_n, "Vertex count")->required();
    gen->add_option("-o,--output", gen_out, "Write to file (.json for JSON, else edge list)");

    // product
    auto* prod = app.add_subcommand("product", "Build the lexicographic product G∘H");
    std::string prod_g;
    std::string prod_h;
    std::string prod_out;
    std::string prod_map;
    prod->add_option("G", prod_g, "First factor")->required()->check(CLI::ExistingFile);
    prod->add_option("H", prod_h, "Second factor")->required()->check(CLI::ExistingFile);
    prod->add_option("-o,--output", prod_out, "Write the product to file; the map goes to <file>.map.json");
    prod->add_option("--map", prod_map, "Write the {\"n1\",\"n2\"} sidecar here");

    // lambda2
    auto* l2 = app.add_subcommand("lambda2", "Edge-connectivity");
    std::string l2_file;
    bool l2_witness = false;
    l2->add_option("graph", l2_file)->required()->check(CLI::ExistingFile);
    l2->add_flag("--witness", l2_witness, "Print a minimizing pair, its disjoint paths and a minimum cut side");

    // lambda3
    auto* l3 = app.add_subcommand("lambda3", "Generalized 3-edge-connectivity (exact search)");
    std::string l3_file;
    bool l3_witness = false;
    int l3_jobs = 1;
    std::uint64_t l3_budget = SearchOptions {}.node_budget;
    l3->add_option("graph", l3_file)->required()->check(CLI::ExistingFile);
    l3->add_flag("--witness", l3_witness, "Print a minimizing terminal set and its packing");
    l3->add_option("--jobs", l3_jobs, "Worker threads")->check(CLI::PositiveNumber);
    l3->add_option("--budget", l3_budget, "Search node budget per terminal set")->check(CLI::PositiveNumber);

    // construct
    auto* con = app.add_subcommand("construct", "Build lambda3(H)+lambda3(G)|V(H)| edge-disjoint S-trees in G∘H");
    std::string con_g;
    std::string con_h;
    std::vector<std::string> con_terms;
    std::string con_dot;
    bool con_json = false;
    con->add_option("G", con_g)->required()->check(CLI::ExistingFile);
    con->add_option("H", con_h)->required()->check(CLI::ExistingFile);
    con->add_option("--terminals", con_terms, "Three terminals, each (g,h) or a flat index")->required()->expected(3);
    con->add_option("--dot", con_dot, "Write a Graphviz rendering");
    con->add_flag("--json", con_json, "Print the packing as JSON");

    // audit
    auto* aud = app.add_subcommand("audit", "Check every bound on G∘H");
    std::string aud_g;
    std::string aud_h;
    std::string aud_batch;
    std::string aud_json;
    AuditOptions aud_opts;
    int aud_jobs = 1;
    aud->add_option("G", aud_g)->check(CLI::ExistingFile);
    aud->add_option("H", aud_h)->check(CLI::ExistingFile);
    aud->add_option("--batch", aud_batch, "File of \"G-file H-file\" lines, audited in parallel")->check(CLI::ExistingFile);
    aud->add_flag("--exact", aud_opts.exact, "Search for the exact lambda3 of the product when the sandwich is open");
    aud->add_option("--budget", aud_opts.exact_edge_budget, "Largest product (edges) for exact search")->check(CLI::NonNegativeNumber);
    aud->add_option("--cap", aud_opts.construct_cap, "Terminal triples sampled for the construction")->check(CLI::PositiveNumber);
    aud->add_option("--json", aud_json, "Write the report as JSON");
    aud->add_option("--jobs", aud_jobs, "Worker threads")->check(CLI::PositiveNumber);

    // corpus
    auto* cor = app.add_subcommand("corpus", "Check the graph inequalities on all small connected graphs");
    int cor_min = 3;
    int cor_max = 6;
    bool cor_dedup = false;
    int cor_jobs = 1;
    std::uint64_t cor_budget = 200'000;
    cor->add_option("--min-n", cor_min)->check(CLI::Range(1, 8));
    cor->add_option("--max-n", cor_max)->check(CLI::Range(1, 8));
    cor->add_flag("--dedup", cor_dedup, "One graph per isomorphism class");
    cor->add_option("--jobs", cor_jobs, "Worker threads")->check(CLI::PositiveNumber);
    cor->add_option("--budget", cor_budget, "Search node budget per terminal set; larger graphs are skipped")->check(CLI::PositiveNumber);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (!app.get_subcommands().empty())
            err << app.get_subcommands().front()->help();
        return UsageError;
    }

    try {
        if (*gen) {
            const auto kind = parse_family(gen_kind);
            if (!kind)
                throw UsageFailure("unknown family \"" + gen_kind + "\"; expected path, cycle, complete or empty");
            const auto g = family(*kind, gen_n);
            if (gen_out.empty())
                out << io::to_edge_list(g);
            else
                io::save_graph(gen_out, g);
        } else if (*prod) {
            const ProductGraph p(io::load_graph(prod_g), io::load_graph(prod_h));
            nlohmann::ordered_json map;
            map["n1"] = p.n1();
            map["n2"] = p.n2();
            if (prod_out.empty()) {
                out << io::to_edge_list(p.graph());
            } else {
                io::save_graph(prod_out, p.graph());
                if (prod_map.empty())
                    prod_map = prod_out + ".map.json";
            }
            if (!prod_map.empty())
                io::write_file(prod_map, map.dump() + "\n");
        } else if (*l2) {
            const auto g = io::load_graph(l2_file);
            const auto value = edge_connectivity(g);
            out << value << "\n";
            if (l2_witness) {
                Vertex partner = 1;
                for (Vertex v = 1; v < g.order(); ++v)
                    if (local_edge_connectivity(g, 0, v, nullptr, value + 1) == value) {
                        partner = v;
                        break;
                    }
                out << "pair 0 " << partner << "\n";
                for (const auto& path : disjoint_paths(g, 0, partner, value).paths) {
                    out << "path";
                    for (auto v : path)
                        out << " " << v;
                    out << "\n";
                }
                out << "cut-side";
                for (auto v : min_cut_side(g, 0, partner))
                    out << " " << v;
                out << "\n";
            }
        } else if (*l3) {
            const auto g = io::load_graph(l3_file);
            SearchOptions opts;
            opts.jobs = l3_jobs;
            opts.node_budget = l3_budget;
            if (!l3_witness) {
                out << lambda_k(g, 3, opts) << "\n";
            } else {
                const auto w = lambda_k_witness(g, 3, opts);
                out << w.value << "\n";
                out << "terminals " << w.terminals[0] << " " << w.terminals[1] << " " << w.terminals[2] << "\n";
                for (const auto& t : w.witness.trees) {
                    out << "tree";
                    for (const auto& e : t.edges)
                        out << " " << edge_text(e);
                    out << "\n";
                }
            }
        } else if (*con) {
            PackingConstructor builder(io::load_graph(con_g), io::load_graph(con_h));
            const auto& p = builder.product();
            std::array<Vertex, 3> s {};
            for (std::size_t i = 0; i < 3; ++i)
                s[i] = parse_terminal(p, con_terms[i]);
            const auto result = builder.construct(s);
            const auto check = verify_packing(p, result.packing, result.stages);
            if (!check.valid)
                throw ConstructionDefect("packing failed verification: " + check.problems.front(), check.shared_edge);
            if (con_json) {
                nlohmann::ordered_json j;
                j["terminals"] = result.packing.terminals;
                j["layout"] = to_string(result.config.layout);
                j["subcase"] = to_string(result.config.subcase);
                j["lambda3_G"] = result.ell1;
                j["lambda3_H"] = result.ell2;
                auto trees = nlohmann::ordered_json::array();
                for (int i = 0; i < result.packing.size(); ++i) {
                    auto edges = nlohmann::ordered_json::array();
                    for (const auto& e : result.packing.trees[static_cast<std::size_t>(i)].edges)
                        edges.push_back({e.u, e.v});
                    trees.push_back({{"stage", result.stages[static_cast<std::size_t>(i)]}, {"edges", edges}});
                }
                j["trees"] = std::move(trees);
                auto groups = nlohmann::ordered_json::array();
                for (const auto& gr : result.groups)
                    groups.push_back({{"stage", gr.stage}, {"pattern", gr.pattern}, {"trees", gr.trees}, {"search", gr.fallback}});
                j["groups"] = std::move(groups);
                out << j.dump() << "\n";
            } else {
                out << "layout " << to_string(result.config.layout) << " (" << to_string(result.config.subcase) << ")\n";
                out << "packing " << result.packing.size() << " = " << result.ell2 << " + " << result.ell1 << "*" << p.n2() << "\n";
                for (int i = 0; i < result.packing.size(); ++i) {
                    const auto& t = result.packing.trees[static_cast<std::size_t>(i)];
                    out << "T" << i + 1 << " stage " << result.stages[static_cast<std::size_t>(i)] << ":";
                    for (const auto& e : t.edges)
                        out << " " << edge_text(p, e);
                    out << "\n";
                }
                for (const auto& gr : result.groups)
                    if (gr.fallback)
                        out << "note stage " << gr.stage << " group " << gr.pattern << " placed by restricted search\n";
                for (const auto& n : result.notes)
                    out << "note " << n << "\n";
            }
            if (!con_dot.empty())
                io::write_file(con_dot, to_dot(p, result.packing));
        } else if (*aud) {
            if (aud_batch.empty() == (aud_g.empty() || aud_h.empty()))
                throw UsageFailure("audit needs either G and H files or --batch");
            std::vector<std::pair<std::string, std::string>> pairs;
            if (aud_batch.empty()) {
                pairs.emplace_back(aud_g, aud_h);
            } else {
                std::istringstream lines(io::read_file(aud_batch));
                std::string gf;
                std::string hf;
                while (lines >> gf >> hf)
                    pairs.emplace_back(gf, hf);
            }
            auto reports = parallel_map(pairs.size(), aud_jobs,
                [&](std::size_t i) { return audit(io::load_graph(pairs[i].first), io::load_graph(pairs[i].second), aud_opts); });
            bool ok = true;
            auto docs = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < reports.size(); ++i) {
                if (pairs.size() > 1)
                    out << "== " << pairs[i].first << " " << pairs[i].second << "\n";
                print_report(out, reports[i]);
                ok = ok && reports[i].passed();
                docs.push_back(to_json(reports[i]));
            }
            if (!aud_json.empty())
                io::write_file(aud_json, (pairs.size() == 1 ? docs.front() : docs).dump(2) + "\n");
            if (!ok) {
                for (const auto& r : reports)
                    if (auto f = r.first_failure())
                        err << "audit failure: " << f->name << ": " << f->detail << "\n";
                return AuditFailed;
            }
        } else if (*cor) {
            if (cor_min > cor_max)
                throw UsageFailure("--min-n exceeds --max-n");
            const auto graphs = connected_graphs(cor_min, cor_max, cor_dedup);
            SearchOptions opts;
            opts.node_budget = cor_budget;
            const auto s = run_corpus(graphs, opts, cor_jobs);
            out << "graphs " << s.graphs << " checked " << s.checked << " skipped " << s.skipped << " violations " << s.violations << "\n";
            out << "skip rate " << s.skip_rate() * 100.0 << "%\n";
            for (const auto& e : s.examples)
                err << "violation: " << e << "\n";
            if (s.violations > 0)
                return AuditFailed;
        }
    } catch (const UsageFailure& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const ConstructionDefect& e) {
        err << "construction defect: " << e.what() << "\n";
        return DomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return DomainError;
    }
    return Ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace lexconn::cli

#endif // LEXCONN_CLI_HPP
