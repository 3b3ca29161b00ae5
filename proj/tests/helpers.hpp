#pragma once

// Shared test utilities: fixture paths, a seeded random graph generator, and
// the independent oracles (exhaustive alignment search, brute-force
// transport LP) the implementation is checked against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "amreval/embeddings.hpp"
#include "amreval/graph.hpp"
#include "amreval/metrics.hpp"
#include "amreval/transport.hpp"

#ifndef FIXTURE_DIR
#define FIXTURE_DIR "tests/fixtures"
#endif

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

// --- random graphs -----------------------------------------------------------

struct GraphGenOptions {
    int min_vars = 1;
    int max_vars = 6;
    int max_extra_edges = 2;
    int max_attributes = 2;
    int concept_alphabet = 4;   // small alphabets force alignment ambiguity
    int relation_alphabet = 3;
};

inline amreval::AmrGraph random_graph(amreval::Rng& rng, const GraphGenOptions& opt = {}) {
    using amreval::AmrGraph;
    int n = opt.min_vars +
            static_cast<int>(rng.next_below(
                static_cast<std::uint64_t>(opt.max_vars - opt.min_vars + 1)));
    AmrGraph g;
    for (int i = 0; i < n; ++i)
        g.add_node("v" + std::to_string(i),
                   "c" + std::to_string(rng.next_below(opt.concept_alphabet)));
    g.set_root("v0");
    auto rel = [&]() { return "r" + std::to_string(rng.next_below(opt.relation_alphabet)); };
    // Random spanning tree keeps the graph connected.
    for (int i = 1; i < n; ++i) {
        int parent = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i)));
        g.add_edge("v" + std::to_string(parent), rel(), "v" + std::to_string(i));
    }
    if (n > 1) {
        int extra = static_cast<int>(rng.next_below(opt.max_extra_edges + 1));
        for (int e = 0; e < extra; ++e) {
            int a = static_cast<int>(rng.next_below(n));
            int b = static_cast<int>(rng.next_below(n));
            if (a == b) continue;
            g.add_edge("v" + std::to_string(a), rel(), "v" + std::to_string(b));
        }
    }
    static const char* kValues[] = {"-", "+", "1", "2"};
    int attrs = static_cast<int>(rng.next_below(opt.max_attributes + 1));
    for (int a = 0; a < attrs; ++a)
        g.add_attribute("v" + std::to_string(rng.next_below(n)),
                        "q" + std::to_string(rng.next_below(2)),
                        kValues[rng.next_below(4)]);
    g.validate();
    return g;
}

inline amreval::AmrGraph renamed_copy(const amreval::AmrGraph& g, amreval::Rng& rng,
                                      const std::string& prefix = "w") {
    std::vector<std::size_t> perm(g.vars().size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_below(i)]);
    std::unordered_map<std::string, std::string> mapping;
    for (std::size_t i = 0; i < g.vars().size(); ++i)
        mapping[g.vars()[i]] = prefix + std::to_string(perm[i]);
    return g.renamed(mapping);
}

// --- exhaustive alignment oracle ----------------------------------------------

// Best matched-triple count over all injective variable maps, found by brute
// force. Independent of the hill-climbing implementation: it remaps the
// candidate triple multiset and intersects with the reference multiset.
namespace detail {

inline std::vector<std::string> triple_keys(const amreval::AmrGraph& g,
                                            const std::vector<int>& image,
                                            const std::vector<std::string>& image_names,
                                            bool drop_unmapped) {
    using namespace amreval;
    std::unordered_map<std::string, int> pos;
    for (std::size_t i = 0; i < g.vars().size(); ++i)
        pos[g.vars()[i]] = static_cast<int>(i);
    auto name_of = [&](const std::string& var) -> std::string {
        int idx = image[pos.at(var)];
        return idx < 0 ? std::string() : image_names[idx];
    };
    std::vector<std::string> keys;
    for (const Triple& t : to_triples(g)) {
        switch (t.kind) {
            case TripleKind::Instance: {
                std::string m = name_of(t.first);
                if (m.empty() && drop_unmapped) continue;
                keys.push_back("i\x1f" + m + "\x1f" + t.second);
                break;
            }
            case TripleKind::Attribute: {
                std::string m = name_of(t.first);
                if (m.empty() && drop_unmapped) continue;
                keys.push_back("a\x1f" + t.relation + "\x1f" + m + "\x1f" + t.second);
                break;
            }
            case TripleKind::Relation: {
                std::string ms = name_of(t.first), mt = name_of(t.second);
                if ((ms.empty() || mt.empty()) && drop_unmapped) continue;
                keys.push_back("r\x1f" + t.relation + "\x1f" + ms + "\x1f" + mt);
                break;
            }
        }
    }
    return keys;
}

inline int multiset_overlap(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(inter));
    return static_cast<int>(inter.size());
}

}  // namespace detail

inline double exhaustive_smatch_matched(const amreval::AmrGraph& cand,
                                        const amreval::AmrGraph& ref) {
    using namespace amreval;
    // Matched count is symmetric; enumerate from the smaller variable set.
    const AmrGraph& small = cand.node_count() <= ref.node_count() ? cand : ref;
    const AmrGraph& large = cand.node_count() <= ref.node_count() ? ref : cand;

    std::vector<std::string> large_names = large.vars();
    // Identity image for the large side.
    std::vector<int> large_image(large_names.size());
    std::iota(large_image.begin(), large_image.end(), 0);
    std::vector<std::string> large_keys =
        detail::triple_keys(large, large_image, large_names, false);

    std::size_t ns = small.node_count(), nl = large_names.size();
    std::vector<int> image(ns, -1);
    std::vector<bool> used(nl, false);
    int best = 0;
    // Recursive enumeration of injective total maps small -> large.
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == ns) {
            best = std::max(best, detail::multiset_overlap(
                                      detail::triple_keys(small, image, large_names, true),
                                      large_keys));
            return;
        }
        for (std::size_t j = 0; j < nl; ++j) {
            if (used[j]) continue;
            used[j] = true;
            image[i] = static_cast<int>(j);
            rec(i + 1);
            used[j] = false;
            image[i] = -1;
        }
    };
    rec(0);
    return best;
}

inline double exhaustive_smatch_f1(const amreval::AmrGraph& cand,
                                   const amreval::AmrGraph& ref) {
    double matched = exhaustive_smatch_matched(cand, ref);
    double ct = static_cast<double>(amreval::to_triples(cand).size());
    double rt = static_cast<double>(amreval::to_triples(ref).size());
    double p = ct > 0 ? matched / ct : 0.0;
    double r = rt > 0 ? matched / rt : 0.0;
    return amreval::f1(p, r);
}

// --- brute-force transport oracle ------------------------------------------------

// Minimum cost over all basic feasible solutions: every spanning-tree-shaped
// subset of n+m-1 cells, flows solved by leaf elimination.
inline double brute_force_transport(const amreval::TransportProblem& p) {
    std::size_t n = p.source_mass.size(), m = p.target_mass.size();
    std::size_t cells = n * m, pick = n + m - 1;
    std::vector<std::size_t> comb(pick);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<std::size_t>& chosen) {
        // Leaf elimination over the bipartite graph of chosen cells.
        std::vector<double> a = p.source_mass, b = p.target_mass;
        std::vector<int> row(chosen.size()), col(chosen.size());
        std::vector<bool> done(chosen.size(), false);
        std::vector<int> row_deg(n, 0), col_deg(m, 0);
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            row[k] = static_cast<int>(chosen[k] / m);
            col[k] = static_cast<int>(chosen[k] % m);
            ++row_deg[row[k]];
            ++col_deg[col[k]];
        }
        double cost = 0.0;
        for (std::size_t round = 0; round < chosen.size(); ++round) {
            bool progressed = false;
            for (std::size_t k = 0; k < chosen.size() && !progressed; ++k) {
                if (done[k]) continue;
                bool row_leaf = row_deg[row[k]] == 1;
                bool col_leaf = col_deg[col[k]] == 1;
                if (!row_leaf && !col_leaf) continue;
                double flow = row_leaf ? a[row[k]] : b[col[k]];
                if (flow < -1e-9) return;  // infeasible
                cost += std::max(0.0, flow) * p.cost[row[k]][col[k]];
                a[row[k]] -= flow;
                b[col[k]] -= flow;
                --row_deg[row[k]];
                --col_deg[col[k]];
                done[k] = true;
                progressed = true;
            }
            if (!progressed) return;  // cyclic subset, not a tree
        }
        for (double v : a)
            if (std::abs(v) > 1e-7) return;
        for (double v : b)
            if (std::abs(v) > 1e-7) return;
        best = std::min(best, cost);
    };

    // Enumerate combinations of size pick out of cells.
    while (true) {
        evaluate(comb);
        std::size_t i = pick;
        while (i > 0 && comb[i - 1] == cells - pick + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < pick; ++j) comb[j] = comb[j - 1] + 1;
    }
    return best;
}

}  // namespace testutil
