#pragma once

// Independent reference implementations the test suite checks the library
// against.  Everything here is deliberately naive and shares no code with
// the headers under test beyond the public data types.

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "corrclust/clustering.hpp"
#include "corrclust/multiway_cut.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_cover.hpp"

namespace oracles {

using corrclust::Clustering;
using corrclust::Label;
using corrclust::SignedGraph;
using corrclust::VertexSet;

// Quadratic recount of disagreements straight off the label matrix.
inline long long naive_mistakes(const SignedGraph& g, const Clustering& c) {
    long long bad = 0;
    for (int u = 0; u < g.size(); ++u) {
        for (int v = u + 1; v < g.size(); ++v) {
            Label l = g.label(u, v);
            bool together = c.assignment[u] == c.assignment[v];
            if (l == Label::Plus && !together) ++bad;
            if (l == Label::Minus && together) ++bad;
        }
    }
    return bad;
}

// Disagreements among pairs inside s only.
inline long long naive_mistakes_within(const SignedGraph& g, const Clustering& c,
                                       const VertexSet& s) {
    long long bad = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            int u = s[i], v = s[j];
            Label l = g.label(u, v);
            bool together = c.assignment[u] == c.assignment[v];
            if (l == Label::Plus && !together) ++bad;
            if (l == Label::Minus && together) ++bad;
        }
    }
    return bad;
}

// Minimum disagreement cost over every partition of the units, where each
// unit is an indivisible set of vertices.  Restricted-growth enumeration.
inline long long best_unit_partition_cost(const SignedGraph& g,
                                          const std::vector<VertexSet>& units) {
    if (units.empty()) return 0;
    const std::size_t m = units.size();
    VertexSet all;
    for (const auto& u : units) all = corrclust::vset::unite(all, u);
    std::vector<int> rgs(m, 0);
    long long best = std::numeric_limits<long long>::max();
    auto evaluate = [&] {
        Clustering c = Clustering::unassigned(g.size());
        for (std::size_t i = 0; i < m; ++i)
            for (int v : units[i]) c.assignment[v] = rgs[i];
        best = std::min(best, naive_mistakes_within(g, c, all));
    };
    // Iterate restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
    for (;;) {
        evaluate();
        std::size_t i = m;
        while (i > 1) {
            --i;
            int prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
            if (rgs[i] <= prefix_max) {
                ++rgs[i];
                for (std::size_t j = i + 1; j < m; ++j) rgs[j] = 0;
                break;
            }
            rgs[i] = 0;
            if (i == 1) return best;
        }
        if (m == 1) return best;
    }
}

inline long long best_clustering_cost(const SignedGraph& g, const VertexSet& s) {
    std::vector<VertexSet> units;
    for (int v : s) units.push_back({v});
    return best_unit_partition_cost(g, units);
}

// As above, but partitions placing two flagged units in one block are
// skipped (the grouped search's no-two-groups-share rule).
inline long long best_grouped_partition_cost(const SignedGraph& g,
                                             const std::vector<VertexSet>& units,
                                             const std::vector<bool>& is_group) {
    if (units.empty()) return 0;
    const std::size_t m = units.size();
    VertexSet all;
    for (const auto& u : units) all = corrclust::vset::unite(all, u);
    std::vector<int> rgs(m, 0);
    long long best = std::numeric_limits<long long>::max();
    auto evaluate = [&] {
        std::vector<int> groups_in_block(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            if (is_group[i] && ++groups_in_block[rgs[i]] > 1) return;
        Clustering c = Clustering::unassigned(g.size());
        for (std::size_t i = 0; i < m; ++i)
            for (int v : units[i]) c.assignment[v] = rgs[i];
        best = std::min(best, naive_mistakes_within(g, c, all));
    };
    for (;;) {
        evaluate();
        std::size_t i = m;
        bool advanced = false;
        while (i > 1) {
            --i;
            int prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
            if (rgs[i] <= prefix_max) {
                ++rgs[i];
                for (std::size_t j = i + 1; j < m; ++j) rgs[j] = 0;
                advanced = true;
                break;
            }
            rgs[i] = 0;
            if (i == 1) return best;
        }
        if (!advanced && m == 1) return best;
    }
}

// Smallest vertex cover size by trying all subsets.
inline int min_cover_size_brute(const corrclust::SimpleGraph& g) {
    const int n = g.n;
    int best = n;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        bool covers = true;
        for (const auto& [u, v] : g.edges)
            if (!((mask >> u) & 1) && !((mask >> v) & 1)) {
                covers = false;
                break;
            }
        if (covers) best = std::min(best, __builtin_popcount(mask));
    }
    return best;
}

// Minimum multiway cut weight by assigning every non-terminal node to one of
// the terminals and cutting all edges whose endpoints land on different
// terminals.  Exhaustive over assignments.
inline long long multiway_cut_cost_brute(const corrclust::TerminalGraph& tg) {
    const int n = tg.n;
    const int k = static_cast<int>(tg.terminals.size());
    std::vector<int> owner(n, -1);
    for (int i = 0; i < k; ++i) owner[tg.terminals[i]] = i;
    std::vector<int> free_nodes;
    for (int v = 0; v < n; ++v)
        if (owner[v] == -1) free_nodes.push_back(v);
    std::vector<int> pick(free_nodes.size(), 0);
    long long best = std::numeric_limits<long long>::max();
    for (;;) {
        for (std::size_t i = 0; i < free_nodes.size(); ++i) owner[free_nodes[i]] = pick[i];
        long long cost = 0;
        for (const auto& e : tg.edges)
            if (owner[e.u] != owner[e.v]) cost += e.w;
        best = std::min(best, cost);
        std::size_t i = 0;
        while (i < pick.size() && pick[i] == k - 1) pick[i++] = 0;
        if (i == pick.size()) return best == std::numeric_limits<long long>::max() ? 0 : best;
        ++pick[i];
    }
}

// Edmonds-Karp max flow on a small directed graph.
class EkFlow {
public:
    explicit EkFlow(int n) : n_(n), cap_(static_cast<std::size_t>(n) * n, 0) {}

    void add(int u, int v, long long c) { cap_[idx(u, v)] += c; }

    long long solve(int s, int t) {
        long long flow = 0;
        for (;;) {
            std::vector<int> parent(n_, -1);
            parent[s] = s;
            std::queue<int> q;
            q.push(s);
            while (!q.empty() && parent[t] == -1) {
                int u = q.front();
                q.pop();
                for (int v = 0; v < n_; ++v)
                    if (parent[v] == -1 && cap_[idx(u, v)] > 0) {
                        parent[v] = u;
                        q.push(v);
                    }
            }
            if (parent[t] == -1) return flow;
            long long push = std::numeric_limits<long long>::max();
            for (int v = t; v != s; v = parent[v]) push = std::min(push, cap_[idx(parent[v], v)]);
            for (int v = t; v != s; v = parent[v]) {
                cap_[idx(parent[v], v)] -= push;
                cap_[idx(v, parent[v])] += push;
            }
            flow += push;
        }
    }

private:
    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
    int n_;
    std::vector<long long> cap_;
};

// --- deterministic random inputs -----------------------------------------

// Labels drawn iid: Plus with p_plus, Minus with p_minus, else Missing.
inline SignedGraph random_graph(int n, double p_plus, double p_minus, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Label> mat(static_cast<std::size_t>(n) * n, Label::Missing);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double x = unif(rng);
            Label l = x < p_plus ? Label::Plus : (x < p_plus + p_minus ? Label::Minus : Label::Missing);
            corrclust::set_label(mat, n, u, v, l);
        }
    return SignedGraph::from_matrix(n, std::move(mat));
}

inline SignedGraph random_complete_graph(int n, double p_plus, std::mt19937_64& rng) {
    return random_graph(n, p_plus, 1.0 - p_plus, rng);
}

// Missing pairs confined to ones touching the last k_bad vertices, with the
// stated probability; everything else labeled.
inline SignedGraph random_bad_bounded_graph(int n, int k_bad, double p_plus, double p_missing,
                                            std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Label> mat(static_cast<std::size_t>(n) * n, Label::Missing);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            bool bad_pair = u >= n - k_bad || v >= n - k_bad;
            Label l;
            if (bad_pair && unif(rng) < p_missing) l = Label::Missing;
            else l = unif(rng) < p_plus ? Label::Plus : Label::Minus;
            corrclust::set_label(mat, n, u, v, l);
        }
    return SignedGraph::from_matrix(n, std::move(mat));
}

inline VertexSet random_subset(int n, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    VertexSet s;
    for (int v = 0; v < n; ++v)
        if (unif(rng) < p) s.push_back(v);
    return s;
}

inline Clustering random_clustering(int n, int max_clusters, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, max_clusters - 1);
    Clustering c = Clustering::unassigned(n);
    for (int v = 0; v < n; ++v) c.assignment[v] = pick(rng);
    c.normalize();
    return c;
}

inline corrclust::TerminalGraph random_terminal_graph(int free_nodes, int terminals,
                                                      double p_edge, int max_w,
                                                      std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> weight(1, max_w);
    corrclust::TerminalGraph tg;
    tg.n = free_nodes + terminals;
    tg.node_vertex.assign(tg.n, -1);
    for (int i = 0; i < free_nodes; ++i) tg.node_vertex[i] = i;
    for (int t = 0; t < terminals; ++t) tg.terminals.push_back(free_nodes + t);
    for (int u = 0; u < tg.n; ++u)
        for (int v = u + 1; v < tg.n; ++v) {
            bool both_terminals = u >= free_nodes && v >= free_nodes;
            if (!both_terminals && unif(rng) < p_edge)
                tg.edges.push_back({u, v, weight(rng)});
        }
    return tg;
}

}  // namespace oracles
