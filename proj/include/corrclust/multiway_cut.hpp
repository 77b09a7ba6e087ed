#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "corrclust/enumeration.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/max_flow.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

struct WeightedEdge {
    int u;
    int v;
    long long w;
};

// Weighted terminal graph built from the Plus edges of a signed graph with
// each designated block contracted to one terminal node.  Nodes 0..n-1;
// node_vertex maps non-terminal nodes back to original vertices (-1 for
// terminals); terminal i is the node for blocks[i].
struct TerminalGraph {
    int n = 0;
    std::vector<int> terminals;
    std::vector<WeightedEdge> edges;  // u < v, sorted, weights >= 1
    std::vector<int> node_vertex;
};

// Edge ids (into TerminalGraph::edges) whose removal separates the
// terminals, plus their total weight.
struct CutSet {
    std::vector<int> edge_ids;
    long long weight = 0;
};

// Contracts each block of p to a terminal and keeps Plus edges as unit
// weights, merged by endpoint pair.  Blocks must be disjoint, nonempty sets
// of vertices of g; the non-block vertices become the non-terminal nodes in
// ascending vertex order.
inline TerminalGraph build_auxiliary(const SignedGraph& g, const BadPartition& p) {
    VertexSet covered;
    for (const auto& block : p.blocks) {
        if (block.empty()) throw std::invalid_argument("empty block in partition");
        for (int v : block) g.check_vertex(v);
        if (!vset::disjoint(covered, block))
            throw std::invalid_argument("partition blocks overlap");
        covered = vset::unite(covered, block);
    }
    VertexSet good = vset::complement(covered, g.size());

    TerminalGraph tg;
    tg.n = static_cast<int>(good.size() + p.blocks.size());
    std::vector<int> node_of(g.size(), -1);
    for (int i = 0; i < static_cast<int>(good.size()); ++i) {
        node_of[good[i]] = i;
        tg.node_vertex.push_back(good[i]);
    }
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        int node = static_cast<int>(good.size() + b);
        tg.terminals.push_back(node);
        tg.node_vertex.push_back(-1);
        for (int v : p.blocks[b]) node_of[v] = node;
    }

    std::vector<std::vector<long long>> weight(tg.n, std::vector<long long>(tg.n, 0));
    for (int u = 0; u < g.size(); ++u) {
        for (int v : g.plus_neighbors(u)) {
            if (u >= v) continue;
            int a = node_of[u];
            int b = node_of[v];
            if (a == b) continue;  // Plus edge inside one block
            weight[std::min(a, b)][std::max(a, b)] += 1;
        }
    }
    for (int a = 0; a < tg.n; ++a)
        for (int b = a + 1; b < tg.n; ++b)
            if (weight[a][b] > 0) tg.edges.push_back({a, b, weight[a][b]});
    return tg;
}

namespace detail {

// Connectivity check with a subset of edges deleted.
inline bool separates_terminals(const TerminalGraph& tg, const std::vector<char>& removed) {
    std::vector<std::vector<int>> adj(tg.n);
    for (std::size_t e = 0; e < tg.edges.size(); ++e) {
        if (removed[e]) continue;
        adj[tg.edges[e].u].push_back(tg.edges[e].v);
        adj[tg.edges[e].v].push_back(tg.edges[e].u);
    }
    std::vector<int> comp(tg.n, -1);
    for (int t : tg.terminals) {
        if (comp[t] != -1) return false;  // two terminals met already
        std::queue<int> q;
        comp[t] = t;
        q.push(t);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u]) {
                if (comp[w] == -1) {
                    comp[w] = t;
                    q.push(w);
                } else if (comp[w] != t) {
                    return false;
                }
            }
        }
    }
    return true;
}

inline std::vector<char> removal_mask(const TerminalGraph& tg, const std::vector<int>& edge_ids) {
    std::vector<char> removed(tg.edges.size(), 0);
    for (int e : edge_ids) {
        if (e < 0 || e >= static_cast<int>(tg.edges.size()))
            throw std::invalid_argument("cut references an unknown edge id");
        removed[e] = 1;
    }
    return removed;
}

}  // namespace detail

inline bool cut_separates(const TerminalGraph& tg, const CutSet& f) {
    return detail::separates_terminals(tg, detail::removal_mask(tg, f.edge_ids));
}

// 2-approximate multiway cut: per-terminal minimum isolating cuts (max flow
// against all other terminals merged into one sink), union all but the
// heaviest, then greedily drop redundant edges, heaviest first.  Result is
// always a valid separator.
inline CutSet multiway_cut_isolating(const TerminalGraph& tg) {
    CutSet result;
    if (tg.terminals.size() <= 1) return result;

    long long total_weight = 0;
    for (const auto& e : tg.edges) {
        if (e.w < 1) throw std::invalid_argument("terminal graph edge with weight < 1");
        total_weight += e.w;
    }
    const long long inf = total_weight + 1;

    std::vector<std::vector<int>> iso_cuts;
    std::vector<long long> iso_weights;
    for (std::size_t ti = 0; ti < tg.terminals.size(); ++ti) {
        MaxFlow mf(tg.n + 1);
        const int sink = tg.n;
        std::vector<int> arc_of_edge(tg.edges.size());
        for (std::size_t e = 0; e < tg.edges.size(); ++e)
            arc_of_edge[e] = mf.add_edge(tg.edges[e].u, tg.edges[e].v, tg.edges[e].w, tg.edges[e].w);
        for (std::size_t tj = 0; tj < tg.terminals.size(); ++tj)
            if (tj != ti) mf.add_edge(tg.terminals[tj], sink, inf, 0);
        long long flow = mf.solve(tg.terminals[ti], sink);
        auto side = mf.min_cut_side();
        std::vector<int> cut;
        long long cut_weight = 0;
        for (std::size_t e = 0; e < tg.edges.size(); ++e) {
            if (side[tg.edges[e].u] != side[tg.edges[e].v]) {
                cut.push_back(static_cast<int>(e));
                cut_weight += tg.edges[e].w;
            }
        }
        if (cut_weight != flow)
            throw invariant_error("isolating cut weight disagrees with max-flow value");
        iso_cuts.push_back(std::move(cut));
        iso_weights.push_back(cut_weight);
    }

    // Drop the heaviest isolating cut (first such index on ties).
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < iso_weights.size(); ++i)
        if (iso_weights[i] > iso_weights[heaviest]) heaviest = i;

    std::vector<char> removed(tg.edges.size(), 0);
    for (std::size_t i = 0; i < iso_cuts.size(); ++i) {
        if (i == heaviest) continue;
        for (int e : iso_cuts[i]) removed[e] = 1;
    }
    if (!detail::separates_terminals(tg, removed))
        throw invariant_error("union of isolating cuts fails to separate the terminals");

    // Greedy pruning: try to re-add edges, heaviest first (lowest id on
    // ties), keeping the separator property.
    std::vector<int> in_cut;
    for (std::size_t e = 0; e < tg.edges.size(); ++e)
        if (removed[e]) in_cut.push_back(static_cast<int>(e));
    std::sort(in_cut.begin(), in_cut.end(), [&](int a, int b) {
        if (tg.edges[a].w != tg.edges[b].w) return tg.edges[a].w > tg.edges[b].w;
        return a < b;
    });
    for (int e : in_cut) {
        removed[e] = 0;
        if (!detail::separates_terminals(tg, removed)) removed[e] = 1;
    }

    for (std::size_t e = 0; e < tg.edges.size(); ++e) {
        if (removed[e]) {
            result.edge_ids.push_back(static_cast<int>(e));
            result.weight += tg.edges[e].w;
        }
    }
    return result;
}

inline constexpr int kDefaultMultiwayExactCap = 16;

// Exact minimum multiway cut by enumerating assignments of non-terminal
// nodes to terminal sides; an edge is cut iff its endpoints land on
// different sides.  This equals the optimal multiway cut because any valid
// separator induces such an assignment (component of each terminal) of no
// greater weight.  Refuses instances with too many free nodes.
inline CutSet multiway_cut_exact(const TerminalGraph& tg,
                                 int max_free = kDefaultMultiwayExactCap) {
    CutSet best;
    if (tg.terminals.size() <= 1) return best;
    for (const auto& e : tg.edges)
        if (e.w < 1) throw std::invalid_argument("terminal graph edge with weight < 1");

    std::vector<int> free_nodes;
    std::vector<int> side(tg.n, -1);
    for (std::size_t i = 0; i < tg.terminals.size(); ++i) side[tg.terminals[i]] = static_cast<int>(i);
    for (int v = 0; v < tg.n; ++v)
        if (side[v] == -1) free_nodes.push_back(v);

    const int k = static_cast<int>(tg.terminals.size());
    const int f = static_cast<int>(free_nodes.size());
    if (f > max_free)
        throw budget_error("exact multiway cut with " + std::to_string(f) +
                           " non-terminal nodes exceeds the cap of " + std::to_string(max_free));
    double assignments = std::pow(static_cast<double>(k), f);
    if (assignments > 140e6)
        throw budget_error("exact multiway cut would enumerate too many assignments");

    std::vector<int> digit(f, 0);
    long long best_weight = std::numeric_limits<long long>::max();
    std::vector<int> best_side;
    for (;;) {
        for (int i = 0; i < f; ++i) side[free_nodes[i]] = digit[i];
        long long weight = 0;
        for (const auto& e : tg.edges)
            if (side[e.u] != side[e.v]) weight += e.w;
        if (weight < best_weight) {
            best_weight = weight;
            best_side = side;
        }
        int i = f - 1;
        while (i >= 0 && digit[i] == k - 1) --i;
        if (i < 0) break;
        ++digit[i];
        for (int j = i + 1; j < f; ++j) digit[j] = 0;
    }

    for (std::size_t e = 0; e < tg.edges.size(); ++e) {
        if (best_side[tg.edges[e].u] != best_side[tg.edges[e].v]) {
            best.edge_ids.push_back(static_cast<int>(e));
            best.weight += tg.edges[e].w;
        }
    }
    if (!cut_separates(tg, best))
        throw invariant_error("exact multiway cut fails to separate the terminals");
    return best;
}

// Result of carving a signed graph along a multiway cut: the rewritten
// graph, its Plus-connected components (blocks kept whole), and for each
// component the index of the block it contains (-1 if none).
struct SplitResult {
    SignedGraph graph;
    std::vector<VertexSet> components;   // ordered by smallest vertex
    std::vector<int> component_block;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }

    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::vector<int> parent_;
};

}  // namespace detail

// Applies cut f to g given the auxiliary graph it was computed on.  Plus
// edges between different blocks vanish outright (they can never be
// honoured); Plus edges selected by f turn Minus (good-good) or vanish
// (good-block, i.e. every Plus edge from that good vertex into the block)
// unless both endpoints remain Plus-connected anyway, in which case the
// original labels survive.  The components of the result are the units the
// solver treats independently.
inline SplitResult apply_cut(const SignedGraph& g, const BadPartition& p, const TerminalGraph& tg,
                             const CutSet& f) {
    auto removed = detail::removal_mask(tg, f.edge_ids);
    if (!detail::separates_terminals(tg, removed))
        throw invariant_error("apply_cut called with a non-separating cut");

    const int n = g.size();
    std::vector<Label> mat = g.matrix();

    // Inter-block Plus pairs are gone for good.
    for (std::size_t a = 0; a < p.blocks.size(); ++a)
        for (std::size_t b = a + 1; b < p.blocks.size(); ++b)
            for (int u : p.blocks[a])
                for (int v : p.blocks[b])
                    if (g.label(u, v) == Label::Plus) set_label(mat, n, u, v, Label::Missing);

    // Demote the pairs behind every cut edge.
    if (tg.terminals.size() != p.blocks.size())
        throw std::invalid_argument("terminal graph does not match the partition");
    auto block_of_node = [&](int node) {
        auto it = std::lower_bound(tg.terminals.begin(), tg.terminals.end(), node);
        if (it == tg.terminals.end() || *it != node)
            throw invariant_error("cut edge endpoint is not a terminal");
        return static_cast<int>(it - tg.terminals.begin());
    };
    for (int e : f.edge_ids) {
        const auto& edge = tg.edges[e];
        bool u_term = tg.node_vertex[edge.u] == -1;
        bool v_term = tg.node_vertex[edge.v] == -1;
        if (u_term && v_term) continue;  // inter-block, handled above
        if (!u_term && !v_term) {
            set_label(mat, n, tg.node_vertex[edge.u], tg.node_vertex[edge.v], Label::Minus);
        } else {
            int good = u_term ? tg.node_vertex[edge.v] : tg.node_vertex[edge.u];
            int block = block_of_node(u_term ? edge.u : edge.v);
            for (int x : p.blocks[block])
                if (g.label(good, x) == Label::Plus) set_label(mat, n, good, x, Label::Missing);
        }
    }

    // Components of the rewritten Plus graph, blocks contracted.
    detail::UnionFind uf(n);
    for (const auto& block : p.blocks)
        for (std::size_t i = 1; i < block.size(); ++i) uf.unite(block[0], block[i]);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (mat[static_cast<std::size_t>(u) * n + v] == Label::Plus) uf.unite(u, v);

    // A cut edge whose endpoints stayed in one component was redundant for
    // that pair; restore what it demoted.
    for (int e : f.edge_ids) {
        const auto& edge = tg.edges[e];
        bool u_term = tg.node_vertex[edge.u] == -1;
        bool v_term = tg.node_vertex[edge.v] == -1;
        if (u_term && v_term) continue;
        if (!u_term && !v_term) {
            int x = tg.node_vertex[edge.u];
            int y = tg.node_vertex[edge.v];
            if (uf.find(x) == uf.find(y)) set_label(mat, n, x, y, Label::Plus);
        } else {
            int good = u_term ? tg.node_vertex[edge.v] : tg.node_vertex[edge.u];
            int block = block_of_node(u_term ? edge.u : edge.v);
            if (uf.find(good) != uf.find(p.blocks[block][0])) continue;
            for (int x : p.blocks[block])
                if (g.label(good, x) == Label::Plus &&
                    mat[static_cast<std::size_t>(good) * n + x] == Label::Missing)
                    set_label(mat, n, good, x, Label::Plus);
        }
    }

    SplitResult out;
    out.graph = SignedGraph::from_matrix(n, std::move(mat));

    // Group vertices by component root; order components by smallest member.
    std::vector<VertexSet> by_root(n);
    for (int v = 0; v < n; ++v) by_root[uf.find(v)].push_back(v);
    for (int v = 0; v < n; ++v)
        if (!by_root[v].empty()) out.components.push_back(by_root[v]);

    // Sanity: the rewritten Plus graph may not join two components.
    for (int u = 0; u < n; ++u)
        for (int v : out.graph.plus_neighbors(u))
            if (uf.find(u) != uf.find(v))
                throw invariant_error("cut application left a Plus edge between components");

    out.component_block.assign(out.components.size(), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        int root = uf.find(p.blocks[b][0]);
        bool placed = false;
        for (std::size_t c = 0; c < out.components.size(); ++c) {
            if (uf.find(out.components[c][0]) == root) {
                if (out.component_block[c] != -1)
                    throw invariant_error("two blocks share a component after the cut");
                out.component_block[c] = static_cast<int>(b);
                placed = true;
                break;
            }
        }
        if (!placed) throw invariant_error("block lost its component after the cut");
    }
    return out;
}

}  // namespace corrclust
