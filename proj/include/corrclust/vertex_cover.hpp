#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corrclust/errors.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// Unweighted simple graph used only for the cover computation.
struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;       // u < v, lexicographically sorted
    std::vector<std::vector<int>> adjacency;      // sorted neighbor lists

    static SimpleGraph from_edges(int n, std::vector<std::pair<int, int>> edges) {
        SimpleGraph g;
        g.n = n;
        g.adjacency.assign(n, {});
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n || u >= v)
                throw std::invalid_argument("bad edge in simple graph");
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        }
        g.edges = std::move(edges);
        return g;
    }
};

// The graph of unlabeled pairs: vertices as in g, an edge wherever the label
// is Missing.  A vertex cover of this graph is exactly a set whose removal
// leaves a completely labeled instance.
inline SimpleGraph empty_edge_graph(const SignedGraph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < g.size(); ++u)
        for (int v = u + 1; v < g.size(); ++v)
            if (g.label(u, v) == Label::Missing) edges.push_back({u, v});
    return SimpleGraph::from_edges(g.size(), std::move(edges));
}

struct CoverResult {
    VertexSet bad_vertices;  // a minimum vertex cover, sorted
    int k = 0;               // its size
};

namespace detail {

// Branch-and-bound state for the exact cover search.  Vertices are removed
// and restored in stack discipline; the scan and branch order is fixed so the
// returned cover is deterministic.
class VcSearch {
public:
    explicit VcSearch(const SimpleGraph& g) : adj_(g.n) {
        for (int v = 0; v < g.n; ++v) adj_[v].insert(g.adjacency[v].begin(), g.adjacency[v].end());
    }

    bool search(int budget, std::vector<int>& chosen) {
        std::vector<int> forced;
        // Reductions: a degree-1 vertex forces its neighbor; more generally,
        // if N(u)\{v} is contained in N(v)\{u} for an edge (u,v), some
        // minimum cover uses v.  Applied lowest-index-first until none fires.
        for (bool changed = true; changed;) {
            changed = false;
            for (int u = 0; u < static_cast<int>(adj_.size()) && !changed; ++u) {
                for (int v : adj_[u]) {
                    if (!dominates(v, u)) continue;
                    if (budget - static_cast<int>(forced.size()) == 0) {
                        undo_all(forced);
                        return false;
                    }
                    take(v);
                    forced.push_back(v);
                    changed = true;
                    break;
                }
            }
        }
        int remaining = budget - static_cast<int>(forced.size());
        auto edge = first_edge();
        if (edge.first == -1) {
            chosen.insert(chosen.end(), forced.begin(), forced.end());
            return true;
        }
        if (remaining > 0) {
            for (int pick : {edge.first, edge.second}) {
                take(pick);
                std::vector<int> sub;
                if (search(remaining - 1, sub)) {
                    chosen.insert(chosen.end(), forced.begin(), forced.end());
                    chosen.push_back(pick);
                    chosen.insert(chosen.end(), sub.begin(), sub.end());
                    return true;
                }
                untake(pick);
            }
        }
        undo_all(forced);
        return false;
    }

private:
    bool dominates(int v, int u) const {
        // Every neighbor of u other than v must also neighbor v.
        for (int w : adj_[u]) {
            if (w == v) continue;
            if (!adj_[v].count(w)) return false;
        }
        return true;
    }

    // Lexicographically smallest uncovered edge, smaller endpoint first.
    std::pair<int, int> first_edge() const {
        for (int u = 0; u < static_cast<int>(adj_.size()); ++u)
            if (!adj_[u].empty()) return {u, *adj_[u].begin()};
        return {-1, -1};
    }

    void take(int v) {
        saved_.push_back({v, std::vector<int>(adj_[v].begin(), adj_[v].end())});
        for (int w : saved_.back().second) adj_[w].erase(v);
        adj_[v].clear();
    }

    void untake(int v) {
        auto& rec = saved_.back();
        if (rec.first != v) throw invariant_error("cover search undo out of order");
        for (int w : rec.second) {
            adj_[v].insert(w);
            adj_[w].insert(v);
        }
        saved_.pop_back();
    }

    void undo_all(std::vector<int>& forced) {
        while (!forced.empty()) {
            untake(forced.back());
            forced.pop_back();
        }
    }

    std::vector<std::set<int>> adj_;
    std::vector<std::pair<int, std::vector<int>>> saved_;
};

}  // namespace detail

// Exact minimum vertex cover by iterative deepening, trying sizes 0..k_max.
// If even k_max does not suffice, throws budget_error carrying the proven
// lower bound k_max + 1.
inline CoverResult min_vertex_cover(const SimpleGraph& g, int k_max) {
    if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
    for (int k = 0; k <= k_max; ++k) {
        detail::VcSearch search(g);
        std::vector<int> chosen;
        if (search.search(k, chosen)) {
            CoverResult r;
            r.bad_vertices = vset::canonical(std::move(chosen));
            r.k = static_cast<int>(r.bad_vertices.size());
            return r;
        }
    }
    throw budget_error("no vertex cover of size at most " + std::to_string(k_max) +
                           "; minimum cover needs at least " + std::to_string(k_max + 1),
                       k_max + 1);
}

}  // namespace corrclust
