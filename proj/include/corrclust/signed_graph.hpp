#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrclust/errors.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// Pairwise similarity labels.  Missing means the pair carries no information
// and never contributes to the objective.
enum class Label : std::uint8_t { Missing = 0, Plus = 1, Minus = 2 };

inline const char* label_name(Label l) {
    switch (l) {
        case Label::Plus: return "+";
        case Label::Minus: return "-";
        default: return "0";
    }
}

struct LabeledEdge {
    int u;
    int v;
    Label label;
};

// Immutable signed graph on vertices 0..n-1.  A dense symmetric label matrix
// backs O(1) pair lookups; per-sign sorted adjacency lists back neighborhood
// scans.  Algorithms that rewrite labels copy the matrix, edit it, and
// rebuild via from_matrix.
class SignedGraph {
public:
    SignedGraph() = default;

    SignedGraph(int n, const std::vector<LabeledEdge>& edges) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
        n_ = n;
        labels_.assign(static_cast<std::size_t>(n) * n, Label::Missing);
        for (const auto& e : edges) {
            check_vertex(e.u);
            check_vertex(e.v);
            if (e.u == e.v)
                throw std::invalid_argument("self-loop on vertex " + std::to_string(e.u));
            if (e.label == Label::Missing)
                throw std::invalid_argument("explicit missing edge in edge list");
            if (at(e.u, e.v) != Label::Missing)
                throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + " " +
                                            std::to_string(e.v));
            at(e.u, e.v) = e.label;
            at(e.v, e.u) = e.label;
        }
        build_adjacency();
    }

    // Builds from a row-major n*n label matrix; must be symmetric with a
    // Missing diagonal.  Violations indicate a bug in a caller's rewrite.
    static SignedGraph from_matrix(int n, std::vector<Label> labels) {
        if (n < 0 || labels.size() != static_cast<std::size_t>(n) * n)
            throw invariant_error("label matrix has wrong size");
        SignedGraph g;
        g.n_ = n;
        g.labels_ = std::move(labels);
        for (int u = 0; u < n; ++u) {
            if (g.at(u, u) != Label::Missing)
                throw invariant_error("label matrix has a non-missing diagonal entry");
            for (int v = u + 1; v < n; ++v)
                if (g.at(u, v) != g.at(v, u))
                    throw invariant_error("label matrix is not symmetric");
        }
        g.build_adjacency();
        return g;
    }

    int size() const { return n_; }

    Label label(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("label queried for a vertex with itself");
        return labels_[static_cast<std::size_t>(u) * n_ + v];
    }

    const std::vector<int>& plus_neighbors(int v) const {
        check_vertex(v);
        return plus_adj_[v];
    }

    const std::vector<int>& minus_neighbors(int v) const {
        check_vertex(v);
        return minus_adj_[v];
    }

    // Vertices sharing no label with v (computed on demand; cold path).
    std::vector<int> missing_neighbors(int v) const {
        check_vertex(v);
        std::vector<int> out;
        for (int u = 0; u < n_; ++u)
            if (u != v && at(v, u) == Label::Missing) out.push_back(u);
        return out;
    }

    long long plus_edge_count() const { return plus_edges_; }
    long long minus_edge_count() const { return minus_edges_; }
    long long labeled_pair_count() const { return plus_edges_ + minus_edges_; }

    // All labeled edges with u < v, sorted lexicographically.
    std::vector<LabeledEdge> edges() const {
        std::vector<LabeledEdge> out;
        out.reserve(static_cast<std::size_t>(labeled_pair_count()));
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (at(u, v) != Label::Missing) out.push_back({u, v, at(u, v)});
        return out;
    }

    const std::vector<Label>& matrix() const { return labels_; }

    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            throw std::invalid_argument("vertex " + std::to_string(v) + " out of range [0, " +
                                        std::to_string(n_) + ")");
    }

private:
    Label& at(int u, int v) { return labels_[static_cast<std::size_t>(u) * n_ + v]; }
    Label at(int u, int v) const { return labels_[static_cast<std::size_t>(u) * n_ + v]; }

    void build_adjacency() {
        plus_adj_.assign(n_, {});
        minus_adj_.assign(n_, {});
        plus_edges_ = minus_edges_ = 0;
        for (int u = 0; u < n_; ++u) {
            for (int v = 0; v < n_; ++v) {
                if (u == v) continue;
                Label l = at(u, v);
                if (l == Label::Plus) plus_adj_[u].push_back(v);
                else if (l == Label::Minus) minus_adj_[u].push_back(v);
            }
        }
        for (int u = 0; u < n_; ++u) {
            plus_edges_ += static_cast<long long>(plus_adj_[u].size());
            minus_edges_ += static_cast<long long>(minus_adj_[u].size());
        }
        plus_edges_ /= 2;
        minus_edges_ /= 2;
    }

    int n_ = 0;
    std::vector<Label> labels_;
    std::vector<std::vector<int>> plus_adj_;
    std::vector<std::vector<int>> minus_adj_;
    long long plus_edges_ = 0;
    long long minus_edges_ = 0;
};

// Convenience for matrix rewrites.
inline void set_label(std::vector<Label>& m, int n, int u, int v, Label l) {
    m[static_cast<std::size_t>(u) * n + v] = l;
    m[static_cast<std::size_t>(v) * n + u] = l;
}

// Partition of the neighbors-outside-s of a vertex set by label class.
struct NeighborhoodSets {
    VertexSet plus;    // vertices outside s with at least one Plus edge into s
    VertexSet minus;   // ... at least one Minus edge into s
    VertexSet empty;   // ... at least one Missing pair with s
};

inline NeighborhoodSets neighborhoods(const SignedGraph& g, const VertexSet& s) {
    for (int v : s) g.check_vertex(v);
    NeighborhoodSets out;
    VertexMask in_s(g.size(), s);
    std::vector<char> has_plus(g.size(), 0), has_minus(g.size(), 0), has_empty(g.size(), 0);
    for (int x : s) {
        for (int v : g.plus_neighbors(x))
            if (!in_s[v]) has_plus[v] = 1;
        for (int v : g.minus_neighbors(x))
            if (!in_s[v]) has_minus[v] = 1;
    }
    for (int v = 0; v < g.size(); ++v) {
        if (in_s[v]) continue;
        for (int x : s) {
            if (g.label(v, x) == Label::Missing) {
                has_empty[v] = 1;
                break;
            }
        }
    }
    for (int v = 0; v < g.size(); ++v) {
        if (has_plus[v]) out.plus.push_back(v);
        if (has_minus[v]) out.minus.push_back(v);
        if (has_empty[v]) out.empty.push_back(v);
    }
    return out;
}

// Subgraph induced by verts (sorted, unique); vertex i of the result is
// verts[i].  Callers keep the mapping.
inline SignedGraph induced_subgraph(const SignedGraph& g, const VertexSet& verts) {
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
        if (verts[i] >= verts[i + 1])
            throw std::invalid_argument("induced_subgraph needs a sorted duplicate-free set");
    for (int v : verts) g.check_vertex(v);
    int m = static_cast<int>(verts.size());
    std::vector<Label> labels(static_cast<std::size_t>(m) * m, Label::Missing);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            set_label(labels, m, i, j, g.label(verts[i], verts[j]));
    return SignedGraph::from_matrix(m, std::move(labels));
}

// Number of edges of the given label with one endpoint in a and the other in
// b; a and b must be disjoint.
inline long long count_edges_between(const SignedGraph& g, const VertexSet& a, const VertexSet& b,
                                     Label want) {
    if (!vset::disjoint(a, b)) throw std::invalid_argument("count_edges_between on overlapping sets");
    long long count = 0;
    if (want == Label::Missing) {
        for (int x : a)
            for (int y : b)
                if (g.label(x, y) == Label::Missing) ++count;
        return count;
    }
    VertexMask in_b(g.size(), b);
    for (int x : a) {
        const auto& adj = want == Label::Plus ? g.plus_neighbors(x) : g.minus_neighbors(x);
        for (int y : adj)
            if (in_b[y]) ++count;
    }
    return count;
}

}  // namespace corrclust
