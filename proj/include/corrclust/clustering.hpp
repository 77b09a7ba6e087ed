#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// A (possibly partial) clustering: assignment[v] is v's cluster id, or -1
// while v is outside the solved subproblem.  normalize() renumbers ids in
// order of first appearance so equal partitions compare equal.
struct Clustering {
    std::vector<int> assignment;

    static Clustering unassigned(int n) {
        Clustering c;
        c.assignment.assign(n, -1);
        return c;
    }

    static Clustering single_cluster(int n) {
        Clustering c;
        c.assignment.assign(n, 0);
        return c;
    }

    static Clustering singletons(int n) {
        Clustering c;
        c.assignment.resize(n);
        for (int v = 0; v < n; ++v) c.assignment[v] = v;
        return c;
    }

    static Clustering of_clusters(int n, const std::vector<VertexSet>& clusters) {
        Clustering c = unassigned(n);
        int id = 0;
        for (const auto& cl : clusters) {
            for (int v : cl) {
                if (v < 0 || v >= n) throw std::invalid_argument("cluster vertex out of range");
                if (c.assignment[v] != -1)
                    throw std::invalid_argument("vertex " + std::to_string(v) +
                                                " appears in two clusters");
                c.assignment[v] = id;
            }
            ++id;
        }
        c.normalize();
        return c;
    }

    int size() const { return static_cast<int>(assignment.size()); }

    bool total() const {
        return std::find(assignment.begin(), assignment.end(), -1) == assignment.end();
    }

    VertexSet assigned_vertices() const {
        VertexSet out;
        for (int v = 0; v < size(); ++v)
            if (assignment[v] != -1) out.push_back(v);
        return out;
    }

    int cluster_count() const {
        std::vector<int> ids;
        for (int a : assignment)
            if (a != -1) ids.push_back(a);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return static_cast<int>(ids.size());
    }

    // Clusters as vertex sets, ordered by cluster id (after normalize: by
    // smallest first-appearing vertex).  Unassigned vertices are skipped.
    std::vector<VertexSet> clusters() const {
        int max_id = -1;
        for (int a : assignment) max_id = std::max(max_id, a);
        std::vector<VertexSet> out(max_id + 1);
        for (int v = 0; v < size(); ++v)
            if (assignment[v] != -1) out[assignment[v]].push_back(v);
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const VertexSet& s) { return s.empty(); }),
                  out.end());
        return out;
    }

    void normalize() {
        std::vector<int> remap;
        int next = 0;
        for (int& a : assignment) {
            if (a == -1) continue;
            if (a < 0) throw std::invalid_argument("negative cluster id");
            if (a >= static_cast<int>(remap.size())) remap.resize(a + 1, -1);
            if (remap[a] == -1) remap[a] = next++;
            a = remap[a];
        }
    }

    friend bool operator==(const Clustering& a, const Clustering& b) {
        return a.assignment == b.assignment;
    }
};

// Adds the vertices of `cluster` to `into` as one fresh cluster.  The
// vertices must currently be unassigned.
inline void append_cluster(Clustering& into, const VertexSet& cluster) {
    int id = 0;
    for (int a : into.assignment) id = std::max(id, a + 1);
    for (int v : cluster) {
        if (v < 0 || v >= into.size()) throw std::invalid_argument("cluster vertex out of range");
        if (into.assignment[v] != -1)
            throw std::invalid_argument("vertex " + std::to_string(v) + " already assigned");
        into.assignment[v] = id;
    }
}

// Merges a partial clustering over disjoint vertices into `into`.
inline void append_clustering(Clustering& into, const Clustering& part) {
    if (part.size() != into.size())
        throw std::invalid_argument("append_clustering size mismatch");
    int offset = 0;
    for (int a : into.assignment) offset = std::max(offset, a + 1);
    for (int v = 0; v < part.size(); ++v) {
        if (part.assignment[v] == -1) continue;
        if (into.assignment[v] != -1)
            throw std::invalid_argument("vertex " + std::to_string(v) + " already assigned");
        into.assignment[v] = offset + part.assignment[v];
    }
}

struct MistakeReport {
    long long positive = 0;  // Plus pairs split across clusters
    long long negative = 0;  // Minus pairs sharing a cluster
    long long total = 0;
};

// Disagreement count of a total clustering.  Missing pairs never contribute.
inline MistakeReport count_mistakes(const SignedGraph& g, const Clustering& c) {
    if (c.size() != g.size()) throw std::invalid_argument("clustering size mismatch");
    if (!c.total()) throw std::invalid_argument("count_mistakes needs a total clustering");
    MistakeReport r;
    for (int u = 0; u < g.size(); ++u) {
        for (int v : g.plus_neighbors(u))
            if (u < v && c.assignment[u] != c.assignment[v]) ++r.positive;
        for (int v : g.minus_neighbors(u))
            if (u < v && c.assignment[u] == c.assignment[v]) ++r.negative;
    }
    r.total = r.positive + r.negative;
    return r;
}

// Disagreements restricted to pairs inside s; used when comparing candidate
// solutions of a subproblem.  Every vertex of s must be assigned.
inline MistakeReport count_mistakes_within(const SignedGraph& g, const Clustering& c,
                                           const VertexSet& s) {
    if (c.size() != g.size()) throw std::invalid_argument("clustering size mismatch");
    MistakeReport r;
    VertexMask in_s(g.size(), s);
    for (int u : s) {
        if (c.assignment[u] == -1)
            throw std::invalid_argument("vertex " + std::to_string(u) + " unassigned");
        for (int v : g.plus_neighbors(u))
            if (u < v && in_s[v] && c.assignment[u] != c.assignment[v]) ++r.positive;
        for (int v : g.minus_neighbors(u))
            if (u < v && in_s[v] && c.assignment[u] == c.assignment[v]) ++r.negative;
    }
    r.total = r.positive + r.negative;
    return r;
}

}  // namespace corrclust
