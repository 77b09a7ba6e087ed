#pragma once

#include <algorithm>
#include <vector>

namespace corrclust {

// Vertex sets are sorted, duplicate-free vectors of vertex ids.  The solver
// shuffles small sets around constantly; sorted vectors keep every operation
// deterministic and cheap at this scale.
using VertexSet = std::vector<int>;

namespace vset {

inline VertexSet canonical(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool contains(const VertexSet& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline VertexSet unite(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool is_subset(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool disjoint(const VertexSet& a, const VertexSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else return false;
    }
    return true;
}

// All of 0..n-1 that are not in s.
inline VertexSet complement(const VertexSet& s, int n) {
    VertexSet out;
    out.reserve(n - s.size());
    auto it = s.begin();
    for (int v = 0; v < n; ++v) {
        if (it != s.end() && *it == v) ++it;
        else out.push_back(v);
    }
    return out;
}

inline VertexSet range(int n) {
    VertexSet out(n);
    for (int v = 0; v < n; ++v) out[v] = v;
    return out;
}

}  // namespace vset

// O(1) membership mask for hot loops over adjacency lists.
class VertexMask {
public:
    VertexMask(int n, const VertexSet& s) : in_(n, 0) {
        for (int v : s) in_[v] = 1;
    }

    bool operator[](int v) const { return in_[v] != 0; }

private:
    std::vector<char> in_;
};

}  // namespace corrclust
