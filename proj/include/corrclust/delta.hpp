#pragma once

#include <stdexcept>
#include <string>

#include "corrclust/rational.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// Cleaning parameter.  The solver's structural predicates are evaluated at
// delta, 3*delta, 9*delta and 13*delta; the approximation analysis needs
// delta <= 1/5, and the cluster-cleaning machinery additionally needs
// 13*delta <= 1, which solver entry points enforce.  The type itself only
// requires positivity so that the guarantee formula stays evaluable (with
// its validity flag cleared) for out-of-range values.
struct DeltaParams {
    Rational delta{1, 65};

    DeltaParams() = default;

    explicit DeltaParams(Rational d) : delta(d) {
        if (!(d > Rational(0)))
            throw std::invalid_argument("delta must be positive, got " + d.str());
    }

    bool within_analysis_range() const { return delta <= Rational(1, 5); }

    // True when every predicate factor used by the solver stays meaningful.
    bool usable_for_solving() const { return Rational(13) * delta <= Rational(1); }
};

namespace detail {

inline void check_factor(const DeltaParams& p, int factor) {
    if (factor <= 0) throw std::invalid_argument("predicate factor must be positive");
    if (Rational(factor) * p.delta > Rational(1))
        throw std::invalid_argument("factor " + std::to_string(factor) + " * delta " +
                                    p.delta.str() + " exceeds 1; predicate is meaningless");
}

}  // namespace detail

// v is (factor*delta)-good with respect to cluster c: few Minus neighbors
// inside c and few Plus neighbors outside c, both relative to |c|.  All
// comparisons are exact (cross-multiplied integers).
inline bool is_delta_good_vertex(const SignedGraph& g, int v, const VertexSet& c,
                                 const DeltaParams& p, int factor = 1) {
    detail::check_factor(p, factor);
    g.check_vertex(v);
    for (int x : c) g.check_vertex(x);
    VertexMask in_c(g.size(), c);
    long long minus_in = 0;
    for (int u : g.minus_neighbors(v))
        if (in_c[u]) ++minus_in;
    long long plus_out = 0;
    for (int u : g.plus_neighbors(v))
        if (!in_c[u]) ++plus_out;
    long long size_c = static_cast<long long>(c.size());
    // count <= factor * delta * |c|
    long long rhs = factor * p.delta.num * size_c;
    return minus_in * p.delta.den <= rhs && plus_out * p.delta.den <= rhs;
}

inline bool is_delta_bad_vertex(const SignedGraph& g, int v, const VertexSet& c,
                                const DeltaParams& p, int factor = 1) {
    return !is_delta_good_vertex(g, v, c, p, factor);
}

// The set b (contained in c) is (factor*delta)-good for c: few Minus edges
// from b to the rest of c and few Plus edges from b to outside c, both
// relative to |b|*|c|.
inline bool is_delta_good_badset(const SignedGraph& g, const VertexSet& b, const VertexSet& c,
                                 const DeltaParams& p, int factor = 1) {
    detail::check_factor(p, factor);
    if (!vset::is_subset(b, c))
        throw std::invalid_argument("is_delta_good_badset requires b to be a subset of c");
    for (int x : c) g.check_vertex(x);
    VertexSet rest = vset::difference(c, b);
    VertexSet outside = vset::difference(vset::complement(c, g.size()), b);
    long long minus_cross = count_edges_between(g, b, rest, Label::Minus);
    long long plus_out = count_edges_between(g, b, outside, Label::Plus);
    long long rhs = factor * p.delta.num * static_cast<long long>(b.size()) *
                    static_cast<long long>(c.size());
    return minus_cross * p.delta.den <= rhs && plus_out * p.delta.den <= rhs;
}

// c is (factor*delta)-clean with respect to the designated set b: every
// vertex of c outside b is a (factor*delta)-good vertex, and if b meets c it
// must be contained in c and be a (factor*delta)-good set for it.
inline bool is_delta_clean(const SignedGraph& g, const VertexSet& c, const VertexSet& b,
                           const DeltaParams& p, int factor = 1) {
    detail::check_factor(p, factor);
    bool b_inside = !vset::disjoint(b, c);
    if (b_inside && !vset::is_subset(b, c))
        throw std::invalid_argument("is_delta_clean: b must be inside c or disjoint from it");
    for (int v : vset::difference(c, b))
        if (!is_delta_good_vertex(g, v, c, p, factor)) return false;
    if (b_inside && !is_delta_good_badset(g, b, c, p, factor)) return false;
    return true;
}

}  // namespace corrclust
