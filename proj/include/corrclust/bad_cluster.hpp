#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrclust/clustering.hpp"
#include "corrclust/complete_solver.hpp"
#include "corrclust/delta.hpp"
#include "corrclust/enumeration.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/rng.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// Working graph for the one-cluster search around a designated bad set: h is
// the canonical rewrite (the bad set internally complete Plus; each good
// vertex keeps only its surplus of majority-sign edges toward the
// lowest-indexed bad vertices), while `original` keeps the labels every
// candidate clustering is scored against.
struct WorkingGraph {
    SignedGraph h;
    SignedGraph original;
    VertexSet bad;

    int size() const { return h.size(); }
    VertexSet good() const { return vset::complement(bad, h.size()); }
};

inline WorkingGraph canonicalize(const SignedGraph& g, const VertexSet& b) {
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        if (b[i] >= b[i + 1]) throw std::invalid_argument("bad set must be sorted and unique");
    for (int v : b) g.check_vertex(v);
    const int n = g.size();
    std::vector<Label> mat = g.matrix();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            set_label(mat, n, b[i], b[j], Label::Plus);
    VertexMask in_b(n, b);
    for (int v = 0; v < n; ++v) {
        if (in_b[v]) continue;
        std::vector<int> plus_to, minus_to;
        for (int x : b) {
            Label l = g.label(v, x);
            if (l == Label::Plus) plus_to.push_back(x);
            else if (l == Label::Minus) minus_to.push_back(x);
        }
        for (int x : b) set_label(mat, n, v, x, Label::Missing);
        long long surplus = static_cast<long long>(plus_to.size()) -
                            static_cast<long long>(minus_to.size());
        const auto& majority = surplus >= 0 ? plus_to : minus_to;
        Label sign = surplus >= 0 ? Label::Plus : Label::Minus;
        long long keep = surplus >= 0 ? surplus : -surplus;
        for (long long i = 0; i < keep; ++i) set_label(mat, n, v, majority[i], sign);
    }
    WorkingGraph wg;
    wg.h = SignedGraph::from_matrix(n, std::move(mat));
    wg.original = g;
    wg.bad = b;
    return wg;
}

// The three frontier classes of the bad set in the canonical graph.  After
// canonicalization every good vertex touches the bad set with at most one
// sign, so plus and minus frontiers never overlap.
inline VertexSet plus_frontier(const WorkingGraph& wg) {
    return neighborhoods(wg.h, wg.bad).plus;
}

inline VertexSet minus_frontier(const WorkingGraph& wg) {
    return neighborhoods(wg.h, wg.bad).minus;
}

struct CleanPair {
    VertexSet c_prime;
    VertexSet c;
};

namespace detail {

inline void check_cluster_params(const DeltaParams& p) {
    if (!p.usable_for_solving())
        throw std::invalid_argument("cluster search needs 13 * delta <= 1, got delta = " +
                                    p.delta.str());
}

inline void check_working_vertex_set(const WorkingGraph& wg, const VertexSet& s,
                                     const char* what) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] >= s[i + 1])
            throw std::invalid_argument(std::string(what) + " must be sorted and unique");
    for (int v : s) wg.h.check_vertex(v);
}

}  // namespace detail

// Grows a cluster seed around good vertex u: start from u's closed Plus
// neighborhood plus the bad set, repeatedly drop the lowest-indexed good
// vertex (never u) that is 3delta-bad for the current set, then bail out to
// ({u},{u}) unless both the bad set and u end up 3delta-good.  The survivor
// c_prime is then padded with every vertex whose Plus degree into it is near
// total and whose Plus degree out of it is tiny, giving c.
inline CleanPair clean_cluster(const WorkingGraph& wg, int u, const DeltaParams& params) {
    detail::check_cluster_params(params);
    wg.h.check_vertex(u);
    if (vset::contains(wg.bad, u))
        throw std::invalid_argument("clean_cluster needs a good seed vertex");

    VertexSet a = vset::canonical([&] {
        std::vector<int> init{u};
        for (int v : wg.h.plus_neighbors(u)) init.push_back(v);
        for (int v : wg.bad) init.push_back(v);
        return init;
    }());

    for (bool removed = true; removed;) {
        removed = false;
        for (int v : a) {
            if (v == u || vset::contains(wg.bad, v)) continue;
            if (is_delta_bad_vertex(wg.h, v, a, params, 3)) {
                a = vset::difference(a, {v});
                removed = true;
                break;  // re-evaluate against the shrunken set
            }
        }
    }

    if (!is_delta_good_badset(wg.h, wg.bad, a, params, 3) ||
        !is_delta_good_vertex(wg.h, u, a, params, 3)) {
        return {{u}, {u}};
    }

    // Vertex addition: thresholds (1-9delta)|a| and 9delta|a|, compared
    // exactly. Candidates already in a change nothing but are tested anyway.
    const long long size_a = static_cast<long long>(a.size());
    const long long num = params.delta.num;
    const long long den = params.delta.den;
    VertexMask in_a(wg.size(), a);
    VertexSet added;
    for (int v = 0; v < wg.size(); ++v) {
        long long plus_in = 0, plus_out = 0;
        for (int w : wg.h.plus_neighbors(v)) {
            if (in_a[w]) ++plus_in;
            else ++plus_out;
        }
        if (plus_in * den >= (den - 9 * num) * size_a && plus_out * den <= 9 * num * size_a)
            added.push_back(v);
    }
    return {a, vset::unite(a, added)};
}

struct SeedChoice {
    int y = -1;
    CleanPair pair;
};

// Scans the Plus frontier for seeds whose grown clusters pass the size and
// 13delta-clean requirements, and keeps the qualifying one whose cluster cuts
// the fewest Plus edges off the bad set (lowest seed id on ties).  Absent
// when no seed qualifies.
inline std::optional<SeedChoice> select_y(const WorkingGraph& wg, const DeltaParams& params) {
    detail::check_cluster_params(params);
    std::optional<SeedChoice> best;
    long long best_cut = 0;
    for (int v : plus_frontier(wg)) {
        CleanPair pair = clean_cluster(wg, v, params);
        VertexSet needed = vset::unite(wg.bad, {v});
        if (!vset::is_subset(needed, pair.c_prime)) continue;
        // |c_prime| > (1/delta)|bad|
        if (!(static_cast<long long>(pair.c_prime.size()) * params.delta.num >
              params.delta.den * static_cast<long long>(wg.bad.size())))
            continue;
        if (!is_delta_clean(wg.h, pair.c, wg.bad, params, 13)) continue;
        long long cut = count_edges_between(wg.h, wg.bad,
                                            vset::complement(pair.c, wg.size()), Label::Plus);
        if (!best || cut < best_cut) {
            best = SeedChoice{v, pair};
            best_cut = cut;
        }
    }
    return best;
}

// Carrier for the full search result; `truncated` reports whether any subset
// family along the way was cut off by the enumeration budget.
struct BadClusterResult {
    Clustering clustering;
    bool truncated = false;
};

namespace detail {

// Shared state of one cluster-search invocation: the working graph, the
// knobs, a deterministic stream of child RNGs for the randomized solver, and
// the lazily computed fallback clustering ("everything else solved plainly,
// bad set as its own cluster").
class ClusterSearch {
public:
    ClusterSearch(const WorkingGraph& wg, const DeltaParams& params, const SolverChoice& solvers,
                  const EnumBudget& budget)
        : wg_(wg), params_(params), solvers_(solvers), budget_(budget),
          rng_(RngStream(solvers.seed)) {
        check_cluster_params(params_);
        if (budget_.max_subset_size == 0)
            budget_.max_subset_size = std::max<int>(1, 2 * static_cast<int>(wg.bad.size()));
    }

    bool truncated() const { return truncated_; }

    long long score(const Clustering& c) const {
        return count_mistakes(wg_.original, c).total;
    }

    // Fallback: solve everything but the bad set, then add the bad set as
    // one cluster.  Computed once so every comparison sees the same object.
    const Clustering& fallback() {
        if (!fallback_) {
            Clustering c = solve_rest(wg_.good());
            if (!wg_.bad.empty()) append_cluster(c, wg_.bad);
            c.normalize();
            fallback_ = std::move(c);
        }
        return *fallback_;
    }

    Clustering solve_rest(const VertexSet& s) {
        return complete_solve(wg_.h, s, solvers_, next_rng());
    }

    // Candidate where `cluster` is one cluster and the rest of the graph is
    // solved independently.
    Clustering cluster_plus_rest(const VertexSet& cluster) {
        Clustering c = solve_rest(vset::difference(vset::range(wg_.size()), cluster));
        append_cluster(c, cluster);
        c.normalize();
        return c;
    }

    Clustering run() {
        if (wg_.bad.empty()) throw std::invalid_argument("cluster search needs a bad set");
        const VertexSet npb = plus_frontier(wg_);
        const long long b = static_cast<long long>(wg_.bad.size());
        const long long num = params_.delta.num;
        const long long den = params_.delta.den;
        // |N+(B)| > 2|B|^2 + (2/delta)|B| picks the large-cluster branch.
        if (static_cast<long long>(npb.size()) * num > 2 * num * b * b + 2 * den * b) {
            auto seed = select_y(wg_, params_);
            if (!seed) return fallback();
            const VertexSet& cy = seed->pair.c;
            VertexSet rest_of_c = vset::difference(cy, wg_.bad);
            long long e_minus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Minus);
            long long e_plus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Plus);
            if (e_minus <= e_plus) {
                Clustering cand = cluster_plus_rest(cy);
                return score(cand) <= score(fallback()) ? cand : fallback();
            }
            return more_negative(cy);
        }
        return bounded_positive(npb);
    }

    // Cluster c holds the bad set but its Minus edges toward the rest of c
    // outnumber the Plus ones.  Try shedding subsets of the offending
    // negative frontier; when that frontier is large, instead guess which of
    // its first 3|B| members must stay with the bad set and hand those to
    // the replacement search.
    Clustering more_negative(const VertexSet& c) {
        check_working_vertex_set(wg_, c, "cluster");
        if (!vset::is_subset(wg_.bad, c))
            throw std::invalid_argument("cluster must contain the bad set");
        VertexSet rest_of_c = vset::difference(c, wg_.bad);
        long long e_minus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Minus);
        long long e_plus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Plus);
        if (e_minus <= e_plus)
            throw std::invalid_argument(
                "more_negative requires the Minus edges into the cluster to dominate");

        Clustering best = fallback();
        long long best_score = score(best);
        auto consider = [&](Clustering cand) {
            long long s = score(cand);
            if (s < best_score) {
                best = std::move(cand);
                best_score = s;
            }
        };

        VertexSet neg_in_c = vset::intersect(minus_frontier(wg_), c);
        if (static_cast<long long>(neg_in_c.size()) < 3 * static_cast<long long>(wg_.bad.size())) {
            SubsetFamily fam = enumerate_subsets(neg_in_c, budget_);
            truncated_ |= fam.truncated;
            for (const auto& r : fam.subsets) consider(cluster_plus_rest(vset::difference(c, r)));
        } else {
            VertexSet n(neg_in_c.begin(),
                        neg_in_c.begin() + 3 * static_cast<std::size_t>(wg_.bad.size()));
            SubsetFamily fam = enumerate_subsets(n, budget_);
            truncated_ |= fam.truncated;
            for (const auto& b_plus : fam.subsets) {
                if (b_plus.size() >= wg_.bad.size() && !b_plus.empty())
                    consider(good_replace(b_plus));
            }
        }
        return best;
    }

    // Rewrites the graph so that b_plus can stand in for the bad set: any
    // outside vertex leaning toward the bad set gets half of its b_plus
    // Minus edges flipped to Plus (and symmetrically for the Minus side),
    // then the bad set is disconnected entirely.
    SignedGraph replacement_graph(const VertexSet& b_plus) const {
        const int n = wg_.size();
        std::vector<Label> mat = wg_.h.matrix();
        VertexSet excluded = vset::unite(wg_.bad, b_plus);
        for (int v : vset::complement(excluded, n)) {
            long long l3 = 0, l4 = 0;
            for (int x : wg_.bad) {
                Label l = wg_.h.label(v, x);
                if (l == Label::Plus) ++l3;
                else if (l == Label::Minus) ++l4;
            }
            std::vector<int> plus_to, minus_to;
            for (int x : b_plus) {
                Label l = wg_.h.label(v, x);
                if (l == Label::Plus) plus_to.push_back(x);
                else if (l == Label::Minus) minus_to.push_back(x);
            }
            long long l5 = static_cast<long long>(plus_to.size());
            long long l6 = static_cast<long long>(minus_to.size());
            if (l3 > l5) {
                for (long long i = 0; i < l6 / 2; ++i)
                    set_label(mat, n, v, minus_to[i], Label::Plus);
            } else if (l4 > l6) {
                for (long long i = 0; i < l5 / 2; ++i)
                    set_label(mat, n, v, plus_to[i], Label::Minus);
            }
        }
        for (int x : wg_.bad)
            for (int v = 0; v < n; ++v)
                if (v != x) set_label(mat, n, x, v, Label::Missing);
        return SignedGraph::from_matrix(n, std::move(mat));
    }

    // Solves the replacement graph with b_plus pinned together, then pulls
    // the bad set into b_plus's cluster.
    Clustering good_replace(const VertexSet& b_plus) {
        check_working_vertex_set(wg_, b_plus, "replacement set");
        if (!vset::disjoint(b_plus, wg_.bad))
            throw std::invalid_argument("replacement set must avoid the bad set");
        if (b_plus.size() < wg_.bad.size())
            throw std::invalid_argument("replacement set must be at least as large as the bad set");
        SignedGraph hat = replacement_graph(b_plus);
        Clustering c = constrained_cc(hat, wg_.good(), b_plus, solvers_, next_rng());
        int target = c.assignment[b_plus.front()];
        for (int x : b_plus)
            if (c.assignment[x] != target)
                throw invariant_error("replacement set split despite the must-link constraint");
        for (int x : wg_.bad) c.assignment[x] = target;
        c.normalize();
        return c;
    }

    // The small-frontier branch: guess which frontier subset joins the bad
    // cluster, grow a cleaned cluster from its first member, and let the
    // neighbor search refine the guess.
    Clustering bounded_positive(const VertexSet& npb) {
        const long long b = static_cast<long long>(wg_.bad.size());
        const long long num = params_.delta.num;
        const long long den = params_.delta.den;
        if (static_cast<long long>(npb.size()) * num > 2 * num * b * b + 2 * den * b)
            throw std::invalid_argument(
                "bounded_positive requires a small Plus frontier; use the seed-selection branch");

        Clustering best = fallback();
        long long best_score = score(best);
        auto consider = [&](Clustering cand) {
            long long s = score(cand);
            if (s < best_score) {
                best = std::move(cand);
                best_score = s;
            }
        };

        SubsetFamily fam = enumerate_subsets(npb, budget_);
        truncated_ |= fam.truncated;
        for (const auto& n : fam.subsets) {
            Clustering cdd;
            if (n.empty()) {
                cdd = fallback();
            } else {
                CleanPair pair = clean_cluster(wg_, n.front(), params_);
                VertexSet cu_b = vset::unite(pair.c, wg_.bad);
                VertexSet rest_of_c = vset::difference(cu_b, wg_.bad);
                long long e_minus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Minus);
                long long e_plus = count_edges_between(wg_.h, wg_.bad, rest_of_c, Label::Plus);
                if (e_minus <= e_plus) cdd = cluster_plus_rest(cu_b);
                else cdd = more_negative(cu_b);
            }
            consider(neighbor_search({}, n, cdd, 0));
        }
        return best;
    }

    // Accumulates a replacement set by guessing further Plus neighbors; the
    // four cases are checked in order.  Depth is bounded by |bad| because
    // every recursion adds at least one vertex; the explicit check is a
    // safety net.
    Clustering neighbor_search(const VertexSet& b_plus_in, const VertexSet& n_prime,
                               const Clustering& cdd, int depth) {
        check_working_vertex_set(wg_, b_plus_in, "accumulated set");
        check_working_vertex_set(wg_, n_prime, "guessed set");
        if (!vset::disjoint(b_plus_in, wg_.bad) || !vset::disjoint(n_prime, wg_.bad))
            throw std::invalid_argument("neighbor search sets must avoid the bad set");
        if (depth > static_cast<int>(wg_.bad.size())) return cdd;

        VertexSet b_plus = vset::unite(b_plus_in, n_prime);
        VertexSet excluded = vset::unite(b_plus, wg_.bad);
        VertexSet frontier;
        {
            std::vector<char> seen(wg_.size(), 0);
            VertexMask out(wg_.size(), excluded);
            for (int x : b_plus)
                for (int w : wg_.h.plus_neighbors(x))
                    if (!out[w]) seen[w] = 1;
            for (int v = 0; v < wg_.size(); ++v)
                if (seen[v]) frontier.push_back(v);
        }

        if (n_prime.empty()) {
            // Case 1: nothing new was guessed; close out this branch.
            Clustering c = solve_rest(vset::complement(excluded, wg_.size()));
            append_cluster(c, excluded);
            c.normalize();
            return c;
        }
        if (b_plus.size() >= wg_.bad.size()) {
            // Case 2: enough good vertices accumulated to stand in for bad.
            return good_replace(b_plus);
        }
        const long long b = static_cast<long long>(wg_.bad.size());
        const long long num = params_.delta.num;
        const long long den = params_.delta.den;
        if (static_cast<long long>(frontier.size()) * num > (2 * num + 2 * den) * b * b) {
            // Case 3: the frontier exploded; keep the incoming clustering.
            return cdd;
        }
        // Case 4: recurse over subsets of the frontier.
        SubsetFamily fam = enumerate_subsets(frontier, budget_);
        truncated_ |= fam.truncated;
        Clustering best = cdd;
        long long best_score = score(best);
        bool have = false;
        for (const auto& nn : fam.subsets) {
            Clustering cand = neighbor_search(b_plus, nn, cdd, depth + 1);
            long long s = score(cand);
            if (!have || s < best_score) {
                best = std::move(cand);
                best_score = s;
                have = true;
            }
        }
        return best;
    }

private:
    RngStream next_rng() { return rng_.child(calls_++); }

    const WorkingGraph& wg_;
    DeltaParams params_;
    SolverChoice solvers_;
    EnumBudget budget_;
    RngStream rng_;
    std::uint64_t calls_ = 0;
    bool truncated_ = false;
    std::optional<Clustering> fallback_;
};

}  // namespace detail

// Clustering of g that keeps all of b in one cluster: canonicalize, then run
// the case analysis.  Every candidate, including the fallback "b alone",
// is scored on the original labels, so the result never loses to the
// fallback.  The truncated flag reports budget-limited enumeration.
inline BadClusterResult bad_cluster_full(const SignedGraph& g, const VertexSet& b,
                                         const DeltaParams& params, const SolverChoice& solvers,
                                         const EnumBudget& budget) {
    if (b.empty()) throw std::invalid_argument("bad_cluster needs a nonempty bad set");
    WorkingGraph wg = canonicalize(g, b);
    detail::ClusterSearch search(wg, params, solvers, budget);
    Clustering result = search.run();
    int cluster = result.assignment[b.front()];
    for (int x : b)
        if (result.assignment[x] != cluster)
            throw invariant_error("bad set split across clusters");
    result.normalize();
    return {std::move(result), search.truncated()};
}

inline Clustering bad_cluster(const SignedGraph& g, const VertexSet& b, const DeltaParams& params,
                              const SolverChoice& solvers, const EnumBudget& budget) {
    return bad_cluster_full(g, b, params, solvers, budget).clustering;
}

// Standalone entry points to the branches, mirroring the internal search;
// useful for targeted testing and experimentation.  Each creates a fresh
// deterministic context from solvers.seed.

inline Clustering more_negative_edges(const WorkingGraph& wg, const VertexSet& c,
                                      const DeltaParams& params, const SolverChoice& solvers,
                                      const EnumBudget& budget) {
    detail::ClusterSearch search(wg, params, solvers, budget);
    return search.more_negative(c);
}

inline Clustering good_replace_bad(const WorkingGraph& wg, const VertexSet& b_plus,
                                   const SolverChoice& solvers) {
    detail::ClusterSearch search(wg, DeltaParams{}, solvers, EnumBudget{});
    return search.good_replace(b_plus);
}

inline SignedGraph good_replace_graph(const WorkingGraph& wg, const VertexSet& b_plus) {
    detail::ClusterSearch search(wg, DeltaParams{}, SolverChoice{}, EnumBudget{});
    return search.replacement_graph(b_plus);
}

inline Clustering bounded_positive_neighbors(const WorkingGraph& wg, const DeltaParams& params,
                                             const SolverChoice& solvers,
                                             const EnumBudget& budget) {
    detail::ClusterSearch search(wg, params, solvers, budget);
    return search.bounded_positive(plus_frontier(wg));
}

inline Clustering find_neighbors(const WorkingGraph& wg, const VertexSet& b_plus,
                                 const VertexSet& n_prime, const Clustering& cdd,
                                 const DeltaParams& params, const SolverChoice& solvers,
                                 const EnumBudget& budget) {
    if (!cdd.total() || cdd.size() != wg.size())
        throw std::invalid_argument("find_neighbors needs a total clustering to fall back on");
    detail::ClusterSearch search(wg, params, solvers, budget);
    return search.neighbor_search(b_plus, n_prime, cdd, 0);
}

}  // namespace corrclust
