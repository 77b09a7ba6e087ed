#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "corrclust/clustering.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/rng.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

enum class SolverKind { Pivot, Exact };

inline const char* solver_kind_name(SolverKind k) {
    return k == SolverKind::Exact ? "exact" : "pivot";
}

// Configuration of the complete-subproblem solver: which algorithm, how many
// randomized restarts (pivot only), and the seed used when no stream is
// passed in explicitly.
struct SolverChoice {
    SolverKind kind = SolverKind::Pivot;
    int repeats = 5;
    std::uint64_t seed = 0;
};

inline constexpr int kDefaultExactCap = 12;

namespace detail {

inline void check_solve_set(const SignedGraph& g, const VertexSet& s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] >= s[i + 1]) throw std::invalid_argument("solve set must be sorted and unique");
    for (int v : s) g.check_vertex(v);
}

inline void check_complete_on(const SignedGraph& g, const VertexSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.label(s[i], s[j]) == Label::Missing)
                throw std::invalid_argument("pair " + std::to_string(s[i]) + " " +
                                            std::to_string(s[j]) +
                                            " is unlabeled; solver needs a complete subgraph");
}

// Units over which the exact search branches: singleton vertices and, for
// the grouped variant, whole groups that must stay together and must not
// share a cluster with another group.
struct SolveUnit {
    VertexSet vertices;
    bool grouped = false;
};

// Exhaustive search over set partitions of the units in restricted-growth
// order, branch-and-bound pruned by accumulated cost.  Strict improvement
// keeps the first optimum in enumeration order, which makes results
// independent of evaluation quirks.
class ExactSearch {
public:
    ExactSearch(const SignedGraph& g, std::vector<SolveUnit> units)
        : units_(std::move(units)) {
        const int m = static_cast<int>(units_.size());
        plus_.assign(m, std::vector<long long>(m, 0));
        minus_.assign(m, std::vector<long long>(m, 0));
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                for (int x : units_[i].vertices) {
                    for (int y : units_[j].vertices) {
                        Label l = g.label(x, y);
                        if (l == Label::Plus) ++plus_[i][j];
                        else if (l == Label::Minus) ++minus_[i][j];
                    }
                }
                plus_[j][i] = plus_[i][j];
                minus_[j][i] = minus_[i][j];
            }
        }
    }

    // Returns unit -> cluster id, normalized.
    std::vector<int> run() {
        const int m = static_cast<int>(units_.size());
        best_cost_ = std::numeric_limits<long long>::max();
        assign_.assign(m, -1);
        cluster_has_group_.assign(m + 1, 0);
        dfs(0, 0, 0);
        if (best_cost_ == std::numeric_limits<long long>::max())
            throw invariant_error("exact search found no assignment");
        return best_assign_;
    }

private:
    void dfs(int pos, int used, long long cost) {
        if (cost >= best_cost_) return;  // first optimum in RGS order survives
        const int m = static_cast<int>(units_.size());
        if (pos == m) {
            best_cost_ = cost;
            best_assign_ = assign_;
            return;
        }
        // Cost deltas against every existing cluster in one sweep.
        std::vector<long long> plus_into(used, 0), minus_into(used, 0);
        long long plus_total = 0;
        for (int q = 0; q < pos; ++q) {
            plus_into[assign_[q]] += plus_[pos][q];
            minus_into[assign_[q]] += minus_[pos][q];
            plus_total += plus_[pos][q];
        }
        for (int c = 0; c <= used; ++c) {
            bool fresh = c == used;
            // A grouped unit may not join a cluster that already holds one,
            // so whenever we mark a cluster here its previous flag was 0 and
            // the unwind can simply clear it.
            if (!fresh && units_[pos].grouped && cluster_has_group_[c]) continue;
            long long delta = fresh ? plus_total
                                    : minus_into[c] + (plus_total - plus_into[c]);
            assign_[pos] = c;
            bool marked = units_[pos].grouped;
            if (marked) cluster_has_group_[c] = 1;
            dfs(pos + 1, fresh ? used + 1 : used, cost + delta);
            if (marked) cluster_has_group_[c] = 0;
            assign_[pos] = -1;
        }
    }

    std::vector<SolveUnit> units_;
    std::vector<std::vector<long long>> plus_;
    std::vector<std::vector<long long>> minus_;
    std::vector<int> assign_;
    std::vector<int> best_assign_;
    std::vector<char> cluster_has_group_;
    long long best_cost_ = 0;
};

inline Clustering expand_units(int n, const std::vector<SolveUnit>& units,
                               const std::vector<int>& unit_cluster) {
    Clustering c = Clustering::unassigned(n);
    for (std::size_t i = 0; i < units.size(); ++i)
        for (int v : units[i].vertices) c.assignment[v] = unit_cluster[i];
    c.normalize();
    return c;
}

}  // namespace detail

// Optimal clustering of the vertices in s, minimizing disagreements inside
// s; Missing pairs cost nothing either way, so this doubles as the oracle
// for incomplete instances.  Exhaustive over set partitions with cost-based
// pruning; refuses |s| beyond the cap.  Ties resolve to the first optimum in
// restricted-growth order, so the result is deterministic.
inline Clustering exact_cc(const SignedGraph& g, const VertexSet& s,
                           int cap = kDefaultExactCap) {
    detail::check_solve_set(g, s);
    if (static_cast<int>(s.size()) > cap)
        throw budget_error("exact clustering over " + std::to_string(s.size()) +
                           " vertices exceeds the cap of " + std::to_string(cap));
    std::vector<detail::SolveUnit> units;
    for (int v : s) units.push_back({{v}, false});
    if (units.empty()) return Clustering::unassigned(g.size());
    detail::ExactSearch search(g, units);
    return detail::expand_units(g.size(), units, search.run());
}

// Constrained optimum: each group must stay in one cluster and no two groups
// may share one.  Vertices of s outside every group are free.  Pairs inside
// one group cost the same in every feasible clustering and are ignored by
// the search.  Refuses more than cap units.
inline Clustering exact_cc_grouped(const SignedGraph& g, const VertexSet& s,
                                   const std::vector<VertexSet>& groups,
                                   int cap = kDefaultExactCap) {
    detail::check_solve_set(g, s);
    VertexSet covered;
    std::vector<detail::SolveUnit> units;
    for (const auto& grp : groups) {
        if (grp.empty()) continue;
        if (!vset::is_subset(grp, s))
            throw std::invalid_argument("group vertex outside the solve set");
        if (!vset::disjoint(covered, grp)) throw std::invalid_argument("groups overlap");
        covered = vset::unite(covered, grp);
        units.push_back({grp, true});
    }
    for (int v : vset::difference(s, covered)) units.push_back({{v}, false});
    if (static_cast<int>(units.size()) > cap)
        throw budget_error("grouped exact clustering over " + std::to_string(units.size()) +
                           " units exceeds the cap of " + std::to_string(cap));
    if (units.empty()) return Clustering::unassigned(g.size());
    // Units ordered by smallest vertex so the search order is canonical.
    std::sort(units.begin(), units.end(),
              [](const detail::SolveUnit& a, const detail::SolveUnit& b) {
                  return a.vertices.front() < b.vertices.front();
              });
    detail::ExactSearch search(g, units);
    return detail::expand_units(g.size(), units, search.run());
}

namespace detail {

// One pivot pass: repeatedly pick a uniform random remaining vertex and club
// it with its remaining Plus neighbors.  Works off arbitrary (possibly
// incomplete) label data; completeness checking is the caller's concern.
inline Clustering pivot_run(const SignedGraph& g, const VertexSet& s, RngStream& rng) {
    Clustering c = Clustering::unassigned(g.size());
    VertexSet remaining = s;
    int next_id = 0;
    while (!remaining.empty()) {
        std::size_t idx = static_cast<std::size_t>(rng.below(remaining.size()));
        int pivot = remaining[idx];
        VertexSet cluster{pivot};
        for (int v : remaining)
            if (v != pivot && g.label(pivot, v) == Label::Plus) cluster.push_back(v);
        cluster = vset::canonical(std::move(cluster));
        for (int v : cluster) c.assignment[v] = next_id;
        ++next_id;
        remaining = vset::difference(remaining, cluster);
    }
    c.normalize();
    return c;
}

}  // namespace detail

// One randomized pivot pass over the (completely labeled) vertices of s.
inline Clustering pivot_cc(const SignedGraph& g, const VertexSet& s, RngStream& rng) {
    detail::check_solve_set(g, s);
    detail::check_complete_on(g, s);
    return detail::pivot_run(g, s, rng);
}

// Best of `repeats` independent pivot passes, scored on g restricted to s.
// Strict improvement keeps the earliest winner, so a fixed stream yields a
// fixed result.
inline Clustering pivot_cc_best(const SignedGraph& g, const VertexSet& s, int repeats,
                                RngStream rng) {
    if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    detail::check_solve_set(g, s);
    detail::check_complete_on(g, s);
    std::optional<Clustering> best;
    long long best_cost = 0;
    for (int r = 0; r < repeats; ++r) {
        RngStream run_rng = rng.child(static_cast<std::uint64_t>(r));
        Clustering c = detail::pivot_run(g, s, run_rng);
        long long cost = count_mistakes_within(g, c, s).total;
        if (!best || cost < best_cost) {
            best = std::move(c);
            best_cost = cost;
        }
    }
    return *best;
}

// Dispatcher used wherever the pipeline needs a complete subproblem solved.
inline Clustering complete_solve(const SignedGraph& g, const VertexSet& s,
                                 const SolverChoice& choice, RngStream rng) {
    if (choice.kind == SolverKind::Exact) return exact_cc(g, s);
    return pivot_cc_best(g, s, choice.repeats, rng);
}

inline Clustering complete_solve(const SignedGraph& g, const VertexSet& s,
                                 const SolverChoice& choice) {
    return complete_solve(g, s, choice, RngStream(choice.seed));
}

// Clustering of s under the constraint that must_link shares one cluster.
// Small instances reduce to the grouped exact search; larger ones contract
// must_link to one unit (majority label toward each outside vertex, ties
// Minus) and run best-of pivot over the units.
inline Clustering constrained_cc(const SignedGraph& g, const VertexSet& s,
                                 const VertexSet& must_link, const SolverChoice& choice,
                                 RngStream rng) {
    if (choice.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    detail::check_solve_set(g, s);
    if (!vset::is_subset(must_link, s))
        throw std::invalid_argument("must_link set must lie inside the solve set");
    detail::check_complete_on(g, s);

    bool exact_fits = static_cast<int>(s.size()) - static_cast<int>(must_link.size()) +
                          (must_link.empty() ? 0 : 1) <=
                      kDefaultExactCap;
    if (choice.kind == SolverKind::Exact || exact_fits) {
        std::vector<VertexSet> groups;
        if (!must_link.empty()) groups.push_back(must_link);
        return exact_cc_grouped(g, s, groups);
    }

    // Contract must_link; derive unit-level labels by majority.
    std::vector<detail::SolveUnit> units;
    units.push_back({must_link, true});
    for (int v : vset::difference(s, must_link)) units.push_back({{v}, false});
    const int m = static_cast<int>(units.size());
    std::vector<Label> unit_labels(static_cast<std::size_t>(m) * m, Label::Missing);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            long long plus = 0, minus = 0;
            for (int x : units[i].vertices) {
                for (int y : units[j].vertices) {
                    Label l = g.label(x, y);
                    if (l == Label::Plus) ++plus;
                    else if (l == Label::Minus) ++minus;
                }
            }
            set_label(unit_labels, m, i, j, plus > minus ? Label::Plus : Label::Minus);
        }
    }
    SignedGraph unit_graph = SignedGraph::from_matrix(m, std::move(unit_labels));
    VertexSet all_units = vset::range(m);

    std::optional<Clustering> best;
    long long best_cost = 0;
    for (int r = 0; r < choice.repeats; ++r) {
        RngStream run_rng = rng.child(static_cast<std::uint64_t>(r));
        Clustering unit_c = detail::pivot_run(unit_graph, all_units, run_rng);
        Clustering c = Clustering::unassigned(g.size());
        for (int i = 0; i < m; ++i)
            for (int v : units[i].vertices) c.assignment[v] = unit_c.assignment[i];
        c.normalize();
        long long cost = count_mistakes_within(g, c, s).total;
        if (!best || cost < best_cost) {
            best = std::move(c);
            best_cost = cost;
        }
    }
    return *best;
}

}  // namespace corrclust
