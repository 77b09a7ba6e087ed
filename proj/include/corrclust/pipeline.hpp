#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "corrclust/bad_cluster.hpp"
#include "corrclust/clustering.hpp"
#include "corrclust/complete_solver.hpp"
#include "corrclust/delta.hpp"
#include "corrclust/enumeration.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/multiway_cut.hpp"
#include "corrclust/rng.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_cover.hpp"

namespace corrclust {

enum class CutSolverKind { Isolating, Exact };

inline const char* cut_solver_kind_name(CutSolverKind k) {
    return k == CutSolverKind::Exact ? "exact" : "isolating";
}

struct PipelineConfig {
    DeltaParams delta;
    SolverChoice solver;                              // complete-subproblem solver
    CutSolverKind cut_solver = CutSolverKind::Isolating;
    EnumBudget budget;                                // subset enumeration limits
    int max_k = 8;                                    // cover size ceiling
    std::uint64_t seed = 0;
};

// What happened for one enumerated partition of the bad vertices; kept for
// diagnostics and tests, not serialized into reports.
struct PartitionSummary {
    BadPartition partition;
    long long cut_weight = 0;
    int components = 0;
    MistakeReport mistakes;
    bool truncated = false;
};

struct RunReport {
    int n = 0;
    int k = 0;
    VertexSet bad_vertices;
    BadPartition best_partition;     // empty when a baseline or the k = 0 path won
    Clustering clustering;
    MistakeReport mistakes;
    std::vector<PartitionSummary> partitions;
    PipelineConfig config;
    bool truncated = false;
    long long runtime_ms = 0;
    bool best_from_baseline = false;
    std::optional<long long> exact_opt;  // filled in by callers that also run the oracle
    std::optional<double> ratio;
};

// Worst-case bound on achieved/optimal for the full pipeline, as an exact
// rational: 18/delta^2 + 7.3.  The flag states whether the bound's
// preconditions are actually met by this configuration: delta within the
// analysis range, both subproblem solvers exact, and enumeration budgets
// wide enough that no subset family can be truncated for any cover the
// config admits.
struct GuaranteeBound {
    Rational value;
    bool applies = false;
};

inline GuaranteeBound guarantee_bound(const PipelineConfig& cfg) {
    const Rational d = cfg.delta.delta;
    GuaranteeBound out;
    out.value = Rational(18 * d.den * d.den, d.num * d.num) + Rational(73, 10);

    bool truncation_possible = false;
    if (cfg.max_k > 0) {
        long long k = cfg.max_k;
        // ceil(2/delta) and the largest subset universes the search can see.
        long long inv = (2 * d.den + d.num - 1) / d.num;
        long long universe = std::max({2 * k * k + inv * k, (2 + inv) * k * k, 3 * k});
        truncation_possible =
            universe >= 63 || (1LL << universe) > cfg.budget.max_subsets;
    }
    out.applies = cfg.delta.within_analysis_range() && cfg.solver.kind == SolverKind::Exact &&
                  cfg.cut_solver == CutSolverKind::Exact && !truncation_possible;
    return out;
}

namespace detail {

// Complete solve over s that tolerates Missing pairs by treating them as
// irrelevant during pivoting; used only for the optimistic baseline, which
// is rescored against the real labels anyway.
inline Clustering lenient_baseline(const SignedGraph& g, const SolverChoice& choice,
                                   RngStream rng) {
    VertexSet all = vset::range(g.size());
    if (choice.kind == SolverKind::Exact && g.size() <= kDefaultExactCap) {
        // The exact search handles Missing pairs natively (cost 0 both ways).
        std::vector<SolveUnit> units;
        for (int v : all) units.push_back({{v}, false});
        if (units.empty()) return Clustering::unassigned(0);
        ExactSearch search(g, units);
        return expand_units(g.size(), units, search.run());
    }
    std::optional<Clustering> best;
    long long best_cost = 0;
    for (int r = 0; r < choice.repeats; ++r) {
        RngStream run_rng = rng.child(static_cast<std::uint64_t>(r));
        Clustering c = pivot_run(g, all, run_rng);
        long long cost = count_mistakes(g, c).total;
        if (!best || cost < best_cost) {
            best = std::move(c);
            best_cost = cost;
        }
    }
    return *best;
}

}  // namespace detail

// The full solver: find the bad vertices (minimum cover of the unlabeled
// pairs), enumerate how they could split into clusters, and for each split
// cut the Plus graph, solve each piece, and merge.  Three cheap baselines
// (everything together, everything apart, and a solve that pretends the
// graph were complete) always compete, so the output never loses to them.
inline RunReport solve(const SignedGraph& g, const PipelineConfig& cfg) {
    auto started = std::chrono::steady_clock::now();
    if (!cfg.delta.usable_for_solving())
        throw std::invalid_argument("delta must satisfy 13 * delta <= 1, got " +
                                    cfg.delta.delta.str());
    if (cfg.solver.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    if (cfg.max_k < 0) throw std::invalid_argument("max_k must be non-negative");
    if (cfg.budget.max_subsets < 1)
        throw std::invalid_argument("max_subsets must be at least 1");
    if (cfg.budget.max_subset_size < 0)
        throw std::invalid_argument("max_subset_size must be non-negative");

    const int n = g.size();
    RunReport report;
    report.n = n;
    report.config = cfg;

    CoverResult cover = min_vertex_cover(empty_edge_graph(g), cfg.max_k);
    report.k = cover.k;
    report.bad_vertices = cover.bad_vertices;

    RngStream root(cfg.seed);

    std::optional<Clustering> best;
    long long best_score = 0;
    int best_partition = -1;     // index into report.partitions, -1 otherwise
    bool best_baseline = false;
    auto consider = [&](Clustering cand, int partition_index, bool baseline) {
        long long s = count_mistakes(g, cand).total;
        if (!best || s < best_score) {
            best = std::move(cand);
            best_score = s;
            best_partition = partition_index;
            best_baseline = baseline;
        }
    };

    if (n > 0) {
        if (cover.k == 0) {
            consider(complete_solve(g, vset::range(n), cfg.solver, root.child(1)), -1, false);
        } else {
            int index = 0;
            for_each_partition(cover.bad_vertices, [&](const BadPartition& p) {
                RngStream case_rng = root.child(1 + static_cast<std::uint64_t>(index));
                std::uint64_t call = 0;

                TerminalGraph tg = build_auxiliary(g, p);
                CutSet cut = cfg.cut_solver == CutSolverKind::Exact ? multiway_cut_exact(tg)
                                                                    : multiway_cut_isolating(tg);
                SplitResult split = apply_cut(g, p, tg, cut);

                Clustering merged = Clustering::unassigned(n);
                bool truncated_here = false;
                for (std::size_t ci = 0; ci < split.components.size(); ++ci) {
                    const VertexSet& comp = split.components[ci];
                    SignedGraph sub = induced_subgraph(split.graph, comp);
                    Clustering local;
                    if (split.component_block[ci] >= 0) {
                        const VertexSet& block = p.blocks[split.component_block[ci]];
                        VertexSet local_bad;
                        for (std::size_t i = 0; i < comp.size(); ++i)
                            if (vset::contains(block, comp[i]))
                                local_bad.push_back(static_cast<int>(i));
                        SolverChoice sub_solver = cfg.solver;
                        sub_solver.seed = case_rng.child(call++).state();
                        BadClusterResult r = bad_cluster_full(sub, local_bad, cfg.delta,
                                                              sub_solver, cfg.budget);
                        truncated_here |= r.truncated;
                        local = std::move(r.clustering);
                    } else {
                        local = complete_solve(sub, vset::range(static_cast<int>(comp.size())),
                                               cfg.solver, case_rng.child(call++));
                    }
                    Clustering lifted = Clustering::unassigned(n);
                    for (std::size_t i = 0; i < comp.size(); ++i)
                        lifted.assignment[comp[i]] = local.assignment[static_cast<int>(i)];
                    append_clustering(merged, lifted);
                }
                merged.normalize();

                PartitionSummary summary;
                summary.partition = p;
                summary.cut_weight = cut.weight;
                summary.components = static_cast<int>(split.components.size());
                summary.mistakes = count_mistakes(g, merged);
                summary.truncated = truncated_here;
                report.partitions.push_back(summary);
                report.truncated |= truncated_here;

                consider(std::move(merged), index, false);
                ++index;
            });
        }

        // Baselines: one cluster, all singletons, and the lenient solve.
        consider(Clustering::single_cluster(n), -1, true);
        consider(Clustering::singletons(n), -1, true);
        consider(detail::lenient_baseline(g, cfg.solver, root.child(0)), -1, true);
    } else {
        best = Clustering::unassigned(0);
    }

    report.clustering = *best;
    report.mistakes = count_mistakes(g, *best);
    report.best_from_baseline = best_baseline;
    if (best_partition >= 0) report.best_partition = report.partitions[best_partition].partition;

    auto elapsed = std::chrono::steady_clock::now() - started;
    report.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    return report;
}

}  // namespace corrclust
