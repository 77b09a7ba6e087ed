#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "corrclust/bad_cluster.hpp"
#include "support/oracles.hpp"

using namespace corrclust;

namespace {

VertexSet random_bad_set(int n, int max_size, std::mt19937_64& rng) {
    int size = 1 + static_cast<int>(rng() % max_size);
    VertexSet all = vset::range(n);
    VertexSet bad;
    for (int i = 0; i < size && !all.empty(); ++i) {
        std::size_t idx = rng() % all.size();
        bad.push_back(all[idx]);
        all.erase(all.begin() + idx);
    }
    return vset::canonical(std::move(bad));
}

}  // namespace

TEST_CASE("canonicalize rewrites bad-incident labels to the surplus form") {
    std::mt19937_64 rng(111);
    for (int rep = 0; rep < 150; ++rep) {
        int n = 3 + static_cast<int>(rng() % 8);
        SignedGraph g = oracles::random_graph(n, 0.4, 0.3, rng);
        VertexSet bad = random_bad_set(n, 3, rng);
        WorkingGraph wg = canonicalize(g, bad);

        CHECK(wg.bad == bad);
        // Original labels preserved for scoring.
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) CHECK(wg.original.label(u, v) == g.label(u, v));

        // Bad set internally complete Plus.
        for (std::size_t i = 0; i < bad.size(); ++i)
            for (std::size_t j = i + 1; j < bad.size(); ++j)
                CHECK(wg.h.label(bad[i], bad[j]) == Label::Plus);

        for (int v : wg.good()) {
            // Good-good pairs untouched.
            for (int w : wg.good())
                if (v < w) CHECK(wg.h.label(v, w) == g.label(v, w));

            // Toward the bad set: only the surplus of the majority sign
            // survives, attached to the lowest-indexed majority vertices.
            std::vector<int> plus_to, minus_to;
            for (int x : bad) {
                if (g.label(v, x) == Label::Plus) plus_to.push_back(x);
                else if (g.label(v, x) == Label::Minus) minus_to.push_back(x);
            }
            long long surplus =
                static_cast<long long>(plus_to.size()) - static_cast<long long>(minus_to.size());
            const auto& majority = surplus >= 0 ? plus_to : minus_to;
            Label sign = surplus >= 0 ? Label::Plus : Label::Minus;
            std::size_t keep = static_cast<std::size_t>(surplus >= 0 ? surplus : -surplus);
            for (std::size_t i = 0; i < bad.size(); ++i) {
                Label have = wg.h.label(v, bad[i]);
                bool should_keep = false;
                for (std::size_t j = 0; j < keep; ++j)
                    if (majority[j] == bad[i]) should_keep = true;
                CHECK(have == (should_keep ? sign : Label::Missing));
            }
        }

        // Consequence: the frontiers never overlap.
        CHECK(vset::disjoint(plus_frontier(wg), minus_frontier(wg)));
    }
    SignedGraph g(3, {{0, 1, Label::Plus}});
    CHECK_THROWS_AS(canonicalize(g, {1, 0}), std::invalid_argument);
}

TEST_CASE("clean_cluster output passes its own predicates") {
    std::mt19937_64 rng(113);
    DeltaParams params{Rational(1, 13)};
    int nontrivial = 0;
    for (int rep = 0; rep < 200; ++rep) {
        int n = 4 + static_cast<int>(rng() % 7);
        SignedGraph g = oracles::random_graph(n, 0.55, 0.25, rng);
        VertexSet bad = random_bad_set(n, 2, rng);
        WorkingGraph wg = canonicalize(g, bad);
        for (int u : wg.good()) {
            CleanPair pair = clean_cluster(wg, u, params);
            CHECK(vset::contains(pair.c_prime, u));
            CHECK(vset::is_subset(pair.c_prime, pair.c));
            if (pair.c_prime.size() == 1) continue;  // bailed to ({u},{u})
            ++nontrivial;
            CHECK(vset::is_subset(bad, pair.c_prime));
            // Every good member, the seed included, is 3delta-good, and the
            // bad set is a 3delta-good set for the survivor.
            for (int v : vset::difference(pair.c_prime, bad))
                CHECK(is_delta_good_vertex(wg.h, v, pair.c_prime, params, 3));
            CHECK(is_delta_good_badset(wg.h, bad, pair.c_prime, params, 3));
        }
    }
    CHECK(nontrivial > 20);  // the generator must exercise the real branch
}

TEST_CASE("clean_cluster validates its seed") {
    SignedGraph g(4, {{0, 1, Label::Plus}, {1, 2, Label::Plus}});
    WorkingGraph wg = canonicalize(g, {3});
    CHECK_THROWS_AS(clean_cluster(wg, 3, DeltaParams{}), std::invalid_argument);
    CHECK_THROWS_AS(clean_cluster(wg, 0, DeltaParams{Rational(1, 12)}), std::invalid_argument);
}

TEST_CASE("select_y returns a qualifying seed or nothing") {
    DeltaParams params{Rational(1, 13)};
    auto verify = [&](const WorkingGraph& wg, const SeedChoice& choice) {
        CHECK(vset::contains(plus_frontier(wg), choice.y));
        CHECK(vset::is_subset(vset::unite(wg.bad, {choice.y}), choice.pair.c_prime));
        CHECK(static_cast<long long>(choice.pair.c_prime.size()) * params.delta.num >
              params.delta.den * static_cast<long long>(wg.bad.size()));
        CHECK(is_delta_clean(wg.h, choice.pair.c, wg.bad, params, 13));
        // Deterministic.
        auto again = select_y(wg, params);
        REQUIRE(again.has_value());
        CHECK(again->y == choice.y);
        CHECK(again->pair.c == choice.pair.c);
    };

    // The size qualification needs |c_prime| > |bad| / delta, so any instance
    // smaller than 14 vertices must come back empty.
    std::mt19937_64 rng(127);
    for (int rep = 0; rep < 80; ++rep) {
        int n = 5 + static_cast<int>(rng() % 6);
        SignedGraph g = oracles::random_graph(n, 0.6, 0.2, rng);
        VertexSet bad = random_bad_set(n, 2, rng);
        WorkingGraph wg = canonicalize(g, bad);
        auto choice = select_y(wg, params);
        CHECK_FALSE(choice.has_value());
    }

    // A 15-vertex Plus clique around one bad vertex clears the threshold;
    // the outliers stay outside the cluster.
    {
        std::vector<LabeledEdge> edges;
        for (int u = 0; u < 15; ++u)
            for (int v = u + 1; v < 15; ++v)
                if (u < 14) edges.push_back({u, v, Label::Plus});
        for (int u = 0; u < 15; ++u)
            for (int v = 15; v < 18; ++v)
                if (u != 14) edges.push_back({u, v, Label::Minus});
        for (int u = 15; u < 18; ++u)
            for (int v = u + 1; v < 18; ++v) edges.push_back({u, v, Label::Minus});
        SignedGraph g(18, edges);
        WorkingGraph wg = canonicalize(g, {14});
        auto choice = select_y(wg, params);
        REQUIRE(choice.has_value());
        verify(wg, *choice);
        CHECK(choice->y == 0);  // lowest qualifying seed wins ties
        CHECK(choice->pair.c_prime == vset::range(15));
    }

    // Noisy larger instances: whatever comes back must satisfy the contract.
    for (int rep = 0; rep < 40; ++rep) {
        int n = 15 + static_cast<int>(rng() % 5);
        SignedGraph g = oracles::random_graph(n, 0.8, 0.1, rng);
        VertexSet bad = random_bad_set(n, 1, rng);
        WorkingGraph wg = canonicalize(g, bad);
        auto choice = select_y(wg, params);
        if (choice) verify(wg, *choice);
    }
}

TEST_CASE("replacement graph isolates the bad set and flips by the counts") {
    std::mt19937_64 rng(131);
    for (int rep = 0; rep < 80; ++rep) {
        int n = 5 + static_cast<int>(rng() % 6);
        SignedGraph g = oracles::random_graph(n, 0.45, 0.35, rng);
        VertexSet bad = random_bad_set(n, 2, rng);
        WorkingGraph wg = canonicalize(g, bad);
        VertexSet good = wg.good();
        if (good.size() < bad.size() + 1) continue;
        VertexSet b_plus(good.begin(), good.begin() + bad.size());
        SignedGraph hat = good_replace_graph(wg, b_plus);

        // Bad vertices end up with no labeled pairs at all.
        for (int x : bad)
            for (int v = 0; v < n; ++v)
                if (v != x) CHECK(hat.label(x, v) == Label::Missing);

        VertexSet excluded = vset::unite(bad, b_plus);
        for (int v : vset::complement(excluded, n)) {
            long long l3 = 0, l4 = 0;
            std::vector<int> plus_to, minus_to;
            for (int x : bad) {
                if (wg.h.label(v, x) == Label::Plus) ++l3;
                else if (wg.h.label(v, x) == Label::Minus) ++l4;
            }
            for (int x : b_plus) {
                if (wg.h.label(v, x) == Label::Plus) plus_to.push_back(x);
                else if (wg.h.label(v, x) == Label::Minus) minus_to.push_back(x);
            }
            long long l5 = static_cast<long long>(plus_to.size());
            long long l6 = static_cast<long long>(minus_to.size());
            // Expected rewrite toward b_plus.
            for (int x : b_plus) {
                Label expect = wg.h.label(v, x);
                if (l3 > l5) {
                    for (long long i = 0; i < l6 / 2; ++i)
                        if (minus_to[i] == x) expect = Label::Plus;
                } else if (l4 > l6) {
                    for (long long i = 0; i < l5 / 2; ++i)
                        if (plus_to[i] == x) expect = Label::Minus;
                }
                CHECK(hat.label(v, x) == expect);
            }
            // Pairs among outsiders are untouched.
            for (int w : vset::complement(excluded, n))
                if (v < w) CHECK(hat.label(v, w) == wg.h.label(v, w));
        }
    }
}

TEST_CASE("good_replace_bad keeps the replacement cluster and pulls the bad set in") {
    std::mt19937_64 rng(137);
    SolverChoice solvers{SolverKind::Exact, 5, 0};
    for (int rep = 0; rep < 60; ++rep) {
        int n = 5 + static_cast<int>(rng() % 5);
        SignedGraph g = oracles::random_complete_graph(n, 0.5, rng);
        VertexSet bad = random_bad_set(n, 2, rng);
        WorkingGraph wg = canonicalize(g, bad);
        VertexSet good = wg.good();
        if (good.size() < bad.size()) continue;
        VertexSet b_plus(good.begin(), good.begin() + bad.size());
        Clustering c = good_replace_bad(wg, b_plus, solvers);
        CHECK(c.total());
        int target = c.assignment[b_plus[0]];
        for (int x : b_plus) CHECK(c.assignment[x] == target);
        for (int x : bad) CHECK(c.assignment[x] == target);
    }
    SignedGraph g(4, {{0, 1, Label::Plus}, {1, 2, Label::Plus}, {0, 2, Label::Plus}});
    WorkingGraph wg = canonicalize(g, {3});
    CHECK_THROWS_AS(good_replace_bad(wg, {3}, solvers), std::invalid_argument);
    CHECK_THROWS_AS(good_replace_bad(wg, {}, solvers), std::invalid_argument);
}

TEST_CASE("more_negative_edges sheds frontier vertices profitably") {
    // Bad vertex 5; cluster {0,1,2,5} where 0,1,2 all dislike 5.
    SignedGraph g(6, {{0, 5, Label::Minus},
                      {1, 5, Label::Minus},
                      {2, 5, Label::Minus},
                      {0, 1, Label::Plus},
                      {0, 2, Label::Plus},
                      {1, 2, Label::Plus},
                      {3, 4, Label::Plus},
                      {0, 3, Label::Minus},
                      {1, 4, Label::Minus},
                      {2, 3, Label::Minus},
                      {2, 4, Label::Minus},
                      {0, 4, Label::Minus},
                      {1, 3, Label::Minus},
                      {3, 5, Label::Plus},
                      {4, 5, Label::Plus}});
    WorkingGraph wg = canonicalize(g, {5});
    SolverChoice solvers{SolverKind::Exact, 5, 0};
    EnumBudget budget;
    Clustering c = more_negative_edges(wg, {0, 1, 2, 5}, DeltaParams{}, solvers, budget);
    CHECK(c.total());
    // It must never do worse than leaving the bad vertex alone.
    Clustering fallback = exact_cc(wg.h, wg.good());
    append_cluster(fallback, wg.bad);
    CHECK(count_mistakes(wg.original, c).total <=
          count_mistakes(wg.original, fallback).total);

    // Calling it when Plus dominates is a contract violation.
    CHECK_THROWS_AS(more_negative_edges(wg, {3, 4, 5}, DeltaParams{}, solvers, budget),
                    std::invalid_argument);
    CHECK_THROWS_AS(more_negative_edges(wg, {0, 1}, DeltaParams{}, solvers, budget),
                    std::invalid_argument);
}

TEST_CASE("bounded_positive_neighbors rejects oversized frontiers") {
    std::vector<LabeledEdge> edges;
    const int n = 35;
    for (int v = 0; v < n - 1; ++v) edges.push_back({v, n - 1, Label::Plus});
    SignedGraph g(n, edges);
    WorkingGraph wg = canonicalize(g, {n - 1});
    DeltaParams params{Rational(1, 13)};
    // frontier 34 > 2*1 + 26*1 = 28.
    CHECK_THROWS_AS(bounded_positive_neighbors(wg, params, SolverChoice{}, EnumBudget{}),
                    std::invalid_argument);
}

TEST_CASE("find_neighbors requires a total fallback clustering") {
    SignedGraph g(4, {{0, 1, Label::Plus}, {1, 2, Label::Plus}, {0, 2, Label::Plus}});
    WorkingGraph wg = canonicalize(g, {3});
    CHECK_THROWS_AS(find_neighbors(wg, {}, {}, Clustering::unassigned(4), DeltaParams{},
                                   SolverChoice{}, EnumBudget{}),
                    std::invalid_argument);
    Clustering cdd = Clustering::single_cluster(4);
    // Case 1: empty guess closes out with excluded = bad alone.
    Clustering c = find_neighbors(wg, {}, {}, cdd, DeltaParams{}, SolverChoice{}, EnumBudget{});
    CHECK(c.total());
    for (int v = 0; v < 3; ++v) CHECK(c.assignment[v] != c.assignment[3]);
    // Sets must avoid the bad set.
    CHECK_THROWS_AS(
        find_neighbors(wg, {3}, {}, cdd, DeltaParams{}, SolverChoice{}, EnumBudget{}),
        std::invalid_argument);
}

TEST_CASE("bad_cluster is sandwiched between the grouped optimum and the fallback") {
    std::mt19937_64 rng(139);
    SolverChoice solvers{SolverKind::Exact, 5, 0};
    EnumBudget budget;
    for (int rep = 0; rep < 60; ++rep) {
        int n = 3 + static_cast<int>(rng() % 6);
        int kb = 1 + static_cast<int>(rng() % 2);
        if (kb >= n) kb = 1;
        SignedGraph g = oracles::random_bad_bounded_graph(n, kb, 0.5, 0.6, rng);
        VertexSet bad;
        for (int v = n - kb; v < n; ++v) bad.push_back(v);

        BadClusterResult res = bad_cluster_full(g, bad, DeltaParams{}, solvers, budget);
        const Clustering& c = res.clustering;
        CHECK(c.total());
        for (int x : bad) CHECK(c.assignment[x] == c.assignment[bad[0]]);
        long long achieved = count_mistakes(g, c).total;

        // Lower bound: the optimum among clusterings keeping bad together.
        Clustering grouped = exact_cc_grouped(g, vset::range(n), {bad});
        CHECK(count_mistakes(g, grouped).total <= achieved);

        // Upper bound: the fallback (rest solved exactly, bad set alone).
        WorkingGraph wg = canonicalize(g, bad);
        Clustering fallback = exact_cc(wg.h, wg.good());
        append_cluster(fallback, bad);
        CHECK(achieved <= count_mistakes(g, fallback).total);
    }
}

TEST_CASE("bad_cluster is deterministic with the pivot solver") {
    std::mt19937_64 rng(149);
    SolverChoice solvers;  // pivot, repeats 5, seed 0
    solvers.seed = 17;
    EnumBudget budget;
    for (int rep = 0; rep < 20; ++rep) {
        int n = 4 + static_cast<int>(rng() % 6);
        SignedGraph g = oracles::random_bad_bounded_graph(n, 2, 0.5, 0.5, rng);
        VertexSet bad{n - 2, n - 1};
        Clustering a = bad_cluster(g, bad, DeltaParams{}, solvers, budget);
        Clustering b = bad_cluster(g, bad, DeltaParams{}, solvers, budget);
        CHECK(a == b);
    }
    SignedGraph g(3, {{0, 1, Label::Plus}});
    CHECK_THROWS_AS(bad_cluster(g, {}, DeltaParams{}, solvers, budget), std::invalid_argument);
    CHECK_THROWS_AS(bad_cluster(g, {0}, DeltaParams{Rational(1, 12)}, solvers, budget),
                    std::invalid_argument);
}

TEST_CASE("bad_cluster reports truncation under a tiny budget") {
    // A dense Plus neighborhood around one bad vertex forces real subset
    // enumeration; a one-subset budget cannot cover it.
    std::mt19937_64 rng(151);
    SignedGraph g = oracles::random_bad_bounded_graph(9, 1, 0.7, 0.3, rng);
    EnumBudget tiny;
    tiny.max_subsets = 2;
    tiny.max_subset_size = 1;
    SolverChoice solvers{SolverKind::Exact, 5, 0};
    BadClusterResult res = bad_cluster_full(g, {8}, DeltaParams{}, solvers, tiny);
    CHECK(res.truncated);
    EnumBudget wide;
    BadClusterResult full = bad_cluster_full(g, {8}, DeltaParams{}, solvers, wide);
    CHECK_FALSE(full.truncated);
}
