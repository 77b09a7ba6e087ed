#pragma once

#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "corrclust/clustering.hpp"
#include "corrclust/errors.hpp"
#include "corrclust/rng.hpp"
#include "corrclust/signed_graph.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline long long parse_int(const std::string& tok, int line_no, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw parse_error(std::string("expected ") + what + ", got '" + tok + "'", line_no);
    }
}

}  // namespace detail

// Instance format: '#'-comments, one "p cc <n>" header, then one line per
// labeled pair: "<u> <v> <+|->" with 0 <= u < v < n.  Unlisted pairs are
// Missing.  Duplicates are rejected even when consistent.
inline SignedGraph parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    long long n = 0;
    std::vector<LabeledEdge> edges;
    std::vector<char> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "p") {
            if (have_header) throw parse_error("duplicate header", line_no);
            if (toks.size() != 3 || toks[1] != "cc")
                throw parse_error("header must be 'p cc <n>'", line_no);
            n = detail::parse_int(toks[2], line_no, "vertex count");
            if (n < 0 || n > 1'000'000) throw parse_error("unreasonable vertex count", line_no);
            seen.assign(static_cast<std::size_t>(n) * n, 0);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error("edge line before the 'p cc <n>' header", line_no);
        if (toks.size() != 3) throw parse_error("edge line must be '<u> <v> <+|->'", line_no);
        long long u = detail::parse_int(toks[0], line_no, "vertex id");
        long long v = detail::parse_int(toks[1], line_no, "vertex id");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw parse_error("vertex id out of range [0, " + std::to_string(n) + ")", line_no);
        if (u == v) throw parse_error("self-loop", line_no);
        if (u > v) throw parse_error("edge must list the smaller endpoint first", line_no);
        Label label;
        if (toks[2] == "+") label = Label::Plus;
        else if (toks[2] == "-") label = Label::Minus;
        else throw parse_error("label must be '+' or '-', got '" + toks[2] + "'", line_no);
        if (seen[static_cast<std::size_t>(u) * n + v])
            throw parse_error("duplicate pair " + std::to_string(u) + " " + std::to_string(v),
                              line_no);
        seen[static_cast<std::size_t>(u) * n + v] = 1;
        edges.push_back({static_cast<int>(u), static_cast<int>(v), label});
    }
    if (!have_header) throw parse_error("missing 'p cc <n>' header");
    return SignedGraph(static_cast<int>(n), edges);
}

// Canonical form: header, then edge lines sorted by (u, v).
inline std::string write_instance(const SignedGraph& g) {
    std::ostringstream out;
    out << "p cc " << g.size() << "\n";
    for (const auto& e : g.edges())
        out << e.u << " " << e.v << " " << label_name(e.label) << "\n";
    return out.str();
}

// Clustering format: one line per cluster, space-separated vertex ids;
// every vertex of the instance must appear exactly once.
inline Clustering parse_clustering(const std::string& text, int n) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<VertexSet> clusters;
    std::vector<char> placed(n, 0);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        VertexSet cluster;
        for (const auto& tok : toks) {
            long long v = detail::parse_int(tok, line_no, "vertex id");
            if (v < 0 || v >= n)
                throw parse_error("vertex id " + std::to_string(v) + " out of range [0, " +
                                      std::to_string(n) + ")",
                                  line_no);
            if (placed[v])
                throw parse_error("vertex " + std::to_string(v) + " appears twice", line_no);
            placed[v] = 1;
            cluster.push_back(static_cast<int>(v));
        }
        clusters.push_back(vset::canonical(std::move(cluster)));
    }
    for (int v = 0; v < n; ++v)
        if (!placed[v])
            throw parse_error("vertex " + std::to_string(v) + " missing from the clustering");
    Clustering c = Clustering::of_clusters(n, clusters);
    c.normalize();
    return c;
}

inline std::string write_clustering(const Clustering& c) {
    std::ostringstream out;
    for (const auto& cluster : c.clusters()) {
        for (std::size_t i = 0; i < cluster.size(); ++i)
            out << (i ? " " : "") << cluster[i];
        out << "\n";
    }
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline SignedGraph load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

// Write-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw parse_error("cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) throw parse_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw parse_error("cannot move '" + tmp + "' into place");
    }
}

// Recipe for a planted instance: n good vertices plus k_bad designated bad
// ones, a hidden clustering, label noise, and missing labels confined to
// bad-incident pairs.
struct InstanceSpec {
    int n = 0;
    int k_bad = 0;
    int num_clusters = 1;
    double flip_prob = 0.0;
    double missing_frac = 0.0;
    std::uint64_t seed = 0;
};

struct PlantedInstance {
    SignedGraph graph;
    Clustering ground_truth;
    VertexSet bad_vertices;
    long long flipped_labeled_pairs = 0;  // flips that are still labeled in the output
};

namespace detail {

// True when the Plus pairs of `members`, minus the pair (a, b), form a
// connected graph on members.
inline bool plus_connected_without(const std::vector<Label>& mat, int n,
                                   const VertexSet& members, int a, int b) {
    if (members.size() <= 1) return true;
    std::vector<int> id(n, -1);
    for (std::size_t i = 0; i < members.size(); ++i) id[members[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> adj(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            int u = members[i], v = members[j];
            if ((u == a && v == b) || (u == b && v == a)) continue;
            if (mat[static_cast<std::size_t>(u) * n + v] == Label::Plus) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }
        }
    }
    std::vector<char> vis(members.size(), 0);
    std::queue<int> q;
    vis[0] = 1;
    q.push(0);
    std::size_t reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj[u]) {
            if (!vis[w]) {
                vis[w] = 1;
                ++reached;
                q.push(static_cast<int>(w));
            }
        }
    }
    return reached == members.size();
}

}  // namespace detail

// Deterministic planted-instance generator.  Ground-truth clusters are drawn
// uniformly, intra-cluster pairs start Plus and inter-cluster pairs Minus,
// each label flips independently with flip_prob, and then a missing_frac
// fraction of bad-incident pairs is blanked out in a random order.  A pair
// is skipped (rather than blanked) when losing it would Plus-disconnect its
// ground-truth cluster or erase the last labeled pair between two clusters;
// this keeps the noiseless ground truth the unique zero-mistake clustering,
// which the recovery tests rely on.
inline PlantedInstance gen_planted(const InstanceSpec& spec) {
    if (spec.n < 0 || spec.k_bad < 0) throw std::invalid_argument("negative vertex counts");
    const int total = spec.n + spec.k_bad;
    if (total < 1) throw std::invalid_argument("instance needs at least one vertex");
    if (spec.num_clusters < 1 || spec.num_clusters > total)
        throw std::invalid_argument("num_clusters must be in [1, n + k_bad]");
    if (spec.flip_prob < 0.0 || spec.flip_prob > 1.0)
        throw std::invalid_argument("flip_prob must be a probability");
    if (spec.missing_frac < 0.0 || spec.missing_frac > 1.0)
        throw std::invalid_argument("missing_frac must be a fraction in [0, 1]");

    RngStream rng(spec.seed);
    std::vector<int> truth(total);
    for (int v = 0; v < total; ++v)
        truth[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.num_clusters)));

    std::vector<Label> mat(static_cast<std::size_t>(total) * total, Label::Missing);
    std::vector<char> flipped(static_cast<std::size_t>(total) * total, 0);
    long long flips = 0;
    for (int u = 0; u < total; ++u) {
        for (int v = u + 1; v < total; ++v) {
            Label base = truth[u] == truth[v] ? Label::Plus : Label::Minus;
            bool flip = rng.unit() < spec.flip_prob;
            if (flip) {
                base = base == Label::Plus ? Label::Minus : Label::Plus;
                flipped[static_cast<std::size_t>(u) * total + v] = 1;
                ++flips;
            }
            set_label(mat, total, u, v, base);
        }
    }

    // Pairs eligible to go Missing: those touching a bad vertex.
    std::vector<std::pair<int, int>> candidates;
    for (int u = 0; u < total; ++u)
        for (int v = u + 1; v < total; ++v)
            if (u >= spec.n || v >= spec.n) candidates.push_back({u, v});
    for (std::size_t i = candidates.size(); i > 1; --i)
        std::swap(candidates[i - 1], candidates[rng.below(i)]);

    std::vector<std::vector<long long>> labeled_between(
        spec.num_clusters, std::vector<long long>(spec.num_clusters, 0));
    for (int u = 0; u < total; ++u)
        for (int v = u + 1; v < total; ++v)
            if (truth[u] != truth[v])
                ++labeled_between[std::min(truth[u], truth[v])][std::max(truth[u], truth[v])];

    std::vector<VertexSet> cluster_members(spec.num_clusters);
    for (int v = 0; v < total; ++v) cluster_members[truth[v]].push_back(v);

    long long target = static_cast<long long>(spec.missing_frac * candidates.size());
    long long made = 0;
    for (const auto& [u, v] : candidates) {
        if (made >= target) break;
        if (truth[u] == truth[v]) {
            // Keep ground-truth clusters Plus-connected.
            const VertexSet& members = cluster_members[truth[u]];
            bool connected_now = detail::plus_connected_without(mat, total, members, -1, -1);
            if (connected_now && !detail::plus_connected_without(mat, total, members, u, v))
                continue;
        } else {
            int a = std::min(truth[u], truth[v]);
            int b = std::max(truth[u], truth[v]);
            if (labeled_between[a][b] <= 1) continue;  // keep the clusters distinguishable
            --labeled_between[a][b];
        }
        set_label(mat, total, u, v, Label::Missing);
        if (flipped[static_cast<std::size_t>(u) * total + v]) --flips;
        ++made;
    }

    PlantedInstance out{SignedGraph::from_matrix(total, std::move(mat)),
                        Clustering{truth}, {}, flips};
    for (int v = spec.n; v < total; ++v) out.bad_vertices.push_back(v);
    out.ground_truth.normalize();
    return out;
}

}  // namespace corrclust
