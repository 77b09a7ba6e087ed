#pragma once

#include <string>

#include "json.hpp"

#include "corrclust/pipeline.hpp"

namespace corrclust {

using Json = nlohmann::ordered_json;

// Stable serialization of a solve run.  Field order is part of the format:
// version, n, k, bad_vertices, partition, clusters, mistakes, config, seed,
// truncated, [exact_opt, ratio,] runtime_ms.  The partition array is empty
// when a baseline clustering or the k = 0 path produced the winner.
inline Json report_to_json(const RunReport& r) {
    Json j;
    j["version"] = 1;
    j["n"] = r.n;
    j["k"] = r.k;
    j["bad_vertices"] = r.bad_vertices;
    Json partition = Json::array();
    for (const auto& block : r.best_partition.blocks) partition.push_back(block);
    j["partition"] = std::move(partition);
    Json clusters = Json::array();
    for (const auto& cluster : r.clustering.clusters()) clusters.push_back(cluster);
    j["clusters"] = std::move(clusters);
    j["mistakes"] = {
        {"positive", r.mistakes.positive},
        {"negative", r.mistakes.negative},
        {"total", r.mistakes.total},
    };
    j["config"] = {
        {"delta", r.config.delta.delta.str()},
        {"complete_solver", solver_kind_name(r.config.solver.kind)},
        {"cut_solver", cut_solver_kind_name(r.config.cut_solver)},
        {"repeats", r.config.solver.repeats},
        {"max_k", r.config.max_k},
        {"enum_max_subsets", r.config.budget.max_subsets},
        {"enum_max_size", r.config.budget.max_subset_size},
    };
    j["seed"] = r.config.seed;
    j["truncated"] = r.truncated;
    if (r.exact_opt) j["exact_opt"] = *r.exact_opt;
    if (r.ratio) j["ratio"] = *r.ratio;
    j["runtime_ms"] = r.runtime_ms;
    return j;
}

inline std::string report_to_string(const RunReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

}  // namespace corrclust
