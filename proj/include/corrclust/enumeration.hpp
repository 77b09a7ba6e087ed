#pragma once

#include <string>
#include <vector>

#include "corrclust/errors.hpp"
#include "corrclust/vertex_set.hpp"

namespace corrclust {

// A partition of a vertex set into nonempty blocks.  Blocks are sorted
// internally and ordered by their smallest element (the canonical order the
// generator emits).
struct BadPartition {
    std::vector<VertexSet> blocks;

    VertexSet ground() const {
        VertexSet all;
        for (const auto& b : blocks) all = vset::unite(all, b);
        return all;
    }
};

// Enumerates every set partition of s exactly once, in restricted-growth-
// string order (block of s[0] first; the Bell(|s|) classics).  fn receives
// each partition by const reference.
template <class Fn>
void for_each_partition(const VertexSet& s, Fn&& fn) {
    const int m = static_cast<int>(s.size());
    if (m == 0) {
        BadPartition p;  // the empty set has exactly one partition: no blocks
        fn(static_cast<const BadPartition&>(p));
        return;
    }
    std::vector<int> rgs(m, 0);       // rgs[i] = block index of s[i]
    std::vector<int> prefix_max(m, 0);
    for (;;) {
        BadPartition p;
        int blocks = prefix_max[m - 1] + 1;
        p.blocks.assign(blocks, {});
        for (int i = 0; i < m; ++i) p.blocks[rgs[i]].push_back(s[i]);
        fn(static_cast<const BadPartition&>(p));

        int i = m - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
        if (i == 0) return;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int j = i + 1; j < m; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}

inline constexpr int kDefaultPartitionCap = 12;

// Materializes all partitions; refuses sets whose Bell number would be
// unreasonable for the intended desk scale.
inline std::vector<BadPartition> all_partitions(const VertexSet& s,
                                                int cap = kDefaultPartitionCap) {
    if (static_cast<int>(s.size()) > cap)
        throw budget_error("partition enumeration over " + std::to_string(s.size()) +
                           " elements exceeds the cap of " + std::to_string(cap));
    std::vector<BadPartition> out;
    for_each_partition(s, [&](const BadPartition& p) { out.push_back(p); });
    return out;
}

// Budget for subset-family enumeration.  max_subset_size = 0 means "let the
// caller derive it" (the cluster search uses 2|B|); enumerate_subsets itself
// requires both fields to be at least 1.
struct EnumBudget {
    long long max_subsets = 4096;
    int max_subset_size = 0;
};

struct SubsetFamily {
    std::vector<VertexSet> subsets;
    bool truncated = false;
};

// All subsets of s when 2^|s| fits the budget; otherwise every subset of
// size at most max_subset_size plus s itself, flagged truncated.  Order:
// increasing size, lexicographic within a size.  The empty set and (in the
// truncated case) s are always present.
inline SubsetFamily enumerate_subsets(const VertexSet& s, const EnumBudget& budget) {
    if (budget.max_subsets < 1) throw std::invalid_argument("max_subsets must be at least 1");
    if (budget.max_subset_size < 1)
        throw std::invalid_argument("max_subset_size must be at least 1");
    const int m = static_cast<int>(s.size());
    const bool full = m < 63 && (1ULL << m) <= static_cast<unsigned long long>(budget.max_subsets);
    const int max_size = full ? m : std::min(budget.max_subset_size, m);

    SubsetFamily out;
    out.truncated = !full;
    out.subsets.push_back({});
    std::vector<int> idx;
    for (int size = 1; size <= max_size; ++size) {
        idx.resize(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            VertexSet subset(size);
            for (int i = 0; i < size; ++i) subset[i] = s[idx[i]];
            out.subsets.push_back(std::move(subset));
            int i = size - 1;
            while (i >= 0 && idx[i] == m - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    if (!full && max_size < m) out.subsets.push_back(s);
    return out;
}

}  // namespace corrclust
