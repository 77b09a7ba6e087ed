#pragma once

#include <queue>
#include <vector>

#include "corrclust/errors.hpp"

namespace corrclust {

// Integer max flow via highest-label push-relabel.  Arcs are stored in
// forward/backward pairs (ids 2e and 2e+1); an undirected edge is a pair
// with equal capacities.  Scales far beyond what the solver needs, which
// keeps the cut computations out of every profile.
class MaxFlow {
public:
    explicit MaxFlow(int n) : n_(n), head_(n) {
        if (n < 1) throw std::invalid_argument("flow network needs at least one node");
    }

    // Returns the id of the forward arc.
    int add_edge(int u, int v, long long cap, long long rev_cap) {
        check_node(u);
        check_node(v);
        if (cap < 0 || rev_cap < 0) throw std::invalid_argument("negative arc capacity");
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({v, cap});
        arcs_.push_back({u, rev_cap});
        head_[u].push_back(id);
        head_[v].push_back(id + 1);
        init_cap_.push_back(cap);
        init_cap_.push_back(rev_cap);
        return id;
    }

    long long solve(int s, int t) {
        check_node(s);
        check_node(t);
        if (s == t) throw std::invalid_argument("source equals sink");
        s_ = s;
        t_ = t;
        height_.assign(n_, 0);
        excess_.assign(n_, 0);
        current_.assign(n_, 0);
        buckets_.assign(2 * n_, {});
        highest_ = 0;
        height_[s] = n_;
        for (int id : head_[s]) push(s, id);  // saturate everything leaving s
        for (;;) {
            int v = pop_active();
            if (v < 0) break;
            discharge(v);
        }
        solved_ = true;
        return excess_[t];
    }

    // Net flow across the forward direction of arc id (after solve).
    long long flow_on(int id) const {
        return init_cap_[id] - arcs_[id].cap;
    }

    // Nodes reachable from the source in the residual graph; the complement
    // side of a minimum cut.  Valid after solve.
    std::vector<char> min_cut_side() const {
        if (!solved_) throw invariant_error("min_cut_side before solve");
        std::vector<char> side(n_, 0);
        std::queue<int> q;
        side[s_] = 1;
        q.push(s_);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int id : head_[u]) {
                if (arcs_[id].cap <= 0) continue;
                int w = arcs_[id].to;
                if (!side[w]) {
                    side[w] = 1;
                    q.push(w);
                }
            }
        }
        if (side[t_]) throw invariant_error("sink reachable after max flow");
        return side;
    }

private:
    struct Arc {
        int to;
        long long cap;  // residual capacity
    };

    void check_node(int v) const {
        if (v < 0 || v >= n_) throw std::invalid_argument("flow node out of range");
    }

    void push(int u, int id) {
        long long amount = std::min(u == s_ ? arcs_[id].cap : excess_[u], arcs_[id].cap);
        if (amount <= 0) return;
        int v = arcs_[id].to;
        arcs_[id].cap -= amount;
        arcs_[id ^ 1].cap += amount;
        if (u != s_) excess_[u] -= amount;
        bool was_idle = excess_[v] == 0;
        excess_[v] += amount;
        if (was_idle && v != s_ && v != t_) activate(v);
    }

    void activate(int v) {
        buckets_[height_[v]].push_back(v);
        if (height_[v] > highest_) highest_ = height_[v];
    }

    int pop_active() {
        while (highest_ >= 0) {
            auto& bucket = buckets_[highest_];
            while (!bucket.empty()) {
                int v = bucket.back();
                bucket.pop_back();
                if (excess_[v] > 0 && height_[v] == highest_) return v;
            }
            --highest_;
        }
        return -1;
    }

    void discharge(int v) {
        while (excess_[v] > 0) {
            if (current_[v] == static_cast<int>(head_[v].size())) {
                relabel(v);
                current_[v] = 0;
                if (height_[v] >= 2 * n_) return;  // unreachable excess; cannot happen with s reversal
                continue;
            }
            int id = head_[v][current_[v]];
            int w = arcs_[id].to;
            if (arcs_[id].cap > 0 && height_[v] == height_[w] + 1) push(v, id);
            else ++current_[v];
        }
    }

    void relabel(int v) {
        int best = 2 * n_;
        for (int id : head_[v])
            if (arcs_[id].cap > 0) best = std::min(best, height_[arcs_[id].to] + 1);
        height_[v] = best;
        if (best < 2 * n_ && excess_[v] > 0) activate(v);
    }

    int n_;
    int s_ = -1;
    int t_ = -1;
    bool solved_ = false;
    std::vector<Arc> arcs_;
    std::vector<long long> init_cap_;
    std::vector<std::vector<int>> head_;
    std::vector<long long> excess_;
    std::vector<int> height_;
    std::vector<int> current_;
    std::vector<std::vector<int>> buckets_;
    int highest_ = 0;
};

}  // namespace corrclust
