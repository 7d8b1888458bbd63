#include "matchjump/steiner.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>

namespace mj {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

void validate_instance(const SteinerInstance& inst) {
    require(inst.n > 0, "steiner: empty node set");
    require(inst.root >= 0 && inst.root < inst.n, "steiner: root out of range");
    for (const auto& a : inst.arcs) {
        require(a.from >= 0 && a.from < inst.n && a.to >= 0 && a.to < inst.n, "steiner: arc endpoint out of range");
        require(a.cost >= 0, "steiner: negative arc cost");
    }
    for (int t : inst.terminals) require(t >= 0 && t < inst.n, "steiner: terminal out of range");
}

std::vector<char> reachable_from_root(const SteinerInstance& inst) {
    std::vector<std::vector<int>> out(static_cast<size_t>(inst.n));
    for (int i = 0; i < static_cast<int>(inst.arcs.size()); ++i)
        out[static_cast<size_t>(inst.arcs[static_cast<size_t>(i)].from)].push_back(i);
    std::vector<char> seen(static_cast<size_t>(inst.n), 0);
    std::deque<int> q{inst.root};
    seen[static_cast<size_t>(inst.root)] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int i : out[static_cast<size_t>(v)]) {
            int w = inst.arcs[static_cast<size_t>(i)].to;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                q.push_back(w);
            }
        }
    }
    return seen;
}

void require_terminals_reachable(const SteinerInstance& inst) {
    auto seen = reachable_from_root(inst);
    for (int t : inst.terminals)
        require(seen[static_cast<size_t>(t)],
                "steiner: terminal " + std::to_string(t) + " unreachable from root");
}

// Keep, for every node reachable through `arc_ids`, the first in-arc found by a
// BFS that scans arcs in ascending id order; the result is an arborescence
// from the root spanning everything the arc set could reach.
SteinerTree prune_to_arborescence(const SteinerInstance& inst, const std::set<int>& arc_ids) {
    std::vector<std::vector<int>> out(static_cast<size_t>(inst.n));
    for (int i : arc_ids) out[static_cast<size_t>(inst.arcs[static_cast<size_t>(i)].from)].push_back(i);
    for (auto& v : out) std::sort(v.begin(), v.end());
    std::vector<char> seen(static_cast<size_t>(inst.n), 0);
    seen[static_cast<size_t>(inst.root)] = 1;
    std::deque<int> q{inst.root};
    SteinerTree tree;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int i : out[static_cast<size_t>(v)]) {
            int w = inst.arcs[static_cast<size_t>(i)].to;
            if (seen[static_cast<size_t>(w)]) continue;
            seen[static_cast<size_t>(w)] = 1;
            tree.arc_ids.push_back(i);
            tree.cost += inst.arcs[static_cast<size_t>(i)].cost;
            q.push_back(w);
        }
    }
    std::sort(tree.arc_ids.begin(), tree.arc_ids.end());
    return tree;
}

}  // namespace

TreeValidation validate_steiner_tree(const SteinerInstance& inst, const SteinerTree& tree) {
    TreeValidation r;
    std::vector<int> in_deg(static_cast<size_t>(inst.n), 0);
    long long cost = 0;
    std::vector<std::vector<int>> children(static_cast<size_t>(inst.n));
    std::set<int> seen_arcs;
    for (int i : tree.arc_ids) {
        if (i < 0 || i >= static_cast<int>(inst.arcs.size())) {
            r.reason = "arc id out of range";
            return r;
        }
        if (!seen_arcs.insert(i).second) {
            r.reason = "duplicate arc id";
            return r;
        }
        const auto& a = inst.arcs[static_cast<size_t>(i)];
        ++in_deg[static_cast<size_t>(a.to)];
        cost += a.cost;
        children[static_cast<size_t>(a.from)].push_back(a.to);
    }
    if (cost != tree.cost) {
        r.reason = "cost field mismatch";
        return r;
    }
    if (in_deg[static_cast<size_t>(inst.root)] != 0) {
        r.reason = "root has an in-arc";
        return r;
    }
    for (int v = 0; v < inst.n; ++v)
        if (in_deg[static_cast<size_t>(v)] > 1) {
            r.reason = "node " + std::to_string(v) + " has in-degree > 1";
            return r;
        }
    // Reachability from root over tree arcs; with in-degree <= 1 everywhere,
    // reaching all arc heads also proves acyclicity.
    std::vector<char> seen(static_cast<size_t>(inst.n), 0);
    seen[static_cast<size_t>(inst.root)] = 1;
    std::deque<int> q{inst.root};
    int reached_heads = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : children[static_cast<size_t>(v)])
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++reached_heads;
                q.push_back(w);
            }
    }
    if (reached_heads != static_cast<int>(tree.arc_ids.size())) {
        r.reason = "tree arcs not all reachable from root (cycle or disconnection)";
        return r;
    }
    for (int t : inst.terminals)
        if (!seen[static_cast<size_t>(t)]) {
            r.reason = "terminal " + std::to_string(t) + " not covered";
            return r;
        }
    r.ok = true;
    return r;
}

SteinerTree dreyfus_wagner(const SteinerInstance& inst) {
    validate_instance(inst);
    require_terminals_reachable(inst);
    // Dedup terminals; root-as-terminal is harmless (cost-0 base case via the
    // Dijkstra phase reaching it from itself).
    std::vector<int> terms(inst.terminals);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    int t = static_cast<int>(terms.size());
    if (t == 0) return {};

    std::vector<std::vector<int>> in_arcs(static_cast<size_t>(inst.n));
    for (int i = 0; i < static_cast<int>(inst.arcs.size()); ++i)
        in_arcs[static_cast<size_t>(inst.arcs[static_cast<size_t>(i)].to)].push_back(i);

    int full = (1 << t) - 1;
    // parent choice per state: merge split (positive submask) or -(arc id + 1).
    std::vector<std::vector<long long>> dp(static_cast<size_t>(full) + 1,
                                           std::vector<long long>(static_cast<size_t>(inst.n), kInf));
    std::vector<std::vector<int>> choice(static_cast<size_t>(full) + 1,
                                         std::vector<int>(static_cast<size_t>(inst.n), 0));
    for (int i = 0; i < t; ++i) dp[static_cast<size_t>(1 << i)][static_cast<size_t>(terms[static_cast<size_t>(i)])] = 0;

    for (int mask = 1; mask <= full; ++mask) {
        auto& cur = dp[static_cast<size_t>(mask)];
        if (mask & (mask - 1)) {  // more than one terminal: merge phase
            int low = mask & -mask;
            for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
                if (!(sub & low)) continue;  // canonical split: sub keeps the lowest bit
                const auto& a = dp[static_cast<size_t>(sub)];
                const auto& b = dp[static_cast<size_t>(mask ^ sub)];
                for (int v = 0; v < inst.n; ++v) {
                    if (a[static_cast<size_t>(v)] >= kInf || b[static_cast<size_t>(v)] >= kInf) continue;
                    long long c = a[static_cast<size_t>(v)] + b[static_cast<size_t>(v)];
                    if (c < cur[static_cast<size_t>(v)]) {
                        cur[static_cast<size_t>(v)] = c;
                        choice[static_cast<size_t>(mask)][static_cast<size_t>(v)] = sub;
                    }
                }
            }
        }
        // Dijkstra phase: grow trees upward along reversed arcs.
        std::priority_queue<std::pair<long long, int>, std::vector<std::pair<long long, int>>, std::greater<>> pq;
        for (int v = 0; v < inst.n; ++v)
            if (cur[static_cast<size_t>(v)] < kInf) pq.emplace(cur[static_cast<size_t>(v)], v);
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (dv != cur[static_cast<size_t>(v)]) continue;
            for (int i : in_arcs[static_cast<size_t>(v)]) {
                const auto& a = inst.arcs[static_cast<size_t>(i)];
                long long nd = dv + a.cost;
                if (nd < cur[static_cast<size_t>(a.from)]) {
                    cur[static_cast<size_t>(a.from)] = nd;
                    choice[static_cast<size_t>(mask)][static_cast<size_t>(a.from)] = -(i + 1);
                    pq.emplace(nd, a.from);
                }
            }
        }
    }

    check(dp[static_cast<size_t>(full)][static_cast<size_t>(inst.root)] < kInf,
          "dreyfus_wagner: no solution despite reachable terminals");

    std::set<int> arcs;
    auto rebuild = [&](auto&& self, int mask, int v) -> void {
        while (true) {
            int ch = choice[static_cast<size_t>(mask)][static_cast<size_t>(v)];
            if (ch < 0) {  // arc step
                int i = -ch - 1;
                arcs.insert(i);
                v = inst.arcs[static_cast<size_t>(i)].to;
            } else if (ch > 0) {  // merge step
                self(self, ch, v);
                mask ^= ch;
            } else {
                return;  // terminal base case
            }
        }
    };
    rebuild(rebuild, full, inst.root);

    SteinerTree tree = prune_to_arborescence(inst, arcs);
    auto val = validate_steiner_tree(inst, tree);
    check(val.ok, "dreyfus_wagner: reconstruction invalid: " + val.reason);
    check(tree.cost == dp[static_cast<size_t>(full)][static_cast<size_t>(inst.root)],
          "dreyfus_wagner: reconstruction cost mismatch");
    return tree;
}

SteinerTree brute_force_steiner(const SteinerInstance& inst, int max_arcs) {
    validate_instance(inst);
    require_terminals_reachable(inst);
    int m = static_cast<int>(inst.arcs.size());
    require(m <= max_arcs, "brute_force_steiner: too many arcs (" + std::to_string(m) + ")");
    if (inst.terminals.empty()) return {};

    long long best_cost = -1;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        long long cost = 0;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) cost += inst.arcs[static_cast<size_t>(i)].cost;
        if (best_cost >= 0 && cost >= best_cost) continue;  // first minimum wins
        // Feasibility: all terminals reachable from root via selected arcs.
        std::vector<std::vector<int>> out(static_cast<size_t>(inst.n));
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) out[static_cast<size_t>(inst.arcs[static_cast<size_t>(i)].from)].push_back(inst.arcs[static_cast<size_t>(i)].to);
        std::vector<char> seen(static_cast<size_t>(inst.n), 0);
        seen[static_cast<size_t>(inst.root)] = 1;
        std::deque<int> q{inst.root};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : out[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    q.push_back(w);
                }
        }
        bool feasible = true;
        for (int tvx : inst.terminals) feasible = feasible && seen[static_cast<size_t>(tvx)];
        if (!feasible) continue;
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best_mask = mask;
        }
    }
    check(best_cost >= 0, "brute_force_steiner: no feasible subset despite reachable terminals");
    std::set<int> arcs;
    for (int i = 0; i < m; ++i)
        if (best_mask >> i & 1) arcs.insert(i);
    SteinerTree tree = prune_to_arborescence(inst, arcs);
    auto val = validate_steiner_tree(inst, tree);
    check(val.ok, "brute_force_steiner: pruned tree invalid: " + val.reason);
    check(tree.cost <= best_cost, "brute_force_steiner: pruning increased cost");
    return tree;
}

namespace {

// All-pairs shortest paths with parent tracking for the greedy base case.
struct ShortestPaths {
    std::vector<std::vector<long long>> dist;
    std::vector<std::vector<int>> via_arc;  // arc used to enter column node

    explicit ShortestPaths(const SteinerInstance& inst)
        : dist(static_cast<size_t>(inst.n), std::vector<long long>(static_cast<size_t>(inst.n), kInf)),
          via_arc(static_cast<size_t>(inst.n), std::vector<int>(static_cast<size_t>(inst.n), -1)) {
        for (int v = 0; v < inst.n; ++v) dist[static_cast<size_t>(v)][static_cast<size_t>(v)] = 0;
        for (int i = 0; i < static_cast<int>(inst.arcs.size()); ++i) {
            const auto& a = inst.arcs[static_cast<size_t>(i)];
            if (a.cost < dist[static_cast<size_t>(a.from)][static_cast<size_t>(a.to)]) {
                dist[static_cast<size_t>(a.from)][static_cast<size_t>(a.to)] = a.cost;
                via_arc[static_cast<size_t>(a.from)][static_cast<size_t>(a.to)] = i;
            }
        }
        for (int k = 0; k < inst.n; ++k)
            for (int i = 0; i < inst.n; ++i)
                for (int j = 0; j < inst.n; ++j) {
                    long long c = dist[static_cast<size_t>(i)][static_cast<size_t>(k)] +
                                  dist[static_cast<size_t>(k)][static_cast<size_t>(j)];
                    if (c < dist[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                        dist[static_cast<size_t>(i)][static_cast<size_t>(j)] = c;
                        via_arc[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                            via_arc[static_cast<size_t>(k)][static_cast<size_t>(j)];
                    }
                }
    }

    // Arc ids of a shortest path u -> v (assumed reachable).
    void collect(int u, int v, std::set<int>& arcs, const SteinerInstance& inst) const {
        while (v != u) {
            int i = via_arc[static_cast<size_t>(u)][static_cast<size_t>(v)];
            check(i >= 0, "recursive_greedy: broken shortest-path parents");
            arcs.insert(i);
            v = inst.arcs[static_cast<size_t>(i)].from;
        }
    }
};

struct PartialTree {
    std::set<int> arcs;
    std::set<int> covered;  // terminal node ids
    long long cost = 0;
    bool valid = false;
};

// density(a) < density(b) by cross-multiplication; ties keep the first found.
bool better_density(const PartialTree& a, const PartialTree& b) {
    if (!a.valid) return false;
    if (!b.valid) return true;
    return static_cast<__int128>(a.cost) * static_cast<__int128>(b.covered.size()) <
           static_cast<__int128>(b.cost) * static_cast<__int128>(a.covered.size());
}

PartialTree greedy_rec(const SteinerInstance& inst, const ShortestPaths& sp, int level, int k, int v,
                       const std::vector<int>& targets) {
    PartialTree result;
    if (k <= 0) {
        result.valid = true;
        return result;
    }
    if (static_cast<int>(targets.size()) < k) return result;  // infeasible
    if (level <= 1) {
        // Buy the k cheapest shortest paths v -> target.
        std::vector<std::pair<long long, int>> order;
        for (int tvx : targets)
            if (sp.dist[static_cast<size_t>(v)][static_cast<size_t>(tvx)] < kInf)
                order.emplace_back(sp.dist[static_cast<size_t>(v)][static_cast<size_t>(tvx)], tvx);
        if (static_cast<int>(order.size()) < k) return result;
        std::sort(order.begin(), order.end());
        result.valid = true;
        for (int i = 0; i < k; ++i) {
            sp.collect(v, order[static_cast<size_t>(i)].second, result.arcs, inst);
            result.covered.insert(order[static_cast<size_t>(i)].second);
        }
        for (int a : result.arcs) result.cost += inst.arcs[static_cast<size_t>(a)].cost;
        return result;
    }
    result.valid = true;
    while (static_cast<int>(result.covered.size()) < k) {
        PartialTree best;
        int need = k - static_cast<int>(result.covered.size());
        std::vector<int> remaining;
        for (int tvx : targets)
            if (!result.covered.count(tvx)) remaining.push_back(tvx);
        for (int u = 0; u < inst.n; ++u) {
            if (sp.dist[static_cast<size_t>(v)][static_cast<size_t>(u)] >= kInf) continue;
            for (int kk = 1; kk <= need; ++kk) {
                PartialTree sub = greedy_rec(inst, sp, level - 1, kk, u, remaining);
                if (!sub.valid) continue;
                sp.collect(v, u, sub.arcs, inst);
                sub.cost = 0;
                for (int a : sub.arcs) sub.cost += inst.arcs[static_cast<size_t>(a)].cost;
                if (better_density(sub, best)) best = std::move(sub);
            }
        }
        if (!best.valid) {
            result.valid = false;
            return result;
        }
        result.arcs.insert(best.arcs.begin(), best.arcs.end());
        result.covered.insert(best.covered.begin(), best.covered.end());
    }
    result.cost = 0;
    for (int a : result.arcs) result.cost += inst.arcs[static_cast<size_t>(a)].cost;
    return result;
}

}  // namespace

SteinerTree recursive_greedy_approx(const SteinerInstance& inst, int level) {
    validate_instance(inst);
    require(level >= 1, "recursive_greedy_approx: level must be >= 1");
    require_terminals_reachable(inst);
    std::vector<int> terms(inst.terminals);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.empty()) return {};
    ShortestPaths sp(inst);
    PartialTree pt = greedy_rec(inst, sp, level, static_cast<int>(terms.size()), inst.root, terms);
    check(pt.valid, "recursive_greedy_approx: infeasible despite reachable terminals");
    SteinerTree tree = prune_to_arborescence(inst, pt.arcs);
    auto val = validate_steiner_tree(inst, tree);
    check(val.ok, "recursive_greedy_approx: tree invalid: " + val.reason);
    return tree;
}

}  // namespace mj
