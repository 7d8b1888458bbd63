#include "matchjump/reconfig.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "matchjump/fpt.hpp"
#include "matchjump/matching.hpp"

namespace mj {

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

using KeyMap = std::unordered_map<std::vector<int>, int, VecHash>;

}  // namespace

std::optional<Matching> apply_exchange(const Graph& g, const Matching& m, const Exchange& x) {
    if (x.remove_edge < 0 || x.remove_edge >= g.m() || x.add_edge < 0 || x.add_edge >= g.m()) return std::nullopt;
    if (x.remove_edge == x.add_edge) return std::nullopt;
    if (!m.contains_edge(x.remove_edge) || m.contains_edge(x.add_edge)) return std::nullopt;
    auto [ru, rv] = g.edge(x.remove_edge);
    auto [au, av] = g.edge(x.add_edge);
    auto covered_after = [&](int v) { return m.covers(v) && v != ru && v != rv; };
    if (covered_after(au) || covered_after(av)) return std::nullopt;
    std::vector<int> ids = m.edge_ids();
    ids.erase(std::find(ids.begin(), ids.end(), x.remove_edge));
    ids.push_back(x.add_edge);
    return Matching(g, std::move(ids));
}

ValidationResult validate_sequence(const Graph& g, const Matching& ms, const Matching& mt,
                                   const ReconfigSequence& seq) {
    ValidationResult r;
    if (seq.start != ms) {
        r.reason = "sequence does not start at the source matching";
        return r;
    }
    Matching cur = ms;
    for (int i = 0; i < seq.length(); ++i) {
        auto next = apply_exchange(g, cur, seq.steps[static_cast<size_t>(i)]);
        if (!next) {
            r.fail_index = i;
            r.reason = "illegal exchange at step " + std::to_string(i);
            return r;
        }
        cur = std::move(*next);
    }
    if (cur != mt) {
        r.reason = "sequence does not end at the target matching";
        return r;
    }
    r.ok = true;
    return r;
}

std::vector<Matching> neighbors(const Graph& g, const Matching& m) {
    std::vector<Matching> out;
    for (int rem : m.edge_ids()) {
        auto [ru, rv] = g.edge(rem);
        for (int add = 0; add < g.m(); ++add) {
            if (add == rem || m.contains_edge(add)) continue;
            auto [au, av] = g.edge(add);
            bool au_free = !m.covers(au) || au == ru || au == rv;
            bool av_free = !m.covers(av) || av == ru || av == rv;
            if (au_free && av_free) {
                std::vector<int> ids = m.edge_ids();
                ids.erase(std::find(ids.begin(), ids.end(), rem));
                ids.push_back(add);
                out.emplace_back(g, std::move(ids));
            }
        }
    }
    return out;
}

std::vector<Matching> enumerate_matchings(const Graph& g, int k, std::size_t budget) {
    require(k >= 0, "enumerate_matchings: k must be non-negative");
    std::vector<Matching> out;
    std::vector<int> chosen;
    std::vector<char> covered(static_cast<size_t>(g.n()), 0);
    // Edges are added in ascending id order, so output is lexicographic.
    auto rec = [&](auto&& self, int from, int left) -> void {
        if (left == 0) {
            if (out.size() >= budget) throw budget_error("enumerate_matchings: budget exceeded");
            out.emplace_back(g, chosen);
            return;
        }
        for (int e = from; e + left <= g.m(); ++e) {
            auto [u, v] = g.edge(e);
            if (covered[static_cast<size_t>(u)] || covered[static_cast<size_t>(v)]) continue;
            covered[static_cast<size_t>(u)] = covered[static_cast<size_t>(v)] = 1;
            chosen.push_back(e);
            self(self, e + 1, left - 1);
            chosen.pop_back();
            covered[static_cast<size_t>(u)] = covered[static_cast<size_t>(v)] = 0;
        }
    };
    rec(rec, 0, k);
    return out;
}

OracleOutcome oracle_distance(const Graph& g, const Matching& ms, const Matching& mt, std::size_t budget) {
    require(ms.size() == mt.size(), "oracle_distance: matchings must have equal size");
    OracleOutcome out;
    if (ms == mt) {
        out.status = OracleStatus::found;
        out.distance = 0;
        out.witness = ReconfigSequence{ms, {}};
        out.states = 1;
        return out;
    }
    KeyMap index;
    std::vector<std::vector<int>> keys;
    std::vector<int> parent;          // BFS tree
    std::vector<Exchange> parent_via;
    std::vector<long long> dist;
    auto intern = [&](const Matching& m) {
        auto [it, fresh] = index.try_emplace(m.edge_ids(), static_cast<int>(keys.size()));
        if (fresh) {
            keys.push_back(m.edge_ids());
            parent.push_back(-1);
            parent_via.push_back({});
            dist.push_back(-1);
        }
        return std::pair(it->second, fresh);
    };
    auto [src, fresh0] = intern(ms);
    (void)fresh0;
    dist[static_cast<size_t>(src)] = 0;
    std::deque<int> q{src};
    const std::vector<int>& goal = mt.edge_ids();
    while (!q.empty()) {
        int cur = q.front();
        q.pop_front();
        Matching m(g, keys[static_cast<size_t>(cur)]);
        // Expand in deterministic (removed, added) order.
        for (int rem : m.edge_ids()) {
            auto [ru, rv] = g.edge(rem);
            for (int add = 0; add < g.m(); ++add) {
                if (add == rem || m.contains_edge(add)) continue;
                auto [au, av] = g.edge(add);
                bool au_free = !m.covers(au) || au == ru || au == rv;
                bool av_free = !m.covers(av) || av == ru || av == rv;
                if (!au_free || !av_free) continue;
                std::vector<int> ids = m.edge_ids();
                ids.erase(std::find(ids.begin(), ids.end(), rem));
                ids.insert(std::upper_bound(ids.begin(), ids.end(), add), add);
                auto it = index.find(ids);
                int id;
                if (it == index.end()) {
                    if (keys.size() >= budget) {
                        out.status = OracleStatus::budget_exceeded;
                        out.states = keys.size();
                        return out;
                    }
                    id = static_cast<int>(keys.size());
                    index.emplace(ids, id);
                    keys.push_back(ids);
                    parent.push_back(cur);
                    parent_via.push_back({rem, add});
                    dist.push_back(dist[static_cast<size_t>(cur)] + 1);
                    if (ids == goal) {
                        out.status = OracleStatus::found;
                        out.distance = dist.back();
                        out.states = keys.size();
                        ReconfigSequence seq{ms, {}};
                        for (int v = id; parent[static_cast<size_t>(v)] >= 0; v = parent[static_cast<size_t>(v)])
                            seq.steps.push_back(parent_via[static_cast<size_t>(v)]);
                        std::reverse(seq.steps.begin(), seq.steps.end());
                        out.witness = std::move(seq);
                        return out;
                    }
                    q.push_back(id);
                }
            }
        }
    }
    out.status = OracleStatus::unreachable;
    out.states = keys.size();
    return out;
}

DiameterOutcome oracle_diameter(const Graph& g, int k, std::size_t budget) {
    DiameterOutcome out;
    std::vector<Matching> all;
    try {
        all = enumerate_matchings(g, k, budget);
    } catch (const budget_error&) {
        out.status = OracleStatus::budget_exceeded;
        return out;
    }
    out.states = all.size();
    if (all.size() <= 1) return out;  // diameter 0
    KeyMap index;
    for (int i = 0; i < static_cast<int>(all.size()); ++i) index.emplace(all[static_cast<size_t>(i)].edge_ids(), i);
    std::vector<std::vector<int>> adj(all.size());
    for (int i = 0; i < static_cast<int>(all.size()); ++i)
        for (const Matching& nb : neighbors(g, all[static_cast<size_t>(i)]))
            adj[static_cast<size_t>(i)].push_back(index.at(nb.edge_ids()));
    std::vector<int> dist(all.size());
    for (int s = 0; s < static_cast<int>(all.size()); ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(s)] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : adj[static_cast<size_t>(v)])
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                    q.push_back(w);
                }
        }
        for (int v = 0; v < static_cast<int>(all.size()); ++v) {
            if (dist[static_cast<size_t>(v)] < 0)
                out.infinite = true;
            else
                out.diameter = std::max(out.diameter, static_cast<long long>(dist[static_cast<size_t>(v)]));
        }
        if (out.infinite) return out;
    }
    return out;
}

ReachabilityOutcome is_reachable(const Graph& g, const Matching& ms, const Matching& mt, std::size_t budget) {
    require(ms.size() == mt.size(), "is_reachable: matchings must have equal size");
    if (ms == mt) return {true, "identical"};
    if (!is_maximal(g, ms) || !is_maximal(g, mt)) return {true, "non-maximal"};
    int nu = matching_number(g);
    if (ms.size() == nu) {
        // Both maximum: every symmetric-difference cycle needs an alternating
        // path from a free vertex, i.e. a vertex inside D u A of the
        // Gallai-Edmonds structure seeded at ms.
        auto eg = edmonds_gallai_seeded(g, ms);
        std::vector<char> reach(static_cast<size_t>(g.n()), 0);
        for (int v : eg.d) reach[static_cast<size_t>(v)] = 1;
        for (int v : eg.a) reach[static_cast<size_t>(v)] = 1;
        auto delta = sym_diff_decompose(g, ms, mt);
        for (const auto& c : delta.components) {
            if (!c.is_cycle) continue;
            bool ok = false;
            for (int v : c.vertices) ok = ok || reach[static_cast<size_t>(v)];
            if (!ok) return {false, "blocked-cycle"};
        }
        return {true, "cycle-reach"};
    }
    if (bipartition(g)) {
        auto r = bipartite_distance(g, ms, mt);
        return {!r.infinite, "bipartite-distance"};
    }
    auto o = oracle_distance(g, ms, mt, budget);
    if (o.status == OracleStatus::budget_exceeded) throw budget_error("is_reachable: oracle budget exceeded");
    return {o.status == OracleStatus::found, "oracle"};
}

bool is_connected(const Graph& g, int k) {
    require(k >= 0, "is_connected: k must be non-negative");
    int nu = matching_number(g);
    if (k != nu) return true;  // k < nu always connected; k > nu empty by convention
    auto eg = edmonds_gallai(g);
    std::vector<int> kept;
    std::vector<char> in_c(static_cast<size_t>(g.n()), 0);
    for (int v : eg.c) in_c[static_cast<size_t>(v)] = 1;
    for (int e = 0; e < g.m(); ++e) {
        auto [u, v] = g.edge(e);
        if (in_c[static_cast<size_t>(u)] && in_c[static_cast<size_t>(v)]) kept.push_back(e);
    }
    // G[C] keeps isolated non-C vertices around; they are unmatchable and do
    // not affect perfect-matching status of the factor. C empty => trivially
    // unique (the empty matching).
    Graph factor = g.edge_subgraph(kept);
    if (eg.c.empty()) return true;
    // Perfect on C means matching all of C.
    Matching m = max_matching(factor);
    if (2 * m.size() != static_cast<int>(eg.c.size())) return false;  // cannot happen per theory
    for (int e : m.edge_ids()) {
        std::vector<int> without;
        for (int f = 0; f < factor.m(); ++f)
            if (f != e) without.push_back(f);
        if (2 * matching_number(factor.edge_subgraph(without)) == static_cast<int>(eg.c.size())) return false;
    }
    return true;
}

}  // namespace mj
