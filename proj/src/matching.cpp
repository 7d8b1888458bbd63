#include "matchjump/matching.hpp"

#include <algorithm>
#include <queue>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mj {

namespace {

// Hopcroft–Karp on an explicit bipartition. mate[] is vertex -> vertex (-1 free).
struct HopcroftKarp {
    const Graph& g;
    const std::vector<std::uint8_t>& side;
    std::vector<int> mate, dist;

    explicit HopcroftKarp(const Graph& g_, const std::vector<std::uint8_t>& side_)
        : g(g_), side(side_), mate(static_cast<size_t>(g_.n()), -1), dist(static_cast<size_t>(g_.n()), -1) {}

    bool bfs() {
        std::queue<int> q;
        bool found = false;
        std::fill(dist.begin(), dist.end(), -1);
        for (int v = 0; v < g.n(); ++v)
            if (side[static_cast<size_t>(v)] == 0 && mate[static_cast<size_t>(v)] < 0) {
                dist[static_cast<size_t>(v)] = 0;
                q.push(v);
            }
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [w, e] : g.adj(v)) {
                (void)e;
                int next = mate[static_cast<size_t>(w)];
                if (next < 0) {
                    found = true;
                } else if (dist[static_cast<size_t>(next)] < 0) {
                    dist[static_cast<size_t>(next)] = dist[static_cast<size_t>(v)] + 1;
                    q.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(int v) {
        for (auto [w, e] : g.adj(v)) {
            (void)e;
            int next = mate[static_cast<size_t>(w)];
            if (next < 0 || (dist[static_cast<size_t>(next)] == dist[static_cast<size_t>(v)] + 1 && dfs(next))) {
                mate[static_cast<size_t>(v)] = w;
                mate[static_cast<size_t>(w)] = v;
                return true;
            }
        }
        dist[static_cast<size_t>(v)] = -1;
        return false;
    }

    void run() {
        while (bfs())
            for (int v = 0; v < g.n(); ++v)
                if (side[static_cast<size_t>(v)] == 0 && mate[static_cast<size_t>(v)] < 0) dfs(v);
    }
};

// Blossom-contracting augmenting search (general graphs). Also exposes the
// "outer" marking of a failed search, which is what the Gallai–Edmonds
// decomposition needs: outer vertices of the search forest rooted at a free
// vertex are exactly those reachable by an even alternating path from it.
struct Blossom {
    const Graph& g;
    int n;
    std::vector<int> mate, p, base;
    std::vector<char> used, flower;

    explicit Blossom(const Graph& g_)
        : g(g_),
          n(g_.n()),
          mate(static_cast<size_t>(g_.n()), -1),
          p(static_cast<size_t>(g_.n()), -1),
          base(static_cast<size_t>(g_.n()), 0),
          used(static_cast<size_t>(g_.n()), 0),
          flower(static_cast<size_t>(g_.n()), 0) {}

    int lca(int a, int b) {
        std::vector<char> mark(static_cast<size_t>(n), 0);
        for (int v = a;; v = p[static_cast<size_t>(mate[static_cast<size_t>(v)])]) {
            v = base[static_cast<size_t>(v)];
            mark[static_cast<size_t>(v)] = 1;
            if (mate[static_cast<size_t>(v)] < 0) break;
        }
        for (int v = b;; v = p[static_cast<size_t>(mate[static_cast<size_t>(v)])]) {
            v = base[static_cast<size_t>(v)];
            if (mark[static_cast<size_t>(v)]) return v;
        }
    }

    void mark_path(int v, int b, int child, std::queue<int>& q) {
        while (base[static_cast<size_t>(v)] != b) {
            int mv = mate[static_cast<size_t>(v)];
            flower[static_cast<size_t>(base[static_cast<size_t>(v)])] = 1;
            flower[static_cast<size_t>(base[static_cast<size_t>(mv)])] = 1;
            p[static_cast<size_t>(v)] = child;
            child = mv;
            v = p[static_cast<size_t>(mv)];
        }
        (void)q;
    }

    // Search for an augmenting path from `root`. Returns its free far end, or
    // -1 if none; in that case used[] marks the outer vertices of the forest.
    int find_path(int root) {
        std::fill(used.begin(), used.end(), 0);
        std::fill(p.begin(), p.end(), -1);
        for (int i = 0; i < n; ++i) base[static_cast<size_t>(i)] = i;
        used[static_cast<size_t>(root)] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [to, e] : g.adj(v)) {
                (void)e;
                if (base[static_cast<size_t>(v)] == base[static_cast<size_t>(to)] ||
                    mate[static_cast<size_t>(v)] == to)
                    continue;
                if (to == root ||
                    (mate[static_cast<size_t>(to)] >= 0 && p[static_cast<size_t>(mate[static_cast<size_t>(to)])] >= 0)) {
                    // Odd cycle: contract the blossom.
                    int curbase = lca(v, to);
                    std::fill(flower.begin(), flower.end(), 0);
                    mark_path(v, curbase, to, q);
                    mark_path(to, curbase, v, q);
                    for (int i = 0; i < n; ++i)
                        if (flower[static_cast<size_t>(base[static_cast<size_t>(i)])]) {
                            base[static_cast<size_t>(i)] = curbase;
                            if (!used[static_cast<size_t>(i)]) {
                                used[static_cast<size_t>(i)] = 1;
                                q.push(i);
                            }
                        }
                } else if (p[static_cast<size_t>(to)] < 0) {
                    p[static_cast<size_t>(to)] = v;
                    if (mate[static_cast<size_t>(to)] < 0) return to;
                    int mt = mate[static_cast<size_t>(to)];
                    if (!used[static_cast<size_t>(mt)]) {
                        used[static_cast<size_t>(mt)] = 1;
                        q.push(mt);
                    }
                }
            }
        }
        return -1;
    }

    void augment(int v) {
        while (v >= 0) {
            int pv = p[static_cast<size_t>(v)], ppv = mate[static_cast<size_t>(pv)];
            mate[static_cast<size_t>(v)] = pv;
            mate[static_cast<size_t>(pv)] = v;
            v = ppv;
        }
    }

    void run() {
        // Greedy warm start, then one search per remaining free vertex.
        for (int v = 0; v < n; ++v)
            if (mate[static_cast<size_t>(v)] < 0)
                for (auto [to, e] : g.adj(v)) {
                    (void)e;
                    if (mate[static_cast<size_t>(to)] < 0) {
                        mate[static_cast<size_t>(v)] = to;
                        mate[static_cast<size_t>(to)] = v;
                        break;
                    }
                }
        for (int v = 0; v < n; ++v)
            if (mate[static_cast<size_t>(v)] < 0) {
                int end = find_path(v);
                if (end >= 0) augment(end);
            }
    }
};

Matching mate_to_matching(const Graph& g, const std::vector<int>& mate) {
    std::vector<int> ids;
    for (int v = 0; v < g.n(); ++v) {
        int w = mate[static_cast<size_t>(v)];
        if (w > v) {
            int e = g.edge_between(v, w);
            check(e >= 0, "matching solver produced a non-edge");
            ids.push_back(e);
        }
    }
    return Matching(g, ids);
}

std::vector<int> matching_to_mate(const Graph& g, const Matching& m) {
    std::vector<int> mate(static_cast<size_t>(g.n()), -1);
    for (int e : m.edge_ids()) {
        auto [u, v] = g.edge(e);
        mate[static_cast<size_t>(u)] = v;
        mate[static_cast<size_t>(v)] = u;
    }
    return mate;
}

}  // namespace

Matching max_matching(const Graph& g) {
    if (auto side = bipartition(g)) {
        HopcroftKarp hk(g, *side);
        hk.run();
        return mate_to_matching(g, hk.mate);
    }
    Blossom b(g);
    b.run();
    return mate_to_matching(g, b.mate);
}

namespace {
// nu of g with the two endpoints of edge e removed, probed by dropping all
// edges touching them.
int nu_without_endpoints(const Graph& g, int e) {
    auto [u, v] = g.edge(e);
    std::vector<int> kept;
    kept.reserve(static_cast<size_t>(g.m()));
    for (int f = 0; f < g.m(); ++f) {
        auto [a, b] = g.edge(f);
        if (a == u || a == v || b == u || b == v) continue;
        kept.push_back(f);
    }
    return max_matching(g.edge_subgraph(kept)).size();
}
}  // namespace

std::vector<int> allowed_edges_serial(const Graph& g) {
    int nu = matching_number(g);
    std::vector<int> out;
    for (int e = 0; e < g.m(); ++e)
        if (nu_without_endpoints(g, e) + 1 == nu) out.push_back(e);
    return out;
}

std::vector<int> allowed_edges(const Graph& g, int threads) {
#ifdef _OPENMP
    if (threads != 1 && g.m() > 1) {
        int nu = matching_number(g);
        std::vector<char> ok(static_cast<size_t>(g.m()), 0);
        int nt = threads > 1 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (int e = 0; e < g.m(); ++e) ok[static_cast<size_t>(e)] = nu_without_endpoints(g, e) + 1 == nu;
        std::vector<int> out;
        for (int e = 0; e < g.m(); ++e)
            if (ok[static_cast<size_t>(e)]) out.push_back(e);
        return out;
    }
#else
    (void)threads;
#endif
    return allowed_edges_serial(g);
}

EGDecomposition edmonds_gallai_seeded(const Graph& g, const Matching& maximum) {
    Blossom b(g);
    b.mate = matching_to_mate(g, maximum);
    std::vector<char> outer(static_cast<size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v) {
        if (b.mate[static_cast<size_t>(v)] >= 0) continue;
        int end = b.find_path(v);
        require(end < 0, "edmonds_gallai: seed matching is not maximum");
        for (int i = 0; i < g.n(); ++i)
            if (b.used[static_cast<size_t>(i)]) outer[static_cast<size_t>(i)] = 1;
    }
    EGDecomposition out;
    out.witness = maximum;
    out.nu = maximum.size();
    std::vector<char> in_a(static_cast<size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v)
        if (outer[static_cast<size_t>(v)])
            out.d.push_back(v);
        else
            for (auto [w, e] : g.adj(v)) {
                (void)e;
                if (outer[static_cast<size_t>(w)]) {
                    in_a[static_cast<size_t>(v)] = 1;
                    break;
                }
            }
    for (int v = 0; v < g.n(); ++v) {
        if (outer[static_cast<size_t>(v)]) continue;
        if (in_a[static_cast<size_t>(v)])
            out.a.push_back(v);
        else
            out.c.push_back(v);
    }
    return out;
}

EGDecomposition edmonds_gallai(const Graph& g) { return edmonds_gallai_seeded(g, max_matching(g)); }

PerfectMatchingStatus perfect_matching_status(const Graph& g) {
    if (g.n() % 2 != 0) return PerfectMatchingStatus::none;
    Matching m = max_matching(g);
    if (2 * m.size() != g.n()) return PerfectMatchingStatus::none;
    // Unique iff deleting any matched edge kills all perfect matchings: every
    // other perfect matching differs on an alternating cycle through some e in M.
    for (int e : m.edge_ids()) {
        std::vector<int> kept;
        for (int f = 0; f < g.m(); ++f)
            if (f != e) kept.push_back(f);
        if (2 * matching_number(g.edge_subgraph(kept)) == g.n()) return PerfectMatchingStatus::multiple;
    }
    return PerfectMatchingStatus::unique;
}

}  // namespace mj
