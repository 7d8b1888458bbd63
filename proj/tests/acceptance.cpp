// End-to-end acceptance checks: one PASS/FAIL line per criterion, nonzero
// exit when anything fails. The heavy criteria sweep every small graph up to
// isomorphism, so a full run takes a few minutes.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "matchjump/dst_bridge.hpp"
#include "matchjump/fpt.hpp"
#include "matchjump/gadgets.hpp"
#include "matchjump/matching.hpp"
#include "matchjump/reconfig.hpp"
#include "matchjump/slack_routes.hpp"
#include "matchjump/steiner.hpp"

using namespace mj;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::vector<Graph>& classes(int n) {
    static std::array<std::vector<Graph>, 9> cache;
    static std::array<bool, 9> done{};
    auto idx = static_cast<size_t>(n);
    if (!done[idx]) {
        cache[idx] = corpus::iso_classes(n);
        done[idx] = true;
    }
    return cache[idx];
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// The worked 7-vertex example: a 4-cycle sharing vertex 0 with a pendant path.
Graph figure_graph() { return Graph(7, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}, {4, 5}, {5, 6}}); }

// Every unordered pair (i <= j) of equal-size matchings of g, capped at 2000
// pairs per graph by a seed-fixed sample.
template <typename F>
void for_each_sampled_pair(const Graph& g, unsigned seed, F&& fn) {
    int nu = matching_number(g);
    std::vector<std::vector<Matching>> by_k(static_cast<size_t>(nu) + 1);
    struct PairRef {
        int k, i, j;
    };
    std::vector<PairRef> pairs;
    for (int k = 0; k <= nu; ++k) {
        by_k[static_cast<size_t>(k)] = enumerate_matchings(g, k);
        int cnt = static_cast<int>(by_k[static_cast<size_t>(k)].size());
        for (int i = 0; i < cnt; ++i)
            for (int j = i; j < cnt; ++j) pairs.push_back({k, i, j});
    }
    if (pairs.size() > 2000) {
        std::mt19937 rng(seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(2000);
    }
    for (const auto& p : pairs)
        fn(by_k[static_cast<size_t>(p.k)][static_cast<size_t>(p.i)],
           by_k[static_cast<size_t>(p.k)][static_cast<size_t>(p.j)]);
}

Outcome criterion1() {
    Graph g = figure_graph();
    Matching ms(g, {0, 2, 6}), mt(g, {1, 3, 5});
    auto f = bipartite_distance(g, ms, mt);
    auto o = oracle_distance(g, ms, mt);
    bool ok = !f.infinite && f.distance == 4 && o.status == OracleStatus::found &&
              o.distance == 4 && validate_sequence(g, ms, mt, f.seq).ok &&
              f.seq.length() == 4 && o.witness && validate_sequence(g, ms, mt, *o.witness).ok &&
              o.witness->length() == 4;
    return {ok, fmt("figure instance: exact=%lld oracle=%lld, both witnesses validate at 4",
                    f.distance, o.distance)};
}

Outcome criterion2() {
    const std::array<int, 9> want{0, 1, 1, 1, 3, 5, 17, 44, 182};
    long long graphs = 0, pairs = 0, finite = 0, infinite = 0, mismatches = 0;
    unsigned gi = 0;
    for (int n = 1; n <= 8; ++n) {
        int cnt = 0;
        for (const auto& g : classes(n)) {
            if (!corpus::connected(g) || !corpus::connected_bipartite(g)) continue;
            ++cnt;
            ++graphs;
            for_each_sampled_pair(g, 1234567u + 97u * gi, [&](const Matching& a, const Matching& b) {
                ++pairs;
                auto o = oracle_distance(g, a, b);
                auto f = bipartite_distance(g, a, b);
                bool o_inf = o.status == OracleStatus::unreachable;
                if (f.infinite != o_inf) {
                    ++mismatches;
                    return;
                }
                if (o_inf) {
                    ++infinite;
                    return;
                }
                ++finite;
                bool good = f.distance == o.distance && f.seq.length() == f.distance &&
                            validate_sequence(g, a, b, f.seq).ok && o.witness &&
                            o.witness->length() == o.distance &&
                            validate_sequence(g, a, b, *o.witness).ok;
                if (!good) ++mismatches;
            });
            ++gi;
        }
        if (cnt != want[static_cast<size_t>(n)])
            return {false, fmt("connected bipartite class count off at n=%d: got %d, want %d", n,
                               cnt, want[static_cast<size_t>(n)])};
    }
    return {mismatches == 0,
            fmt("%lld graphs, %lld pairs (%lld finite, %lld infinite), %lld mismatches", graphs,
                pairs, finite, infinite, mismatches)};
}

Outcome criterion3() {
    std::mt19937 rng(20259);
    int tested = 0, tight = 0, parked = 0;
    while (tested < 500) {
        int n = 4 + static_cast<int>(rng() % 7);  // 4..10
        int pct = 25 + static_cast<int>(rng() % 35);
        std::vector<std::pair<int, int>> es;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (static_cast<int>(rng() % 100) < pct) es.push_back({u, v});
        if (es.size() < 2) continue;
        Graph g(n, es);
        int k = 1 + static_cast<int>(rng() % 3);
        auto random_matching = [&]() -> std::optional<Matching> {
            std::vector<int> ids(static_cast<size_t>(g.m()));
            std::iota(ids.begin(), ids.end(), 0);
            std::shuffle(ids.begin(), ids.end(), rng);
            std::vector<int> take;
            std::vector<char> used(static_cast<size_t>(n), 0);
            for (int e : ids) {
                auto [u, v] = g.edge(e);
                if (used[static_cast<size_t>(u)] || used[static_cast<size_t>(v)]) continue;
                used[static_cast<size_t>(u)] = used[static_cast<size_t>(v)] = 1;
                take.push_back(e);
                if (static_cast<int>(take.size()) == k) break;
            }
            if (static_cast<int>(take.size()) < k) return std::nullopt;
            return Matching(g, take);
        };
        auto ms = random_matching(), mt = random_matching();
        if (!ms || !mt) continue;
        if (is_maximal(g, *ms) && is_maximal(g, *mt)) continue;
        auto o = oracle_distance(g, *ms, *mt, 5000000);
        if (o.status != OracleStatus::found) continue;
        auto r = distance_one_nonmaximal(g, *ms, *mt);
        long long half = sym_diff_decompose(g, *ms, *mt).d / 2;
        bool good = r.length == o.distance && validate_sequence(g, *ms, *mt, r.seq).ok &&
                    (r.length == half || r.length == half + 1);
        if (!good) return {false, fmt("mismatch at instance %d", tested)};
        (r.length == half ? tight : parked)++;
        ++tested;
    }
    return {true, fmt("500 instances: greedy == oracle (%d at d/2, %d at d/2+1)", tight, parked)};
}

Outcome criterion4() {
    struct Case {
        const char* name;
        Graph h;
    };
    const std::vector<Case> hs = {{"K2", Graph(2, {{0, 1}})},
                                  {"P3", Graph(3, {{0, 1}, {1, 2}})},
                                  {"P4", Graph(4, {{0, 1}, {1, 2}, {2, 3}})},
                                  {"C3", Graph(3, {{0, 1}, {1, 2}, {0, 2}})},
                                  {"C4", Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})}};
    std::string seen;
    for (const auto& c : hs) {
        long long want = 3LL * c.h.m() + 2LL * min_vertex_cover_size(c.h);
        auto gv = gen_vc(c.h);
        auto r = bipartite_distance(gv.graph, gv.m1, gv.m2);
        if (r.infinite || r.distance != want)
            return {false, fmt("%s: got %lld, want %lld", c.name, r.distance, want)};
        seen += fmt("%s=%lld ", c.name, r.distance);
    }
    Graph k2(2, {{0, 1}});
    auto gv = gen_vc(k2);
    auto dia = oracle_diameter(gv.graph, gv.m1.size());
    long long dist = expected_vc_distance(k2);
    if (dia.infinite || dia.diameter != dist + 6 || dia.diameter != 11)
        return {false, fmt("K2 diameter: got %lld, want %lld", dia.diameter, dist + 6)};
    return {true, seen + fmt("| K2 diameter=%lld", dia.diameter)};
}

Outcome criterion5() {
    SetCoverInstance family{3, {{0}, {0, 1}, {1, 2}}};
    auto gi = gen_setcover(family);
    if (gi.L_formula != 18) return {false, fmt("tail formula: got %d, want 18", gi.L_formula)};
    auto seq = cover_to_sequence(gi, {1, 2});
    if (!validate_sequence(gi.graph, gi.m1, gi.m2, seq).ok)
        return {false, "cover walk does not validate"};
    if (seq.length() > 108) return {false, fmt("cover walk too long: %d", seq.length())};
    auto cov = sequence_to_cover(gi, seq);
    std::vector<char> covered(3, 0);
    for (int s : cov)
        for (int u : family.sets[static_cast<size_t>(s)]) covered[static_cast<size_t>(u)] = 1;
    if (std::count(covered.begin(), covered.end(), 1) != 3)
        return {false, "recovered sets are not a cover"};
    if (cov.size() > 3) return {false, fmt("recovered cover too large: %zu", cov.size())};

    SetCoverInstance one{1, {{0}}};
    auto g1 = gen_setcover(one);
    auto o = oracle_distance(g1.graph, g1.m1, g1.m2);
    if (o.status != OracleStatus::found || !o.witness)
        return {false, "single-item instance not solved by the oracle"};
    auto c1 = sequence_to_cover(g1, *o.witness);
    if (c1.size() != 1) return {false, fmt("single-item cover size %zu, want 1", c1.size())};
    return {true, fmt("walk length %d <= 108, recovered cover size %zu <= 3, single-item "
                      "shortest walk opens 1 tail",
                      seq.length(), cov.size())};
}

Outcome criterion6() {
    std::mt19937 rng(424243);
    int tested = 0;
    while (tested < 300) {
        int n = 3 + static_cast<int>(rng() % 5);
        SteinerInstance inst;
        inst.n = n;
        int want = 4 + static_cast<int>(rng() % 11);
        for (int i = 0; i < want; ++i) {
            int f = static_cast<int>(rng() % n), t = static_cast<int>(rng() % n);
            if (f == t) continue;
            inst.arcs.push_back({f, t, static_cast<long long>(rng() % 4)});
        }
        inst.root = static_cast<int>(rng() % n);
        int tc = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < tc; ++i) {
            int t = static_cast<int>(rng() % n);
            if (t != inst.root) inst.terminals.push_back(t);
        }
        std::sort(inst.terminals.begin(), inst.terminals.end());
        inst.terminals.erase(std::unique(inst.terminals.begin(), inst.terminals.end()),
                             inst.terminals.end());
        if (inst.terminals.empty() || inst.arcs.size() > 14) continue;
        SteinerTree exact;
        try {
            exact = dreyfus_wagner(inst);
        } catch (const precondition_error&) {
            continue;  // a terminal is unreachable; not a valid test instance
        }
        auto brute = brute_force_steiner(inst);
        if (exact.cost != brute.cost)
            return {false, fmt("instance %d: dp=%lld brute=%lld", tested, exact.cost, brute.cost)};
        if (!validate_steiner_tree(inst, exact).ok || !validate_steiner_tree(inst, brute).ok)
            return {false, fmt("instance %d: invalid optimal tree", tested)};
        for (int level = 1; level <= 2; ++level) {
            auto a = recursive_greedy_approx(inst, level);
            if (!validate_steiner_tree(inst, a).ok)
                return {false, fmt("instance %d: greedy level %d infeasible", tested, level)};
            if (a.cost < exact.cost)
                return {false, fmt("instance %d: greedy beat the optimum", tested)};
        }
        ++tested;
    }
    return {true, "300 digraphs: dp == exhaustive, greedy approximation feasible and never better"};
}

Outcome criterion7() {
    long long instances = 0, blocked = 0, witnesses = 0;
    unsigned gi = 0;
    for (int n = 1; n <= 8; ++n) {
        for (const auto& g : classes(n)) {
            if (!corpus::connected(g) || !corpus::connected_bipartite(g)) continue;
            int nu = matching_number(g);
            auto allowed = allowed_edges(g);
            std::vector<int> old_to_new(static_cast<size_t>(g.m()), -1);
            for (size_t i = 0; i < allowed.size(); ++i)
                old_to_new[static_cast<size_t>(allowed[i])] = static_cast<int>(i);
            Graph pg = g.edge_subgraph(allowed);
            bool bad = false;
            std::string why;
            for_each_sampled_pair(g, 1234567u + 97u * gi, [&](const Matching& a, const Matching& b) {
                if (bad || a.size() != nu || a == b) return;
                ++instances;
                auto translate = [&](const std::vector<int>& ids) {
                    std::vector<int> out;
                    for (int e : ids) {
                        if (old_to_new[static_cast<size_t>(e)] < 0) return std::vector<int>{-1};
                        out.push_back(old_to_new[static_cast<size_t>(e)]);
                    }
                    return out;
                };
                Matching pa(pg, translate(a.edge_ids())), pb(pg, translate(b.edge_ids()));
                auto red = build_dst_instance(pg, pa, pb);
                auto o = oracle_distance(g, a, b);
                if (!red.reachable) {
                    ++blocked;
                    if (o.status != OracleStatus::unreachable) {
                        bad = true;
                        why = "reduction blocked but oracle reached the target";
                    }
                    return;
                }
                auto opt = dreyfus_wagner(red.instance);
                auto tv = verify_tree_structure(red, opt);
                if (!tv.ok) {
                    bad = true;
                    why = "optimal tree fails the structure check: " + tv.diagnostics;
                    return;
                }
                auto seq = tree_to_sequence(red, opt, pg, pa, pb);
                if (seq.length() != opt.cost || !validate_sequence(pg, pa, pb, seq).ok) {
                    bad = true;
                    why = "tree translation does not realize the tree cost";
                    return;
                }
                if (o.status != OracleStatus::found || !o.witness ||
                    o.distance != opt.cost) {
                    bad = true;
                    why = "tree cost disagrees with the oracle distance";
                    return;
                }
                ReconfigSequence pseq{pa, {}};
                for (const auto& st : o.witness->steps) {
                    auto rm = old_to_new[static_cast<size_t>(st.remove_edge)];
                    auto ad = old_to_new[static_cast<size_t>(st.add_edge)];
                    if (rm < 0 || ad < 0) {
                        bad = true;
                        why = "shortest witness used an edge outside every maximum matching";
                        return;
                    }
                    pseq.steps.push_back({rm, ad});
                }
                auto sub = sequence_to_subgraph(pg, pa, pseq);
                std::vector<char> seen(sub.out.size(), 0);
                std::queue<int> q;
                q.push(sub.root);
                seen[static_cast<size_t>(sub.root)] = 1;
                while (!q.empty()) {
                    int u = q.front();
                    q.pop();
                    for (int v : sub.out[static_cast<size_t>(u)])
                        if (!seen[static_cast<size_t>(v)]) {
                            seen[static_cast<size_t>(v)] = 1;
                            q.push(v);
                        }
                }
                for (int t : red.instance.terminals)
                    if (!seen[static_cast<size_t>(t)]) {
                        bad = true;
                        why = "witness subgraph misses a terminal";
                        return;
                    }
                ++witnesses;
            });
            if (bad) return {false, why};
            ++gi;
        }
    }
    return {true, fmt("%lld maximum pairs: %lld blocked, %lld optimal trees + witness subgraphs "
                      "verified",
                      instances, blocked, witnesses)};
}

Outcome criterion8() {
    const std::array<int, 9> want{0, 1, 2, 4, 11, 34, 156, 1044, 12346};
    long long cases = 0, mismatches = 0, graphs = 0;
    for (int n = 1; n <= 8; ++n) {
        if (static_cast<int>(classes(n).size()) != want[static_cast<size_t>(n)])
            return {false, fmt("graph class count off at n=%d", n)};
        for (const auto& g : classes(n)) {
            ++graphs;
            int nu = matching_number(g);
            for (int k = 0; k <= nu; ++k) {
                auto all = enumerate_matchings(g, k);
                std::map<std::vector<int>, int> index;
                for (size_t i = 0; i < all.size(); ++i)
                    index[all[i].edge_ids()] = static_cast<int>(i);
                std::vector<int> parent(all.size());
                std::iota(parent.begin(), parent.end(), 0);
                auto find = [&](int x) {
                    while (parent[static_cast<size_t>(x)] != x) {
                        parent[static_cast<size_t>(x)] =
                            parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
                        x = parent[static_cast<size_t>(x)];
                    }
                    return x;
                };
                for (size_t i = 0; i < all.size(); ++i)
                    for (const auto& nb : neighbors(g, all[i])) {
                        int j = index.at(nb.edge_ids());
                        parent[static_cast<size_t>(find(static_cast<int>(i)))] = find(j);
                    }
                int comps = 0;
                for (size_t i = 0; i < all.size(); ++i)
                    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++comps;
                bool truth = comps <= 1;
                ++cases;
                if (is_connected(g, k) != truth) ++mismatches;
            }
        }
    }
    return {mismatches == 0,
            fmt("%lld graphs, %lld (graph, k) cases, %lld mismatches", graphs, cases, mismatches)};
}

Outcome criterion9() {
    long long graphs = 0, reseeded = 0;
    for (int n = 1; n <= 8; ++n) {
        for (const auto& g : classes(n)) {
            ++graphs;
            auto eg = edmonds_gallai(g);
            std::vector<int> role(static_cast<size_t>(g.n()), -1);
            for (int v : eg.d) role[static_cast<size_t>(v)] = 0;
            for (int v : eg.a) role[static_cast<size_t>(v)] = 1;
            for (int v : eg.c) role[static_cast<size_t>(v)] = 2;
            if (std::count(role.begin(), role.end(), -1) != 0)
                return {false, fmt("n=%d: D, A, C do not partition the vertices", n)};
            if (eg.d.size() + eg.a.size() + eg.c.size() != static_cast<size_t>(g.n()))
                return {false, fmt("n=%d: partition classes overlap", n)};
            if (eg.witness.size() != eg.nu)
                return {false, fmt("n=%d: witness is not maximum", n)};
            for (int v = 0; v < g.n(); ++v) {
                bool covered = eg.witness.covers(v);
                if (!covered && role[static_cast<size_t>(v)] != 0)
                    return {false, fmt("n=%d: exposed vertex outside D", n)};
                if (role[static_cast<size_t>(v)] == 1) {
                    if (!covered) return {false, fmt("n=%d: unmatched A vertex", n)};
                    if (role[static_cast<size_t>(eg.witness.mate(g, v))] != 0)
                        return {false, fmt("n=%d: A vertex not matched into D", n)};
                }
                if (role[static_cast<size_t>(v)] == 2) {
                    if (!covered) return {false, fmt("n=%d: C vertex exposed", n)};
                    if (role[static_cast<size_t>(eg.witness.mate(g, v))] != 2)
                        return {false, fmt("n=%d: witness not perfect on C", n)};
                }
            }
            std::vector<Matching> maxima;
            try {
                maxima = enumerate_matchings(g, eg.nu, 50);
            } catch (const budget_error&) {
                continue;  // more than 50 maximum matchings: skip the reseeding sweep
            }
            for (const auto& m : maxima) {
                auto alt = edmonds_gallai_seeded(g, m);
                ++reseeded;
                if (alt.d != eg.d || alt.a != eg.a || alt.c != eg.c)
                    return {false, fmt("n=%d: partition depends on the seeding matching", n)};
            }
        }
    }
    return {true, fmt("%lld graphs, %lld reseeded recomputations, partition stable", graphs,
                      reseeded)};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        Outcome (*fn)();
    };
    const std::vector<Entry> entries = {{1, criterion1}, {2, criterion2}, {3, criterion3},
                                        {4, criterion4}, {5, criterion5}, {6, criterion6},
                                        {7, criterion7}, {8, criterion8}, {9, criterion9}};
    int failures = 0;
    for (const auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s - %s (%.1fs)\n", e.id, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures) std::printf("%d criteria failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
