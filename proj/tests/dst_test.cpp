#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>
#include <random>
#include <vector>

#include "matchjump/dst_bridge.hpp"
#include "matchjump/matching.hpp"
#include "matchjump/reconfig.hpp"

using namespace mj;

namespace {

// C4 (0-1-2-3) with a pendant 4 hanging off vertex 1. Both matchings are
// near-perfect and maximum; the symmetric difference is the single 4-cycle.
struct CyclePendant {
    Graph g{5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 1}}};
    Matching ms{g, {0, 2}};  // (0,1),(2,3)
    Matching mt{g, {1, 3}};  // (1,2),(0,3)
};

std::vector<char> reach_from_root(const DstSubgraph& sub) {
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
    return seen;
}

}  // namespace

TEST_CASE("build_dst_instance lays out the cycle-with-pendant reduction") {
    CyclePendant t;
    auto red = build_dst_instance(t.g, t.ms, t.mt);

    CHECK(red.root == 5);
    CHECK(red.instance.n == 6);
    CHECK(red.instance.root == 5);
    CHECK(red.reachable);
    CHECK(red.blocking_cycle == -1);

    // exposed vertex 4 oriented to side 0, and even alternating reach = {0,2,4}
    CHECK(red.side[4] == 0);
    CHECK(red.in_uprime == std::vector<char>{1, 0, 1, 0, 1});
    CHECK(red.instance.terminals == std::vector<int>{0, 2});

    REQUIRE(red.instance.arcs.size() == 4);
    // artificial root arc to the exposed vertex
    CHECK(red.arc_kind[0] == DstArcKind::artificial);
    CHECK(red.instance.arcs[0].from == 5);
    CHECK(red.instance.arcs[0].to == 4);
    CHECK(red.instance.arcs[0].cost == 0);
    CHECK(red.arc_origin[0].v == -1);
    CHECK(red.ec_edge[0] == -1);
    CHECK(red.component_of[0] == -1);

    // special 2 -> 0 through v=1: (1,2) in Mt, (0,1) in Ms
    CHECK(red.arc_kind[1] == DstArcKind::special);
    CHECK(red.instance.arcs[1].from == 2);
    CHECK(red.instance.arcs[1].to == 0);
    CHECK(red.instance.arcs[1].cost == 1);
    CHECK(red.arc_origin[1].u == 2);
    CHECK(red.arc_origin[1].v == 1);
    CHECK(red.arc_origin[1].w == 0);
    CHECK(red.component_of[1] == 0);
    CHECK(red.ec_edge[1] == t.g.edge_between(1, 2));

    // ordinary 4 -> 0 through v=1: (1,4) in neither matching
    CHECK(red.arc_kind[2] == DstArcKind::ordinary);
    CHECK(red.instance.arcs[2].from == 4);
    CHECK(red.instance.arcs[2].to == 0);
    CHECK(red.instance.arcs[2].cost == 2);
    CHECK(red.component_of[2] == -1);
    CHECK(red.ec_edge[2] == -1);

    // special 0 -> 2 through v=3: (0,3) in Mt, (2,3) in Ms
    CHECK(red.arc_kind[3] == DstArcKind::special);
    CHECK(red.instance.arcs[3].from == 0);
    CHECK(red.instance.arcs[3].to == 2);
    CHECK(red.instance.arcs[3].cost == 1);
    CHECK(red.component_of[3] == 0);
    CHECK(red.ec_edge[3] == t.g.edge_between(0, 3));
}

TEST_CASE("blocked cycle is reported, not solved") {
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    Matching ms(c4, {0, 2}), mt(c4, {1, 3});
    auto red = build_dst_instance(c4, ms, mt);
    CHECK(!red.reachable);
    CHECK(red.blocking_cycle == 0);
    CHECK(red.instance.terminals.empty());

    auto r = max_matching_distance(c4, ms, mt);
    CHECK(!r.reachable);
    CHECK(r.blocking_cycle == 0);
}

TEST_CASE("build_dst_instance preconditions") {
    Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    CHECK_THROWS_AS(build_dst_instance(c5, Matching(c5, {0, 2}), Matching(c5, {1, 3})),
                    precondition_error);
    Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_THROWS_AS(build_dst_instance(p4, Matching(p4, {0}), Matching(p4, {1})),
                    precondition_error);  // not maximum
    CHECK_THROWS_AS(build_dst_instance(p4, Matching(p4, {0, 2}), Matching(p4, {1})),
                    precondition_error);  // unequal sizes
}

TEST_CASE("verify_tree_structure distinguishes good and bad trees") {
    CyclePendant t;
    auto red = build_dst_instance(t.g, t.ms, t.mt);
    auto opt = dreyfus_wagner(red.instance);
    CHECK(opt.cost == 3);
    CHECK(opt.arc_ids == std::vector<int>{0, 2, 3});
    CHECK(verify_tree_structure(red, opt).ok);

    SteinerTree both_specials;
    both_specials.arc_ids = {0, 1, 3};
    auto r1 = verify_tree_structure(red, both_specials);
    CHECK(!r1.ok);
    CHECK(r1.diagnostics.find("omit") != std::string::npos);

    SteinerTree no_specials;
    no_specials.arc_ids = {0, 2};
    CHECK(!verify_tree_structure(red, no_specials).ok);

    SteinerTree out_of_range;
    out_of_range.arc_ids = {99};
    CHECK(!verify_tree_structure(red, out_of_range).ok);
}

TEST_CASE("path components demand all their special arcs and the root arc") {
    Graph p5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    Matching ms(p5, {0, 2}), mt(p5, {1, 3});
    auto red = build_dst_instance(p5, ms, mt);
    REQUIRE(red.instance.arcs.size() == 3);
    CHECK(red.instance.terminals == std::vector<int>{0, 2, 4});

    auto opt = dreyfus_wagner(red.instance);
    CHECK(opt.cost == 2);
    CHECK(verify_tree_structure(red, opt).ok);

    SteinerTree no_root_arc;
    no_root_arc.arc_ids = {1, 2};
    auto r1 = verify_tree_structure(red, no_root_arc);
    CHECK(!r1.ok);
    CHECK(r1.diagnostics.find("root arc") != std::string::npos);

    SteinerTree dropped_special;
    dropped_special.arc_ids = {0, 2};
    auto r2 = verify_tree_structure(red, dropped_special);
    CHECK(!r2.ok);
    CHECK(r2.diagnostics.find("missing") != std::string::npos);

    auto seq = tree_to_sequence(red, opt, p5, ms, mt);
    CHECK(seq.length() == 2);
    CHECK(validate_sequence(p5, ms, mt, seq).ok);
}

TEST_CASE("tree_to_sequence realizes the tree cost exactly") {
    CyclePendant t;
    auto red = build_dst_instance(t.g, t.ms, t.mt);
    auto opt = dreyfus_wagner(red.instance);
    auto with_debug = tree_to_sequence(red, opt, t.g, t.ms, t.mt, true);
    auto without = tree_to_sequence(red, opt, t.g, t.ms, t.mt, false);
    CHECK(with_debug.length() == opt.cost);
    CHECK(validate_sequence(t.g, t.ms, t.mt, with_debug).ok);
    REQUIRE(with_debug.steps.size() == without.steps.size());
    for (size_t i = 0; i < without.steps.size(); ++i) {
        CHECK(with_debug.steps[i].remove_edge == without.steps[i].remove_edge);
        CHECK(with_debug.steps[i].add_edge == without.steps[i].add_edge);
    }

    SteinerTree junk;
    junk.arc_ids = {0};
    junk.cost = 0;
    CHECK_THROWS_AS(tree_to_sequence(red, junk, t.g, t.ms, t.mt), precondition_error);
}

TEST_CASE("sequence_to_subgraph reaches the terminals for shortest witnesses") {
    CyclePendant t;
    auto red = build_dst_instance(t.g, t.ms, t.mt);
    auto o = oracle_distance(t.g, t.ms, t.mt);
    REQUIRE(o.status == OracleStatus::found);
    CHECK(o.distance == 3);
    REQUIRE(o.witness.has_value());
    auto sub = sequence_to_subgraph(t.g, t.ms, *o.witness);
    CHECK(sub.root == 5);
    auto seen = reach_from_root(sub);
    for (int term : red.instance.terminals) CHECK(seen[static_cast<size_t>(term)]);

    CHECK_THROWS_AS(sequence_to_subgraph(t.g, t.mt, *o.witness), precondition_error);
}

TEST_CASE("max_matching_distance equals the oracle on random bipartite instances") {
    std::mt19937 rng(2718281);
    int tested = 0, unreachable_seen = 0;
    while (tested < 250) {
        int na = 2 + static_cast<int>(rng() % 4), nb = 2 + static_cast<int>(rng() % 4);
        std::vector<std::pair<int, int>> es;
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b)
                if (rng() % 100 < 45) es.push_back({a, na + b});
        if (es.size() < 3) continue;
        Graph g(na + nb, es);
        int nu = matching_number(g);
        if (nu < 2) continue;
        std::vector<Matching> all;
        try {
            all = enumerate_matchings(g, nu, 100000);
        } catch (const budget_error&) {
            continue;
        }
        if (all.size() < 2) continue;
        const Matching& ms = all[rng() % all.size()];
        const Matching& mt = all[rng() % all.size()];
        auto o = oracle_distance(g, ms, mt, 2000000);
        if (o.status == OracleStatus::budget_exceeded) continue;
        auto r = max_matching_distance(g, ms, mt);
        CAPTURE(tested);
        if (o.status == OracleStatus::unreachable) {
            CHECK(!r.reachable);
            CHECK(r.blocking_cycle >= 0);
            ++unreachable_seen;
        } else {
            REQUIRE(r.reachable);
            CHECK(r.distance == o.distance);
            CHECK(validate_sequence(g, ms, mt, r.seq).ok);
            CHECK(r.seq.length() == r.distance);
        }
        ++tested;
    }
    CHECK(unreachable_seen > 0);
}

TEST_CASE("optimal trees of random instances pass the structure checks") {
    std::mt19937 rng(5556);
    int tested = 0;
    while (tested < 120) {
        int na = 2 + static_cast<int>(rng() % 3), nb = 2 + static_cast<int>(rng() % 3);
        std::vector<std::pair<int, int>> es;
        for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b)
                if (rng() % 100 < 50) es.push_back({a, na + b});
        if (es.size() < 3) continue;
        Graph g(na + nb, es);
        int nu = matching_number(g);
        if (nu < 2) continue;
        auto all = enumerate_matchings(g, nu, 100000);
        if (all.size() < 2) continue;
        const Matching& ms = all[rng() % all.size()];
        const Matching& mt = all[rng() % all.size()];
        if (ms == mt) continue;

        // prune to edges that lie in some maximum matching, as the solver does
        auto allowed = allowed_edges(g);
        std::vector<int> old_to_new(static_cast<size_t>(g.m()), -1);
        for (size_t i = 0; i < allowed.size(); ++i) old_to_new[static_cast<size_t>(allowed[i])] = static_cast<int>(i);
        Graph pg = g.edge_subgraph(allowed);
        auto translate = [&](const Matching& m) {
            std::vector<int> ids;
            for (int e : m.edge_ids()) {
                REQUIRE(old_to_new[static_cast<size_t>(e)] >= 0);
                ids.push_back(old_to_new[static_cast<size_t>(e)]);
            }
            return Matching(pg, ids);
        };
        Matching pms = translate(ms), pmt = translate(mt);
        auto red = build_dst_instance(pg, pms, pmt);
        if (!red.reachable) continue;
        auto opt = dreyfus_wagner(red.instance);
        CAPTURE(tested);
        CHECK(verify_tree_structure(red, opt).ok);
        auto seq = tree_to_sequence(red, opt, pg, pms, pmt);
        CHECK(seq.length() == opt.cost);
        CHECK(validate_sequence(pg, pms, pmt, seq).ok);
        ++tested;
    }
}
