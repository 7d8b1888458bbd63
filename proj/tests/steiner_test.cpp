#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "matchjump/common.hpp"
#include "matchjump/steiner.hpp"

using namespace mj;

namespace {

SteinerInstance make_inst(int n, std::vector<SteinerArc> arcs, int root,
                          std::vector<int> terminals) {
    SteinerInstance inst;
    inst.n = n;
    inst.arcs = std::move(arcs);
    inst.root = root;
    inst.terminals = std::move(terminals);
    return inst;
}

SteinerInstance random_inst(std::mt19937& rng) {
    int n = 3 + static_cast<int>(rng() % 5);  // 3..7 nodes
    SteinerInstance inst;
    inst.n = n;
    int want = 4 + static_cast<int>(rng() % 11);  // up to 14 arcs
    for (int i = 0; i < want; ++i) {
        int f = static_cast<int>(rng() % n), t = static_cast<int>(rng() % n);
        if (f == t) continue;
        inst.arcs.push_back({f, t, static_cast<long long>(rng() % 4)});
    }
    inst.root = static_cast<int>(rng() % n);
    int tcount = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < tcount; ++i) {
        int t = static_cast<int>(rng() % n);
        if (t != inst.root) inst.terminals.push_back(t);
    }
    std::sort(inst.terminals.begin(), inst.terminals.end());
    inst.terminals.erase(std::unique(inst.terminals.begin(), inst.terminals.end()),
                         inst.terminals.end());
    return inst;
}

bool all_terminals_reachable(const SteinerInstance& inst) {
    std::vector<std::vector<int>> out(inst.n);
    for (const auto& a : inst.arcs) out[a.from].push_back(a.to);
    std::vector<char> seen(inst.n, 0);
    std::vector<int> stack{inst.root};
    seen[inst.root] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : out[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    for (int t : inst.terminals)
        if (!seen[t]) return false;
    return true;
}

}  // namespace

TEST_CASE("validate_steiner_tree accepts a correct tree and names each defect") {
    // 0 -> 1 -> 2, plus an unused expensive shortcut 0 -> 2.
    auto inst = make_inst(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, 0, {2});

    SteinerTree good;
    good.arc_ids = {0, 1};
    good.cost = 2;
    CHECK(validate_steiner_tree(inst, good).ok);

    SteinerTree bad_cost = good;
    bad_cost.cost = 3;
    auto r1 = validate_steiner_tree(inst, bad_cost);
    CHECK(!r1.ok);
    CHECK(r1.reason.find("cost") != std::string::npos);

    SteinerTree missing;
    missing.arc_ids = {0};
    missing.cost = 1;
    auto r2 = validate_steiner_tree(inst, missing);
    CHECK(!r2.ok);

    SteinerTree out_of_range;
    out_of_range.arc_ids = {7};
    CHECK(!validate_steiner_tree(inst, out_of_range).ok);

    // two in-arcs at vertex 2
    SteinerTree double_in;
    double_in.arc_ids = {0, 1, 2};
    double_in.cost = 7;
    CHECK(!validate_steiner_tree(inst, double_in).ok);

    // arc not hanging off the root component
    auto inst2 = make_inst(4, {{0, 1, 1}, {2, 3, 1}}, 0, {1});
    SteinerTree floating;
    floating.arc_ids = {0, 1};
    floating.cost = 2;
    CHECK(!validate_steiner_tree(inst2, floating).ok);
}

TEST_CASE("dreyfus_wagner on handcrafted instances") {
    SUBCASE("sharing a trunk beats separate paths") {
        // root 0, hub 1, terminals 2 and 3; direct arcs cost 3 each.
        auto inst = make_inst(4, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {0, 2, 3}, {0, 3, 3}}, 0,
                              {2, 3});
        auto t = dreyfus_wagner(inst);
        CHECK(t.cost == 3);
        CHECK(t.arc_ids == std::vector<int>{0, 1, 2});
        CHECK(validate_steiner_tree(inst, t).ok);
    }

    SUBCASE("zero-cost arcs are free to take") {
        auto inst = make_inst(3, {{0, 1, 0}, {1, 2, 0}}, 0, {2});
        auto t = dreyfus_wagner(inst);
        CHECK(t.cost == 0);
        CHECK(t.arc_ids.size() == 2);
    }

    SUBCASE("no terminals yields the empty tree") {
        auto inst = make_inst(3, {{0, 1, 1}}, 0, {});
        auto t = dreyfus_wagner(inst);
        CHECK(t.cost == 0);
        CHECK(t.arc_ids.empty());
        auto b = brute_force_steiner(inst);
        CHECK(b.cost == 0);
        CHECK(b.arc_ids.empty());
    }

    SUBCASE("root as its own terminal costs nothing extra") {
        auto inst = make_inst(3, {{0, 1, 1}, {1, 2, 1}}, 0, {0, 2});
        auto t = dreyfus_wagner(inst);
        CHECK(t.cost == 2);
        CHECK(validate_steiner_tree(inst, t).ok);
    }

    SUBCASE("unreachable terminal is named") {
        auto inst = make_inst(3, {{0, 1, 1}}, 0, {2});
        CHECK_THROWS_WITH_AS(dreyfus_wagner(inst), doctest::Contains("2"), precondition_error);
    }
}

TEST_CASE("instance preconditions are rejected") {
    CHECK_THROWS_AS(dreyfus_wagner(make_inst(0, {}, 0, {})), precondition_error);
    CHECK_THROWS_AS(dreyfus_wagner(make_inst(3, {}, 5, {1})), precondition_error);
    CHECK_THROWS_AS(dreyfus_wagner(make_inst(3, {{0, 4, 1}}, 0, {1})), precondition_error);
    CHECK_THROWS_AS(dreyfus_wagner(make_inst(3, {{0, 1, -2}}, 0, {1})), precondition_error);
    CHECK_THROWS_AS(dreyfus_wagner(make_inst(3, {{0, 1, 1}}, 0, {3})), precondition_error);
}

TEST_CASE("brute force arc guard") {
    SteinerInstance inst;
    inst.n = 5;
    for (int f = 0; f < 5; ++f)
        for (int t = 0; t < 5; ++t)
            if (f != t) inst.arcs.push_back({f, t, 1});
    inst.root = 0;
    inst.terminals = {4};
    CHECK(inst.arcs.size() == 20);
    CHECK_THROWS_AS(brute_force_steiner(inst), precondition_error);  // default cap 14
    auto t = brute_force_steiner(inst, 20);
    CHECK(t.cost == 1);
}

TEST_CASE("dreyfus_wagner matches exhaustive search on random digraphs") {
    std::mt19937 rng(20240915);
    int tested = 0;
    while (tested < 150) {
        auto inst = random_inst(rng);
        if (inst.terminals.empty() || inst.arcs.size() > 14) continue;
        if (!all_terminals_reachable(inst)) {
            CHECK_THROWS_AS(dreyfus_wagner(inst), precondition_error);
            continue;
        }
        auto exact = dreyfus_wagner(inst);
        auto brute = brute_force_steiner(inst);
        CAPTURE(tested);
        CHECK(exact.cost == brute.cost);
        CHECK(validate_steiner_tree(inst, exact).ok);
        CHECK(validate_steiner_tree(inst, brute).ok);
        ++tested;
    }
}

TEST_CASE("recursive greedy stays feasible and never beats the optimum") {
    SUBCASE("level must be positive") {
        auto inst = make_inst(2, {{0, 1, 1}}, 0, {1});
        CHECK_THROWS_AS(recursive_greedy_approx(inst, 0), precondition_error);
    }

    SUBCASE("single terminal is solved exactly at level 1") {
        auto inst = make_inst(4, {{0, 1, 2}, {1, 3, 2}, {0, 2, 1}, {2, 3, 1}}, 0, {3});
        auto a = recursive_greedy_approx(inst, 1);
        CHECK(a.cost == 2);
        CHECK(validate_steiner_tree(inst, a).ok);
    }

    SUBCASE("no terminals yields the empty tree") {
        auto inst = make_inst(2, {{0, 1, 1}}, 0, {});
        auto a = recursive_greedy_approx(inst, 2);
        CHECK(a.arc_ids.empty());
        CHECK(a.cost == 0);
    }

    SUBCASE("random sweep: feasible, and cost >= exact at every level") {
        std::mt19937 rng(777);
        int tested = 0;
        while (tested < 80) {
            auto inst = random_inst(rng);
            if (inst.terminals.empty() || inst.arcs.size() > 14) continue;
            if (!all_terminals_reachable(inst)) continue;
            auto exact = dreyfus_wagner(inst);
            for (int level = 1; level <= 3; ++level) {
                auto a = recursive_greedy_approx(inst, level);
                CAPTURE(tested);
                CAPTURE(level);
                CHECK(validate_steiner_tree(inst, a).ok);
                CHECK(a.cost >= exact.cost);
            }
            ++tested;
        }
    }
}
