#include "matchjump/dst_bridge.hpp"

#include <algorithm>
#include <utility>

#include "matchjump/common.hpp"
#include "matchjump/matching.hpp"
#include "matchjump/slack_routes.hpp"

namespace mj {

namespace {

// Bipartition with each component flipped so its exposed vertices sit on side
// 0. When every edge of the graph lies in some maximum matching, the exposed
// vertices of a component can only occupy one side; a violation means the
// caller skipped pruning.
std::vector<std::uint8_t> oriented_sides(const Graph& g, const Matching& ms) {
    auto base = bipartition(g);
    require(base.has_value(), "graph must be bipartite");
    auto side = *base;
    auto comp = connected_components(g);
    int nc = 0;
    for (int c : comp) nc = std::max(nc, c + 1);
    std::vector<int> free_side(static_cast<size_t>(nc), -1);
    for (int v = 0; v < g.n(); ++v) {
        if (ms.covers(v)) continue;
        int c = comp[static_cast<size_t>(v)];
        if (free_side[static_cast<size_t>(c)] < 0) {
            free_side[static_cast<size_t>(c)] = side[static_cast<size_t>(v)];
        } else {
            require(free_side[static_cast<size_t>(c)] == static_cast<int>(side[static_cast<size_t>(v)]),
                    "exposed vertices on both sides of a component; prune to allowed edges first");
        }
    }
    for (int v = 0; v < g.n(); ++v)
        if (free_side[static_cast<size_t>(comp[static_cast<size_t>(v)])] == 1) side[static_cast<size_t>(v)] ^= 1;
    return side;
}

}  // namespace

DstReduction build_dst_instance(const Graph& g, const Matching& ms, const Matching& mt) {
    require(ms.size() == mt.size(), "matchings must have equal size");
    int nu = matching_number(g);
    require(ms.size() == nu, "source matching must be maximum");
    require(mt.size() == nu, "target matching must be maximum");

    DstReduction red;
    red.side = oriented_sides(g, ms);
    red.dec = sym_diff_decompose(g, ms, mt);
    for (const auto& z : red.dec.components)
        check(z.ms_edges == z.mt_edges, "maximum matchings admit only balanced components");

    auto xs = ms.free_vertices(g);
    red.in_uprime = even_alternating_reachable(g, ms, xs);
    for (int v = 0; v < g.n(); ++v)
        if (red.in_uprime[static_cast<size_t>(v)])
            check(red.side[static_cast<size_t>(v)] == 0, "even alternating reachability stays on side 0");

    red.root = g.n();
    red.instance.n = g.n() + 1;
    red.instance.root = red.root;

    for (int x : xs) {
        red.instance.arcs.push_back({red.root, x, 0});
        red.arc_kind.push_back(DstArcKind::artificial);
        red.arc_origin.push_back({red.root, -1, x});
        red.component_of.push_back(-1);
        red.ec_edge.push_back(-1);
    }
    for (int w = 0; w < g.n(); ++w) {
        if (!red.in_uprime[static_cast<size_t>(w)]) continue;
        int e_vw = ms.edge_at(w);
        if (e_vw < 0) continue;
        int v = g.other_end(e_vw, w);
        for (auto [u, e_uv] : g.adj(v)) {
            if (u == w || ms.contains_edge(e_uv) || !red.in_uprime[static_cast<size_t>(u)]) continue;
            bool special = mt.contains_edge(e_uv);
            red.instance.arcs.push_back({u, w, special ? 1 : 2});
            red.arc_kind.push_back(special ? DstArcKind::special : DstArcKind::ordinary);
            red.arc_origin.push_back({u, v, w});
            if (special) {
                int ci = red.dec.comp_of_edge[static_cast<size_t>(e_vw)];
                check(ci >= 0 && ci == red.dec.comp_of_edge[static_cast<size_t>(e_uv)],
                      "special arc must live on a single symmetric-difference component");
                red.component_of.push_back(ci);
                int ec = mt.edge_at(u);
                check(ec >= 0, "source of a special arc is covered by the target matching");
                red.ec_edge.push_back(ec);
            } else {
                red.component_of.push_back(-1);
                red.ec_edge.push_back(-1);
            }
        }
    }

    for (int v = 0; v < g.n(); ++v)
        if (red.in_uprime[static_cast<size_t>(v)] && red.dec.comp_of_vertex[static_cast<size_t>(v)] >= 0)
            red.instance.terminals.push_back(v);

    // Reachability: every component needs a side-0 vertex in U'. Paths carry
    // their own free vertex; a cycle without one blocks the whole instance.
    std::vector<char> comp_hit(red.dec.components.size(), 0);
    for (int t : red.instance.terminals) comp_hit[static_cast<size_t>(red.dec.comp_of_vertex[static_cast<size_t>(t)])] = 1;
    for (std::size_t ci = 0; ci < red.dec.components.size(); ++ci) {
        if (comp_hit[ci]) continue;
        check(red.dec.components[ci].is_cycle, "path component contains a free vertex, which is always in U'");
        if (red.reachable) {
            red.reachable = false;
            red.blocking_cycle = static_cast<int>(ci);
        }
    }

    // Special-arc census: one in- and out-arc per vertex at most, and each
    // reachable component of 2k edges contributes exactly k special arcs.
    std::vector<int> spec_in(static_cast<size_t>(g.n()), 0), spec_out(static_cast<size_t>(g.n()), 0);
    std::vector<std::size_t> spec_cnt(red.dec.components.size(), 0);
    for (std::size_t a = 0; a < red.instance.arcs.size(); ++a) {
        if (red.arc_kind[a] != DstArcKind::special) continue;
        ++spec_in[static_cast<size_t>(red.instance.arcs[a].to)];
        ++spec_out[static_cast<size_t>(red.instance.arcs[a].from)];
        ++spec_cnt[static_cast<size_t>(red.component_of[a])];
    }
    for (int v = 0; v < g.n(); ++v)
        check(spec_in[static_cast<size_t>(v)] <= 1 && spec_out[static_cast<size_t>(v)] <= 1,
              "a vertex carries at most one special arc in each direction");
    for (std::size_t ci = 0; ci < red.dec.components.size(); ++ci)
        if (comp_hit[ci])
            check(spec_cnt[ci] * 2 == red.dec.components[ci].edge_ids.size(),
                  "special arcs of a reachable component mirror half its edges");

    return red;
}

TreeCheck verify_tree_structure(const DstReduction& red, const SteinerTree& tree) {
    const auto& inst = red.instance;
    std::vector<char> in_tree(inst.arcs.size(), 0);
    for (int a : tree.arc_ids) {
        if (a < 0 || a >= static_cast<int>(inst.arcs.size())) return {false, "arc id out of range"};
        in_tree[static_cast<size_t>(a)] = 1;
    }

    std::vector<int> missing(red.dec.components.size(), 0), present(red.dec.components.size(), 0);
    for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
        if (red.arc_kind[a] != DstArcKind::special) continue;
        auto ci = static_cast<size_t>(red.component_of[a]);
        if (in_tree[a]) ++present[ci];
        else ++missing[ci];
    }
    for (std::size_t ci = 0; ci < red.dec.components.size(); ++ci) {
        const auto& z = red.dec.components[ci];
        if (present[ci] + missing[ci] == 0) continue;  // unreachable cycle: no special arcs built
        if (!z.is_cycle && missing[ci] != 0)
            return {false, "path component " + std::to_string(ci) + " is missing " + std::to_string(missing[ci]) +
                               " of its special arcs"};
        if (z.is_cycle && missing[ci] != 1)
            return {false, "cycle component " + std::to_string(ci) + " must omit exactly one special arc, omits " +
                               std::to_string(missing[ci])};
    }

    // Root arcs to the exposed vertex of each path component.
    std::vector<char> is_free_target(static_cast<size_t>(inst.n), 0);
    for (std::size_t a = 0; a < inst.arcs.size(); ++a)
        if (red.arc_kind[a] == DstArcKind::artificial && in_tree[a])
            is_free_target[static_cast<size_t>(inst.arcs[a].to)] = 1;
    for (std::size_t ci = 0; ci < red.dec.components.size(); ++ci) {
        const auto& z = red.dec.components[ci];
        if (z.is_cycle) continue;
        int x = -1;
        for (int cand : {z.vertices.front(), z.vertices.back()}) {
            bool has_artificial = false;
            for (std::size_t a = 0; a < inst.arcs.size(); ++a)
                if (red.arc_kind[a] == DstArcKind::artificial && inst.arcs[a].to == cand) has_artificial = true;
            if (has_artificial) x = cand;
        }
        if (x < 0) return {false, "path component " + std::to_string(ci) + " has no exposed endpoint"};
        if (!is_free_target[static_cast<size_t>(x)])
            return {false, "tree misses the root arc to vertex " + std::to_string(x) + " of path component " +
                               std::to_string(ci)};
    }
    return {true, ""};
}

ReconfigSequence tree_to_sequence(const DstReduction& red, const SteinerTree& tree, const Graph& g,
                                  const Matching& ms, const Matching& mt, bool debug_bookkeeping) {
    auto tv = validate_steiner_tree(red.instance, tree);
    require(tv.ok, "tree rejected: " + tv.reason);
    auto vr = verify_tree_structure(red, tree);
    require(vr.ok, "tree rejected: " + vr.diagnostics);

    const auto& inst = red.instance;

    // Pin the reduction to this graph and matching pair.
    std::vector<int> e_of(inst.arcs.size(), -1), ebar_of(inst.arcs.size(), -1);
    for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
        if (red.arc_kind[a] == DstArcKind::artificial) continue;
        const auto& o = red.arc_origin[a];
        e_of[a] = g.edge_between(o.v, o.w);
        ebar_of[a] = g.edge_between(o.u, o.v);
        check(e_of[a] >= 0 && ms.contains_edge(e_of[a]), "reduction arc does not match the given source matching");
        check(ebar_of[a] >= 0 && !ms.contains_edge(ebar_of[a]), "reduction arc does not match the given graph");
        check((red.arc_kind[a] == DstArcKind::special) == mt.contains_edge(ebar_of[a]),
              "arc kind disagrees with the given target matching");
    }

    // Cycle-closing edge: the target-matching edge at the source of the one
    // special arc the tree omits.
    std::vector<int> close_edge(red.dec.components.size(), -1);
    for (std::size_t a = 0; a < inst.arcs.size(); ++a) {
        if (red.arc_kind[a] != DstArcKind::special) continue;
        if (std::binary_search(tree.arc_ids.begin(), tree.arc_ids.end(), static_cast<int>(a))) continue;
        auto ci = static_cast<size_t>(red.component_of[a]);
        check(red.dec.components[ci].is_cycle, "only cycle components omit special arcs");
        check(close_edge[ci] < 0, "cycle component omits a single special arc");
        close_edge[ci] = red.ec_edge[a];
    }

    // DFS from the root, heaviest child arc first, ties to the smaller target.
    std::vector<std::vector<int>> kids(static_cast<size_t>(inst.n));
    for (int a : tree.arc_ids) kids[static_cast<size_t>(inst.arcs[a].from)].push_back(a);
    for (auto& k : kids)
        std::sort(k.begin(), k.end(), [&](int a, int b) {
            if (inst.arcs[a].cost != inst.arcs[b].cost) return inst.arcs[a].cost > inst.arcs[b].cost;
            return inst.arcs[a].to < inst.arcs[b].to;
        });

    struct Event {
        int arc;
        bool down;
    };
    std::vector<Event> events;
    struct Frame {
        int enter_arc;
        int node;
        std::size_t next;
    };
    std::vector<Frame> stack{{-1, inst.root, 0}};
    while (!stack.empty()) {
        auto& fr = stack.back();
        if (fr.next < kids[static_cast<size_t>(fr.node)].size()) {
            int a = kids[static_cast<size_t>(fr.node)][fr.next++];
            events.push_back({a, true});
            stack.push_back({a, inst.arcs[a].to, 0});
        } else {
            if (fr.enter_arc >= 0) events.push_back({fr.enter_arc, false});
            stack.pop_back();
        }
    }
    check(events.size() == 2 * tree.arc_ids.size(), "every tree arc is traversed down and up once");

    Matching cur = ms;
    std::vector<Exchange> steps;
    auto apply = [&](int rm, int ad) {
        Exchange x{rm, ad};
        auto nxt = apply_exchange(g, cur, x);
        check(nxt.has_value(), "traversal emitted an illegal exchange");
        cur = *nxt;
        steps.push_back(x);
    };

    std::vector<char> down_done(inst.arcs.size(), 0), up_done(inst.arcs.size(), 0);
    int prev_arc = -1;
    for (const auto& ev : events) {
        DstArcKind kind = red.arc_kind[ev.arc];
        if (kind == DstArcKind::artificial) {
            // free vertex: nothing to exchange
        } else if (ev.down) {
            apply(e_of[ev.arc], ebar_of[ev.arc]);
        } else if (kind == DstArcKind::special) {
            // the exchange happens when the cycle closes or the walk unwinds
        } else if (prev_arc >= 0 && red.arc_kind[prev_arc] == DstArcKind::special &&
                   red.dec.components[static_cast<size_t>(red.component_of[prev_arc])].is_cycle) {
            auto ci = static_cast<size_t>(red.component_of[prev_arc]);
            check(close_edge[ci] >= 0, "entered cycle must have a closing edge");
            apply(ebar_of[ev.arc], close_edge[ci]);
        } else {
            apply(ebar_of[ev.arc], e_of[ev.arc]);
        }
        (ev.down ? down_done : up_done)[static_cast<size_t>(ev.arc)] = 1;
        prev_arc = ev.arc;

        if (debug_bookkeeping) {
            for (int a : tree.arc_ids) {
                auto ai = static_cast<size_t>(a);
                if (red.arc_kind[ai] == DstArcKind::artificial) {
                    if (!down_done[ai])
                        check(!cur.covers(inst.arcs[ai].to), "unvisited exposed vertex must stay exposed");
                } else if (!down_done[ai]) {
                    check(cur.contains_edge(e_of[ai]), "untraversed arc keeps its source-matching edge");
                } else if (!up_done[ai]) {
                    check(cur.contains_edge(ebar_of[ai]), "open arc holds its replacement edge");
                }
            }
        }
    }

    check(cur == mt, "traversal must end at the target matching");
    check(static_cast<long long>(steps.size()) == tree.cost, "exchange count equals the tree cost");
    ReconfigSequence seq{ms, std::move(steps)};
    auto val = validate_sequence(g, ms, mt, seq);
    check(val.ok, "traversal sequence must validate: " + val.reason);
    return seq;
}

DstSubgraph sequence_to_subgraph(const Graph& g, const Matching& ms, const ReconfigSequence& seq) {
    require(seq.start == ms, "sequence must start at the given matching");
    auto side = oriented_sides(g, ms);
    auto xs = ms.free_vertices(g);
    auto reach = even_alternating_reachable(g, ms, xs);

    DstSubgraph sub;
    sub.root = g.n();
    sub.out.assign(static_cast<size_t>(g.n()) + 1, {});
    for (int x : xs) sub.out[static_cast<size_t>(g.n())].push_back(x);

    Matching cur = ms;
    for (const auto& st : seq.steps) {
        auto nxt = apply_exchange(g, cur, st);
        require(nxt.has_value(), "sequence must be valid from the start matching");
        auto [a1, b1] = g.edge(st.remove_edge);
        auto [a2, b2] = g.edge(st.add_edge);
        int v = -1;
        if (a1 == a2 || a1 == b2) v = a1;
        else if (b1 == a2 || b1 == b2) v = b1;
        if (v >= 0) {
            bool rm_src = ms.contains_edge(st.remove_edge), ad_src = ms.contains_edge(st.add_edge);
            int u = -1, w = -1;
            if (rm_src && !ad_src) {
                w = g.other_end(st.remove_edge, v);
                u = g.other_end(st.add_edge, v);
            } else if (ad_src && !rm_src) {
                w = g.other_end(st.add_edge, v);
                u = g.other_end(st.remove_edge, v);
            }
            if (u >= 0 && u != w && side[static_cast<size_t>(u)] == 0 && side[static_cast<size_t>(w)] == 0 &&
                reach[static_cast<size_t>(u)] && reach[static_cast<size_t>(w)])
                sub.out[static_cast<size_t>(u)].push_back(w);
        }
        cur = *nxt;
    }
    for (auto& o : sub.out) {
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    return sub;
}

MmdResult max_matching_distance(const Graph& g, const Matching& ms, const Matching& mt) {
    require(ms.size() == mt.size(), "matchings must have equal size");
    int nu = matching_number(g);
    require(ms.size() == nu && mt.size() == nu, "matchings must be maximum");
    require(bipartition(g).has_value(), "graph must be bipartite");

    if (ms == mt) return {true, 0, ReconfigSequence{ms, {}}, -1};

    auto allowed = allowed_edges(g);
    std::vector<int> old_to_new(static_cast<size_t>(g.m()), -1);
    for (std::size_t i = 0; i < allowed.size(); ++i) old_to_new[static_cast<size_t>(allowed[i])] = static_cast<int>(i);
    Graph pruned = g.edge_subgraph(allowed);
    auto translate = [&](const Matching& m) {
        std::vector<int> ids;
        for (int e : m.edge_ids()) {
            check(old_to_new[static_cast<size_t>(e)] >= 0, "maximum-matching edges are always allowed");
            ids.push_back(old_to_new[static_cast<size_t>(e)]);
        }
        return Matching(pruned, std::move(ids));
    };
    Matching ms_p = translate(ms), mt_p = translate(mt);

    DstReduction red = build_dst_instance(pruned, ms_p, mt_p);
    if (!red.reachable) return {false, -1, ReconfigSequence{ms, {}}, red.blocking_cycle};

    SteinerTree tree = dreyfus_wagner(red.instance);
    auto vr = verify_tree_structure(red, tree);
    check(vr.ok, "optimal tree has the expected structure: " + vr.diagnostics);

    ReconfigSequence seq_p = tree_to_sequence(red, tree, pruned, ms_p, mt_p);
    ReconfigSequence seq{ms, {}};
    for (const auto& st : seq_p.steps)
        seq.steps.push_back({allowed[static_cast<size_t>(st.remove_edge)], allowed[static_cast<size_t>(st.add_edge)]});
    auto val = validate_sequence(g, ms, mt, seq);
    check(val.ok, "translated sequence must validate: " + val.reason);
    check(static_cast<long long>(seq.steps.size()) == tree.cost, "distance equals the tree cost");
    return {true, tree.cost, std::move(seq), -1};
}

}  // namespace mj
