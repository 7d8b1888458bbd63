#include "matchjump/slack_routes.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "matchjump/common.hpp"
#include "matchjump/matching.hpp"

namespace mj {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Applies exchanges one by one, validating each against the current matching.
struct Stepper {
    const Graph& g;
    Matching cur;
    std::vector<Exchange> steps;

    Stepper(const Graph& g_in, Matching start) : g(g_in), cur(std::move(start)) {}

    void exchange(int rem, int add) {
        std::optional<Matching> next = apply_exchange(g, cur, Exchange{rem, add});
        check(next.has_value(), "slack route produced an illegal exchange");
        cur = *std::move(next);
        steps.push_back(Exchange{rem, add});
    }
};

enum class CompKind { even_path, odd_target, odd_current, cycle };

CompKind classify(const SymDiffComponent& c) {
    if (c.is_cycle) return CompKind::cycle;
    if (c.ms_edges == c.mt_edges) return CompKind::even_path;
    return c.ms_edges > c.mt_edges ? CompKind::odd_current : CompKind::odd_target;
}

// Path component reoriented so vertices[0] is free in the current matching
// (equivalently, edge 0 belongs to the target side of the decomposition).
struct OrientedPath {
    std::vector<int> verts;
    std::vector<int> edges;
};

OrientedPath orient_from_free(const SymDiffComponent& comp, const Matching& tgt) {
    check(!comp.is_cycle, "orient_from_free needs a path component");
    OrientedPath p{comp.vertices, comp.edge_ids};
    if (!tgt.contains_edge(p.edges.front())) {
        std::reverse(p.verts.begin(), p.verts.end());
        std::reverse(p.edges.begin(), p.edges.end());
    }
    check(tgt.contains_edge(p.edges.front()), "path component has no free end");
    return p;
}

// Token slides along an oriented path: step t parks the target edge
// edges[2t-2] and lifts the current edge edges[2t-1]. After `count` steps the
// vertex at position 2*count is free.
void slide(Stepper& st, const OrientedPath& p, int count) {
    for (int t = 1; t <= count; ++t) st.exchange(p.edges[2 * t - 1], p.edges[2 * t - 2]);
}

// Fully aligns an odd path whose surplus side is the target: slides all current
// edges down and reports the last target edge, which is left open (addable).
int slide_odd_target(Stepper& st, const SymDiffComponent& comp, const Matching& tgt) {
    OrientedPath p = orient_from_free(comp, tgt);
    slide(st, p, static_cast<int>(p.edges.size()) / 2);
    return p.edges.back();
}

// Aligns an odd path whose surplus side is the current matching, consuming the
// addable edge `f_open`.
void fill_odd_current(Stepper& st, const SymDiffComponent& comp, int f_open) {
    const std::vector<int>& e = comp.edge_ids;
    st.exchange(e[0], f_open);
    for (size_t i = 2; i < e.size(); i += 2) st.exchange(e[i], e[i - 1]);
}

// Opens an alternating cycle into the addable edge `f_open`, realigns it, and
// returns the cycle's target edge that is left open instead.
int open_cycle(Stepper& st, const SymDiffComponent& comp, int f_open) {
    const std::vector<int>& e = comp.edge_ids;
    const int n = static_cast<int>(e.size());
    int p = -1;
    for (int i = 0; i < n; ++i)
        if (st.cur.contains_edge(e[i]) && (p < 0 || e[i] < e[p])) p = i;
    check(p >= 0, "cycle without current edges");
    st.exchange(e[p], f_open);
    for (int i = 0; i + 2 <= n - 2; i += 2) st.exchange(e[(p + 2 + i) % n], e[(p + 1 + i) % n]);
    return e[(p + n - 1) % n];
}

// Greedy alignment loop. Returns 1 if a parking move was needed (cycles with
// no odd component), else 0. Parking requires the current matching to be
// non-maximal at that moment, which holds iff the target is non-maximal.
int greedy_align(Stepper& st, const Matching& tgt) {
    int delta = 0;
    for (;;) {
        SymDiffDecomposition dec = sym_diff_decompose(st.g, st.cur, tgt);
        if (dec.components.empty()) break;
        int even = -1, odd_t = -1, odd_c = -1, cyc = -1;
        for (size_t i = 0; i < dec.components.size(); ++i) {
            int idx = static_cast<int>(i);
            switch (classify(dec.components[i])) {
                case CompKind::even_path: if (even < 0) even = idx; break;
                case CompKind::odd_target: if (odd_t < 0) odd_t = idx; break;
                case CompKind::odd_current: if (odd_c < 0) odd_c = idx; break;
                case CompKind::cycle: if (cyc < 0) cyc = idx; break;
            }
        }
        if (even >= 0) {
            OrientedPath p = orient_from_free(dec.components[static_cast<size_t>(even)], tgt);
            slide(st, p, static_cast<int>(p.edges.size()) / 2);
            continue;
        }
        if (odd_t >= 0) {
            check(odd_c >= 0, "odd components must pair up between equal-size matchings");
            int f = slide_odd_target(st, dec.components[static_cast<size_t>(odd_t)], tgt);
            for (const SymDiffComponent& comp : dec.components)
                if (comp.is_cycle) f = open_cycle(st, comp, f);
            fill_odd_current(st, dec.components[static_cast<size_t>(odd_c)], f);
            continue;
        }
        check(cyc >= 0, "decomposition left only odd current-side paths");
        int f0 = -1;
        for (int e = 0; e < st.g.m() && f0 < 0; ++e) {
            auto [a, b] = st.g.edge(e);
            if (!st.cur.covers(a) && !st.cur.covers(b)) f0 = e;
        }
        check(f0 >= 0, "parking move needs an addable edge (non-maximal matching)");
        int gstar = -1;
        for (int e : dec.components[static_cast<size_t>(cyc)].edge_ids)
            if (st.cur.contains_edge(e) && (gstar < 0 || e < gstar)) gstar = e;
        st.exchange(gstar, f0);
        delta = 1;
    }
    return delta;
}

}  // namespace

std::vector<char> even_alternating_reachable(const Graph& g, const Matching& ms,
                                             const std::vector<int>& sources) {
    std::vector<char> reach(static_cast<size_t>(g.n()), 0);
    std::queue<int> q;
    for (int s : sources) {
        require(s >= 0 && s < g.n(), "reachability source out of range");
        if (!reach[static_cast<size_t>(s)]) {
            reach[static_cast<size_t>(s)] = 1;
            q.push(s);
        }
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [v, e] : g.adj(u)) {
            if (ms.contains_edge(e)) continue;
            int w = ms.mate(g, v);
            if (w < 0 || reach[static_cast<size_t>(w)]) continue;
            reach[static_cast<size_t>(w)] = 1;
            q.push(w);
        }
    }
    return reach;
}

AuxDigraph build_aux_digraph(const Graph& g, const Matching& ms, const Matching& mt) {
    require(ms.size() == mt.size(), "matchings must have equal size");
    std::optional<std::vector<std::uint8_t>> side_opt = bipartition(g);
    require(side_opt.has_value(), "auxiliary digraph needs a bipartite graph");

    AuxDigraph d;
    d.side = *std::move(side_opt);

    for (int v = 0; v < g.n(); ++v)
        if (d.side[static_cast<size_t>(v)] == 0 && !ms.covers(v)) d.x.push_back(v);

    std::vector<char> y_flag(static_cast<size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v) {
        if (d.side[static_cast<size_t>(v)] != 0) continue;
        for (auto [w, e] : g.adj(v)) {
            (void)e;
            if (!ms.covers(w)) {
                y_flag[static_cast<size_t>(v)] = 1;
                d.y.push_back(v);
                break;
            }
        }
    }

    d.in_uprime = even_alternating_reachable(g, ms, d.x);
    for (int v = 0; v < g.n(); ++v)
        if (d.side[static_cast<size_t>(v)] != 0) d.in_uprime[static_cast<size_t>(v)] = 0;

    SymDiffDecomposition dec = sym_diff_decompose(g, ms, mt);
    std::vector<char> qual(dec.components.size(), 0);
    for (size_t i = 0; i < dec.components.size(); ++i) {
        const SymDiffComponent& comp = dec.components[i];
        if (comp.is_cycle) continue;
        for (int v : comp.vertices)
            if (d.side[static_cast<size_t>(v)] == 0 && y_flag[static_cast<size_t>(v)]) {
                qual[i] = 1;
                break;
            }
    }

    for (int w = 0; w < g.n(); ++w) {
        if (d.side[static_cast<size_t>(w)] != 0 || !d.in_uprime[static_cast<size_t>(w)]) continue;
        int e_vw = ms.edge_at(w);
        if (e_vw < 0) continue;  // free vertices have no incoming arc
        int v = g.other_end(e_vw, w);
        for (auto [u, e_uv] : g.adj(v)) {
            if (u == w || ms.contains_edge(e_uv)) continue;
            if (!d.in_uprime[static_cast<size_t>(u)]) continue;
            bool uv_mt = mt.contains_edge(e_uv);
            bool vw_mt = mt.contains_edge(e_vw);
            AuxArc arc;
            arc.u = u;
            arc.w = w;
            arc.v = v;
            int comp = dec.comp_of_vertex[static_cast<size_t>(w)];
            if (uv_mt && !vw_mt) {
                arc.cost = 0;
                arc.rule = 1;
            } else if (comp >= 0 && qual[static_cast<size_t>(comp)]) {
                check(!uv_mt, "two target edges would share a vertex");
                arc.cost = 0;
                arc.rule = 2;
            } else if (!uv_mt && !vw_mt) {
                arc.cost = 1;
                arc.rule = 3;
            } else if (!uv_mt && vw_mt) {
                arc.cost = 2;
                arc.rule = 4;
            } else {
                check(false, "arc matches no cost rule");
            }
            d.arcs.push_back(arc);
        }
    }
    std::sort(d.arcs.begin(), d.arcs.end(),
              [](const AuxArc& a, const AuxArc& b) { return std::tie(a.u, a.w) < std::tie(b.u, b.w); });
    d.out.assign(static_cast<size_t>(g.n()), {});
    for (size_t i = 0; i < d.arcs.size(); ++i)
        d.out[static_cast<size_t>(d.arcs[i].u)].push_back(static_cast<int>(i));
    return d;
}

RouteAnswer distance_one_nonmaximal(const Graph& g, const Matching& ms, const Matching& mt) {
    require(ms.size() == mt.size(), "matchings must have equal size");
    SymDiffDecomposition dec = sym_diff_decompose(g, ms, mt);

    if (!dec.all_paths() && !dec.has_odd_path()) {
        // A parking move will be needed; it exists only when the *target* side
        // of the run is non-maximal, so solve in that direction.
        require(!is_maximal(g, ms) || !is_maximal(g, mt),
                "cycles without an odd component need a non-maximal matching");
        if (is_maximal(g, mt)) {
            RouteAnswer rev = distance_one_nonmaximal(g, mt, ms);
            RouteAnswer out;
            out.length = rev.length;
            out.delta = rev.delta;
            out.seq.start = ms;
            for (auto it = rev.seq.steps.rbegin(); it != rev.seq.steps.rend(); ++it)
                out.seq.steps.push_back(Exchange{it->add_edge, it->remove_edge});
            check(validate_sequence(g, ms, mt, out.seq).ok, "inverted route failed validation");
            return out;
        }
    }

    Stepper st(g, ms);
    int delta = greedy_align(st, mt);
    check(st.cur == mt, "greedy alignment did not reach the target");
    check(static_cast<long long>(st.steps.size()) == dec.d / 2 + delta,
          "greedy alignment length mismatch");
    RouteAnswer out;
    out.length = static_cast<long long>(st.steps.size());
    out.seq.start = ms;
    out.seq.steps = std::move(st.steps);
    out.delta = delta;
    return out;
}

std::optional<RouteAnswer> shortest_via_nonmaximal(const Graph& g, const Matching& ms,
                                                   const Matching& mt) {
    require(ms.size() == mt.size(), "matchings must have equal size");
    require(is_maximal(g, ms) && is_maximal(g, mt), "both matchings must be maximal");

    SymDiffDecomposition dec = sym_diff_decompose(g, ms, mt);
    if (dec.has_odd_path()) {
        // An odd component lets the greedy alignment open an edge on the way,
        // so the unconditional lower bound d/2 is met with slack visited.
        RouteAnswer out = distance_one_nonmaximal(g, ms, mt);
        check(out.delta == 0, "odd component must avoid the parking move");
        return out;
    }

    AuxDigraph aux = build_aux_digraph(g, ms, mt);
    const std::vector<std::uint8_t>& side = aux.side;

    // Cycle components, for the surviving-cycle indicator.
    std::vector<int> cycle_bit(dec.components.size(), -1);
    int n_cycles = 0;
    for (size_t i = 0; i < dec.components.size(); ++i)
        if (dec.components[i].is_cycle) cycle_bit[i] = n_cycles++;
    if (n_cycles > 20) throw budget_error("too many alternating cycles for exact routing");
    const int full = (1 << n_cycles) - 1;
    const int n_masks = 1 << n_cycles;

    auto mask_of = [&](int v) -> int {
        int comp = dec.comp_of_vertex[static_cast<size_t>(v)];
        return (comp >= 0 && cycle_bit[static_cast<size_t>(comp)] >= 0)
                   ? (1 << cycle_bit[static_cast<size_t>(comp)])
                   : 0;
    };

    // Dijkstra over (vertex, set of cycles already broken). Routing through a
    // cycle breaks it; entering one always costs at least 1, so optimal chains
    // never revisit a vertex.
    const size_t n_states = static_cast<size_t>(g.n()) * static_cast<size_t>(n_masks);
    std::vector<long long> dist(n_states, kInf);
    std::vector<int> par_state(n_states, -1), par_arc(n_states, -1);
    using QItem = std::tuple<long long, int, int>;  // (cost, vertex, mask)
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    auto sid = [&](int v, int mask) { return static_cast<size_t>(v) * static_cast<size_t>(n_masks) + static_cast<size_t>(mask); };
    for (int x : aux.x) {
        check(mask_of(x) == 0, "a free vertex cannot lie on an alternating cycle");
        dist[sid(x, 0)] = 0;
        pq.emplace(0LL, x, 0);
    }
    while (!pq.empty()) {
        auto [c, v, mask] = pq.top();
        pq.pop();
        if (c != dist[sid(v, mask)]) continue;
        for (int aid : aux.out[static_cast<size_t>(v)]) {
            const AuxArc& a = aux.arcs[static_cast<size_t>(aid)];
            int nm = mask | mask_of(a.w);
            long long nc = c + a.cost;
            if (nc < dist[sid(a.w, nm)]) {
                dist[sid(a.w, nm)] = nc;
                par_state[sid(a.w, nm)] = static_cast<int>(sid(v, mask));
                par_arc[sid(a.w, nm)] = aid;
                pq.emplace(nc, a.w, nm);
            }
        }
    }

    // Best target: minimize cost + [some cycle left unbroken].
    long long best_total = kInf;
    int best_y = -1, best_mask = -1;
    for (int y : aux.y) {
        if (!aux.in_uprime[static_cast<size_t>(y)]) continue;
        for (int mask = 0; mask < n_masks; ++mask) {
            long long c = dist[sid(y, mask)];
            if (c >= kInf) continue;
            long long total = c + (mask != full ? 1 : 0);
            if (total < best_total) {
                best_total = total;
                best_y = y;
                best_mask = mask;
            }
        }
    }

    int nu = matching_number(g);
    if (best_y < 0) {
        check(ms.size() == nu, "no augmenting route although the matching is not maximum");
        return std::nullopt;
    }
    check(ms.size() < nu, "augmenting route found for a maximum matching");

    // Reconstruct the chosen route.
    std::vector<int> arc_path;
    for (int s = static_cast<int>(sid(best_y, best_mask)); par_state[static_cast<size_t>(s)] >= 0;
         s = par_state[static_cast<size_t>(s)])
        arc_path.push_back(par_arc[static_cast<size_t>(s)]);
    std::reverse(arc_path.begin(), arc_path.end());
    std::vector<int> nodes;
    nodes.push_back(arc_path.empty() ? best_y : aux.arcs[static_cast<size_t>(arc_path[0])].u);
    for (int aid : arc_path) nodes.push_back(aux.arcs[static_cast<size_t>(aid)].w);
    check(nodes.back() == best_y, "route reconstruction mismatch");
    check(!arc_path.empty(), "maximal matchings admit no trivial augmenting route");

    const int delta_sel = best_mask != full ? 1 : 0;
    const long long c_sel = dist[sid(best_y, best_mask)];
    const long long answer = c_sel + dec.d / 2 + delta_sel;

    // Cross-check the Dijkstra mask bookkeeping: a cycle counts as broken
    // exactly when the route passes through one of its vertices.
    {
        int direct = 0;
        for (int v : nodes) direct |= mask_of(v);
        check(direct == best_mask, "surviving-cycle indicator mismatch");
    }

    // Qualifying path components: usable to open slack at zero extra cost.
    std::vector<char> y_flag(static_cast<size_t>(g.n()), 0);
    for (int v : aux.y) y_flag[static_cast<size_t>(v)] = 1;
    std::vector<char> qual(dec.components.size(), 0);
    for (size_t i = 0; i < dec.components.size(); ++i) {
        const SymDiffComponent& comp = dec.components[i];
        if (comp.is_cycle) continue;
        for (int v : comp.vertices)
            if (side[static_cast<size_t>(v)] == 0 && y_flag[static_cast<size_t>(v)]) {
                qual[i] = 1;
                break;
            }
    }

    int first_qual = -1, qual_comp = -1;
    for (size_t i = 0; i < nodes.size() && first_qual < 0; ++i) {
        int comp = dec.comp_of_vertex[static_cast<size_t>(nodes[i])];
        if (comp >= 0 && qual[static_cast<size_t>(comp)]) {
            first_qual = static_cast<int>(i);
            qual_comp = comp;
        }
    }

    Stepper st(g, ms);
    auto process_arc = [&](int aid) {
        const AuxArc& a = aux.arcs[static_cast<size_t>(aid)];
        st.exchange(g.edge_between(a.v, a.w), g.edge_between(a.u, a.v));
    };

    if (first_qual < 0) {
        // End vertex has a free neighbor; realigning the whole route leaves it
        // free next to one, so the matching right before the tail is slack.
        for (int aid : arc_path) process_arc(aid);
    } else {
        const SymDiffComponent& comp = dec.components[static_cast<size_t>(qual_comp)];
        OrientedPath p = orient_from_free(comp, mt);
        if (side[static_cast<size_t>(p.verts[0])] == 0) {
            // Free end on the digraph side: sliding from it parks every token
            // in target position until a vertex with a free neighbor opens up.
            // The route itself is not needed (its cost is provably zero).
            int h = -1;
            for (size_t t = 1; 2 * t < p.verts.size() && h < 0; ++t)
                if (y_flag[static_cast<size_t>(p.verts[2 * t])]) h = static_cast<int>(t);
            check(h >= 1, "qualifying component lost its free-neighbor vertex");
            slide(st, p, h);
        } else {
            // Free end on the far side: slide up to the entry vertex, realign
            // the route prefix, and let the final jump park the entry token on
            // its target edge, leaving two adjacent free vertices.
            int z = nodes[static_cast<size_t>(first_qual)];
            int zp = -1;
            for (size_t i = 0; i < p.verts.size(); ++i)
                if (p.verts[i] == z) zp = static_cast<int>(i);
            check(zp >= 1 && zp % 2 == 1, "entry vertex must sit at an odd offset");
            slide(st, p, (zp - 1) / 2);
            for (int j = 0; j + 1 < first_qual; ++j) process_arc(arc_path[static_cast<size_t>(j)]);
            const AuxArc& a = aux.arcs[static_cast<size_t>(arc_path[static_cast<size_t>(first_qual - 1)])];
            check(a.w == z && a.rule == 2, "entry arc must target the qualifying component");
            st.exchange(p.edges[static_cast<size_t>(zp)], p.edges[static_cast<size_t>(zp - 1)]);
        }
    }

    check(!is_maximal(g, st.cur), "route must open at least one addable edge");
    RouteAnswer tail = distance_one_nonmaximal(g, st.cur, mt);
    for (const Exchange& x : tail.seq.steps) st.exchange(x.remove_edge, x.add_edge);
    check(st.cur == mt, "route did not reach the target matching");
    check(static_cast<long long>(st.steps.size()) == answer, "route length disagrees with its cost");

    RouteAnswer out;
    out.length = answer;
    out.seq.start = ms;
    out.seq.steps = std::move(st.steps);
    out.delta = delta_sel;
    return out;
}

}  // namespace mj
