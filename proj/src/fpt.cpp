#include "matchjump/fpt.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "matchjump/common.hpp"
#include "matchjump/dst_bridge.hpp"
#include "matchjump/matching.hpp"
#include "matchjump/slack_routes.hpp"

namespace mj {

namespace {

constexpr std::size_t kMaxEnumeratedCycles = 20;

std::vector<int> free_on_side(const Graph& g, const Matching& m, const std::vector<std::uint8_t>& side, int s) {
    std::vector<int> out;
    for (int v = 0; v < g.n(); ++v)
        if (!m.covers(v) && side[static_cast<size_t>(v)] == s) out.push_back(v);
    return out;
}

// Forced side of a path component: the side of its source-free vertex.
int forced_path_side(const Matching& ms, const std::vector<std::uint8_t>& side, const SymDiffComponent& comp) {
    int s = -1;
    for (int v : comp.vertices) {
        if (ms.covers(v)) continue;
        check(s < 0 || s == static_cast<int>(side[static_cast<size_t>(v)]),
              "balanced path components expose one side only");
        s = side[static_cast<size_t>(v)];
    }
    check(s >= 0, "a path component always contains a source-free vertex");
    return s;
}

struct AlphaEval {
    long long length = 0;
    ReconfigSequence seq;
};

// Evaluates one side assignment: paths forced, cycle i set by bit i of mask.
// nullopt when the assignment is infeasible or a phase is unreachable.
std::optional<AlphaEval> alpha_for_mask(const Graph& g, const Matching& ms, const Matching& mt,
                                        const SymDiffDecomposition& dec, const std::vector<std::uint8_t>& side,
                                        const std::vector<std::array<char, 2>>& feasible,
                                        const std::vector<int>& cycle_ids, std::size_t mask) {
    SideChoice s;
    s.side.assign(dec.components.size(), 0);
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        if (!dec.components[i].is_cycle)
            s.side[i] = static_cast<std::uint8_t>(forced_path_side(ms, side, dec.components[i]));
    for (std::size_t j = 0; j < cycle_ids.size(); ++j)
        s.side[static_cast<size_t>(cycle_ids[j])] = static_cast<std::uint8_t>((mask >> j) & 1u);
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        if (!feasible[i][s.side[i]]) return std::nullopt;

    auto [iu, iw] = build_subinstances(g, ms, mt, s);
    auto r1 = max_matching_distance(iu.graph, iu.source, iu.target);
    if (!r1.reachable) return std::nullopt;
    auto r2 = max_matching_distance(iw.graph, iw.source, iw.target);
    if (!r2.reachable) return std::nullopt;

    AlphaEval out;
    out.length = r1.distance + r2.distance;
    out.seq.start = ms;
    for (const auto& st : r1.seq.steps)
        out.seq.steps.push_back({iu.edge_map[static_cast<size_t>(st.remove_edge)],
                                 iu.edge_map[static_cast<size_t>(st.add_edge)]});
    for (const auto& st : r2.seq.steps)
        out.seq.steps.push_back({iw.edge_map[static_cast<size_t>(st.remove_edge)],
                                 iw.edge_map[static_cast<size_t>(st.add_edge)]});
    auto val = validate_sequence(g, ms, mt, out.seq);
    check(val.ok, "side-split witness must validate: " + val.reason);
    check(static_cast<long long>(out.seq.steps.size()) == out.length, "split length equals its witness");
    return out;
}

struct EnumContext {
    SymDiffDecomposition dec;
    std::vector<std::uint8_t> side;
    std::vector<std::array<char, 2>> feasible;
    std::vector<int> cycle_ids;
};

EnumContext make_context(const Graph& g, const Matching& ms, const Matching& mt) {
    auto bp = bipartition(g);
    require(bp.has_value(), "graph must be bipartite");
    require(ms.size() == mt.size(), "matchings must have equal size");
    EnumContext cx;
    cx.side = *bp;
    cx.dec = sym_diff_decompose(g, ms, mt);
    for (const auto& comp : cx.dec.components)
        require(comp.ms_edges == comp.mt_edges, "side enumeration needs balanced components");
    cx.feasible.resize(cx.dec.components.size());
    for (std::size_t i = 0; i < cx.dec.components.size(); ++i) {
        for (int s = 0; s < 2; ++s) cx.feasible[i][static_cast<size_t>(s)] = reconfigurable_from(g, ms, cx.dec.components[i], s);
        if (cx.dec.components[i].is_cycle) cx.cycle_ids.push_back(static_cast<int>(i));
    }
    require(cx.cycle_ids.size() <= kMaxEnumeratedCycles,
            "side enumeration supports at most " + std::to_string(kMaxEnumeratedCycles) + " cycles");
    return cx;
}

std::vector<long long> lengths_impl(const Graph& g, const Matching& ms, const Matching& mt, const EnumContext& cx,
                                    int threads) {
    std::vector<long long> out(std::size_t{1} << cx.cycle_ids.size(), -1);
#ifdef _OPENMP
    if (threads != 1 && out.size() > 1) {
        int nt = threads > 1 ? threads : omp_get_max_threads();
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (long long mask = 0; mask < static_cast<long long>(out.size()); ++mask) {
            try {
                auto r = alpha_for_mask(g, ms, mt, cx.dec, cx.side, cx.feasible, cx.cycle_ids,
                                        static_cast<std::size_t>(mask));
                if (r) out[static_cast<size_t>(mask)] = r->length;
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return out;
    }
#else
    (void)threads;
#endif
    for (std::size_t mask = 0; mask < out.size(); ++mask) {
        auto r = alpha_for_mask(g, ms, mt, cx.dec, cx.side, cx.feasible, cx.cycle_ids, mask);
        if (r) out[mask] = r->length;
    }
    return out;
}

}  // namespace

bool reconfigurable_from(const Graph& g, const Matching& ms, const SymDiffComponent& comp, int side) {
    require(side == 0 || side == 1, "side must be 0 or 1");
    auto bp = bipartition(g);
    require(bp.has_value(), "graph must be bipartite");
    if (!comp.is_cycle) {
        for (int v : comp.vertices)
            if (!ms.covers(v) && (*bp)[static_cast<size_t>(v)] == side) return true;
        return false;
    }
    auto reach = even_alternating_reachable(g, ms, free_on_side(g, ms, *bp, side));
    for (int v : comp.vertices)
        if (reach[static_cast<size_t>(v)]) return true;
    return false;
}

std::pair<SubInstance, SubInstance> build_subinstances(const Graph& g, const Matching& ms, const Matching& mt,
                                                       const SideChoice& s) {
    auto bp = bipartition(g);
    require(bp.has_value(), "graph must be bipartite");
    require(ms.size() == mt.size(), "matchings must have equal size");
    auto dec = sym_diff_decompose(g, ms, mt);
    require(s.side.size() == dec.components.size(), "one side per component");
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        require(reconfigurable_from(g, ms, dec.components[i], s.side[i]),
                "component " + std::to_string(i) + " is not reconfigurable from the chosen side");

    // Middle matching: components assigned U are already realigned to the
    // target, components assigned W still carry their source edges; edges
    // shared by both matchings stay put.
    std::vector<int> mid_ids;
    for (int e : ms.edge_ids())
        if (mt.contains_edge(e)) mid_ids.push_back(e);
    for (std::size_t i = 0; i < dec.components.size(); ++i)
        for (int e : dec.components[i].edge_ids)
            if (s.side[i] == 0 ? mt.contains_edge(e) : ms.contains_edge(e)) mid_ids.push_back(e);
    Matching mid(g, mid_ids);
    check(mid.size() == ms.size(), "balanced components keep the middle matching at full size");

    auto cut = [&](const Matching& freeness_of, int side_removed, const Matching& from, const Matching& to) {
        std::vector<char> gone(static_cast<size_t>(g.n()), 0);
        for (int v = 0; v < g.n(); ++v)
            if (!freeness_of.covers(v) && (*bp)[static_cast<size_t>(v)] == side_removed) gone[static_cast<size_t>(v)] = 1;
        SubInstance si;
        for (int e = 0; e < g.m(); ++e) {
            auto [u, v] = g.edge(e);
            if (!gone[static_cast<size_t>(u)] && !gone[static_cast<size_t>(v)]) si.edge_map.push_back(e);
        }
        si.graph = g.edge_subgraph(si.edge_map);
        std::vector<int> new_of(static_cast<size_t>(g.m()), -1);
        for (std::size_t i = 0; i < si.edge_map.size(); ++i) new_of[static_cast<size_t>(si.edge_map[i])] = static_cast<int>(i);
        auto translate = [&](const Matching& m) {
            std::vector<int> ids;
            for (int e : m.edge_ids()) {
                check(new_of[static_cast<size_t>(e)] >= 0, "matching edges never touch the deleted side");
                ids.push_back(new_of[static_cast<size_t>(e)]);
            }
            return Matching(si.graph, std::move(ids));
        };
        si.source = translate(from);
        si.target = translate(to);
        int nu = matching_number(si.graph);
        check(si.source.size() == nu, "phase source matching is maximum in the reduced graph");
        check(si.target.size() == nu, "phase target matching is maximum in the reduced graph");
        return si;
    };

    // Phase 1 deletes source-free W vertices, phase 2 target-free U vertices.
    SubInstance iu = cut(ms, 1, ms, mid);
    SubInstance iw = cut(mt, 0, mid, mt);
    return {std::move(iu), std::move(iw)};
}

std::vector<long long> side_choice_lengths(const Graph& g, const Matching& ms, const Matching& mt, int threads) {
    return lengths_impl(g, ms, mt, make_context(g, ms, mt), threads);
}

std::vector<long long> side_choice_lengths_serial(const Graph& g, const Matching& ms, const Matching& mt) {
    return lengths_impl(g, ms, mt, make_context(g, ms, mt), 1);
}

DistanceResult bipartite_distance(const Graph& g, const Matching& ms, const Matching& mt, int threads) {
    require(bipartition(g).has_value(), "graph must be bipartite");
    require(ms.size() == mt.size(), "matchings must have equal size");
    if (ms == mt) return {false, 0, ReconfigSequence{ms, {}}, "identical"};

    if (!is_maximal(g, ms) || !is_maximal(g, mt)) {
        auto r = distance_one_nonmaximal(g, ms, mt);
        return {false, r.length, std::move(r.seq), "greedy"};
    }

    auto dec = sym_diff_decompose(g, ms, mt);
    if (dec.has_odd_path()) {
        auto r = distance_one_nonmaximal(g, ms, mt);
        check(2 * r.length == dec.d, "an odd component lets the greedy meet the lower bound");
        return {false, r.length, std::move(r.seq), "odd-path"};
    }

    auto beta = shortest_via_nonmaximal(g, ms, mt);

    EnumContext cx = make_context(g, ms, mt);
    auto lengths = lengths_impl(g, ms, mt, cx, threads);
    long long best = -1;
    std::size_t best_mask = 0;
    for (std::size_t mask = 0; mask < lengths.size(); ++mask)
        if (lengths[mask] >= 0 && (best < 0 || lengths[mask] < best)) {
            best = lengths[mask];
            best_mask = mask;
        }

    if (best >= 0 && (!beta.has_value() || best <= beta->length)) {
        auto wit = alpha_for_mask(g, ms, mt, cx.dec, cx.side, cx.feasible, cx.cycle_ids, best_mask);
        check(wit.has_value() && wit->length == best, "winning mask re-evaluates identically");
        return {false, best, std::move(wit->seq), "split"};
    }
    if (beta.has_value()) return {false, beta->length, std::move(beta->seq), "route"};
    return {true, -1, ReconfigSequence{ms, {}}, "unreachable"};
}

}  // namespace mj
