#include "matchjump/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "matchjump/common.hpp"
#include "matchjump/matching.hpp"

namespace mj {

int SetCoverInstance::frequency(int u) const {
    int cnt = 0;
    for (const auto& s : sets) cnt += std::binary_search(s.begin(), s.end(), u) ? 1 : 0;
    return cnt;
}

int SetCoverInstance::max_set_size() const {
    size_t best = 0;
    for (const auto& s : sets) best = std::max(best, s.size());
    return static_cast<int>(best);
}

int SetCoverInstance::max_frequency() const {
    std::vector<int> cnt(static_cast<size_t>(n), 0);
    for (const auto& s : sets)
        for (int u : s) ++cnt[static_cast<size_t>(u)];
    return *std::max_element(cnt.begin(), cnt.end());
}

void validate_setcover(const SetCoverInstance& inst) {
    require(inst.n >= 1, "universe must be nonempty");
    require(!inst.sets.empty(), "set family must be nonempty");
    std::vector<char> covered(static_cast<size_t>(inst.n), 0);
    for (const auto& s : inst.sets) {
        require(!s.empty(), "every set must be nonempty");
        int prev = -1;
        for (int u : s) {
            require(u >= 0 && u < inst.n, "set contains an out-of-range item");
            require(u > prev, "sets must be sorted and duplicate-free");
            prev = u;
            covered[static_cast<size_t>(u)] = 1;
        }
    }
    for (int u = 0; u < inst.n; ++u)
        require(covered[static_cast<size_t>(u)], "every item must belong to at least one set");
}

int min_cover_size(const SetCoverInstance& inst) {
    validate_setcover(inst);
    const int m = static_cast<int>(inst.sets.size());
    require(m <= 20, "set family too large for exhaustive search");
    int best = m;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) >= best) continue;
        std::vector<char> covered(static_cast<size_t>(inst.n), 0);
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u)
                for (int u : inst.sets[static_cast<size_t>(i)]) covered[static_cast<size_t>(u)] = 1;
        bool all = true;
        for (int u = 0; u < inst.n && all; ++u) all = covered[static_cast<size_t>(u)] != 0;
        if (all) best = std::popcount(mask);
    }
    return best;
}

int min_vertex_cover_size(const Graph& h) {
    require(h.n() >= 1 && h.n() <= 20, "graph too large for exhaustive vertex-cover search");
    int best = h.n();
    for (unsigned mask = 0; mask < (1u << h.n()); ++mask) {
        if (std::popcount(mask) >= best) continue;
        bool all = true;
        for (const auto& [a, b] : h.edges())
            if (!((mask >> a) & 1u) && !((mask >> b) & 1u)) {
                all = false;
                break;
            }
        if (all) best = std::popcount(mask);
    }
    return best;
}

namespace {

// Collects edges and the two matchings' edge ids while vertices are laid out.
struct GadgetBuilder {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> m1_ids, m2_ids;

    int add_edge(int a, int b) {
        edges.emplace_back(a, b);
        return static_cast<int>(edges.size()) - 1;
    }
    void shared(int e) {
        m1_ids.push_back(e);
        m2_ids.push_back(e);
    }
};

int new_vertex(GadgetInstance& gi, std::string lab, bool term = false) {
    gi.label.push_back(std::move(lab));
    gi.terminal.push_back(term ? 1 : 0);
    return static_cast<int>(gi.label.size()) - 1;
}

void check_diff_is_cycles(const GadgetInstance& gi) {
    SymDiffDecomposition dec = sym_diff_decompose(gi.graph, gi.m1, gi.m2);
    check(dec.components.size() == gi.cyc.size(), "matchings must differ on every 4-cycle");
    for (const auto& comp : dec.components)
        check(comp.is_cycle && comp.edge_ids.size() == 4, "difference components must be 4-cycles");
    for (const auto& c : gi.cyc) {
        int id = dec.comp_of_vertex[static_cast<size_t>(c[0])];
        check(id >= 0, "4-cycle missing from the matching difference");
        for (int v : c)
            check(dec.comp_of_vertex[static_cast<size_t>(v)] == id, "4-cycle split across components");
    }
}

GadgetInstance build_cover_gadget(const SetCoverInstance& inst, bool append_path) {
    validate_setcover(inst);
    GadgetInstance gi;
    gi.cover = inst;
    const int n_items = inst.n;
    const int n_sets = static_cast<int>(inst.sets.size());
    gi.d = inst.max_set_size();
    gi.f = inst.max_frequency();
    gi.L_formula = n_items * (2 + gi.f + gi.d);
    gi.L = gi.L_formula % 2 == 0 ? gi.L_formula + 1 : gi.L_formula;

    GadgetBuilder b;
    for (int u = 0; u < n_items; ++u) {
        const std::string iu = std::to_string(u + 1);
        std::array<int, 4> c{};
        for (int i = 0; i < 4; ++i) c[static_cast<size_t>(i)] = new_vertex(gi, "c" + iu + "." + std::to_string(i + 1));
        gi.cyc.push_back(c);
        int e12 = b.add_edge(c[0], c[1]);
        int e23 = b.add_edge(c[1], c[2]);
        int e34 = b.add_edge(c[2], c[3]);
        int e41 = b.add_edge(c[3], c[0]);
        b.m1_ids.push_back(e12);
        b.m1_ids.push_back(e34);
        b.m2_ids.push_back(e23);
        b.m2_ids.push_back(e41);

        const int fu = inst.frequency(u);
        std::vector<int> pu(static_cast<size_t>(2 * fu));
        for (int j = 0; j < 2 * fu; ++j)
            pu[static_cast<size_t>(j)] = new_vertex(gi, "pu" + iu + "." + std::to_string(j + 1), j % 2 == 1);
        b.add_edge(c[0], pu[0]);
        for (int j = 0; j + 1 < 2 * fu; ++j) {
            int e = b.add_edge(pu[static_cast<size_t>(j)], pu[static_cast<size_t>(j + 1)]);
            if (j % 2 == 0) b.shared(e);
        }
        gi.item_path.push_back(std::move(pu));
    }

    for (int si = 0; si < n_sets; ++si) {
        const std::string is = std::to_string(si + 1);
        const int sz = static_cast<int>(inst.sets[static_cast<size_t>(si)].size());
        std::vector<int> ps(static_cast<size_t>(2 * sz));
        for (int j = 0; j < 2 * sz; ++j)
            ps[static_cast<size_t>(j)] = new_vertex(gi, "pS" + is + "." + std::to_string(j + 1), j % 2 == 0);
        for (int j = 0; j + 1 < 2 * sz; ++j) {
            int e = b.add_edge(ps[static_cast<size_t>(j)], ps[static_cast<size_t>(j + 1)]);
            if (j % 2 == 0) b.shared(e);
        }
        std::vector<int> qs(static_cast<size_t>(gi.L));
        for (int j = 0; j < gi.L; ++j)
            qs[static_cast<size_t>(j)] = new_vertex(gi, "qS" + is + "." + std::to_string(j + 1));
        b.add_edge(ps.back(), qs.front());
        for (int j = 0; j + 1 < gi.L; ++j) {
            int e = b.add_edge(qs[static_cast<size_t>(j)], qs[static_cast<size_t>(j + 1)]);
            if (j % 2 == 0) b.shared(e);
        }
        gi.set_path.push_back(std::move(ps));
        gi.tail.push_back(std::move(qs));
    }

    // Membership pairing: the j-th set containing u (family order) consumes
    // u's j-th terminal; u at position j' of that set consumes the set's j'-th.
    std::vector<int> seen(static_cast<size_t>(n_items), 0);
    for (int si = 0; si < n_sets; ++si) {
        const auto& s = inst.sets[static_cast<size_t>(si)];
        for (int jp = 0; jp < static_cast<int>(s.size()); ++jp) {
            int u = s[static_cast<size_t>(jp)];
            int j = seen[static_cast<size_t>(u)]++;
            b.add_edge(gi.item_path[static_cast<size_t>(u)][static_cast<size_t>(2 * j + 1)],
                       gi.set_path[static_cast<size_t>(si)][static_cast<size_t>(2 * jp)]);
        }
    }

    if (append_path) {
        // The threshold uses the pre-round-up tail formula; any odd value at or
        // above it keeps touching the appended path more expensive than the
        // whole transformation.
        int lp = 3 * n_items + (gi.L_formula + gi.d + gi.f) * n_sets;
        if (lp % 2 == 0) ++lp;
        gi.Lp = lp;
        gi.extra.resize(static_cast<size_t>(lp));
        for (int j = 0; j < lp; ++j)
            gi.extra[static_cast<size_t>(j)] = new_vertex(gi, "r." + std::to_string(j + 1));
        b.add_edge(gi.tail.front().front(), gi.extra.front());
        for (int j = 0; j + 1 < lp; ++j) {
            int e = b.add_edge(gi.extra[static_cast<size_t>(j)], gi.extra[static_cast<size_t>(j + 1)]);
            if (j % 2 == 0) b.shared(e);
        }
    }

    gi.graph = Graph(static_cast<int>(gi.label.size()), b.edges);
    gi.m1 = Matching(gi.graph, b.m1_ids);
    gi.m2 = Matching(gi.graph, b.m2_ids);

    check(bipartition(gi.graph).has_value(), "cover gadget must be bipartite");
    for (int v = 0; v < gi.graph.n(); ++v)
        check(gi.graph.degree(v) <= 3, "cover gadget must keep maximum degree three");
    for (const auto& qs : gi.tail)
        check(!gi.m1.covers(qs.back()) && !gi.m2.covers(qs.back()), "tail ends must stay free");
    check_diff_is_cycles(gi);
    int nu = matching_number(gi.graph);
    if (append_path) {
        check(gi.m1.size() < nu, "appended-path matchings must not be maximum");
        check(is_maximal(gi.graph, gi.m1) && is_maximal(gi.graph, gi.m2),
              "appended-path matchings must stay maximal");
        check(!gi.m1.covers(gi.extra.back()), "appended-path end must stay free");
    } else {
        check(gi.m1.size() == nu, "cover gadget matchings must be maximum");
    }
    return gi;
}

// Step-by-step sequence assembly with legality re-checked on every exchange.
class Walker {
  public:
    Walker(const Graph& g, Matching start) : g_(g), cur_(std::move(start)) {}

    int edge(int a, int b) const {
        int e = g_.edge_between(a, b);
        check(e >= 0, "gadget walk expected an edge");
        return e;
    }
    void exchange(int rm, int ad) {
        auto nx = apply_exchange(g_, cur_, Exchange{rm, ad});
        check(nx.has_value(), "gadget walk produced an illegal exchange");
        cur_ = *std::move(nx);
        steps_.push_back(Exchange{rm, ad});
    }
    // vs alternates matched/unmatched starting with (vs[0], vs[1]) matched and
    // ends at a free vertex; every token moves one position toward the free
    // end, leaving vs[0] exposed.
    void slide(const std::vector<int>& vs) {
        check(vs.size() >= 3 && vs.size() % 2 == 1, "slide path must have an even edge count");
        for (int i = static_cast<int>(vs.size()) - 3; i >= 0; i -= 2)
            exchange(edge(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(i + 1)]),
                     edge(vs[static_cast<size_t>(i + 1)], vs[static_cast<size_t>(i + 2)]));
    }
    const Matching& cur() const { return cur_; }
    std::vector<Exchange> take_steps() { return std::move(steps_); }

  private:
    const Graph& g_;
    Matching cur_;
    std::vector<Exchange> steps_;
};

}  // namespace

GadgetInstance gen_setcover(const SetCoverInstance& inst) { return build_cover_gadget(inst, false); }

GadgetInstance gen_setcover_nonmaximum(const SetCoverInstance& inst) {
    return build_cover_gadget(inst, true);
}

ReconfigSequence cover_to_sequence(const GadgetInstance& gi, const std::vector<int>& cover_sets) {
    const SetCoverInstance& inst = gi.cover;
    require(!gi.cyc.empty() && !gi.tail.empty(), "instance is not a cover gadget");
    std::vector<char> covered(static_cast<size_t>(inst.n), 0);
    for (int si : cover_sets) {
        require(si >= 0 && si < static_cast<int>(inst.sets.size()), "cover refers to an unknown set");
        for (int u : inst.sets[static_cast<size_t>(si)]) covered[static_cast<size_t>(u)] = 1;
    }
    for (int u = 0; u < inst.n; ++u)
        require(covered[static_cast<size_t>(u)], "the given sets do not cover every item");

    Walker w(gi.graph, gi.m1);
    std::vector<char> done(static_cast<size_t>(inst.n), 0);
    for (int si : cover_sets) {
        const auto& s = inst.sets[static_cast<size_t>(si)];
        std::vector<int> fresh;
        for (int u : s)
            if (!done[static_cast<size_t>(u)]) fresh.push_back(u);
        if (fresh.empty()) continue;

        const auto& qs = gi.tail[static_cast<size_t>(si)];
        w.slide(qs);  // tokens shift toward the free tail end; q^1 opens up
        for (int u : fresh) {
            // Rank of this set among u's containing sets, and u's position in it.
            int j = 0;
            for (int so = 0; so < si; ++so)
                if (std::binary_search(inst.sets[static_cast<size_t>(so)].begin(),
                                       inst.sets[static_cast<size_t>(so)].end(), u))
                    ++j;
            int jp = static_cast<int>(std::lower_bound(s.begin(), s.end(), u) - s.begin());

            std::vector<int> route;
            for (int a = 0; a <= 2 * j + 1; ++a)
                route.push_back(gi.item_path[static_cast<size_t>(u)][static_cast<size_t>(a)]);
            for (int a = 2 * jp; a < static_cast<int>(gi.set_path[static_cast<size_t>(si)].size()); ++a)
                route.push_back(gi.set_path[static_cast<size_t>(si)][static_cast<size_t>(a)]);
            route.push_back(qs.front());

            w.slide(route);  // leaves the item path head exposed
            const auto& c = gi.cyc[static_cast<size_t>(u)];
            int p = gi.item_path[static_cast<size_t>(u)].front();
            w.exchange(w.edge(c[0], c[1]), w.edge(c[0], p));
            w.exchange(w.edge(c[2], c[3]), w.edge(c[1], c[2]));
            w.exchange(w.edge(c[0], p), w.edge(c[3], c[0]));
            std::reverse(route.begin(), route.end());
            w.slide(route);  // restore the alternating path
            done[static_cast<size_t>(u)] = 1;
        }
        std::vector<int> back(qs.rbegin(), qs.rend());
        w.slide(back);  // restore the tail
    }
    check(w.cur() == gi.m2, "cover walk must end at the flipped matching");

    ReconfigSequence seq{gi.m1, w.take_steps()};
    long long bound = 2LL * gi.L * static_cast<long long>(cover_sets.size()) +
                      2LL * inst.n * (2 + gi.f + gi.d);
    check(seq.length() <= bound, "cover walk exceeded its length bound");
    ValidationResult val = validate_sequence(gi.graph, gi.m1, gi.m2, seq);
    check(val.ok, "cover walk failed validation: " + val.reason);
    return seq;
}

std::vector<int> sequence_to_cover(const GadgetInstance& gi, const ReconfigSequence& seq) {
    require(!gi.cyc.empty() && !gi.tail.empty(), "instance is not a cover gadget");
    ValidationResult val = validate_sequence(gi.graph, gi.m1, gi.m2, seq);
    require(val.ok, "sequence does not transform the gadget matchings: " + val.reason);

    std::vector<char> active(gi.tail.size(), 0);
    Matching cur = gi.m1;
    auto scan = [&]() {
        for (size_t i = 0; i < gi.tail.size(); ++i)
            if (cur.covers(gi.tail[i].back())) active[i] = 1;
    };
    scan();
    for (const Exchange& x : seq.steps) {
        auto nx = apply_exchange(gi.graph, cur, x);
        check(nx.has_value(), "validated sequence failed to re-apply");
        cur = *std::move(nx);
        scan();
    }

    std::vector<int> out;
    for (size_t i = 0; i < active.size(); ++i)
        if (active[i]) out.push_back(static_cast<int>(i));
    std::vector<char> covered(static_cast<size_t>(gi.cover.n), 0);
    for (int si : out)
        for (int u : gi.cover.sets[static_cast<size_t>(si)]) covered[static_cast<size_t>(u)] = 1;
    for (int u = 0; u < gi.cover.n; ++u)
        check(covered[static_cast<size_t>(u)], "activated sets failed to cover every item");
    return out;
}

GadgetInstance gen_vc(const Graph& h) {
    require(h.m() >= 1, "vertex-cover gadget needs at least one edge");
    GadgetInstance gi;
    GadgetBuilder b;
    gi.t = new_vertex(gi, "t");
    for (int e = 0; e < h.m(); ++e) {
        const std::string ie = std::to_string(e + 1);
        std::array<int, 4> c{};
        for (int i = 0; i < 4; ++i) c[static_cast<size_t>(i)] = new_vertex(gi, "ce" + ie + "." + std::to_string(i + 1));
        gi.cyc.push_back(c);
        int e12 = b.add_edge(c[0], c[1]);
        int e23 = b.add_edge(c[1], c[2]);
        int e34 = b.add_edge(c[2], c[3]);
        int e41 = b.add_edge(c[3], c[0]);
        b.m1_ids.push_back(e12);
        b.m1_ids.push_back(e34);
        b.m2_ids.push_back(e23);
        b.m2_ids.push_back(e41);
    }
    for (int v = 0; v < h.n(); ++v) {
        const std::string iv = std::to_string(v + 1);
        int p1 = new_vertex(gi, "pv" + iv + ".1");
        int p2 = new_vertex(gi, "pv" + iv + ".2");
        gi.item_path.push_back({p1, p2});
        b.shared(b.add_edge(p1, p2));
        b.add_edge(p2, gi.t);
    }
    for (int e = 0; e < h.m(); ++e) {
        auto [x, y] = h.edge(e);
        b.add_edge(gi.cyc[static_cast<size_t>(e)][0], gi.item_path[static_cast<size_t>(x)][0]);
        b.add_edge(gi.cyc[static_cast<size_t>(e)][0], gi.item_path[static_cast<size_t>(y)][0]);
    }
    int prev = gi.t;
    for (int j = 0; j < 6; ++j) {
        int q = new_vertex(gi, "q." + std::to_string(j + 1));
        gi.tail6.push_back(q);
        int e = b.add_edge(prev, q);
        if (j % 2 == 1) b.shared(e);
        prev = q;
    }

    gi.graph = Graph(static_cast<int>(gi.label.size()), b.edges);
    gi.m1 = Matching(gi.graph, b.m1_ids);
    gi.m2 = Matching(gi.graph, b.m2_ids);

    check(bipartition(gi.graph).has_value(), "vertex-cover gadget must be bipartite");
    std::vector<int> hub{gi.t};
    check(gi.m1.free_vertices(gi.graph) == hub && gi.m2.free_vertices(gi.graph) == hub,
          "exactly the hub vertex stays exposed");
    check(matching_number(gi.graph) == gi.m1.size(), "vertex-cover gadget matchings must be maximum");
    check_diff_is_cycles(gi);
    return gi;
}

long long expected_vc_distance(const Graph& h) {
    return 3LL * h.m() + 2LL * min_vertex_cover_size(h);
}

long long expected_vc_diameter(const Graph& h) { return expected_vc_distance(h) + 6; }

}  // namespace mj
