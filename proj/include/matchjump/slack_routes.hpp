#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matchjump/graph.hpp"
#include "matchjump/reconfig.hpp"

namespace mj {

// Vertices reachable from `sources` by an even-length ms-alternating path
// (first edge unmatched, last edge matched; length 0 included, so sources are
// reachable). Exact for bipartite graphs, where alternating walks reduce to
// simple paths; callers keep all sources on one side.
std::vector<char> even_alternating_reachable(const Graph& g, const Matching& ms,
                                             const std::vector<int>& sources);

// Auxiliary digraph on one side of the bipartition: an arc u -> w (through the
// witness vertex v = ms-mate of w) exists when uv is a non-matching edge.
// Restricted to U' = vertices reachable from X = ms-free vertices of side 0.
struct AuxArc {
    int u = -1;
    int w = -1;
    int v = -1;    // shared middle vertex, matched to w
    int cost = 0;  // 0, 1 or 2
    int rule = 0;  // which case of the cost function matched (1..4)
};

struct AuxDigraph {
    std::vector<std::uint8_t> side;  // bipartition used; side 0 hosts the digraph
    std::vector<char> in_uprime;
    std::vector<int> x, y;           // sorted: ms-free side-0 vertices; side-0 vertices with an ms-free neighbor
    std::vector<AuxArc> arcs;        // sorted by (u, w)
    std::vector<std::vector<int>> out;  // arc ids leaving each vertex, ascending
};

// Requires a bipartite graph and equal-size matchings. Cost rules (first
// match wins), for arc u->w through v:
//   1. uv in mt\ms and vw in ms\mt                         -> 0
//   2. w lies on a sym-diff path component containing a
//      vertex of Y (a component usable for opening slack)  -> 0
//   3. uv outside both matchings and vw in ms\mt           -> 1
//   4. uv outside both matchings and vw in ms and mt       -> 2
AuxDigraph build_aux_digraph(const Graph& g, const Matching& ms, const Matching& mt);

struct RouteAnswer {
    long long length = 0;
    ReconfigSequence seq;
    int delta = 0;  // the +1 indicator that applied (0 or 1)
};

// Exact shortest transformation when at least one input matching is not
// inclusion-wise maximal: length d/2 when the symmetric difference is all
// paths or contains an odd path, else d/2 + 1 (one parking move). Also valid
// with both matchings maximal whenever an odd path exists (same greedy).
RouteAnswer distance_one_nonmaximal(const Graph& g, const Matching& ms, const Matching& mt);

// Shortest transformation between two maximal matchings that passes through a
// non-maximal matching. Requires a bipartite graph and both matchings
// inclusion-wise maximal; returns nullopt iff the matchings are maximum (no
// such transformation exists). Length = d/2 + min over augmenting routes of
// (route cost + surviving-cycle indicator).
std::optional<RouteAnswer> shortest_via_nonmaximal(const Graph& g, const Matching& ms, const Matching& mt);

}  // namespace mj
