#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "matchjump/graph.hpp"
#include "matchjump/reconfig.hpp"

namespace mj {

// Per-component side assignment over the symmetric-difference components:
// 0 picks the first bipartition class (U), 1 the second (W). Paths have a
// forced side; only cycles genuinely branch.
struct SideChoice {
    std::vector<std::uint8_t> side;
};

// Whether the component can be realigned with help from the given side: a
// path must contain a source-free vertex there, a cycle an alternating
// connection to one.
bool reconfigurable_from(const Graph& g, const Matching& ms, const SymDiffComponent& comp, int side);

// Vertex-deleted subinstance: vertex ids are unchanged (deleted vertices stay
// as isolated husks), edges are renumbered; edge_map translates a subgraph
// edge id back to the original graph.
struct SubInstance {
    Graph graph;
    Matching source;
    Matching target;
    std::vector<int> edge_map;
};

// The two maximum-matching phases induced by a feasible side choice: first
// realign the U-assigned components (source-free W vertices deleted), then
// the W-assigned ones (target-free U vertices deleted).
std::pair<SubInstance, SubInstance> build_subinstances(const Graph& g, const Matching& ms, const Matching& mt,
                                                       const SideChoice& s);

// Length of the two-phase split for every cycle-side mask (bit i = side of
// the i-th cycle component); -1 marks infeasible or unreachable masks. The
// parallel and serial versions agree entry by entry.
std::vector<long long> side_choice_lengths(const Graph& g, const Matching& ms, const Matching& mt, int threads = 0);
std::vector<long long> side_choice_lengths_serial(const Graph& g, const Matching& ms, const Matching& mt);

struct DistanceResult {
    bool infinite = false;
    long long distance = -1;
    ReconfigSequence seq;
    std::string method;  // identical | greedy | odd-path | route | split | unreachable
};

// Exact matching distance on bipartite graphs, exponential only in the number
// of symmetric-difference cycles: compares the best via-non-maximal route
// against the best two-phase side split (ties go to the split).
DistanceResult bipartite_distance(const Graph& g, const Matching& ms, const Matching& mt, int threads = 0);

}  // namespace mj
