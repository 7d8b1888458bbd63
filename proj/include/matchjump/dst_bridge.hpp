#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matchjump/graph.hpp"
#include "matchjump/reconfig.hpp"
#include "matchjump/steiner.hpp"

namespace mj {

enum class DstArcKind { artificial, special, ordinary };

// Reduction from maximum-matching distance (bipartite, all edges allowed) to
// Directed Steiner Tree. Steiner nodes 0..n-1 are the graph vertices, node n
// is the root. Arc costs: artificial root arcs 0, special arcs (uv in Mt,
// vw in Ms) 1, ordinary arcs 2. Terminals are the reachable-side vertices of
// the symmetric difference.
struct DstReduction {
    SteinerInstance instance;
    int root = -1;
    std::vector<std::uint8_t> side;  // orientation: every exposed vertex on side 0
    std::vector<char> in_uprime;     // reachable by even alternating paths from the free vertices
    std::vector<DstArcKind> arc_kind;

    struct ArcOrigin {
        int u = -1, v = -1, w = -1;  // u,v,w path in G with vw in Ms; v = -1 for artificial arcs
    };
    std::vector<ArcOrigin> arc_origin;
    std::vector<int> component_of;  // special arc -> symmetric-difference component, else -1
    std::vector<int> ec_edge;       // special arc -> Mt-edge at its source (the cycle-closing edge
                                    // if this arc is the one a tree omits), else -1

    SymDiffDecomposition dec;
    bool reachable = true;
    int blocking_cycle = -1;  // component id of a cycle with no vertex in U'
};

DstReduction build_dst_instance(const Graph& g, const Matching& ms, const Matching& mt);

struct TreeCheck {
    bool ok = false;
    std::string diagnostics;
};

// Structural properties every optimal tree has: all special arcs of each path
// component present; exactly one special arc of each cycle missing; the root
// arc to each path component's free vertex present.
TreeCheck verify_tree_structure(const DstReduction& red, const SteinerTree& tree);

// Translates an optimal Steiner tree into a reconfiguration sequence of
// exactly tree-cost exchanges (DFS traversal, heaviest arc first). With
// debug_bookkeeping the per-step invariants of the correspondence proof are
// checked after every event.
ReconfigSequence tree_to_sequence(const DstReduction& red, const SteinerTree& tree, const Graph& g,
                                  const Matching& ms, const Matching& mt,
                                  bool debug_bookkeeping = true);

// Digraph induced by a valid sequence: the artificial root arcs plus one arc
// u->w per exchange whose edge pair is {uv, vw} with vw in Ms. Node g.n() is
// the root.
struct DstSubgraph {
    int root = -1;
    std::vector<std::vector<int>> out;
};

DstSubgraph sequence_to_subgraph(const Graph& g, const Matching& ms, const ReconfigSequence& seq);

// Exact distance between maximum matchings of a bipartite graph: prunes to
// allowed edges, builds the reduction, solves it exactly, and translates the
// optimal tree back. Unreachable instances name a blocking cycle.
struct MmdResult {
    bool reachable = false;
    long long distance = -1;
    ReconfigSequence seq;
    int blocking_cycle = -1;
};

MmdResult max_matching_distance(const Graph& g, const Matching& ms, const Matching& mt);

}  // namespace mj
