#pragma once

#include <array>
#include <string>
#include <vector>

#include "matchjump/graph.hpp"
#include "matchjump/reconfig.hpp"

namespace mj {

// Covering problem on items 0..n-1: a family of item subsets.
struct SetCoverInstance {
    int n = 0;
    std::vector<std::vector<int>> sets;  // each sorted ascending, nonempty

    int frequency(int u) const;  // number of sets containing u
    int max_set_size() const;
    int max_frequency() const;
};

// Throws precondition_error unless every set is nonempty, sorted, in range,
// duplicate-free, and every item belongs to at least one set.
void validate_setcover(const SetCoverInstance& inst);

// Exhaustive minimum cover size. Exponential in the family size (<= 20 sets).
int min_cover_size(const SetCoverInstance& inst);

// Exhaustive minimum vertex cover size. Exponential in |V| (<= 20 vertices).
int min_vertex_cover_size(const Graph& h);

// A hardness-construction instance: a graph plus two matchings that differ
// exactly on a collection of 4-cycles, together with the vertex-role
// bookkeeping needed to convert covers to reconfiguration sequences and back.
struct GadgetInstance {
    Graph graph;
    Matching m1, m2;
    std::vector<std::string> label;  // per-vertex role, e.g. "c1.2", "t"
    std::vector<char> terminal;      // endpoints of pairing edges

    // Cover-gadget bookkeeping (empty for the vertex-cover gadget).
    SetCoverInstance cover;
    int L = 0;          // tail length, rounded up to the next odd number
    int L_formula = 0;  // |U| * (2 + f + d) before the parity round-up
    int Lp = 0;         // appended-path length of the non-maximum variant
    int d = 0, f = 0;
    std::vector<std::array<int, 4>> cyc;      // 4-cycle vertices, ^1..^4
    std::vector<std::vector<int>> item_path;  // p_u^1..p_u^{2 f_u}
    std::vector<std::vector<int>> set_path;   // p_S^1..p_S^{2|S|}
    std::vector<std::vector<int>> tail;       // q_S^1..q_S^L
    std::vector<int> extra;                   // r_1..r_{L'} when Lp > 0

    // Vertex-cover gadget bookkeeping.
    int t = -1;
    std::vector<int> tail6;  // q_1..q_6
};

// Item gadget: one 4-cycle and one terminal path per item, one terminal path
// plus a long odd tail per set, pairing edges encoding membership. m1 and m2
// differ exactly on the 4-cycles; both are maximum; every tail end is free.
// The graph is bipartite with maximum degree three.
GadgetInstance gen_setcover(const SetCoverInstance& inst);

// Same construction plus one long appended path matched on consecutive pairs
// in both matchings, making them maximal but not maximum.
GadgetInstance gen_setcover_nonmaximum(const SetCoverInstance& inst);

// Walks the cover set by set: slide the set's tail open, realign one
// alternating path per newly covered item, flip the item's 4-cycle with three
// exchanges, and undo. Length is at most 2L|cover| + 2|U|(2+f+d).
ReconfigSequence cover_to_sequence(const GadgetInstance& gi, const std::vector<int>& cover_sets);

// Sets whose tail-end vertex is covered at some point of the sequence. When
// both matchings are maximum every intermediate matching is maximum too, and
// the result is guaranteed to be a cover (checked).
std::vector<int> sequence_to_cover(const GadgetInstance& gi, const ReconfigSequence& seq);

// Vertex-cover gadget: a hub vertex t, one 4-cycle per edge of h, a length-2
// path from each vertex of h to t, and a 6-vertex tail on t. Both matchings
// are maximum, leave exactly t exposed, and differ exactly on the 4-cycles.
GadgetInstance gen_vc(const Graph& h);

// Closed-form distance between the vertex-cover gadget matchings, and the
// diameter of its configuration graph (distance plus six).
long long expected_vc_distance(const Graph& h);
long long expected_vc_diameter(const Graph& h);

}  // namespace mj
