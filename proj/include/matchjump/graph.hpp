#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "matchjump/common.hpp"

namespace mj {

// Simple undirected graph. Vertices are 0-based internally; the text format is
// 1-based. Edges are stored normalized (u < v) in insertion order, and edge ids
// are indices into `edges`.
class Graph {
  public:
    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edge_list);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::pair<int, int> edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    // (neighbor, edge id) pairs in ascending neighbor order.
    const std::vector<std::pair<int, int>>& adj(int v) const { return adj_[static_cast<size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<size_t>(v)].size()); }

    // Edge id joining u and v, or -1.
    int edge_between(int u, int v) const;
    int other_end(int e, int v) const {
        auto [a, b] = edges_[static_cast<size_t>(e)];
        return v == a ? b : a;
    }

    // Graph with the same vertex set and the listed edges only. `kept_edges`
    // become edge ids 0,1,... in the given order; the caller keeps the list as
    // the new-id -> old-id translation.
    Graph edge_subgraph(const std::vector<int>& kept_edges) const;

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::unordered_map<std::uint64_t, int> edge_index_;
};

// Two-coloring, or nullopt if an odd cycle exists. Deterministic: BFS from the
// smallest unvisited vertex, which gets side 0.
std::optional<std::vector<std::uint8_t>> bipartition(const Graph& g);

// Connected component ids (0-based, in order of smallest contained vertex).
std::vector<int> connected_components(const Graph& g);

// A set of pairwise disjoint edges of a fixed graph.
class Matching {
  public:
    Matching() = default;
    // Validates: ids in range, distinct, pairwise disjoint.
    Matching(const Graph& g, std::vector<int> edge_ids);

    int size() const { return static_cast<int>(edge_ids_.size()); }
    const std::vector<int>& edge_ids() const { return edge_ids_; }  // sorted ascending
    bool contains_edge(int e) const { return has_edge_[static_cast<size_t>(e)]; }
    bool covers(int v) const { return vertex_edge_[static_cast<size_t>(v)] >= 0; }
    // Edge id at v, or -1 if v is free.
    int edge_at(int v) const { return vertex_edge_[static_cast<size_t>(v)]; }
    // Matched partner of v, or -1.
    int mate(const Graph& g, int v) const {
        int e = vertex_edge_[static_cast<size_t>(v)];
        return e < 0 ? -1 : g.other_end(e, v);
    }
    std::vector<int> free_vertices(const Graph& g) const;

    friend bool operator==(const Matching& a, const Matching& b) { return a.edge_ids_ == b.edge_ids_; }
    friend bool operator!=(const Matching& a, const Matching& b) { return !(a == b); }

  private:
    std::vector<int> edge_ids_;
    std::vector<char> has_edge_;
    std::vector<int> vertex_edge_;
};

// True iff no edge has both endpoints free (inclusion-wise maximal).
bool is_maximal(const Graph& g, const Matching& m);

// One component of a symmetric difference Ms Δ Mt: an alternating path or an
// even alternating cycle. Canonical orientation: paths start at the endpoint
// with the smaller vertex index; cycles start at their smallest vertex and run
// toward its smaller neighbor on the cycle.
struct SymDiffComponent {
    bool is_cycle = false;
    std::vector<int> vertices;  // path: k+1 vertices for k edges; cycle: k vertices
    std::vector<int> edge_ids;  // edge_ids[i] joins vertices[i], vertices[i+1 mod size]
    int ms_edges = 0;           // how many of edge_ids lie in Ms
    int mt_edges = 0;
};

struct SymDiffDecomposition {
    std::vector<SymDiffComponent> components;  // ordered by smallest contained vertex
    int d = 0;                                 // |Ms Δ Mt|
    std::vector<int> comp_of_vertex;           // -1 when not on the symmetric difference
    std::vector<int> comp_of_edge;

    bool all_paths() const {
        for (const auto& c : components)
            if (c.is_cycle) return false;
        return true;
    }
    // Odd path: odd number of edges, i.e. a surplus component of one matching.
    bool has_odd_path() const {
        for (const auto& c : components)
            if (!c.is_cycle && c.edge_ids.size() % 2 == 1) return true;
        return false;
    }
};

SymDiffDecomposition sym_diff_decompose(const Graph& g, const Matching& ms, const Matching& mt);

// Parsed instance file: a graph plus optionally a source/target matching pair.
struct Instance {
    Graph g;
    std::optional<Matching> ms;
    std::optional<Matching> mt;
};

// Text format ('#' starts a comment; vertices 1-based):
//   p <n> <m>
//   e <u> <v>     (m lines, duplicates rejected)
//   s <u> <v>     (source matching edges; optional)
//   t <u> <v>     (target matching edges; optional)
// Both matchings must be present or absent together and have equal size.
Instance parse_instance(const std::string& text);

std::string serialize_instance(const Graph& g, const Matching* ms = nullptr, const Matching* mt = nullptr);

}  // namespace mj
