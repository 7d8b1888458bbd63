#pragma once

#include <vector>

#include "matchjump/graph.hpp"

namespace mj {

// Maximum-cardinality matching. Bipartite graphs take a multi-source
// augmenting-path fast path; general graphs use blossom contraction.
// Deterministic for a fixed graph.
Matching max_matching(const Graph& g);

inline int matching_number(const Graph& g) { return max_matching(g).size(); }

// Edge ids e such that some maximum matching uses e, i.e.
// nu(G - endpoints(e)) + 1 == nu(G). Sorted ascending.
// `threads` <= 1 runs the probes serially in-place; otherwise OpenMP splits
// them. Results are identical either way.
std::vector<int> allowed_edges(const Graph& g, int threads = 0);
// Plain serial loop kept as the reference implementation for tests/benchmarks.
std::vector<int> allowed_edges_serial(const Graph& g);

// Gallai–Edmonds structure: D = vertices missed by some maximum matching,
// A = N(D) \ D, C = the rest. Independent of the seeding maximum matching.
struct EGDecomposition {
    std::vector<int> d, a, c;  // sorted vertex lists
    Matching witness;          // the maximum matching the search ran on
    int nu = 0;
};

EGDecomposition edmonds_gallai(const Graph& g);
// Same, seeded explicitly (must be maximum; checked).
EGDecomposition edmonds_gallai_seeded(const Graph& g, const Matching& maximum);

enum class PerfectMatchingStatus { none, unique, multiple };

PerfectMatchingStatus perfect_matching_status(const Graph& g);
inline bool has_unique_perfect_matching(const Graph& g) {
    return perfect_matching_status(g) == PerfectMatchingStatus::unique;
}

}  // namespace mj
