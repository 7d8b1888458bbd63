#pragma once

#include <string>
#include <vector>

#include "matchjump/common.hpp"

namespace mj {

struct SteinerArc {
    int from = -1;
    int to = -1;
    long long cost = 0;
};

// Directed Steiner tree instance: connect root -> every terminal.
struct SteinerInstance {
    int n = 0;
    std::vector<SteinerArc> arcs;
    int root = -1;
    std::vector<int> terminals;
};

// Out-arborescence rooted at the instance root covering all terminals.
struct SteinerTree {
    std::vector<int> arc_ids;  // sorted ascending
    long long cost = 0;
};

struct TreeValidation {
    bool ok = false;
    std::string reason;
};

// Structural check: arcs exist, in-degree <= 1, root-reachable, acyclic, every
// terminal covered, cost field consistent.
TreeValidation validate_steiner_tree(const SteinerInstance& inst, const SteinerTree& tree);

// Exact solver: Dreyfus-Wagner dynamic program over terminal subsets with a
// Dijkstra relaxation between merges; 3^t * n + 2^t * Dijkstra time.
// Throws precondition_error naming the first unreachable terminal.
SteinerTree dreyfus_wagner(const SteinerInstance& inst);

// Exhaustive arc-subset search; only for tiny instances (arc count guarded).
SteinerTree brute_force_steiner(const SteinerInstance& inst, int max_arcs = 14);

// Polylogarithmic-approximation recursive greedy: level-limited recursion
// choosing minimum-density partial trees; level 1 buys cheapest shortest
// paths. Feasible but not optimal in general; exact for a single terminal.
SteinerTree recursive_greedy_approx(const SteinerInstance& inst, int level);

}  // namespace mj
