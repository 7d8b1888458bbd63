#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchjump/graph.hpp"

namespace mj {

inline constexpr std::size_t kDefaultOracleBudget = 10'000'000;

// One token jump: remove one matching edge, add one edge (anywhere in the
// graph) that is addable afterwards. |M Δ M'| = 2.
struct Exchange {
    int remove_edge = -1;
    int add_edge = -1;
};

struct ReconfigSequence {
    Matching start;
    std::vector<Exchange> steps;
    int length() const { return static_cast<int>(steps.size()); }
};

struct ValidationResult {
    bool ok = false;
    int fail_index = -1;  // step that failed, or -1
    std::string reason;
};

// Checks the sequence starts at ms, every step is a legal jump, and the final
// matching equals mt.
ValidationResult validate_sequence(const Graph& g, const Matching& ms, const Matching& mt,
                                   const ReconfigSequence& seq);

// Applies one exchange; nullopt if illegal from m.
std::optional<Matching> apply_exchange(const Graph& g, const Matching& m, const Exchange& x);

// All matchings adjacent to m (|Δ| = 2), in ascending (removed, added) order.
std::vector<Matching> neighbors(const Graph& g, const Matching& m);

// All matchings of size k, deterministic order. Throws budget_error if more
// than `budget` matchings exist.
std::vector<Matching> enumerate_matchings(const Graph& g, int k, std::size_t budget = kDefaultOracleBudget);

enum class OracleStatus { found, unreachable, budget_exceeded };

struct OracleOutcome {
    OracleStatus status = OracleStatus::unreachable;
    long long distance = -1;
    std::optional<ReconfigSequence> witness;
    std::size_t states = 0;  // matchings stored
};

// Breadth-first search over the configuration graph from ms. Exact but
// exponential; `budget` caps the number of stored matchings.
OracleOutcome oracle_distance(const Graph& g, const Matching& ms, const Matching& mt,
                              std::size_t budget = kDefaultOracleBudget);

struct DiameterOutcome {
    OracleStatus status = OracleStatus::found;
    bool infinite = false;   // configuration graph disconnected
    long long diameter = 0;  // max finite distance when connected
    std::size_t states = 0;
};

// Maximum pairwise distance among size-k matchings (infinite if the
// configuration graph is disconnected). Oracle-only: exponential.
DiameterOutcome oracle_diameter(const Graph& g, int k, std::size_t budget = kDefaultOracleBudget);

struct ReachabilityOutcome {
    bool reachable = false;
    std::string method;  // which rule of the decision tree answered
};

// Decision procedure: non-maximal matchings are always reachable; between
// maximum matchings each symmetric-difference cycle needs an alternating path
// from a free vertex; bipartite maximal cases go through the exact distance;
// the general maximal-non-maximum case falls back to the oracle (budget-
// guarded; throws budget_error on exhaustion).
ReachabilityOutcome is_reachable(const Graph& g, const Matching& ms, const Matching& mt,
                                 std::size_t budget = kDefaultOracleBudget);

// Connectivity of the whole size-k configuration graph, decided by formula:
// k < nu: always connected. k == nu: connected iff the Gallai-Edmonds factor
// G[C] has a unique perfect matching. k > nu: no matchings exist; connected by
// convention (empty graph), diameter 0.
bool is_connected(const Graph& g, int k);

}  // namespace mj
