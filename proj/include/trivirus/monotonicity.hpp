#pragma once

#include <vector>

#include "trivirus/model.hpp"

namespace trivirus {

struct SignedEdge {
    int from = 0;
    int to = 0;
    int sign = 1;
};

/// Sign pattern of the off-diagonal Jacobian entries at interior states.
/// Node k n + i is node i of virus k. An edge from -> to stands for the
/// Jacobian entry (to, from).
struct SignedGraph {
    int node_count = 0;
    std::vector<SignedEdge> edges;
};

/// Within virus k: a "+" edge j -> i for every nonzero beta_ij^k, i != j.
/// Across viruses k != l: a "-" edge (l, i) -> (k, i) whenever row i of B^k is
/// nonzero, since then diag(B^k x^k)_i > 0 in the interior.
SignedGraph signed_jacobian_graph(const MultiVirusSystem& system);

struct ConsistencyVerdict {
    bool consistent = true;
    /// Closed walk v0, v1, .., v_{L-1} (v_L = v0 implied) whose edge signs
    /// multiply to -1. Empty when consistent.
    std::vector<int> witness_cycle;
    /// +-1 per node with gauge[from] * gauge[to] * sign == +1 on every edge.
    /// Empty when inconsistent.
    std::vector<int> gauge;
};

/// Balance test on the underlying undirected multigraph by parity-labelled
/// breadth-first search. Parallel edges of equal sign merge; opposite signs
/// on one node pair give a 2-cycle witness. Of all conflicts found from every
/// root the shortest cycle is returned.
ConsistencyVerdict is_consistent(const SignedGraph& graph);

/// Sign of the cycle under the graph's edges; 0 if some step has no edge.
int cycle_sign(const SignedGraph& graph, const std::vector<int>& cycle);

/// True iff the gauge relabels every edge to "+".
bool gauge_balances(const SignedGraph& graph, const std::vector<int>& gauge);

} // namespace trivirus
