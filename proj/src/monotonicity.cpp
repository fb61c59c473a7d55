#include "trivirus/monotonicity.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <utility>

namespace trivirus {
namespace {

using NodePair = std::pair<int, int>;

NodePair key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Bit 0: a "+" edge joins the pair, bit 1: a "-" edge does.
std::map<NodePair, int> pair_signs(const SignedGraph& graph) {
    std::map<NodePair, int> signs;
    for (const auto& e : graph.edges) {
        if (e.from == e.to) continue;
        signs[key(e.from, e.to)] |= e.sign > 0 ? 1 : 2;
    }
    return signs;
}

struct Neighbour {
    int node;
    int sign;
};

std::vector<int> tree_path(const std::vector<int>& parent, int node) {
    std::vector<int> path;
    for (int v = node; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

SignedGraph signed_jacobian_graph(const MultiVirusSystem& system) {
    const int n = system.node_count();
    const int m = system.virus_count();
    SignedGraph g;
    g.node_count = n * m;
    for (int k = 0; k < m; ++k) {
        const Matrix& b = system.infection(k);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j && b(i, j) != 0.0) g.edges.push_back({k * n + j, k * n + i, +1});
            }
        }
    }
    for (int k = 0; k < m; ++k) {
        const Matrix& b = system.infection(k);
        for (int i = 0; i < n; ++i) {
            if ((b.row(i).array() == 0.0).all()) continue;
            for (int l = 0; l < m; ++l) {
                if (l != k) g.edges.push_back({l * n + i, k * n + i, -1});
            }
        }
    }
    return g;
}

ConsistencyVerdict is_consistent(const SignedGraph& graph) {
    const auto signs = pair_signs(graph);
    ConsistencyVerdict verdict;
    for (const auto& [pair, mask] : signs) {
        if (mask == 3) {
            verdict.consistent = false;
            verdict.witness_cycle = {pair.first, pair.second};
            return verdict;
        }
    }

    const auto count = static_cast<std::size_t>(graph.node_count);
    std::vector<std::vector<Neighbour>> adjacency(count);
    for (const auto& [pair, mask] : signs) {
        const int s = mask == 1 ? +1 : -1;
        adjacency[static_cast<std::size_t>(pair.first)].push_back({pair.second, s});
        adjacency[static_cast<std::size_t>(pair.second)].push_back({pair.first, s});
    }

    std::vector<int> best;
    std::vector<int> gauge(count, 0);
    for (int root = 0; root < graph.node_count; ++root) {
        std::vector<int> parity(count, 0);
        std::vector<int> parent(count, -1);
        std::queue<int> frontier;
        parity[static_cast<std::size_t>(root)] = 1;
        frontier.push(root);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            const auto ui = static_cast<std::size_t>(u);
            for (const auto& [v, s] : adjacency[ui]) {
                const auto vi = static_cast<std::size_t>(v);
                if (parity[vi] == 0) {
                    parity[vi] = parity[ui] * s;
                    parent[vi] = u;
                    frontier.push(v);
                } else if (parity[vi] != parity[ui] * s && u < v) {
                    const auto to_u = tree_path(parent, u);
                    const auto to_v = tree_path(parent, v);
                    std::size_t shared = 0;
                    while (shared < to_u.size() && shared < to_v.size() && to_u[shared] == to_v[shared]) ++shared;
                    // Cycle: lca, .., u, v, .., just after lca.
                    std::vector<int> cycle(to_u.begin() + static_cast<std::ptrdiff_t>(shared - 1), to_u.end());
                    for (auto it = to_v.rbegin(); it != to_v.rend() - static_cast<std::ptrdiff_t>(shared); ++it) {
                        cycle.push_back(*it);
                    }
                    if (best.empty() || cycle.size() < best.size()) best = std::move(cycle);
                }
            }
        }
        if (best.empty()) {
            for (std::size_t v = 0; v < count; ++v) {
                if (gauge[v] == 0 && parity[v] != 0) gauge[v] = parity[v];
            }
        }
    }

    if (!best.empty()) {
        verdict.consistent = false;
        verdict.witness_cycle = std::move(best);
    } else {
        verdict.gauge = std::move(gauge);
    }
    return verdict;
}

int cycle_sign(const SignedGraph& graph, const std::vector<int>& cycle) {
    if (cycle.size() < 2) return 0;
    const auto signs = pair_signs(graph);
    auto mask_of = [&](int a, int b) {
        const auto it = signs.find(key(a, b));
        return it == signs.end() ? 0 : it->second;
    };
    if (cycle.size() == 2) {
        const int mask = mask_of(cycle[0], cycle[1]);
        return mask == 0 ? 0 : mask == 3 ? -1 : +1;
    }
    int product = 1;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int mask = mask_of(cycle[i], cycle[(i + 1) % cycle.size()]);
        if (mask == 0 || mask == 3) return 0;
        product *= mask == 1 ? +1 : -1;
    }
    return product;
}

bool gauge_balances(const SignedGraph& graph, const std::vector<int>& gauge) {
    if (gauge.size() != static_cast<std::size_t>(graph.node_count)) return false;
    for (const auto& e : graph.edges) {
        const auto from = static_cast<std::size_t>(e.from);
        const auto to = static_cast<std::size_t>(e.to);
        if (gauge[from] * gauge[to] * e.sign != 1) return false;
    }
    return true;
}

} // namespace trivirus
