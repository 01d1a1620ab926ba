#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/rng.hpp"
#include "r2v/walk.hpp"

namespace testutil {

using r2v::Graph;
using r2v::NodeId;

inline Graph graph_from(const std::string& edge_lines, bool directed = false) {
    std::istringstream in(edge_lines);
    return Graph::parse_edge_list(in, directed);
}

inline Graph path_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges, {}, false);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, NodeId((i + 1) % n));
    return Graph::from_edges(n, edges, {}, false);
}

inline Graph star_graph(std::size_t leaves) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, edges, {}, false);
}

inline Graph triangle_graph() {
    return Graph::from_edges(3, std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {0, 2}},
                             {}, false);
}

// Connected by construction: a random recursive tree plus extra random edges.
inline Graph random_connected_graph(std::size_t n, std::size_t extra_edges,
                                    std::uint64_t seed) {
    r2v::Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 1; i < n; ++i) {
        edges.emplace_back(static_cast<NodeId>(rng.below(i)), i);
    }
    for (std::size_t e = 0; e < extra_edges; ++e) {
        const NodeId a = static_cast<NodeId>(rng.below(n));
        const NodeId b = static_cast<NodeId>(rng.below(n));
        if (a != b) edges.emplace_back(a, b);
    }
    return Graph::from_edges(n, edges, {}, false);
}

// The five-node toy graph sketched in the walk-engine docs: start node "1"
// with neighbors {3, 5}; node 4 adjacent to {2, 3, 5}.
inline Graph toy_five_graph() {
    return graph_from("1 3\n1 5\n3 4\n4 2\n4 5\n");
}

// k ring-connected communities with dense internal wiring and single bridges
// between consecutive communities. Community of node v is v / size.
inline Graph community_graph(std::size_t communities, std::size_t size, double p_intra,
                             std::uint64_t seed) {
    r2v::Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t c = 0; c < communities; ++c) {
        const NodeId base = static_cast<NodeId>(c * size);
        for (std::size_t i = 0; i < size; ++i) {
            edges.emplace_back(base + i, base + (i + 1) % size);
            for (std::size_t j = i + 1; j < size; ++j) {
                if (rng.unit() < p_intra) edges.emplace_back(base + i, base + j);
            }
        }
        const NodeId next = static_cast<NodeId>(((c + 1) % communities) * size);
        edges.emplace_back(base + NodeId(rng.below(size)), next + NodeId(rng.below(size)));
    }
    return Graph::from_edges(communities * size, edges, {}, false);
}

// Dense occupation vector rebuilt from a raw path: position 0 carries no
// reinforcement mass, every node gets the +1 floor.
inline std::vector<double> occupation_from_path(std::span<const NodeId> path,
                                                std::size_t node_count) {
    std::vector<double> mass(node_count, 1.0);
    for (std::size_t s = 1; s < path.size(); ++s) mass[path[s]] += 1.0;
    const double denom = double(path.size() - 1 + node_count);
    for (double& m : mass) m /= denom;
    return mass;
}

inline std::vector<double> occupation_after_append(std::span<const NodeId> path,
                                                   std::size_t node_count, NodeId x) {
    std::vector<NodeId> extended(path.begin(), path.end());
    extended.push_back(x);
    return occupation_from_path(extended, node_count);
}

// Independent dense divergences used as oracles against the closed forms.
inline double dense_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * std::log(p[i] / q[i]);
    return sum;
}

inline double dense_js(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * dense_kl(p, m) + 0.5 * dense_kl(q, m);
}

// Walk state with a given path; asserts nothing about graph consistency.
inline r2v::WalkState state_from_path(std::span<const NodeId> path, std::size_t node_count) {
    r2v::WalkState state(path.front(), node_count);
    for (std::size_t i = 1; i < path.size(); ++i) state.append(path[i]);
    return state;
}

}  // namespace testutil
