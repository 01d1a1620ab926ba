#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <unordered_set>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/rng.hpp"

namespace r2v {

// Link-prediction split: held-out positives removed from a connected graph,
// equally many sampled non-edges as negatives, and the residual graph that
// stays connected by construction (only non-spanning-tree edges are removed).
struct EdgeSplit {
    Graph residual;
    std::vector<std::pair<NodeId, NodeId>> test_positive;  // canonical u < v
    std::vector<std::pair<NodeId, NodeId>> test_negative;  // canonical u < v
    double requested_fraction = 0.0;
    double achieved_fraction = 0.0;
    std::string warning;  // empty when the request was satisfiable exactly
};

// Removes floor(fraction * M) edges chosen uniformly among the non-tree edges
// of a uniformly random spanning tree (Wilson's algorithm). If fewer edges are
// removable the achieved fraction is recorded and a warning set. Requires an
// undirected connected graph and 0 < fraction < 1.
EdgeSplit split_edges(const Graph& g, double fraction, std::uint64_t seed);

inline std::uint64_t pair_key(NodeId a, NodeId b, std::size_t n) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * n + b;
}

// Uniformly samples distinct non-edges of `g`, skipping pairs whose key is in
// `exclude`. May return fewer than `count` when the graph has too few
// non-edges. `exclude` grows with the chosen pairs.
std::vector<std::pair<NodeId, NodeId>> sample_non_edges(
    const Graph& g, std::size_t count, Rng& rng,
    std::unordered_set<std::uint64_t>& exclude);

// Same, but pairs in `extra_edges` (sorted canonical u < v) also count as
// edges — used to sample non-edges of an original graph given its residual
// plus the held-out positives.
std::vector<std::pair<NodeId, NodeId>> sample_non_edges(
    const Graph& g, std::span<const std::pair<NodeId, NodeId>> extra_edges,
    std::size_t count, Rng& rng, std::unordered_set<std::uint64_t>& exclude);

// Manifest sections "%residual", "%pos", "%neg", one edge per line as
// external tokens. Loading maps tokens through the original graph so dense
// ids (and with them every seeded stream) match the run that wrote the file.
void write_split_manifest(const EdgeSplit& split, std::ostream& out);
EdgeSplit load_split_manifest(std::istream& in, const Graph& original);

}  // namespace r2v
