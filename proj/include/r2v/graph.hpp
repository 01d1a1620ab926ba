#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace r2v {

using NodeId = std::uint32_t;

// Immutable unweighted graph in CSR form with dense node indices assigned in
// first-appearance order and an external-token table. Neighbor lists are
// sorted, deduplicated and free of self-loops; undirected graphs store both
// directions. Safe to share across threads once built.
class Graph {
public:
    Graph() = default;

    // Parses "u v" lines; '#' lines and blank lines are skipped. Duplicate
    // edges and self-loops are dropped. Throws on malformed lines (anything
    // but two tokens, e.g. a weight column) and on an empty edge set.
    static Graph parse_edge_list(std::istream& in, bool directed);

    // Builds from dense-index pairs. Empty `tokens` autogenerates decimal
    // tokens; otherwise tokens.size() must equal node_count and be unique.
    static Graph from_edges(std::size_t node_count,
                            std::span<const std::pair<NodeId, NodeId>> edges,
                            std::vector<std::string> tokens, bool directed);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    // Number of edges: undirected edges counted once.
    std::size_t edge_count() const { return edge_count_; }
    bool directed() const { return directed_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    const std::string& token(NodeId v) const { return tokens_[v]; }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<NodeId> index_of(std::string_view token) const;
    // Maps a token to its dense index, throwing on unknown tokens.
    NodeId require_index(std::string_view token) const;

    // Canonical (u < v) edge list; undirected graphs only.
    std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, NodeId> index_;
    std::size_t edge_count_ = 0;
    bool directed_ = false;
};

// Single connected component in the undirected sense (directed edges are
// treated as symmetric).
bool is_connected(const Graph& g);

}  // namespace r2v
