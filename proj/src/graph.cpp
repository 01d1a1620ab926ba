#include "r2v/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace r2v {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Graph Graph::parse_edge_list(std::istream& in, bool directed) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::string> tokens;
    std::unordered_map<std::string, NodeId> index;

    auto intern = [&](std::string_view tok) -> NodeId {
        auto it = index.find(std::string(tok));
        if (it != index.end()) return it->second;
        NodeId id = static_cast<NodeId>(tokens.size());
        tokens.emplace_back(tok);
        index.emplace(tokens.back(), id);
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = split_tokens(line);
        if (toks.empty() || toks.front().front() == '#') continue;
        if (toks.size() != 2) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected two node tokens, got " +
                                     std::to_string(toks.size()));
        }
        const NodeId from = intern(toks[0]);
        const NodeId to = intern(toks[1]);
        edges.emplace_back(from, to);
    }
    if (edges.empty()) throw std::runtime_error("edge list contains no edges");
    const std::size_t node_count = tokens.size();
    return from_edges(node_count, edges, std::move(tokens), directed);
}

Graph Graph::from_edges(std::size_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<std::string> tokens, bool directed) {
    if (node_count == 0) throw std::runtime_error("graph must have at least one node");
    if (tokens.empty()) {
        tokens.reserve(node_count);
        for (std::size_t i = 0; i < node_count; ++i) tokens.push_back(std::to_string(i));
    }
    if (tokens.size() != node_count) {
        throw std::runtime_error("token table size does not match node count");
    }

    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw std::runtime_error("edge endpoint out of range");
        }
        if (u == v) continue;  // self-loops dropped
        adj[u].push_back(v);
        if (!directed) adj[v].push_back(u);
    }

    Graph g;
    g.directed_ = directed;
    g.offsets_.assign(node_count + 1, 0);
    std::size_t total = 0;
    for (std::size_t v = 0; v < node_count; ++v) {
        auto& list = adj[v];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        total += list.size();
    }
    g.adjacency_.reserve(total);
    for (std::size_t v = 0; v < node_count; ++v) {
        g.offsets_[v] = g.adjacency_.size();
        g.adjacency_.insert(g.adjacency_.end(), adj[v].begin(), adj[v].end());
    }
    g.offsets_[node_count] = g.adjacency_.size();
    g.edge_count_ = directed ? g.adjacency_.size() : g.adjacency_.size() / 2;

    g.tokens_ = std::move(tokens);
    g.index_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        if (!g.index_.emplace(g.tokens_[i], static_cast<NodeId>(i)).second) {
            throw std::runtime_error("duplicate node token: " + g.tokens_[i]);
        }
    }
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeId Graph::require_index(std::string_view token) const {
    auto id = index_of(token);
    if (!id) throw std::runtime_error("unknown node token: " + std::string(token));
    return *id;
}

std::vector<std::pair<NodeId, NodeId>> Graph::undirected_edges() const {
    if (directed_) throw std::runtime_error("undirected_edges requires an undirected graph");
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

bool is_connected(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n <= 1) return true;

    std::vector<std::vector<NodeId>> reverse;
    if (g.directed()) {
        reverse.resize(n);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v : g.neighbors(u)) reverse[v].push_back(u);
        }
    }

    std::vector<bool> seen(n, false);
    std::queue<NodeId> queue;
    queue.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop();
        auto visit = [&](NodeId v) {
            if (!seen[v]) {
                seen[v] = true;
                ++visited;
                queue.push(v);
            }
        };
        for (NodeId v : g.neighbors(u)) visit(v);
        if (g.directed()) {
            for (NodeId v : reverse[u]) visit(v);
        }
    }
    return visited == n;
}

}  // namespace r2v
