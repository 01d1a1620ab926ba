#include "r2v/edge_split.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace r2v {

namespace {

// Wilson's algorithm: loop-erased random walks yield a spanning tree drawn
// uniformly from all spanning trees of the graph.
std::vector<std::pair<NodeId, NodeId>> uniform_spanning_tree(const Graph& g, Rng& rng) {
    const std::size_t n = g.node_count();
    std::vector<bool> in_tree(n, false);
    std::vector<NodeId> successor(n, 0);
    const NodeId root = static_cast<NodeId>(rng.below(n));
    in_tree[root] = true;

    std::vector<std::pair<NodeId, NodeId>> tree;
    tree.reserve(n - 1);
    for (NodeId i = 0; i < n; ++i) {
        if (in_tree[i]) continue;
        NodeId v = i;
        while (!in_tree[v]) {
            auto nb = g.neighbors(v);
            successor[v] = nb[rng.index(nb.size())];
            v = successor[v];
        }
        v = i;
        while (!in_tree[v]) {
            in_tree[v] = true;
            tree.emplace_back(v, successor[v]);
            v = successor[v];
        }
    }
    return tree;
}

}  // namespace

EdgeSplit split_edges(const Graph& g, double fraction, std::uint64_t seed) {
    if (g.directed()) throw std::runtime_error("split_edges requires an undirected graph");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::runtime_error("split fraction must lie in (0, 1)");
    }
    if (!is_connected(g)) throw std::runtime_error("split_edges requires a connected graph");

    const std::size_t n = g.node_count();
    const auto edges = g.undirected_edges();
    const std::size_t m = edges.size();
    Rng rng(derive_seed(seed, stream::kSplit));

    std::unordered_set<std::uint64_t> tree_keys;
    tree_keys.reserve(2 * n);
    for (const auto& [u, v] : uniform_spanning_tree(g, rng)) {
        tree_keys.insert(pair_key(u, v, n));
    }

    std::vector<std::size_t> removable;
    removable.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!tree_keys.contains(pair_key(edges[i].first, edges[i].second, n))) {
            removable.push_back(i);
        }
    }

    const std::size_t target = static_cast<std::size_t>(std::floor(fraction * double(m)));
    std::size_t removed_count = target;
    EdgeSplit split;
    split.requested_fraction = fraction;
    if (target > removable.size()) {
        removed_count = removable.size();
        split.warning = "only " + std::to_string(removed_count) + " of " +
                        std::to_string(target) + " requested edges are removable";
    }

    // Partial Fisher-Yates: the first removed_count entries are a uniform
    // sample of the removable pool.
    for (std::size_t i = 0; i < removed_count; ++i) {
        std::size_t j = i + rng.index(removable.size() - i);
        std::swap(removable[i], removable[j]);
    }

    std::vector<bool> removed(m, false);
    split.test_positive.reserve(removed_count);
    for (std::size_t i = 0; i < removed_count; ++i) {
        removed[removable[i]] = true;
        split.test_positive.push_back(edges[removable[i]]);
    }
    std::sort(split.test_positive.begin(), split.test_positive.end());

    std::vector<std::pair<NodeId, NodeId>> residual_edges;
    residual_edges.reserve(m - removed_count);
    for (std::size_t i = 0; i < m; ++i) {
        if (!removed[i]) residual_edges.push_back(edges[i]);
    }
    split.residual = Graph::from_edges(n, residual_edges, g.tokens(), false);
    split.achieved_fraction = m == 0 ? 0.0 : double(removed_count) / double(m);

    std::unordered_set<std::uint64_t> taken;
    split.test_negative = sample_non_edges(g, split.test_positive.size(), rng, taken);
    if (split.test_negative.size() < split.test_positive.size()) {
        if (!split.warning.empty()) split.warning += "; ";
        split.warning += "only " + std::to_string(split.test_negative.size()) + " of " +
                         std::to_string(split.test_positive.size()) +
                         " negative pairs exist";
    }
    std::sort(split.test_negative.begin(), split.test_negative.end());
    return split;
}

std::vector<std::pair<NodeId, NodeId>> sample_non_edges(
    const Graph& g, std::span<const std::pair<NodeId, NodeId>> extra_edges,
    std::size_t count, Rng& rng, std::unordered_set<std::uint64_t>& exclude) {
    const std::size_t n = g.node_count();
    std::vector<std::pair<NodeId, NodeId>> out;
    if (count == 0 || n < 2) return out;
    out.reserve(count);

    auto is_edge = [&](NodeId u, NodeId v) {
        return g.has_edge(u, v) ||
               std::binary_search(extra_edges.begin(), extra_edges.end(),
                                  std::make_pair(u, v));
    };

    if (n <= 2048) {
        // Small graphs: enumerate candidate non-edges and sample exactly.
        std::vector<std::pair<NodeId, NodeId>> pool;
        for (NodeId u = 0; u + 1 < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
                if (!is_edge(u, v) && !exclude.contains(pair_key(u, v, n))) {
                    pool.emplace_back(u, v);
                }
            }
        }
        const std::size_t take = std::min(count, pool.size());
        for (std::size_t i = 0; i < take; ++i) {
            std::size_t j = i + rng.index(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
            exclude.insert(pair_key(pool[i].first, pool[i].second, n));
        }
        return out;
    }

    // Sparse large graphs: rejection sampling terminates quickly.
    const std::size_t max_attempts = 1000 * count + 100000;
    std::size_t attempts = 0;
    while (out.size() < count && attempts < max_attempts) {
        ++attempts;
        NodeId a = static_cast<NodeId>(rng.below(n));
        NodeId b = static_cast<NodeId>(rng.below(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const std::uint64_t key = pair_key(a, b, n);
        if (exclude.contains(key) || is_edge(a, b)) continue;
        exclude.insert(key);
        out.emplace_back(a, b);
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> sample_non_edges(
    const Graph& g, std::size_t count, Rng& rng,
    std::unordered_set<std::uint64_t>& exclude) {
    return sample_non_edges(g, {}, count, rng, exclude);
}

void write_split_manifest(const EdgeSplit& split, std::ostream& out) {
    const Graph& g = split.residual;
    out << "# edge split: requested_fraction=" << split.requested_fraction
        << " achieved_fraction=" << split.achieved_fraction << "\n";
    auto emit = [&](const std::vector<std::pair<NodeId, NodeId>>& edges) {
        for (const auto& [u, v] : edges) {
            out << g.token(u) << ' ' << g.token(v) << '\n';
        }
    };
    out << "%residual\n";
    emit(split.residual.undirected_edges());
    out << "%pos\n";
    emit(split.test_positive);
    out << "%neg\n";
    emit(split.test_negative);
}

EdgeSplit load_split_manifest(std::istream& in, const Graph& original) {
    std::vector<std::pair<NodeId, NodeId>> residual_edges, pos, neg;
    int section = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line == "%residual") { section = 1; continue; }
        if (line == "%pos") { section = 2; continue; }
        if (line == "%neg") { section = 3; continue; }
        if (section == 0) {
            throw std::runtime_error("split manifest line " + std::to_string(line_no) +
                                     ": content before %residual section");
        }
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra)) {
            throw std::runtime_error("split manifest line " + std::to_string(line_no) +
                                     ": expected two node tokens");
        }
        NodeId u = original.require_index(a);
        NodeId v = original.require_index(b);
        if (u > v) std::swap(u, v);
        (section == 1 ? residual_edges : section == 2 ? pos : neg).emplace_back(u, v);
    }
    if (residual_edges.empty()) {
        throw std::runtime_error("split manifest has no residual edges");
    }

    EdgeSplit split;
    split.residual =
        Graph::from_edges(original.node_count(), residual_edges, original.tokens(), false);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    split.test_positive = std::move(pos);
    split.test_negative = std::move(neg);
    const std::size_t total = split.residual.edge_count() + split.test_positive.size();
    split.achieved_fraction =
        total == 0 ? 0.0 : double(split.test_positive.size()) / double(total);
    split.requested_fraction = split.achieved_fraction;
    return split;
}

}  // namespace r2v
