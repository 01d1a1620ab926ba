#include "doctest.h"

#include <queue>
#include <set>
#include <sstream>

#include "r2v/edge_split.hpp"
#include "testutil.hpp"

using namespace r2v;

namespace {

// Independent connectivity oracle (plain BFS over the residual graph).
bool bfs_connected(const Graph& g) {
    std::vector<bool> seen(g.node_count(), false);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : g.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = true;
                ++visited;
                q.push(v);
            }
        }
    }
    return visited == g.node_count();
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
    const auto edges = g.undirected_edges();
    return {edges.begin(), edges.end()};
}

}  // namespace

TEST_CASE("triangle split removes one edge and leaves a connected path") {
    const Graph g = testutil::triangle_graph();
    // A third of three edges; floor semantics need the fraction to sit at or
    // above 1/3, so 0.34 rather than the rounded-down 0.33.
    const EdgeSplit split = split_edges(g, 0.34, 5);
    CHECK(split.test_positive.size() == 1);
    CHECK(split.residual.edge_count() == 2);
    CHECK(bfs_connected(split.residual));
}

TEST_CASE("star graph has no removable edges") {
    const Graph g = testutil::star_graph(4);
    const EdgeSplit split = split_edges(g, 0.5, 1);
    CHECK(split.test_positive.empty());
    CHECK(split.achieved_fraction == 0.0);
    CHECK_FALSE(split.warning.empty());
    CHECK(edge_set(split.residual) == edge_set(g));
}

TEST_CASE("split preconditions") {
    const Graph g = testutil::triangle_graph();
    CHECK_THROWS_AS(split_edges(g, 0.0, 1), std::runtime_error);
    CHECK_THROWS_AS(split_edges(g, 1.0, 1), std::runtime_error);
    CHECK_THROWS_AS(split_edges(testutil::graph_from("0 1\n2 3\n"), 0.5, 1),
                    std::runtime_error);
    CHECK_THROWS_AS(split_edges(testutil::graph_from("0 1\n1 2\n", true), 0.5, 1),
                    std::runtime_error);
}

TEST_CASE("split partitions the edge set and keeps the residual connected") {
    const Graph g = testutil::random_connected_graph(200, 400, 17);
    const auto original = edge_set(g);
    const std::size_t n = g.node_count();

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const EdgeSplit split = split_edges(g, 0.5, seed);
        CHECK(bfs_connected(split.residual));
        CHECK(split.test_positive.size() ==
              static_cast<std::size_t>(0.5 * double(g.edge_count())));
        CHECK(split.test_negative.size() == split.test_positive.size());

        // residual and positives partition the original edges exactly.
        auto residual = edge_set(split.residual);
        std::set<std::pair<NodeId, NodeId>> removed(split.test_positive.begin(),
                                                    split.test_positive.end());
        CHECK(residual.size() + removed.size() == original.size());
        std::set<std::pair<NodeId, NodeId>> joined = residual;
        joined.insert(removed.begin(), removed.end());
        CHECK(joined == original);

        std::set<std::uint64_t> negative_keys;
        for (const auto& [u, v] : split.test_negative) {
            CHECK(u != v);
            CHECK_FALSE(g.has_edge(u, v));
            negative_keys.insert(pair_key(u, v, n));
        }
        CHECK(negative_keys.size() == split.test_negative.size());
    }
}

TEST_CASE("split is deterministic for a seed") {
    const Graph g = testutil::random_connected_graph(60, 120, 2);
    const EdgeSplit a = split_edges(g, 0.4, 9);
    const EdgeSplit b = split_edges(g, 0.4, 9);
    CHECK(a.test_positive == b.test_positive);
    CHECK(a.test_negative == b.test_negative);
    CHECK(edge_set(a.residual) == edge_set(b.residual));
}

TEST_CASE("non-edge sampling respects exclusions and exhausts cleanly") {
    const Graph g = testutil::triangle_graph();  // complete: no non-edges at all
    Rng rng(1);
    std::unordered_set<std::uint64_t> taken;
    CHECK(sample_non_edges(g, 5, rng, taken).empty());

    const Graph sq = testutil::cycle_graph(4);  // two diagonals available
    std::unordered_set<std::uint64_t> taken2;
    Rng rng2(1);
    auto got = sample_non_edges(sq, 10, rng2, taken2);
    CHECK(got.size() == 2);
}

TEST_CASE("split manifest round trip") {
    const Graph g = testutil::random_connected_graph(50, 80, 21);
    const EdgeSplit split = split_edges(g, 0.5, 4);

    std::stringstream stream;
    write_split_manifest(split, stream);
    const EdgeSplit loaded = load_split_manifest(stream, g);
    CHECK(loaded.test_positive == split.test_positive);
    CHECK(loaded.test_negative == split.test_negative);

    auto token_pairs = [](const Graph& graph,
                          const std::vector<std::pair<NodeId, NodeId>>& pairs) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& [u, v] : pairs) {
            auto a = graph.token(u), b = graph.token(v);
            if (b < a) std::swap(a, b);
            out.emplace(a, b);
        }
        return out;
    };
    CHECK(token_pairs(split.residual, split.residual.undirected_edges()) ==
          token_pairs(loaded.residual, loaded.residual.undirected_edges()));
    CHECK(token_pairs(split.residual, split.test_positive) ==
          token_pairs(loaded.residual, loaded.test_positive));
    CHECK(token_pairs(split.residual, split.test_negative) ==
          token_pairs(loaded.residual, loaded.test_negative));
    CHECK(loaded.achieved_fraction == doctest::Approx(split.achieved_fraction));
}

TEST_CASE("malformed manifest sections error") {
    const Graph g = testutil::triangle_graph();
    std::istringstream missing_section("0 1\n%pos\n");
    CHECK_THROWS_AS(load_split_manifest(missing_section, g), std::runtime_error);
    std::istringstream bad_pair("%residual\n0 1\n%pos\n0 1 2\n");
    CHECK_THROWS_AS(load_split_manifest(bad_pair, g), std::runtime_error);
    std::istringstream foreign("%residual\n0 9\n");
    CHECK_THROWS_AS(load_split_manifest(foreign, g), std::runtime_error);
}
